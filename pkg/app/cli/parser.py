"""
Command-Line Parser
One subcommand per invocation; flags override the --config document
"""
import argparse
import logging
from typing import Any, Dict, Optional

from app import __version__
from app.core.exceptions import ParameterError
from app.models.schemas.run_config import RunConfig

logger = logging.getLogger(__name__)

COMMAND_NAMES = (
    "solve-myopic",
    "solve-nonmyopic",
    "benchmark",
    "simulate",
    "trade-volume",
    "demographics",
    "growth",
    "measures",
    "check",
)

# (flag dest, config section, config field); None section means top level
ECONOMY_FLAGS = (
    ("q", "economy", "q"),
    ("R", "economy", "R"),
    ("gamma", "economy", "gamma"),
    ("sigma", "economy", "sigma"),
    ("theta", "economy", "theta"),
    ("lam", "economy", "lambda"),
    ("output_dir", None, "output_dir"),
    ("format", None, "format"),
)

COMMAND_FLAGS = {
    "simulate": (
        ("seed", "simulation", "seed"),
        ("T", "simulation", "T"),
        ("burn_in", "simulation", "burn_in"),
        ("regime", "simulation", "regime"),
        ("n_paths", "simulation", "n_paths"),
        ("workers", "simulation", "workers"),
        ("dividend_std", "simulation", "dividend_std"),
        ("coefficients", "simulation", "coefficients"),
        ("include_entry_exit", "simulation", "include_entry_exit"),
    ),
    "trade-volume": (
        ("dividends", "trade_volume", "dividends"),
        ("T", "trade_volume", "T"),
        ("seed", "trade_volume", "seed"),
        ("include_entry_exit", "trade_volume", "include_entry_exit"),
        ("d_bar", "trade_volume", "d_bar"),
        ("shock_size", "trade_volume", "shock"),
    ),
    "demographics": (
        ("tau", "shock", "tau"),
        ("y", "shock", "y"),
        ("y_tau", "shock", "y_tau"),
        ("k", "shock", "k"),
        ("dividend_shock", "shock", "dividend_shock"),
    ),
    "growth": (
        ("g", "growth", "g"),
        ("y0", "growth", "y0"),
        ("periods", "growth", "periods"),
    ),
    "measures": (
        ("returns", "measures", "returns"),
        ("population", "measures", "population"),
        ("turnover", "measures", "turnover"),
        ("cpi", "measures", "cpi"),
        ("first_cohort", "measures", "first_cohort"),
        ("last_cohort", "measures", "last_cohort"),
        ("old_min_age", "measures", "old_min_age"),
        ("young_max_age", "measures", "young_max_age"),
        ("ma_lags", "measures", "ma_lags"),
    ),
}


class CommandLineParser(argparse.ArgumentParser):
    """Usage errors raise ParameterError so they share the validation exit code."""

    def error(self, message: str):
        raise ParameterError(f"{self.prog}: {message}", details={"usage": self.format_usage().strip()})


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--q", type=int, help="Trading periods per life")
    common.add_argument("--R", type=float, help="Gross riskless rate")
    common.add_argument("--lambda", dest="lam", type=float, help="Recency parameter")
    common.add_argument("--gamma", type=float, help="CARA risk aversion")
    common.add_argument("--sigma", type=float, help="Dividend standard deviation")
    common.add_argument("--theta", type=float, help="True dividend mean")
    common.add_argument("--output-dir", help="Artifact directory (default VINTAGE_OUTPUT_DIR)")
    common.add_argument("--format", choices=("csv", "json"), help="Format of tabular artifacts")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = CommandLineParser(
        prog="vintage",
        description="Experience-based learning in an overlapping-generations asset market",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    common = [_common_flags()]

    commands.add_parser("solve-myopic", parents=common, help="Myopic price rule and price moments")
    commands.add_parser("solve-nonmyopic", parents=common, help="Price rule with final-wealth maximizers")
    commands.add_parser("benchmark", parents=common, help="Known-mean benchmark price and holding")

    simulate = commands.add_parser("simulate", parents=common, help="Monte Carlo equilibrium paths")
    simulate.add_argument("--seed", type=int)
    simulate.add_argument("--T", type=int, help="Reported periods")
    simulate.add_argument("--burn-in", type=int)
    simulate.add_argument("--regime", choices=("myopic", "nonmyopic_q2"))
    simulate.add_argument("--n-paths", type=int)
    simulate.add_argument("--workers", type=int)
    simulate.add_argument("--dividend-std", type=float, help="Shock scale; agents keep using sigma")
    simulate.add_argument("--coefficients", help="solution.json from solve-myopic or solve-nonmyopic")
    simulate.add_argument("--include-entry-exit", action="store_true", default=None)

    volume = commands.add_parser("trade-volume", parents=common, help="Trade volume along a dividend path")
    volume.add_argument("--dividends", help="CSV with columns time,dividend")
    volume.add_argument("--T", type=int, help="Simulated dates when no CSV is given")
    volume.add_argument("--seed", type=int)
    volume.add_argument("--include-entry-exit", action="store_true", default=None)
    volume.add_argument("--d-bar", type=float, help="Steady dividend of the thought experiment")
    volume.add_argument("--shock-size", type=float, help="Dividend surprise of the thought experiment")

    shock = commands.add_parser("demographics", parents=common, help="One-time cohort size shock")
    shock.add_argument("--tau", type=int)
    shock.add_argument("--y", type=float, help="Baseline cohort mass")
    shock.add_argument("--y-tau", type=float, help="Mass of the cohort born at tau")
    shock.add_argument("--k", type=int, help="Dates shown on each side of the shock")
    shock.add_argument("--dividend-shock", type=float)

    growth = commands.add_parser("growth", parents=common, help="Constant population growth")
    growth.add_argument("--g", type=float)
    growth.add_argument("--y0", type=float)
    growth.add_argument("--periods", type=int)

    measures = commands.add_parser("measures", parents=common, help="Experience measures from CSV data")
    measures.add_argument("--returns", help="CSV year,return")
    measures.add_argument("--population", help="CSV year,birth_year,population")
    measures.add_argument("--turnover", help="CSV year,turnover")
    measures.add_argument("--cpi", help="CSV year,cpi; returns are deflated when given")
    measures.add_argument("--first-cohort", type=int)
    measures.add_argument("--last-cohort", type=int)
    measures.add_argument("--old-min-age", type=int)
    measures.add_argument("--young-max-age", type=int)
    measures.add_argument("--ma-lags", type=int)

    check = commands.add_parser("check", parents=common, help="Run the invariant suite")
    check.add_argument("--quick", action="store_true", help="Reduced sample sizes")
    check.add_argument("--seed", type=int)

    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """
    Config file (or defaults) with the command-line overrides applied.
    The merged document is validated again, so overrides obey the same schema.
    """
    base = RunConfig.load(args.config) if getattr(args, "config", None) else RunConfig()
    data: Dict[str, Any] = base.model_dump(by_alias=True)

    flags = ECONOMY_FLAGS + COMMAND_FLAGS.get(args.command, ())
    for dest, section, field in flags:
        value: Optional[Any] = getattr(args, dest, None)
        if value is None:
            continue
        # measures reads its own recency parameter
        if dest == "lam" and args.command == "measures":
            section = "measures"
        target = data if section is None else data[section]
        target[field] = value

    config = RunConfig.model_validate(data)

    # negative recency is allowed: agents overweight their earliest observations
    lam = config.measures.lam if args.command == "measures" else config.economy.lam
    if lam < 0:
        logger.warning(f"⚠️  lambda={lam:g} is negative: early observations outweigh recent ones")

    return config
