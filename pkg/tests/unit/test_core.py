"""
Exceptions, error middleware, solver retries, artifact writers and run configuration
"""
import json
import logging

import pandas as pd
import pytest
from pydantic import ValidationError

from app.cli.output import format_float, write_csv, write_json, write_table
from app.cli.parser import build_parser, resolve_config
from app.core.circuit_breakers import with_solver_retry
from app.core.config import settings
from app.core.exceptions import (
    DataFileError,
    HistoryCoverageError,
    ParameterError,
    SolverConvergenceError,
)
from app.middleware.error_handler import (
    EXIT_IO,
    EXIT_SOLVER,
    EXIT_VALIDATION,
    classify,
    handle_errors,
)
from app.models.schemas.economy import EconomyParams
from app.models.schemas.run_config import RunConfig


class TestExceptions:

    def test_exit_codes(self):
        assert ParameterError("x").exit_code == 1
        assert HistoryCoverageError("x").exit_code == 1
        assert SolverConvergenceError("x", residual=1.0, iterations=3).exit_code == 2
        assert DataFileError("x").exit_code == 3

    def test_solver_error_document(self):
        document = SolverConvergenceError("no root", residual=0.5, iterations=7, method="lm").to_dict()
        assert document["error"] == "SolverConvergenceError"
        assert document["details"] == {"residual": 0.5, "iterations": 7, "method": "lm"}

    def test_parameter_error_is_value_error(self):
        assert isinstance(ParameterError("x"), ValueError)


class TestErrorMiddleware:

    def test_classify_validation_error(self):
        with pytest.raises(ValidationError) as info:
            EconomyParams(q=0, R=1.1)
        code, document = classify(info.value)
        assert code == EXIT_VALIDATION
        assert document["error"] == "ValidationError"

    def test_classify_os_error(self):
        code, _ = classify(PermissionError(13, "denied", "/root/x"))
        assert code == EXIT_IO

    def test_handler_prints_one_json_line(self, capsys):
        @handle_errors
        def failing() -> int:
            raise SolverConvergenceError("stuck", residual=2.0, iterations=10)

        assert failing() == EXIT_SOLVER
        line = capsys.readouterr().err.strip().splitlines()[-1]
        assert json.loads(line)["exit_code"] == EXIT_SOLVER

    def test_handler_passes_exit_code_through(self):
        assert handle_errors(lambda: 0)() == 0


class TestSolverRetry:

    def test_retries_with_next_attempt(self):
        seen = []

        @with_solver_retry
        def flaky(*, attempt: int = 0) -> int:
            seen.append(attempt)
            if attempt < 1:
                raise SolverConvergenceError("retry me", residual=1.0, iterations=1)
            return attempt

        assert flaky() == 1
        assert seen == [0, 1]

    def test_gives_up_after_restarts(self):
        calls = []

        @with_solver_retry
        def hopeless(*, attempt: int = 0):
            calls.append(attempt)
            raise SolverConvergenceError("never", residual=1.0, iterations=1)

        with pytest.raises(SolverConvergenceError):
            hopeless()
        assert len(calls) == settings.solver_restarts


class TestWriters:

    def test_csv_keeps_full_precision(self, tmp_path):
        value = 0.1 + 0.2
        path = write_csv(tmp_path / "x.csv", pd.DataFrame({"a": [value]}))
        assert float(path.read_text(encoding="utf-8").splitlines()[1]) == value

    def test_csv_and_json_write_the_same_digits(self, tmp_path):
        values = [0.1 + 0.2, 1.0 / 3.0, -803.3470000000001, 1e-17, 2.5]
        frame = pd.DataFrame({"v": values})
        csv_cells = write_csv(tmp_path / "x.csv", frame).read_text(encoding="utf-8").splitlines()[1:]
        json_text = write_table(tmp_path, "x", frame, "json").read_text(encoding="utf-8")
        assert csv_cells == [format_float(v) for v in values]
        for cell in csv_cells:
            assert f'"v": {cell}' in json_text

    def test_json_handles_numpy(self, tmp_path):
        import numpy as np

        path = write_json(tmp_path / "nested" / "x.json", {"v": np.float64(1.5), "a": np.arange(3)})
        assert json.loads(path.read_text(encoding="utf-8")) == {"v": 1.5, "a": [0, 1, 2]}

    def test_no_temporary_files_left(self, tmp_path):
        write_json(tmp_path / "x.json", {"k": 1})
        assert [p.name for p in tmp_path.iterdir()] == ["x.json"]

    def test_table_format(self, tmp_path):
        frame = pd.DataFrame({"time": [0, 1], "tv": [0.5, 0.25]})
        assert write_table(tmp_path, "tv", frame, "json").name == "tv.json"
        assert write_table(tmp_path, "tv", frame).name == "tv.csv"


class TestRunConfig:

    def test_defaults(self):
        config = resolve_config(build_parser().parse_args(["solve-myopic"]))
        assert config.economy.q == 2
        assert config.economy.R == 1.1
        assert config.format == "csv"

    def test_flags_override_file(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"economy": {"q": 4, "R": 1.05, "lambda": 2.0}}), encoding="utf-8")
        args = build_parser().parse_args(["solve-myopic", "--config", str(path), "--lambda", "0.5"])
        config = resolve_config(args)
        assert config.economy.q == 4
        assert config.economy.lam == 0.5

    def test_measures_lambda_goes_to_measures(self):
        config = resolve_config(build_parser().parse_args(["measures", "--lambda", "3"]))
        assert config.measures.lam == 3.0
        assert config.economy.lam == 0.0

    def test_unknown_keys_rejected(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"economy": {"rho": 1}}), encoding="utf-8")
        with pytest.raises(ValidationError):
            RunConfig.load(path)

    def test_invalid_override_rejected(self):
        with pytest.raises(ValidationError):
            resolve_config(build_parser().parse_args(["solve-myopic", "--R", "0.9"]))

    def test_missing_config_file(self, tmp_path):
        with pytest.raises(DataFileError):
            RunConfig.load(tmp_path / "absent.json")

    def test_negative_lambda_is_allowed_with_warning(self, caplog):
        with caplog.at_level(logging.WARNING, logger="app.cli.parser"):
            config = resolve_config(build_parser().parse_args(["solve-myopic", "--lambda", "-1"]))
        assert config.economy.lam == -1.0
        assert any(r.levelno == logging.WARNING and "negative" in r.getMessage() for r in caplog.records)

    def test_negative_measures_lambda_warns(self, caplog):
        with caplog.at_level(logging.WARNING, logger="app.cli.parser"):
            resolve_config(build_parser().parse_args(["measures", "--lambda", "-0.5"]))
        assert any("negative" in r.getMessage() for r in caplog.records)

    def test_non_negative_lambda_does_not_warn(self, caplog):
        with caplog.at_level(logging.WARNING, logger="app.cli.parser"):
            resolve_config(build_parser().parse_args(["solve-myopic", "--lambda", "0"]))
        assert not [r for r in caplog.records if r.name == "app.cli.parser"]

    def test_usage_errors_are_parameter_errors(self):
        with pytest.raises(ParameterError):
            build_parser().parse_args(["simulate", "--T", "many"])
