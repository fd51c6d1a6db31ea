"""
Measure Inputs
CSV loaders with header validation for measure series and dividend paths
"""
import logging
from pathlib import Path
from typing import List, Union

import numpy as np
import pandas as pd

from app.core.exceptions import DataFileError
from app.models.schemas.beliefs import DividendHistory

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def read_table(path: PathLike, columns: List[str]) -> pd.DataFrame:
    """
    Read a comma-separated file and check it carries `columns`.

    Raises:
        DataFileError: missing file, unparsable content, missing columns or non-numeric cells
    """
    path = Path(path)
    try:
        frame = pd.read_csv(path, encoding="utf-8")
    except FileNotFoundError as e:
        raise DataFileError(f"file not found: {path}", details={"path": str(path)}) from e
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise DataFileError(f"could not parse {path}: {e}", details={"path": str(path)}) from e

    missing = [c for c in columns if c not in frame.columns]
    if missing:
        raise DataFileError(
            f"{path.name} is missing columns {missing}",
            details={"path": str(path), "expected": columns, "found": list(frame.columns)},
        )
    frame = frame[columns]
    try:
        frame = frame.apply(pd.to_numeric, errors="raise")
    except (ValueError, TypeError) as e:
        raise DataFileError(f"{path.name} has non-numeric values: {e}", details={"path": str(path)}) from e
    if frame.isna().any().any():
        raise DataFileError(f"{path.name} has empty cells", details={"path": str(path)})

    logger.debug(f"Loaded {len(frame)} rows from {path}")
    return frame


def _series(frame: pd.DataFrame, value: str) -> pd.Series:
    series = frame.set_index(frame["year"].astype(int))[value].astype(float)
    series.index.name = "year"
    return series


def load_returns(path: PathLike) -> pd.Series:
    """returns.csv: year,return"""
    return _series(read_table(path, ["year", "return"]), "return")


def load_turnover(path: PathLike) -> pd.Series:
    """turnover.csv: year,turnover"""
    return _series(read_table(path, ["year", "turnover"]), "turnover")


def load_cpi(path: PathLike) -> pd.Series:
    """cpi.csv: year,cpi"""
    return _series(read_table(path, ["year", "cpi"]), "cpi")


def load_population(path: PathLike) -> pd.DataFrame:
    """population.csv: year,birth_year,population"""
    frame = read_table(path, ["year", "birth_year", "population"])
    return frame.astype({"year": int, "birth_year": int, "population": float})


def load_dividends(path: PathLike) -> DividendHistory:
    """dividends.csv: time,dividend with consecutive integer times"""
    frame = read_table(path, ["time", "dividend"]).sort_values("time")
    times = frame["time"].to_numpy()
    if len(times) == 0:
        raise DataFileError(f"{Path(path).name} has no rows", details={"path": str(path)})
    if (times != times.astype(int)).any() or (len(times) > 1 and (np.diff(times) != 1).any()):
        raise DataFileError(
            f"{Path(path).name} must list consecutive integer times",
            details={"path": str(path)},
        )
    return DividendHistory.from_values(frame["dividend"].to_numpy(dtype=float), origin_time=int(times[0]))
