"""
Artifact Writers
Whole-file atomic CSV/JSON output

Floats are written in their shortest round-trip form in both CSV and JSON
(json.dumps formats floats with float.__repr__; CSV goes through format_float).
"""
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Literal, Union

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)


def format_float(value: float) -> str:
    """Shortest text that reads back to the same double."""
    return repr(float(value))


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _plain(value: Any) -> Any:
    """numpy scalars and arrays to JSON-native values."""
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def to_json_text(document: Any) -> str:
    return json.dumps(document, indent=2, default=_plain) + "\n"


def write_json(path: Union[str, Path], document: Any) -> Path:
    path = Path(path)
    _atomic_write(path, to_json_text(document))
    logger.info(f"📝 Wrote {path}")
    return path


def write_csv(path: Union[str, Path], frame: pd.DataFrame) -> Path:
    path = Path(path)
    _atomic_write(path, frame.to_csv(index=False, float_format=format_float, lineterminator="\n"))
    logger.info(f"📝 Wrote {path} ({len(frame)} rows)")
    return path


def write_table(
    directory: Union[str, Path],
    stem: str,
    frame: pd.DataFrame,
    fmt: Literal["csv", "json"] = "csv",
) -> Path:
    """Tabular artifact as <stem>.csv or <stem>.json (list of records)."""
    directory = Path(directory)
    if fmt == "json":
        return write_json(directory / f"{stem}.json", frame.to_dict(orient="records"))
    return write_csv(directory / f"{stem}.csv", frame)


def emit(document: Any) -> None:
    """Report on stdout."""
    print(to_json_text(document), end="")
