"""
Output writers
Solutions go out as CFM1 binary plus CSV; every JSON file carries the schema tag
"""
import csv
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Union

import numpy as np
from pydantic import BaseModel

from ..operators.io import save_matrix
from ..solvers.trace import fmt_float

PathLike = Union[str, Path]


def ensure_dir(path: PathLike) -> Path:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path


def write_solution(out: PathLike, x: np.ndarray, stem: str = "x") -> Dict[str, str]:
    """x as an n x 1 column in CFM1 binary and CSV"""
    out = ensure_dir(out)
    column = np.asarray(x, dtype=np.float64).reshape(-1, 1)
    binary = save_matrix(out / f"{stem}.cfm", column)
    text = save_matrix(out / f"{stem}.csv", column)
    return {f"{stem}_binary": str(binary), f"{stem}_csv": str(text)}


def write_json(path: PathLike, payload: BaseModel) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(payload.model_dump_json(by_alias=True, indent=2) + "\n")
    return path


def write_table(path: PathLike, columns: Sequence[str], rows: Iterable[Sequence]) -> Path:
    """CSV with '.' decimals and 17 significant digits for floats"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
    return path


def _cell(value) -> str:
    if isinstance(value, (float, np.floating)):
        return fmt_float(float(value))
    if value is None:
        return ""
    return str(value)


def read_table(path: PathLike) -> List[Dict[str, str]]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
