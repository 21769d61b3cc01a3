"""
Iteration traces
One row per accepted iterate (row 0 is the starting point); CSV and JSON output
"""
import csv
import io
import math
from pathlib import Path
from typing import List, Optional, Union

from pydantic import BaseModel, Field

from ..core.config import settings

TRACE_COLUMNS = ["iter", "phi", "L", "theta", "backtracks", "fwd", "adj", "prox", "err"]


def fmt_float(value: Optional[float]) -> str:
    """17 significant digits, '.' decimal; None becomes an empty cell"""
    if value is None:
        return ""
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.17g}"


class TraceRow(BaseModel):
    iter: int
    phi: Optional[float] = None  # empty when the objective is not traced
    L: float
    theta: float
    backtracks: int = 0
    fwd: int = 0
    adj: int = 0
    prox: int = 0
    err: Optional[float] = None


class Trace(BaseModel):
    """Per-iteration record of a solve"""

    schema_version: str = Field(default_factory=lambda: settings.SCHEMA_VERSION, alias="schema")
    variant: str = ""
    rows: List[TraceRow] = Field(default_factory=list)
    restarts: List[int] = Field(default_factory=list)

    model_config = {"populate_by_name": True}

    def append(self, row: TraceRow) -> None:
        self.rows.append(row)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def last(self) -> TraceRow:
        return self.rows[-1]

    def column(self, name: str) -> list:
        return [getattr(row, name) for row in self.rows]

    def to_csv(self, path: Optional[Union[str, Path]] = None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for row in self.rows:
            writer.writerow([
                row.iter,
                fmt_float(row.phi),
                fmt_float(row.L),
                fmt_float(row.theta),
                row.backtracks,
                row.fwd,
                row.adj,
                row.prox,
                fmt_float(row.err),
            ])
        text = buf.getvalue()
        if path is not None:
            Path(path).parent.mkdir(parents=True, exist_ok=True)
            Path(path).write_text(text)
        return text

    def to_json(self, path: Optional[Union[str, Path]] = None) -> str:
        text = self.model_dump_json(by_alias=True, indent=2)
        if path is not None:
            Path(path).parent.mkdir(parents=True, exist_ok=True)
            Path(path).write_text(text)
        return text
