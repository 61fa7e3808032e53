"""Benchmark rows in CSV form."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, fields

COLUMNS = ["graph", "n", "m", "h", "threads", "mode", "seed",
           "t_coarsen_s", "t_optimize_s", "t_total_s", "F", "M", "scale"]


@dataclass
class RunReport:
    graph: str
    n: int
    m: int
    h: int
    threads: int
    mode: str  # "static", "update" or "scratch"
    seed: int
    t_coarsen_s: float
    t_optimize_s: float
    t_total_s: float
    F: float = math.nan  # full stress of the optimally scaled layout
    M: float = math.nan  # maxent-stress of the same layout at alpha = 0.008
    scale: float = math.nan

    def __post_init__(self):
        if min(self.t_coarsen_s, self.t_optimize_s, self.t_total_s) < 0:
            raise ValueError("times must be non-negative")

    @property
    def has_metrics(self) -> bool:
        return not math.isnan(self.M)

    def row(self) -> dict:
        out = asdict(self)
        for k in ("t_coarsen_s", "t_optimize_s", "t_total_s", "F", "M", "scale"):
            out[k] = "" if math.isnan(out[k]) else repr(float(out[k]))
        return out

    @classmethod
    def from_row(cls, row: dict) -> "RunReport":
        kw = {}
        for f in fields(cls):
            raw = row[f.name]
            if f.type == "int":
                kw[f.name] = int(raw)
            elif f.type == "float":
                kw[f.name] = math.nan if raw == "" else float(raw)
            else:
                kw[f.name] = raw
        return cls(**kw)


def write_reports(fh, reports):
    writer = csv.DictWriter(fh, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in reports:
        writer.writerow(r.row())


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    write_reports(buf, reports)
    return buf.getvalue()


def read_reports(fh):
    reader = csv.DictReader(fh)
    if reader.fieldnames != COLUMNS:
        raise ValueError(f"unexpected CSV columns {reader.fieldnames}")
    return [RunReport.from_row(r) for r in reader]
