"""Per-degree statistics records and their CSV form."""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, fields

CSV_FIELDS = (
    "run_id,n,p,seed,stage,degree,rows,cols,alpha,beta,gamma,mul_count,add_count,"
    "zero_reductions,redundant_skipped,collisions,new_pivots,a_block_density,wall_ns"
).split(",")


@dataclass
class StatsRecord:
    """Counters for one Macaulay matrix.

    ``redundant_skipped`` counts the products x_v * g (all four variables, all
    rows g of the previous echelon form) that were not built, whether by the
    signature rule or by syzygy pruning.  ``collisions`` counts rows whose
    leading monomial repeats an earlier row's, i.e. the rows that must be
    reduced; every such row either vanishes or yields a new pivot.
    """

    stage: str
    degree: int
    rows: int = 0
    cols: int = 0
    alpha: int = 0
    beta: int = 0
    gamma: int = 0
    mul_count: int = 0
    add_count: int = 0
    zero_reductions: int = 0
    redundant_skipped: int = 0
    collisions: int = 0
    new_pivots: int = 0
    a_block_density: float = 0.0
    wall_ns: int = 0
    run_id: str = ""
    n: int = 0
    p: int = 0
    seed: int = 0
    gb_new: int = 0
    pruned: int = 0
    structured: bool = False

    def csv_row(self) -> dict:
        d = asdict(self)
        d["a_block_density"] = f"{self.a_block_density:.6f}"
        return {k: d[k] for k in CSV_FIELDS}


def write_csv(records, handle) -> None:
    w = csv.DictWriter(handle, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow(r.csv_row())


def to_csv(records) -> str:
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue()


def read_csv(handle) -> list[StatsRecord]:
    types = {f.name: f.type for f in fields(StatsRecord)}
    out = []
    for row in csv.DictReader(handle):
        kw = {}
        for k, v in row.items():
            t = types[k]
            kw[k] = float(v) if t == "float" else (v if t == "str" else int(v))
        out.append(StatsRecord(**kw))
    return out
