"""Tabular experiment output: typed rows plus a canonical CSV encoding.

Values are canonicalized to 12 significant digits at row construction so a
written file re-parses to rows that compare equal and reruns are
byte-identical.
"""

import csv
import math
from dataclasses import dataclass

SCHEMA_VERSION = "1"

_COLUMNS = (
    "schema_version",
    "experiment_id",
    "model",
    "n",
    "statistic",
    "value",
    "std_error",
    "theory_value",
    "seed",
)


def canonical_value(value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError("report values must be finite")
    return float(f"{value:.12g}")


def _format_value(value) -> str:
    return "" if value is None else f"{value:.12g}"


@dataclass(frozen=True)
class ReportRow:
    experiment_id: str
    model: str
    n: int | None
    statistic: str
    value: float
    std_error: float | None
    theory_value: float | None
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "value", canonical_value(self.value))
        for name in ("std_error", "theory_value"):
            v = getattr(self, name)
            object.__setattr__(self, name, None if v is None else canonical_value(v))
        object.__setattr__(self, "n", None if self.n is None else int(self.n))
        object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True)
class ExperimentReport:
    rows: tuple
    schema_version: str = SCHEMA_VERSION

    def rows_for(self, statistic: str | None = None, n: int | None = None):
        out = []
        for row in self.rows:
            if statistic is not None and row.statistic != statistic:
                continue
            if n is not None and row.n != n:
                continue
            out.append(row)
        return out

    def value(self, statistic: str, n: int | None = None) -> float:
        rows = self.rows_for(statistic, n)
        if len(rows) != 1:
            raise KeyError(f"expected one row for ({statistic!r}, n={n}), found {len(rows)}")
        return rows[0].value


def write_csv(report: ExperimentReport, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_COLUMNS)
        for row in report.rows:
            writer.writerow(
                (
                    report.schema_version,
                    row.experiment_id,
                    row.model,
                    "" if row.n is None else str(row.n),
                    row.statistic,
                    _format_value(row.value),
                    _format_value(row.std_error),
                    _format_value(row.theory_value),
                    str(row.seed),
                )
            )


def read_csv(path) -> ExperimentReport:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != _COLUMNS:
            raise ValueError(f"unexpected CSV header: {header}")
        rows = []
        version = SCHEMA_VERSION
        for cells in reader:
            record = dict(zip(_COLUMNS, cells))
            version = record["schema_version"]
            rows.append(
                ReportRow(
                    experiment_id=record["experiment_id"],
                    model=record["model"],
                    n=int(record["n"]) if record["n"] else None,
                    statistic=record["statistic"],
                    value=float(record["value"]),
                    std_error=float(record["std_error"]) if record["std_error"] else None,
                    theory_value=float(record["theory_value"]) if record["theory_value"] else None,
                    seed=int(record["seed"]),
                )
            )
    return ExperimentReport(rows=tuple(rows), schema_version=version)
