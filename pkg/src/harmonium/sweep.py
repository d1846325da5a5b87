"""Cartesian parameter sweeps over (N, delta/k) with deterministic row order."""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import IO, Iterator, Sequence

import numpy as np

from .errors import HarmoniumError
from .report import FIELDS, VARIANTS, EntanglementReport, csv_line, evaluate_point

SWEEP_FIELDS: tuple[str, ...] = FIELDS + ("error",)


@dataclass(frozen=True)
class SweepSpec:
    variant: str
    n_values: tuple[int, ...]
    ratios: tuple[float, ...]
    fmt: str = "csv"
    log_base: str = "e"

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if not self.n_values:
            raise ValueError("empty particle-count list")
        if not self.ratios:
            raise ValueError("empty coupling-ratio list")
        if self.fmt not in ("csv", "json"):
            raise ValueError(f"unknown format {self.fmt!r}")

    def points(self) -> list[tuple[int, float]]:
        # N-major, ratio-minor
        return [(n, r) for n in self.n_values for r in self.ratios]


def parse_grid(text: str) -> tuple[float, ...]:
    """'start:stop:steps[:log]' -> inclusive linear or geometric grid."""
    parts = text.split(":")
    if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] not in ("log", "lin")):
        raise ValueError(f"grid must look like start:stop:steps[:log], got {text!r}")
    start, stop = float(parts[0]), float(parts[1])
    steps = int(parts[2])
    if steps < 1:
        raise ValueError("grid needs at least one step")
    if len(parts) == 4 and parts[3] == "log":
        if start <= 0 or stop <= 0:
            raise ValueError("a log grid needs positive endpoints")
        values = np.geomspace(start, stop, steps)
    else:
        values = np.linspace(start, stop, steps)
    return tuple(float(v) for v in values)


def parse_counts(tokens: Sequence[str]) -> tuple[int, ...]:
    """Integers or inclusive ranges 'a:b'."""
    out: list[int] = []
    for tok in tokens:
        if ":" in tok:
            lo, hi = (int(x) for x in tok.split(":", 1))
            if hi < lo:
                raise ValueError(f"empty range {tok!r}")
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(tok))
    if any(n < 1 for n in out):
        raise ValueError("particle counts must be positive")
    return tuple(out)


def _evaluate(args) -> tuple[EntanglementReport | None, str]:
    variant, n, ratio, log_base = args
    try:
        return evaluate_point(variant, n, ratio, log_base), ""
    except HarmoniumError as exc:
        return None, f"{type(exc).__name__}: {exc}"


def _row(variant: str, n: int, ratio: float, report: EntanglementReport | None, error: str) -> list:
    if report is not None:
        return [getattr(report, f) for f in FIELDS] + [error]
    row: list = [None] * len(FIELDS)
    row[FIELDS.index("variant")] = variant
    row[FIELDS.index("coupling_ratio")] = ratio
    if variant == "fermion-spinned":
        row[FIELDS.index("n_pairs")] = n
        row[FIELDS.index("n_particles")] = 2 * n
    else:
        row[FIELDS.index("n_particles")] = n
    return row + [error]


def iter_rows(spec: SweepSpec, jobs: int = 1) -> Iterator[list]:
    """Rows in N-major order; evaluated in parallel when ``jobs`` > 1."""
    tasks = [(spec.variant, n, r, spec.log_base) for n, r in spec.points()]
    if jobs <= 1:
        results: Iterator = map(_evaluate, tasks)
        for (_, n, r, _), (rep, err) in zip(tasks, results):
            yield _row(spec.variant, n, r, rep, err)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map preserves submission order regardless of completion order
        for (_, n, r, _), (rep, err) in zip(tasks, pool.map(_evaluate, tasks)):
            yield _row(spec.variant, n, r, rep, err)


def write_sweep(spec: SweepSpec, stream: IO[str], jobs: int = 1) -> int:
    """Stream rows to ``stream``, flushing each; returns the number of skipped points."""
    skipped = 0
    if spec.fmt == "csv":
        stream.write(csv_line(SWEEP_FIELDS))
    for row in iter_rows(spec, jobs):
        if row[-1]:
            skipped += 1
        if spec.fmt == "csv":
            stream.write(csv_line(row))
        else:
            stream.write(json.dumps(dict(zip(SWEEP_FIELDS, row))) + "\n")
        stream.flush()
    return skipped
