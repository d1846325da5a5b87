"""Sampled data behind the standard entanglement figures, as CSV.

Each builder returns a ``FigureData``; ``write_figure`` adds '#' comment
headers carrying the sampling grid and the package version so every file
documents how it was produced.
"""
from __future__ import annotations

import subprocess
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Callable

import numpy as np

from . import __version__, boson
from .errors import UnboundSystem
from .fermion_spinless import linear_entropy
from .fermion_spinned import spinned_linear_entropy
from .model import (
    ModelParams,
    fermion_spinless_ground_energy,
    fermion_spinned_ground_energy,
    frequencies,
    ratio_from_energy,
)
from .report import csv_line


@dataclass
class FigureData:
    name: str
    description: str
    grid: list[str]
    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)

    def column(self, name: str) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([row[i] for row in self.rows], dtype=float)


FIG5_RATIOS = tuple(float(x) for x in np.concatenate([np.linspace(-1 / 15, 0, 6), np.linspace(0.25, 22, 88)]))
FIG3_RATIOS = (0.1, 1 / 3, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0)
FIG4_RATIOS = (0.5, 1.0, 2.0, 5.0, 10.0)
FIG9_RATIOS = (-1 / 15, 2.0, 4.0, 22.0)


def _boson_row(n: int, ratio: float):
    ob = boson.boson_one_body(frequencies(ModelParams(n, ratio)), n)
    return ob, boson.von_neumann_entropy(ob)


def fig2(n_max: int = 30, ratios=tuple(float(x) for x in np.linspace(0.0, 10.0, 41))) -> FigureData:
    fig = FigureData(
        "fig2",
        "boson von Neumann entropy (one Cartesian factor, nats) over N and delta/k",
        [f"N = 1..{n_max}", f"delta/k = linspace(0, 10, {len(ratios)})"],
        ("N", "ratio", "entropy"),
    )
    for n in range(1, n_max + 1):
        for r in ratios:
            fig.rows.append((n, r, _boson_row(n, r)[1]))
    return fig


def fig3(n_max: int = 50, ratios=FIG3_RATIOS) -> FigureData:
    fig = FigureData(
        "fig3",
        "boson von Neumann entropy versus N for eight coupling ratios",
        [f"N = 1..{n_max}", "delta/k in {" + ", ".join(f"{r:.6g}" for r in ratios) + "}"],
        ("N", "ratio", "entropy"),
    )
    for r in ratios:
        for n in range(1, n_max + 1):
            fig.rows.append((n, r, _boson_row(n, r)[1]))
    return fig


def fig4(n_max: int = 12, ratios=FIG4_RATIOS) -> FigureData:
    fig = FigureData(
        "fig4",
        "boson first occupation number n0 = 1 - t versus N",
        [f"N = 1..{n_max}", "delta/k in {" + ", ".join(f"{r:.6g}" for r in ratios) + "}"],
        ("N", "ratio", "n0"),
    )
    for r in ratios:
        for n in range(1, n_max + 1):
            ob, _ = _boson_row(n, r)
            fig.rows.append((n, r, boson.occupation_number(ob, 0)))
    return fig


def fig5(n_values=(2, 3, 4, 5, 6), ratios=FIG5_RATIOS) -> FigureData:
    fig = FigureData(
        "fig5",
        "spinless fermion linear entropy versus delta/k",
        ["N in {" + ", ".join(map(str, n_values)) + "}",
         "delta/k: 6 points on [-1/15, 0] then 88 on [0.25, 22]"],
        ("N", "ratio", "linear_entropy"),
    )
    for n in n_values:
        for r in ratios:
            fig.rows.append((n, r, linear_entropy(frequencies(ModelParams(n, r)), n)))
    return fig


def _energy_grid(energy_fn, n: int, paired: bool, lo_ratio: float, hi_ratio: float, steps: int):
    # the energy figures start at delta = 0: S_L vanishes there and rises on
    # both sides, so only the repulsive branch is monotone in E
    lo = energy_fn(frequencies(ModelParams(n, lo_ratio, paired=paired)), n)
    hi = energy_fn(frequencies(ModelParams(n, hi_ratio, paired=paired)), n)
    return np.linspace(lo, hi, steps)


def fig6(n_values=(2, 3, 4, 5, 6), steps: int = 60) -> FigureData:
    fig = FigureData(
        "fig6",
        "spinless fermion linear entropy versus ground-state energy E/omega",
        ["N in {" + ", ".join(map(str, n_values)) + "}",
         f"E/omega = {steps} equal steps between the energies at delta/k = 0 and 22"],
        ("N", "energy_over_omega", "ratio", "linear_entropy"),
    )
    for n in n_values:
        for e in _energy_grid(fermion_spinless_ground_energy, n, False, 0.0, 22.0, steps):
            r = ratio_from_energy(float(e), n, "spinless")
            fig.rows.append((n, float(e), r, linear_entropy(frequencies(ModelParams(n, r)), n)))
    return fig


def fig8(pairs=(1, 2, 3), ratios=FIG5_RATIOS) -> FigureData:
    fig = FigureData(
        "fig8",
        "closed-shell spinned fermion linear entropy versus delta/k",
        ["pairs in {" + ", ".join(map(str, pairs)) + "} (particles = 2 * pairs)",
         "delta/k: 6 points on [-1/15, 0] then 88 on [0.25, 22]"],
        ("pairs", "particles", "ratio", "linear_entropy"),
    )
    for p in pairs:
        for r in ratios:
            s = spinned_linear_entropy(frequencies(ModelParams(p, r, paired=True)), p)
            fig.rows.append((p, 2 * p, r, s))
    return fig


def fig9(max_particles: int = 12, ratios=FIG9_RATIOS) -> FigureData:
    fig = FigureData(
        "fig9",
        "spinless and spinned linear entropy versus total particle count",
        [f"particles = 2..{max_particles} (spinned: even counts only)",
         "delta/k in {-1/15, 2, 4, 22}"],
        ("variant", "particles", "pairs", "ratio", "linear_entropy"),
    )
    for r in ratios:
        for n in range(2, max_particles + 1):
            try:
                s = linear_entropy(frequencies(ModelParams(n, r)), n)
            except UnboundSystem:
                continue
            fig.rows.append(("spinless", n, None, r, s))
        for p in range(1, max_particles // 2 + 1):
            s = spinned_linear_entropy(frequencies(ModelParams(p, r, paired=True)), p)
            fig.rows.append(("spinned", 2 * p, p, r, s))
    return fig


def fig10(pairs=(1, 2, 3), steps: int = 60) -> FigureData:
    fig = FigureData(
        "fig10",
        "spinned fermion linear entropy versus ground-state energy E/omega",
        ["pairs in {" + ", ".join(map(str, pairs)) + "}",
         f"E/omega = {steps} equal steps between the energies at delta/k = 0 and 22"],
        ("pairs", "particles", "energy_over_omega", "ratio", "linear_entropy"),
    )
    for p in pairs:
        for e in _energy_grid(fermion_spinned_ground_energy, p, True, 0.0, 22.0, steps):
            r = ratio_from_energy(float(e), p, "spinned")
            s = spinned_linear_entropy(frequencies(ModelParams(p, r, paired=True)), p)
            fig.rows.append((p, 2 * p, float(e), r, s))
    return fig


FIGURES: dict[str, Callable[[], FigureData]] = {
    "fig2": fig2,
    "fig3": fig3,
    "fig4": fig4,
    "fig5": fig5,
    "fig6": fig6,
    "fig8": fig8,
    "fig9": fig9,
    "fig10": fig10,
}


def version_string() -> str:
    try:
        rev = subprocess.run(
            ["git", "rev-parse", "--short", "HEAD"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True, text=True, timeout=5, check=True,
        ).stdout.strip()
    except (OSError, subprocess.SubprocessError):
        rev = "unknown"
    return f"harmonium {__version__} (git {rev or 'unknown'})"


def write_figure(fig: FigureData, stream: IO[str]) -> None:
    stream.write(f"# figure: {fig.name}\n")
    stream.write(f"# {fig.description}\n")
    for line in fig.grid:
        stream.write(f"# grid: {line}\n")
    stream.write(f"# version: {version_string()}\n")
    stream.write(csv_line(fig.columns))
    for row in fig.rows:
        stream.write(csv_line(row))
