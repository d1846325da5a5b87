"""One row of results per parameter point, plus CSV/JSON formatting."""
from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

from . import boson, fermion_spinless, fermion_spinned
from .model import (
    ModelParams,
    boson_ground_energy,
    fermion_spinless_ground_energy,
    fermion_spinned_ground_energy,
    frequencies,
)

Variant = Literal["boson", "fermion-spinless", "fermion-spinned"]
VARIANTS: tuple[str, ...] = ("boson", "fermion-spinless", "fermion-spinned")


@dataclass(frozen=True)
class EntanglementReport:
    """Entanglement data at one (variant, N, delta/k) point.

    ``n_particles`` is always the total particle count; ``n_pairs`` is set
    only for the spinned variant.  ``entropy`` is the von Neumann entropy of
    one Cartesian factor for bosons and the linear entropy for fermions.
    """

    variant: str
    n_particles: int
    n_pairs: int | None
    coupling_ratio: float
    omega: float
    mu: float
    energy_over_omega: float
    entropy: float
    purity: float | None
    n0: float | None
    log_base: str | None

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


FIELDS: tuple[str, ...] = tuple(f.name for f in dataclasses.fields(EntanglementReport))


def evaluate_point(variant: str, n: int, coupling_ratio: float, log_base: str = "e",
                   well_constant: float = 1.0) -> EntanglementReport:
    """Evaluate one point; for ``fermion-spinned`` ``n`` counts pairs."""
    if variant == "boson":
        params = ModelParams(n, coupling_ratio, well_constant)
        freqs = frequencies(params)
        ob = boson.boson_one_body(freqs, n)
        return EntanglementReport(
            variant=variant,
            n_particles=n,
            n_pairs=None,
            coupling_ratio=coupling_ratio,
            omega=freqs.omega,
            mu=freqs.mu,
            energy_over_omega=boson_ground_energy(freqs, n) / freqs.omega,
            entropy=boson.von_neumann_entropy(ob, log_base),
            purity=None,
            n0=boson.occupation_number(ob, 0),
            log_base=log_base,
        )
    if variant == "fermion-spinless":
        params = ModelParams(n, coupling_ratio, well_constant)
        freqs = frequencies(params)
        pur = fermion_spinless.purity(freqs, n)
        return EntanglementReport(
            variant=variant,
            n_particles=n,
            n_pairs=None,
            coupling_ratio=coupling_ratio,
            omega=freqs.omega,
            mu=freqs.mu,
            energy_over_omega=fermion_spinless_ground_energy(freqs, n) / freqs.omega,
            entropy=1.0 - pur,
            purity=pur,
            n0=None,
            log_base=None,
        )
    if variant == "fermion-spinned":
        params = ModelParams(n, coupling_ratio, well_constant, paired=True)
        freqs = frequencies(params)
        pur = fermion_spinned.spinned_purity(freqs, n)
        return EntanglementReport(
            variant=variant,
            n_particles=2 * n,
            n_pairs=n,
            coupling_ratio=coupling_ratio,
            omega=freqs.omega,
            mu=freqs.mu,
            energy_over_omega=fermion_spinned_ground_energy(freqs, n) / freqs.omega,
            entropy=1.0 - pur,
            purity=pur,
            n0=None,
            log_base=None,
        )
    raise ValueError(f"unknown variant {variant!r}; expected one of {', '.join(VARIANTS)}")


def format_value(value) -> str:
    """CSV cell: floats with 17 significant digits, None as an empty cell."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return format(value, ".17g")
    return str(value).replace(",", ";").replace("\n", " ")


def csv_line(values: Iterable) -> str:
    return ",".join(format_value(v) for v in values) + "\n"


def report_csv(reports: Sequence[EntanglementReport], header: bool = True) -> str:
    out = [csv_line(FIELDS)] if header else []
    out.extend(csv_line(getattr(r, f) for f in FIELDS) for r in reports)
    return "".join(out)


def report_json(report: EntanglementReport) -> str:
    return json.dumps(report.as_dict(), sort_keys=False)
