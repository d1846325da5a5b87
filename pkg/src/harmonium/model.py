"""Model parameters, normal-mode frequencies and ground-state energies.

The Hamiltonian separates into one centre-of-mass oscillator of frequency
``omega = sqrt(k)`` and ``n_total - 1`` relative oscillators sharing the
frequency ``mu = sqrt(k + n_total * delta)``.  Everything downstream is a
function of the pair ``(omega, mu)`` and the particle count.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from .errors import DomainError, UnboundSystem

Variant = Literal["spinless", "spinned"]


@dataclass(frozen=True)
class ModelParams:
    """User-facing input.

    ``n_particles`` counts pairs when ``paired`` is true (closed-shell spinned
    fermions), so the total particle count is then ``2 * n_particles``.
    """

    n_particles: int
    coupling_ratio: float
    well_constant: float = 1.0
    paired: bool = False

    def __post_init__(self):
        if int(self.n_particles) != self.n_particles or self.n_particles < 1:
            raise ValueError(f"n_particles must be a positive integer, got {self.n_particles!r}")
        if not self.well_constant > 0:
            raise ValueError(f"well_constant must be positive, got {self.well_constant!r}")
        if not self.coupling_ratio > -1.0 / self.n_total:
            raise UnboundSystem(
                f"coupling ratio {self.coupling_ratio!r} violates the bound-state condition "
                f"delta/k > -1/N = {-1.0 / self.n_total:.6g} (N = {self.n_total} particles)"
            )

    @property
    def n_total(self) -> int:
        return 2 * self.n_particles if self.paired else self.n_particles


@dataclass(frozen=True)
class Frequencies:
    omega: float
    mu: float

    def __post_init__(self):
        if not (self.omega > 0 and self.mu > 0):
            raise UnboundSystem(f"frequencies must be positive, got omega={self.omega}, mu={self.mu}")


def frequencies(params: ModelParams, n_total: int | None = None) -> Frequencies:
    """Return ``(sqrt(k), sqrt(k + n_total * delta))``.

    ``n_total`` defaults to ``params.n_total``; it is explicit so that the
    spinless (N) and spinned (2N) models share this routine.
    """
    if n_total is None:
        n_total = params.n_total
    return frequencies_from_ratio(n_total, params.coupling_ratio, params.well_constant)


def frequencies_from_ratio(n_total: float, coupling_ratio: float, well_constant: float = 1.0) -> Frequencies:
    # n_total may be non-integer here: the critical-number search treats N as continuous
    k = well_constant
    mu_sq = k + n_total * k * coupling_ratio
    if mu_sq <= 0:
        raise UnboundSystem(
            f"particles are not bound: k + N*delta = {mu_sq:.6g} <= 0 "
            f"(need delta/k > -1/N = {-1.0 / n_total:.6g})"
        )
    return Frequencies(math.sqrt(k), math.sqrt(mu_sq))


def boson_ground_energy(freqs: Frequencies, n: int) -> float:
    """Three-dimensional N-boson ground-state energy, 3/2 [omega + (N-1) mu]."""
    return 1.5 * (freqs.omega + (n - 1) * freqs.mu)


def fermion_spinless_ground_energy(freqs: Frequencies, n: int) -> float:
    """One-dimensional spinless N-fermion energy, omega/2 + mu (N^2 - 1)/2."""
    return 0.5 * freqs.omega + 0.5 * freqs.mu * (n * n - 1)


def fermion_spinned_ground_energy(freqs: Frequencies, n_pairs: int) -> float:
    """One-dimensional closed-shell energy for 2N fermions, (omega + mu)/2 + mu (N^2 - 1)."""
    return 0.5 * (freqs.omega + freqs.mu) + freqs.mu * (n_pairs * n_pairs - 1)


def ratio_from_energy(energy_over_omega: float, n: int, variant: Variant = "spinless") -> float:
    """Invert the fermion energy relation: return delta/k for a given E/omega.

    ``n`` is the particle count for ``spinless`` and the pair count for
    ``spinned``.  Note mu^2/omega^2 = 1 + n_total * delta/k, so the relative
    coupling is ((mu/omega)^2 - 1) / n_total.
    """
    if variant == "spinless":
        if n < 2:
            raise DomainError("the spinless energy does not depend on the coupling for N = 1")
        mu_over_omega = (2.0 * energy_over_omega - 1.0) / (n * n - 1)
        n_total = n
    elif variant == "spinned":
        if n < 1:
            raise DomainError("need at least one pair")
        mu_over_omega = (2.0 * energy_over_omega - 1.0) / (2 * n * n - 1)
        n_total = 2 * n
    else:
        raise ValueError(f"unknown variant {variant!r}")
    if mu_over_omega <= 0:
        raise DomainError(
            f"E/omega = {energy_over_omega!r} is below the unbinding threshold for {n_total} particles"
        )
    return (mu_over_omega * mu_over_omega - 1.0) / n_total
