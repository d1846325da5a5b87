"""Bosonic N-harmonium in three dimensions.

The one-body Wigner quasidensity is a product of three identical Gaussian
factors, each a Gibbs state exp(-lambda_N U^2) with U^2 = gamma^2 x^2 +
p^2 / gamma^2.  A single factor has occupation numbers (1 - t) t^r with
t = (1 - lambda) / (1 + lambda); all entropies below refer to one factor.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import NoInteriorMaximum
from .model import Frequencies, frequencies_from_ratio

OCCUPATION_FLOOR = 1e-18
MAX_OCCUPATIONS = 10**6

LogBase = Literal["e", "2"]


@dataclass(frozen=True)
class BosonOneBody:
    lambda_n: float
    t_n: float
    gamma_n: float
    a_big_n: float
    n: float = 1.0


def boson_one_body(freqs: Frequencies, n: float) -> BosonOneBody:
    """Gibbs-state parameters of the one-body quasidensity.

    ``n`` may be non-integer; the critical-number search treats it as a
    continuous variable.
    """
    if n < 1:
        raise ValueError(f"need at least one boson, got N={n}")
    w, mu = freqs.omega, freqs.mu
    lo = (n - 1) * w + mu
    hi = w + (n - 1) * mu
    a_big = lo * hi
    lam = n * math.sqrt(w * mu) / math.sqrt(a_big)
    # AM-GM gives lam <= 1; clip the last-ulp excursions
    lam = min(lam, 1.0)
    gamma = (w * mu) ** 0.25 * (hi / lo) ** 0.25
    return BosonOneBody(lambda_n=lam, t_n=(1.0 - lam) / (1.0 + lam), gamma_n=gamma, a_big_n=a_big, n=n)


def occupation_number(ob: BosonOneBody, r: int) -> float:
    if r < 0:
        raise ValueError("occupation index must be non-negative")
    t = ob.t_n
    if t == 0.0:
        return 1.0 if r == 0 else 0.0
    return (1.0 - t) * t**r


def occupations(ob: BosonOneBody, floor: float = OCCUPATION_FLOOR, max_terms: int = MAX_OCCUPATIONS) -> np.ndarray:
    """Leading occupation numbers, stopping once n_r < floor or after max_terms."""
    t = ob.t_n
    if t == 0.0:
        return np.array([1.0])
    # first index with (1-t) t^r < floor
    count = math.floor(math.log(floor / (1.0 - t)) / math.log(t)) + 1
    count = max(1, min(count, max_terms))
    return (1.0 - t) * t ** np.arange(count, dtype=float)


def _log_scale(log_base: LogBase) -> float:
    if log_base in ("e", None):
        return 1.0
    if log_base in ("2", 2):
        return 1.0 / math.log(2.0)
    raise ValueError(f"log_base must be 'e' or '2', got {log_base!r}")


def entropy_from_t(t: float) -> float:
    """-sum (1-t) t^r log((1-t) t^r) = -log(1-t) - t log(t) / (1-t), in nats."""
    if t <= 0.0:
        return 0.0
    return -math.log1p(-t) - t * math.log(t) / (1.0 - t)


def entropy_from_t_printed(t: float) -> float:
    """The alternative form with log(1-t) in the second term.

    Kept only so the verify report can show it disagreeing with direct
    summation; algebraically it collapses to -log(1-t) / (1-t).
    """
    if t <= 0.0:
        return 0.0
    return -math.log1p(-t) - t * math.log1p(-t) / (1.0 - t)


def von_neumann_entropy(ob: BosonOneBody, log_base: LogBase = "e") -> float:
    return entropy_from_t(ob.t_n) * _log_scale(log_base)


def quasidensity_1d(freqs: Frequencies, n: float, x, p):
    """One Cartesian factor (lambda/pi) exp(-lambda (gamma^2 x^2 + p^2/gamma^2))."""
    ob = boson_one_body(freqs, n)
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    g2 = ob.gamma_n**2
    return ob.lambda_n / math.pi * np.exp(-ob.lambda_n * (g2 * x * x + p * p / g2))


def quasidensity(freqs: Frequencies, n: float, r, p):
    """Three-dimensional one-body Wigner quasidensity at position r and momentum p.

    ``r`` and ``p`` have a trailing axis of length 3; the result is the
    product of the three Cartesian factors.
    """
    r = np.asarray(r, dtype=float)
    p = np.asarray(p, dtype=float)
    if r.shape[-1] != 3 or p.shape[-1] != 3:
        raise ValueError("r and p must have a trailing axis of length 3")
    out = quasidensity_1d(freqs, n, r[..., 0], p[..., 0])
    for k in (1, 2):
        out = out * quasidensity_1d(freqs, n, r[..., k], p[..., k])
    return out


def _t_at(n: float, coupling_ratio: float) -> float:
    return boson_one_body(frequencies_from_ratio(n, coupling_ratio), n).t_n


def critical_particle_number(
    coupling_ratio: float,
    bracket: tuple[float, float] = (1.0, 100.0),
    xatol: float = 1e-8,
    objective: Literal["entropy", "n0"] = "entropy",
) -> float:
    """Continuous N maximizing S(N) at fixed coupling ratio, with mu^2 = k + N delta.

    With ``objective="n0"`` the first occupation number 1 - t is minimized
    instead; S is increasing in t, so both share the optimum.
    """
    if not coupling_ratio > 0:
        raise ValueError("critical particle number needs a positive coupling ratio")
    if objective == "entropy":
        def f(n):
            return -entropy_from_t(_t_at(n, coupling_ratio))
    elif objective == "n0":
        def f(n):
            return 1.0 - _t_at(n, coupling_ratio)
    else:
        raise ValueError(f"unknown objective {objective!r}")
    lo, hi = bracket
    res = minimize_scalar(f, bounds=(lo, hi), method="bounded", options={"xatol": xatol})
    n_star = float(res.x)
    edge = 1e-5
    if n_star - lo < edge or hi - n_star < edge:
        raise NoInteriorMaximum(
            f"entropy is monotone on N in [{lo}, {hi}] for delta/k = {coupling_ratio}; optimum at the edge {n_star:.6g}"
        )
    return n_star
