"""One-body density of the one-dimensional spinless N-fermion harmonium.

The ground state is a Vandermonde determinant times the bosonic Gaussian.
After a Hubbard-Stratonovich step the one-body density takes the form

    rho(r, r') = norm * exp(-a_N (r^2 + r'^2) + 2 c_N r r') * P(r, r')

with P a symmetric polynomial of total degree 2(N - 1) built from Hermite
cross integrals.  Purity follows from Gaussian moments of rho^2.

The monomial expansion of P has large alternating coefficients, so the
moment sums cancel heavily once N grows.  Up to ``FLOAT_MAX_ORBITALS``
orbitals everything runs in float64; above that the coefficients, trace and
purity are assembled in mpmath at ``working_dps(n)`` digits.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import ConvergenceWarning, UnboundSystem
from .model import Frequencies
from .polyalg import (
    Arith,
    BivariatePoly,
    LinearForm,
    _moment,
    cross_integral_tensor,
    expand_linear,
    multiply_arrays,
)

TRACE_TOL = 1e-8
THRESHOLD_MARGIN = 1e-6
FLOAT_MAX_ORBITALS = 4


def working_dps(n_orbitals: int) -> int | None:
    """Decimal digits used for an ``n_orbitals`` kernel; None means float64."""
    if n_orbitals <= FLOAT_MAX_ORBITALS:
        return None
    return 16 + 3 * n_orbitals


@dataclass(frozen=True)
class KernelParams:
    """Gaussian and Hermite-argument parameters of the kernel.

    ``c_n`` is the coefficient multiplying ``2 r r'`` in the exponent, so the
    Gaussian part is exp(-a_n (r^2 + r'^2) + 2 c_n r r') with
    ``a_n = a - b_n - c_n``.
    """

    a: float
    b_n: float
    c_n: float
    a_n: float
    beta_sq: float
    n: int

    @property
    def q_forms(self) -> tuple[LinearForm, LinearForm]:
        """The Hermite arguments q(r, r') and q(r', r)."""
        root = math.sqrt(2.0 * self.a)
        half = 0.5 * self.beta_sq
        q = LinearForm(root * (1.0 - half), -root * half)
        return q, q.swapped()


def _gaussian_params(w, mu, n_gauss: int):
    denom = (n_gauss - 1) * w + mu
    a = mu / 2
    b = (mu - w) / (2 * n_gauss)
    c = (mu - w) ** 2 / denom * (n_gauss - 1) / (4 * n_gauss)
    beta_sq = (mu - w) / denom
    return a, b, c, a - b - c, beta_sq


def kernel_params(freqs: Frequencies, n: int) -> KernelParams:
    a, b, c, a_n, beta_sq = _gaussian_params(freqs.omega, freqs.mu, n)
    return KernelParams(a=a, b_n=b, c_n=c, a_n=a_n, beta_sq=beta_sq, n=n)


@lru_cache(maxsize=None)
def _density_tensor(n_orbitals: int) -> tuple[tuple, int]:
    """Integer layers of sum_{j<n} cross_integral(j) / (2^j j!), scaled by ``lcm``."""
    lcm = 2 ** (n_orbitals - 1) * math.factorial(n_orbitals - 1)
    layers = []
    for _ in range(n_orbitals):
        layer = np.empty((n_orbitals, n_orbitals), dtype=object)
        layer[...] = 0
        layers.append(layer)
    for j in range(n_orbitals):
        weight = lcm // (2**j * math.factorial(j))
        for s, t in enumerate(cross_integral_tensor(j)):
            layers[s][: j + 1, : j + 1] += weight * t
    return tuple(layers), lcm


def _coefficients(mu, beta_sq, n_orbitals: int, ar: Arith) -> np.ndarray:
    layers, lcm = _density_tensor(n_orbitals)
    acc = ar.zeros(layers[0].shape)
    for layer in reversed(layers):
        acc = acc * beta_sq + (layer.astype(float) if ar.dps is None else layer)
    acc = acc / lcm
    root = ar.sqrt(mu)
    half = beta_sq / 2
    q = LinearForm(root * (1 - half), -root * half)
    out = expand_linear(acc, q, q.swapped())
    # symmetric by construction; average away rounding asymmetry
    return (out + out.T) / 2


def _to_float(arr: np.ndarray) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in arr]) if arr.dtype == object else arr


def density_polynomial(freqs: Frequencies, n: int) -> BivariatePoly:
    """Coefficient polynomial sum c_{i,j} r^i r'^j of the spinless kernel.

    The sqrt(pi) from the u integration is factored out, so N = 1 gives the
    constant 1.
    """
    if n < 1:
        raise ValueError("need at least one fermion")
    ar = Arith(working_dps(n))
    _, _, _, _, beta_sq = _gaussian_params(ar.const(freqs.omega), ar.const(freqs.mu), n)
    return BivariatePoly(_to_float(_coefficients(ar.const(freqs.mu), beta_sq, n, ar)))


def _diagonal_sum(coeffs: np.ndarray, alpha, ar: Arith):
    """Integral of P(r, r) exp(-alpha r^2) dr."""
    terms = []
    for i, j in zip(*np.nonzero(coeffs != 0)):
        deg = int(i + j)
        if deg % 2:
            continue
        terms.append(coeffs[i, j] * ar.gamma_half(deg // 2) / ar.sqrt(alpha) ** (deg + 1))
    return ar.fsum(terms)


def _square_sum(coeffs: np.ndarray, a, c, ar: Arith):
    """Integral of P(r, r')^2 exp(-2a (r^2 + r'^2) + 4c r r') over the plane.

    Uses the Gaussian moments with parameters (2a, 2c), i.e. rotation
    exponents l1 = 4(a - c), l2 = 4(a + c).
    """
    sq = multiply_arrays(coeffs, coeffs)
    l1, l2 = 4 * (a - c), 4 * (a + c)
    cache: dict[tuple[int, int], object] = {}
    terms = []
    for i, j in zip(*np.nonzero(sq != 0)):
        i, j = int(i), int(j)
        if (i + j) % 2:
            continue
        key = (min(i, j), max(i, j))
        if key not in cache:
            cache[key] = _moment(key[0], key[1], l1, l2, "polar", ar)
        terms.append(sq[i, j] * cache[key])
    return ar.fsum(terms)


@dataclass(frozen=True)
class _Precise:
    dps: int | None
    coeffs: np.ndarray
    norm: object
    a_n: object
    c_n: object


@dataclass(frozen=True)
class OneBodyKernel:
    """rho(r, r') = norm * exp(-a_n (r^2 + r'^2) + 2 c_n r r') * poly(r, r').

    ``trace`` is the target trace (1 for the spinless density, 1/2 for a
    spin block).  ``closed_form_norm`` is the analytic prefactor and
    ``trace_defect`` the relative amount by which it missed the target.
    """

    params: KernelParams
    poly: BivariatePoly
    norm: float
    trace: float = 1.0
    closed_form_norm: float = float("nan")
    trace_defect: float = 0.0
    diagnostics: tuple = ()
    _precise: _Precise | None = field(default=None, repr=False, compare=False)

    def __call__(self, r, rp):
        r, rp = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(rp, dtype=float))
        p = self.params
        gauss = np.exp(-p.a_n * (r * r + rp * rp) + 2.0 * p.c_n * r * rp)
        return self.norm * gauss * self.poly(r, rp)

    def diagonal(self, r):
        return self(r, r)

    def _core(self) -> _Precise:
        if self._precise is not None:
            return self._precise
        p = self.params
        return _Precise(None, self.poly.coeffs, self.norm, p.a_n, p.c_n)

    def integrated_trace(self) -> float:
        core = self._core()
        ar = Arith(core.dps)
        return float(core.norm * _diagonal_sum(core.coeffs, 2 * (core.a_n - core.c_n), ar))

    def trace_of_square(self) -> float:
        """Tr[rho^2] assembled from closed-form Gaussian moments."""
        core = self._core()
        ar = Arith(core.dps)
        return float(core.norm**2 * _square_sum(core.coeffs, core.a_n, core.c_n, ar))


def _check_threshold(freqs: Frequencies, n_total: int) -> None:
    # delta/k within THRESHOLD_MARGIN of -1/N makes the moments blow up
    ratio = (freqs.mu**2 / freqs.omega**2 - 1.0) / n_total
    if ratio + 1.0 / n_total <= THRESHOLD_MARGIN:
        raise UnboundSystem(
            f"coupling ratio {ratio:.9g} is within {THRESHOLD_MARGIN} of the unbinding bound -1/{n_total}"
        )


NormFn = Callable[[Arith, object, object, object], object]


def assemble_kernel(freqs: Frequencies, n_gauss: int, n_orbitals: int, target_trace: float,
                    closed_norm: NormFn) -> OneBodyKernel:
    """Shared engine for spinless kernels and spin blocks.

    ``n_gauss`` is the particle count entering the Gaussian/Hubbard-Stratonovich
    reduction, ``n_orbitals`` the number of Hermite terms.  ``closed_norm``
    returns the analytic prefactor given (arith, omega, mu, denominator).
    """
    _check_threshold(freqs, n_gauss)
    params = kernel_params(freqs, n_gauss)
    ar = Arith(working_dps(n_orbitals))
    w, mu = ar.const(freqs.omega), ar.const(freqs.mu)
    a, b, c, a_n, beta_sq = _gaussian_params(w, mu, n_gauss)
    coeffs = _coefficients(mu, beta_sq, n_orbitals, ar)
    norm = closed_norm(ar, w, mu, (n_gauss - 1) * w + mu)
    trace = norm * _diagonal_sum(coeffs, 2 * (a_n - c), ar)
    defect = float(trace / target_trace - 1)
    diagnostics: tuple = ()
    closed = float(norm)
    if abs(defect) > TRACE_TOL:
        msg = f"closed-form normalisation off by relative {defect:.3e}; rescaled to the target trace"
        warnings.warn(msg, ConvergenceWarning, stacklevel=3)
        norm = norm * target_trace / trace
        diagnostics = (msg,)
    precise = _Precise(ar.dps, coeffs, norm, a_n, c)
    return OneBodyKernel(
        params=params,
        poly=BivariatePoly(_to_float(coeffs)),
        norm=float(norm),
        trace=target_trace,
        closed_form_norm=closed,
        trace_defect=defect,
        diagnostics=diagnostics,
        _precise=precise,
    )


def _spinless_norm(n: int) -> NormFn:
    def norm(ar, w, mu, denom):
        return 1 / ar.sqrt(ar.pi * n) * ar.sqrt(w * mu / denom)

    return norm


def build_kernel(freqs: Frequencies, n: int) -> OneBodyKernel:
    """Normalised one-body density (unit trace) of the spinless N-fermion harmonium."""
    if n < 1:
        raise ValueError("need at least one fermion")
    return assemble_kernel(freqs, n, n, 1.0, _spinless_norm(n))


def purity(freqs: Frequencies, n: int) -> float:
    """N Tr[rho^2]; equals 1 for a single Slater determinant."""
    return n * build_kernel(freqs, n).trace_of_square()


def linear_entropy(freqs: Frequencies, n: int) -> float:
    """1 - N Tr[rho^2]."""
    return 1.0 - purity(freqs, n)
