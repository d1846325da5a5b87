"""Exact Hermite/Vandermonde algebra, bivariate polynomials and Gaussian moments.

Integer-valued quantities (Hermite coefficients, binomials, double
factorials) are kept as Python ints.  Bivariate polynomials in ``(r, r')`` are
dense coefficient matrices ``C[i, j]`` multiplying ``r**i * r'**j``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import DegreeTooLarge, DivergentIntegral

DEFAULT_DEGREE_CAP = 64


def _check_degree(n: int, cap: int) -> None:
    if n > cap:
        raise DegreeTooLarge(f"degree {n} exceeds the cap {cap}")


def double_factorial(n: int) -> int:
    """n!! with the convention (-1)!! = 0!! = 1."""
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def gamma_half_integer(s: int) -> float:
    """Gamma(s + 1/2) = sqrt(pi) (2s - 1)!! / 2**s."""
    return math.sqrt(math.pi) * double_factorial(2 * s - 1) / 2.0**s


@dataclass(frozen=True)
class UnivariatePoly:
    coeffs: tuple  # index = power

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        out = 0
        for c in reversed(self.coeffs):
            out = out * x + c
        return out


@dataclass(frozen=True)
class LinearForm:
    """``coef_r * r + coef_rp * r'``."""

    coef_r: float
    coef_rp: float

    def __call__(self, r, rp):
        return self.coef_r * r + self.coef_rp * rp

    def swapped(self) -> "LinearForm":
        return LinearForm(self.coef_rp, self.coef_r)


class BivariatePoly:
    """Dense polynomial sum_{i,j} C[i, j] r**i r'**j."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, max_degree: int = DEFAULT_DEGREE_CAP):
        c = np.array(coeffs, dtype=float, ndmin=2)
        if c.ndim != 2:
            raise ValueError("coefficients must form a matrix")
        _check_degree(max(c.shape) - 1, max_degree)
        c.setflags(write=False)
        self.coeffs = c

    @classmethod
    def constant(cls, value: float) -> "BivariatePoly":
        return cls([[value]])

    @property
    def shape(self):
        return self.coeffs.shape

    @property
    def total_degree(self) -> int:
        nz = np.argwhere(self.coeffs != 0)
        return int(nz.sum(axis=1).max()) if len(nz) else 0

    def __call__(self, r, rp):
        return np.polynomial.polynomial.polyval2d(r, rp, self.coeffs)

    def _padded(self, other: "BivariatePoly"):
        rows = max(self.shape[0], other.shape[0])
        cols = max(self.shape[1], other.shape[1])
        a = np.zeros((rows, cols))
        b = np.zeros((rows, cols))
        a[: self.shape[0], : self.shape[1]] = self.coeffs
        b[: other.shape[0], : other.shape[1]] = other.coeffs
        return a, b

    def __add__(self, other: "BivariatePoly") -> "BivariatePoly":
        a, b = self._padded(other)
        return BivariatePoly(a + b)

    def __sub__(self, other: "BivariatePoly") -> "BivariatePoly":
        a, b = self._padded(other)
        return BivariatePoly(a - b)

    def __mul__(self, other):
        if isinstance(other, BivariatePoly):
            return poly_mul(self, other)
        return poly_scale(self, other)

    __rmul__ = __mul__

    def transpose(self) -> "BivariatePoly":
        """Swap the roles of r and r'."""
        return BivariatePoly(self.coeffs.T)

    def is_symmetric(self, atol: float = 0.0) -> bool:
        a, b = self._padded(self.transpose())
        return bool(np.allclose(a, b, rtol=0.0, atol=atol))

    def allclose(self, other: "BivariatePoly", rtol=1e-12, atol=0.0) -> bool:
        a, b = self._padded(other)
        return bool(np.allclose(a, b, rtol=rtol, atol=atol))

    def __repr__(self):
        return f"BivariatePoly(shape={self.shape})"


def poly_add(p: BivariatePoly, q: BivariatePoly) -> BivariatePoly:
    return p + q


def poly_scale(p: BivariatePoly, factor: float) -> BivariatePoly:
    return BivariatePoly(p.coeffs * factor)


def multiply_arrays(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Coefficient matrix of the product of two bivariate polynomials (any dtype)."""
    (pr, pc), (qr, qc) = p.shape, q.shape
    out = np.zeros((pr + qr - 1, pc + qc - 1), dtype=p.dtype)
    if p.dtype == object:
        out[...] = 0 * p.flat[0]
    for i, j in zip(*np.nonzero(p != 0)):
        out[i : i + qr, j : j + qc] += p[i, j] * q
    return out


def poly_mul(p: BivariatePoly, q: BivariatePoly, max_degree: int = DEFAULT_DEGREE_CAP) -> BivariatePoly:
    (pr, pc), (qr, qc) = p.shape, q.shape
    _check_degree(max(pr + qr, pc + qc) - 2, max_degree)
    return BivariatePoly(multiply_arrays(p.coeffs, q.coeffs), max_degree)


def _binomial_powers(form: LinearForm, n: int, dtype) -> list[np.ndarray]:
    """Row p holds the coefficients of r**i r'**(p-i) in form**p, indexed by i."""
    rows = []
    for p in range(n + 1):
        row = [math.comb(p, i) * form.coef_r**i * form.coef_rp ** (p - i) for i in range(p + 1)]
        rows.append(np.array(row, dtype=dtype))
    return rows


def expand_linear(d: np.ndarray, fx: LinearForm, fy: LinearForm) -> np.ndarray:
    """Raw coefficient matrix of sum_{p,q} d[p, q] fx^p fy^q in powers of (r, r').

    Dtype-generic: float arrays stay float, object arrays of mpf stay mpf.
    """
    px, py = d.shape[0] - 1, d.shape[1] - 1
    xs = _binomial_powers(fx, px, d.dtype)
    ys = _binomial_powers(fy, py, d.dtype)
    deg = px + py
    out = np.zeros((deg + 1, deg + 1), dtype=d.dtype)
    if d.dtype == object:
        out[...] = 0 * d.flat[0]
    for p in range(px + 1):
        for q in range(py + 1):
            w = d[p, q]
            if w == 0:
                continue
            conv = np.convolve(xs[p], ys[q])  # index m = power of r
            m = np.arange(p + q + 1)
            out[m, p + q - m] += w * conv
    return out


def substitute_linear(coeffs_xy, fx: LinearForm, fy: LinearForm) -> BivariatePoly:
    """Expand sum_{p,q} D[p, q] X**p Y**q with X = fx(r, r'), Y = fy(r, r')."""
    return BivariatePoly(expand_linear(np.asarray(coeffs_xy, dtype=float), fx, fy))


@lru_cache(maxsize=None)
def _hermite_coeffs(n: int) -> tuple:
    if n == 0:
        return (1,)
    prev, cur = [1], [0, 2]
    for k in range(1, n):
        # H_{k+1} = 2x H_k - 2k H_{k-1}
        nxt = [0] + [2 * c for c in cur]
        for i, c in enumerate(prev):
            nxt[i] -= 2 * k * c
        prev, cur = cur, nxt
    return tuple(cur)


def hermite(n: int, max_degree: int = DEFAULT_DEGREE_CAP) -> UnivariatePoly:
    """Physicists' Hermite polynomial H_n with exact integer coefficients."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    _check_degree(n, max_degree)
    return UnivariatePoly(_hermite_coeffs(n))


def poly_compose_linear(p: UnivariatePoly, f: LinearForm) -> BivariatePoly:
    """p(f(r, r')) as a bivariate polynomial."""
    d = np.zeros((p.degree + 1, 1))
    d[:, 0] = [float(c) for c in p.coeffs]
    return substitute_linear(d, f, LinearForm(0.0, 0.0))


def _reflected_hermite(n: int) -> np.ndarray:
    """Coefficients of H_n(-x) as an object array of ints."""
    c = _hermite_coeffs(n)
    return np.array([ci if i % 2 == 0 else -ci for i, ci in enumerate(c)], dtype=object)


@lru_cache(maxsize=None)
def cross_integral_tensor(k: int) -> tuple:
    """Integer tensor T[s][p, q] for the Hermite cross integral.

    The integral of exp(-u^2) H_k(X - beta u) H_k(Y - beta u) over u equals
    sqrt(pi) * sum_s (beta^2)^s * sum_{p,q} T[s][p, q] X^p Y^q.  Only even
    n1 + n2 = 2s survive the u integration, so beta enters through beta^2
    only and the expression stays real when beta^2 < 0.
    """
    _check_degree(k, DEFAULT_DEGREE_CAP)
    refl = [_reflected_hermite(n) for n in range(k + 1)]
    out = []
    for s in range(k + 1):
        t = np.zeros((k + 1, k + 1), dtype=object)
        t[:, :] = 0
        weight = 2**s * double_factorial(2 * s - 1)
        for n1 in range(max(0, 2 * s - k), min(k, 2 * s) + 1):
            n2 = 2 * s - n1
            a, b = refl[k - n1], refl[k - n2]
            t[: len(a), : len(b)] += (weight * math.comb(k, n1) * math.comb(k, n2)) * np.outer(a, b)
        out.append(t)
    return tuple(out)


def _evaluate_tensor(tensor, beta_sq: float) -> np.ndarray:
    # Horner in beta^2; exact ints up to the final float conversion of each layer
    acc = np.zeros(tensor[0].shape)
    for layer in reversed(tensor):
        acc = acc * beta_sq + layer.astype(float)
    return acc


def hermite_cross_integral(k: int, q_a: LinearForm, q_b: LinearForm, beta_sq: float) -> BivariatePoly:
    """Integral of exp(-u^2) H_k(q_a - beta u) H_k(q_b - beta u) du, as a polynomial in (r, r').

    Only ``beta_sq`` is needed, so the attractive case (beta imaginary) is
    handled in real arithmetic.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    xy = math.sqrt(math.pi) * _evaluate_tensor(cross_integral_tensor(k), beta_sq)
    return substitute_linear(xy, q_a, q_b)


class Arith:
    """Scalar arithmetic in float (``dps=None``) or mpmath at ``dps`` digits."""

    def __init__(self, dps: int | None = None):
        self.dps = dps
        if dps is None:
            self.const = float
            self.sqrt = math.sqrt
            self.fsum = math.fsum
        else:
            import mpmath

            self._mp = mpmath.mp.clone()
            self._mp.dps = dps
            self.const = self._mp.mpf
            self.sqrt = self._mp.sqrt
            self.fsum = self._mp.fsum

    @property
    def pi(self):
        return math.pi if self.dps is None else self._mp.pi

    def gamma_half(self, s: int):
        """Gamma(s + 1/2)."""
        return self.sqrt(self.pi) * double_factorial(2 * s - 1) / self.const(2) ** s

    def zeros(self, shape):
        if self.dps is None:
            return np.zeros(shape)
        out = np.empty(shape, dtype=object)
        out[...] = self.const(0)
        return out


@lru_cache(maxsize=None)
def _sign_binomials(n: int, m: int) -> tuple:
    """Coefficients of t^q in (1 + t)^n (1 - t)^m."""
    out = [0] * (n + m + 1)
    for i in range(n + 1):
        ci = math.comb(n, i)
        for j in range(m + 1):
            out[i + j] += ci * math.comb(m, j) * (-1) ** j
    return tuple(out)


def _moment(n: int, m: int, l1, l2, variant: str, ar: Arith):
    # terms with equal i + j share the Gamma/lambda factors; group them
    total = n + m
    gam = ar.gamma_half
    terms = []
    for q, k in enumerate(_sign_binomials(n, m)):
        if k == 0 or q % 2:
            continue
        p = total - q
        v_gamma = gam(q // 2) if variant == "polar" else gam(total // 2)
        terms.append(k * gam(p // 2) * v_gamma / (ar.sqrt(l1) ** (p + 1) * ar.sqrt(l2) ** (q + 1)))
    return 2 * ar.fsum(terms)


def gaussian_moment(n: int, m: int, a: float, c: float, variant: str = "polar", dps: int | None = None):
    """Integral of x^n y^m exp(-a (x^2 + y^2) + 2 c x y) over the plane.

    Evaluated with the rotation x = u + v, y = u - v, which splits the
    weight into exp(-l1 u^2 - l2 v^2) with l1 = 2(a - c), l2 = 2(a + c);
    each u^p v^q term contributes Gamma((p+1)/2) Gamma((q+1)/2) for even p, q.
    ``variant="printed"`` takes Gamma((n+m+1)/2) for the v-factor instead of
    Gamma((q+1)/2); it is wrong whenever n + m > 0 and exists only so the two
    readings can be compared.  With ``dps`` the sum is done in mpmath and an
    mpf is returned.
    """
    if n < 0 or m < 0:
        raise ValueError("moment orders must be non-negative")
    if variant not in ("polar", "printed"):
        raise ValueError(f"unknown variant {variant!r}")
    ar = Arith(dps)
    a, c = ar.const(a), ar.const(c)
    if not a > abs(c):
        raise DivergentIntegral(f"need a > |c| for an integrable weight, got a={a}, c={c}")
    if (n + m) % 2:
        return ar.const(0)
    if c == 0 and n % 2:
        # the weight factorizes and each odd one-dimensional moment vanishes
        return ar.const(0)
    return _moment(n, m, 2 * (a - c), 2 * (a + c), variant, ar)


def vandermonde(points: Sequence[float]):
    """prod_{i<j} (x_i - x_j); works elementwise on array-valued points."""
    out = 1.0
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            out = out * (points[i] - points[j])
    return out
