"""Independent numerical ground truth for the closed forms.

Nothing here uses the Hubbard-Stratonovich reduction or the moment sums.
Instead it works from the definitions:

* ``GaussianPolyState`` integrates polynomial-times-Gaussian wavefunctions
  directly on tensor Gauss-Hermite grids after completing the square, which
  is exact once the node count exceeds half the polynomial degree;
* ``nystrom_occupations`` diagonalizes a kernel on a Gauss-Legendre grid;
* the remaining helpers evaluate entropies, purities, Gaussian moments and
  Hermite cross integrals by brute-force summation or quadrature.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Literal, Sequence

import numpy as np
from numpy.polynomial import hermite as npherm
from scipy import integrate, linalg
from scipy.special import eval_hermite, roots_hermite, roots_legendre

from .errors import ConvergenceWarning
from .model import Frequencies
from .polyalg import LinearForm, vandermonde

NYSTROM_NODES = 240
DIRECT_NODES = 80
NYSTROM_DRIFT_TOL = 1e-6


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    kind: str

    def __post_init__(self):
        if np.any(self.weights <= 0):
            raise ValueError("quadrature weights must be positive")

    def __len__(self):
        return len(self.nodes)

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


def gauss_hermite(n: int, self_test: bool = True) -> QuadratureRule:
    """n-point rule for the weight exp(-x^2)."""
    x, w = roots_hermite(n)
    rule = QuadratureRule(x, w, "gauss-hermite")
    if self_test:
        # exact for x^{2k}, 2k < 2n: integral is Gamma(k + 1/2)
        for k in range(0, min(n, 12)):
            exact = math.gamma(k + 0.5)
            got = float(np.dot(w, x ** (2 * k)))
            if abs(got - exact) > 1e-11 * exact:
                raise RuntimeError(f"Gauss-Hermite self-test failed at degree {2 * k}: {got} vs {exact}")
    return rule


def gauss_legendre(n: int, lo: float = -1.0, hi: float = 1.0, self_test: bool = True) -> QuadratureRule:
    x, w = roots_legendre(n)
    half = 0.5 * (hi - lo)
    nodes = lo + half * (x + 1.0)
    weights = half * w
    rule = QuadratureRule(nodes, weights, "gauss-legendre")
    if self_test:
        for k in range(0, min(2 * n, 12)):
            exact = (hi ** (k + 1) - lo ** (k + 1)) / (k + 1)
            got = float(np.dot(weights, nodes**k))
            size = (abs(hi) ** (k + 1) + abs(lo) ** (k + 1)) / (k + 1)
            if abs(got - exact) > 1e-11 * max(1.0, size):
                raise RuntimeError(f"Gauss-Legendre self-test failed at degree {k}: {got} vs {exact}")
    return rule


# ---------------------------------------------------------------------------
# direct integration of Gaussian-times-polynomial states


def coupling_matrix(freqs: Frequencies, n_total: int) -> np.ndarray:
    """Q with |Psi|^2 ~ exp(-x^T Q x): mu on the relative modes, omega on the centre of mass."""
    w, mu = freqs.omega, freqs.mu
    return mu * np.eye(n_total) + (w - mu) / n_total * np.ones((n_total, n_total))


class GaussianPolyState:
    """Real wavefunction Psi(x) = C * poly(x) * exp(-x^T Q x / 2) in n dimensions.

    ``poly`` maps an array of shape (..., n) to values of shape (...).  The
    constant C is fixed numerically so that the integral of Psi^2 is 1.
    ``nodes`` is the Gauss-Hermite count per axis; it should exceed the
    degree of poly in any single variable for the integrals to be exact.
    """

    def __init__(self, q: np.ndarray, poly: Callable[[np.ndarray], np.ndarray], nodes: int):
        self.q = np.asarray(q, dtype=float)
        self.dim = self.q.shape[0]
        self.poly = poly
        self.nodes = nodes
        self.norm = 1.0
        self.norm = 1.0 / math.sqrt(self._full_norm())

    def _grid(self, dim: int):
        rule = gauss_hermite(self.nodes, self_test=False)
        pts = np.array(list(itertools.product(rule.nodes, repeat=dim))).reshape(-1, dim)
        wts = np.prod(np.array(list(itertools.product(rule.weights, repeat=dim))).reshape(-1, dim), axis=1)
        return pts, wts

    def _full_norm(self) -> float:
        # x = L^{-T} y turns exp(-x^T Q x) into exp(-|y|^2)
        chol = np.linalg.cholesky(self.q)
        y, wts = self._grid(self.dim)
        x = linalg.solve_triangular(chol.T, y.T, lower=False).T
        jac = 1.0 / np.prod(np.diag(chol))
        return float(jac * np.dot(wts, self.poly(x) ** 2))

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        expo = -0.5 * np.einsum("...i,ij,...j->...", x, self.q, x)
        return self.norm * self.poly(x) * np.exp(expo)

    def marginal(self, r: float, rp: float) -> float:
        """Integral of Psi(r, x) Psi(rp, x) over the last n - 1 coordinates."""
        q11 = self.q[0, 0]
        q1x = self.q[0, 1:]
        qxx = self.q[1:, 1:]
        s = r + rp
        # exponent: -x^T Qxx x - s q1x.x - q11 (r^2 + rp^2)/2
        x0 = -0.5 * s * np.linalg.solve(qxx, q1x)
        const = float(x0 @ qxx @ x0) - 0.5 * q11 * (r * r + rp * rp)
        chol = np.linalg.cholesky(qxx)
        y, wts = self._grid(self.dim - 1)
        x = x0 + linalg.solve_triangular(chol.T, y.T, lower=False).T
        jac = 1.0 / np.prod(np.diag(chol))
        m = len(x)
        full_a = np.column_stack([np.full(m, r), x])
        full_b = np.column_stack([np.full(m, rp), x])
        vals = self.poly(full_a) * self.poly(full_b)
        return float(self.norm**2 * jac * math.exp(const) * np.dot(wts, vals))

    def marginal_grid(self, rs: Sequence[float], rps: Sequence[float]) -> np.ndarray:
        return np.array([[self.marginal(a, b) for b in rps] for a in rs])


def _vandermonde_rows(x: np.ndarray) -> np.ndarray:
    return np.broadcast_to(vandermonde(np.moveaxis(x, -1, 0)), x.shape[:-1])


def spinless_state(freqs: Frequencies, n: int, nodes: int | None = None) -> GaussianPolyState:
    if not 1 <= n <= 4:
        raise ValueError("direct spinless integration is limited to N <= 4")
    if nodes is None:
        nodes = DIRECT_NODES if n <= 3 else 12
    return GaussianPolyState(coupling_matrix(freqs, n), _vandermonde_rows, nodes)


def wavefunction_spinless(freqs: Frequencies, n: int, positions) -> np.ndarray:
    """Normalized Vandermonde-times-Gaussian ground state, N <= 4."""
    return spinless_state(freqs, n)(positions)


def rho1_direct(freqs: Frequencies, n: int, r: float, rp: float, nodes: int = DIRECT_NODES) -> float:
    """Spinless one-body density (unit trace) by (N-1)-dimensional quadrature."""
    if n not in (2, 3):
        raise ValueError("rho1_direct supports N in {2, 3}")
    return spinless_state(freqs, n, nodes).marginal(r, rp)


def spinned_state(freqs: Frequencies, n_pairs: int, nodes: int | None = None) -> GaussianPolyState:
    """Spatial part of the closed-shell state: particles 0..N-1 spin up, N..2N-1 spin down."""
    if not 1 <= n_pairs <= 2:
        raise ValueError("direct spinned integration is limited to N_pairs <= 2")
    if nodes is None:
        nodes = DIRECT_NODES if n_pairs == 1 else 16

    def poly(x):
        up = x[..., :n_pairs]
        down = x[..., n_pairs:]
        return _vandermonde_rows(up) * _vandermonde_rows(down)

    return GaussianPolyState(coupling_matrix(freqs, 2 * n_pairs), poly, nodes)


def spinned_block_direct(freqs: Frequencies, n_pairs: int, r: float, rp: float, nodes: int | None = None) -> float:
    """Spin-up block of the unit-trace one-body density: half the spatial marginal."""
    return 0.5 * spinned_state(freqs, n_pairs, nodes).marginal(r, rp)


def boson_kernel_direct(freqs: Frequencies, n: int, r: float, rp: float, nodes: int = DIRECT_NODES) -> float:
    """One Cartesian factor of the bosonic one-body density by direct integration."""
    state = GaussianPolyState(coupling_matrix(freqs, n), lambda x: np.ones(x.shape[:-1]), nodes)
    return state.marginal(r, rp)


def oscillator_orbital(k: int, freq: float, x) -> np.ndarray:
    """Normalized eigenfunction k of a unit-mass oscillator with angular frequency ``freq``."""
    x = np.asarray(x, dtype=float)
    s = math.sqrt(freq)
    norm = (freq / math.pi) ** 0.25 / math.sqrt(2.0**k * math.factorial(k))
    return norm * eval_hermite(k, s * x) * np.exp(-0.5 * freq * x * x)


def slater_determinant(orbitals: Sequence[Callable], positions) -> np.ndarray:
    positions = np.asarray(positions, dtype=float)
    n = len(orbitals)
    mat = np.stack([np.stack([orb(positions[..., j]) for j in range(n)], axis=-1) for orb in orbitals], axis=-2)
    return np.linalg.det(mat) / math.sqrt(math.factorial(n))


# ---------------------------------------------------------------------------
# bosonic Wigner factor -> position kernel


def wigner_to_position_kernel(lambda_n: float, gamma_n: float) -> Callable:
    """Position kernel of the Wigner factor (lambda/pi) exp(-lambda (gamma^2 X^2 + p^2/gamma^2)).

    With rho(x, y) = integral of W((x+y)/2, p) exp(i p (x - y)) dp this is
    sqrt(lambda/pi) gamma exp(-lambda gamma^2 X^2 - gamma^2 s^2 / (4 lambda)),
    X the midpoint and s = x - y.
    """
    pref = math.sqrt(lambda_n / math.pi) * gamma_n
    g2 = gamma_n * gamma_n

    def kernel(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        mid = 0.5 * (x + y)
        s = x - y
        return pref * np.exp(-lambda_n * g2 * mid * mid - g2 * s * s / (4.0 * lambda_n))

    return kernel


# ---------------------------------------------------------------------------
# spectra


@dataclass(frozen=True)
class SpectralResult:
    eigenvalues: np.ndarray
    grid_size: int
    residual: float

    @property
    def total(self) -> float:
        return float(self.eigenvalues.sum())


def _nystrom_eigs(kernel: Callable, half_width: float, grid_size: int) -> np.ndarray:
    rule = gauss_legendre(grid_size, -half_width, half_width, self_test=False)
    x, w = rule.nodes, rule.weights
    sw = np.sqrt(w)
    mat = sw[:, None] * kernel(x[:, None], x[None, :]) * sw[None, :]
    mat = 0.5 * (mat + mat.T)
    return np.sort(linalg.eigvalsh(mat))[::-1]


def nystrom_occupations(kernel: Callable, half_width: float, grid_size: int = NYSTROM_NODES,
                        check: bool = True) -> SpectralResult:
    """Eigenvalues of the symmetric kernel on a Gauss-Legendre grid over [-L, L].

    With ``check`` the grid is doubled; the residual is the shift of the top
    eigenvalue and a ConvergenceWarning is raised if it exceeds 1e-6.
    """
    eigs = _nystrom_eigs(kernel, half_width, grid_size)
    residual = float("nan")
    if check:
        finer = _nystrom_eigs(kernel, half_width, 2 * grid_size)
        residual = float(abs(finer[0] - eigs[0]))
        if residual > NYSTROM_DRIFT_TOL:
            warnings.warn(
                f"top Nystrom eigenvalue moved by {residual:.3e} when doubling the grid", ConvergenceWarning, stacklevel=2
            )
    return SpectralResult(eigs, grid_size, residual)


def default_half_width(freqs: Frequencies, n_orbitals: int = 1) -> float:
    """A box that holds the n-th oscillator orbital of the softer mode with wide margin."""
    soft = min(freqs.omega, freqs.mu)
    return (8.0 + math.sqrt(2.0 * n_orbitals + 1.0)) / math.sqrt(soft)


# ---------------------------------------------------------------------------
# scalar arbiters


def entropy_by_summation(t: float, floor: float = 1e-18, max_terms: int = 10**6) -> float:
    """-sum n_r log n_r with n_r = (1 - t) t^r, summed until n_r < floor."""
    if t <= 0.0:
        return 0.0
    terms = []
    n = 1.0 - t
    r = 0
    while n >= floor and r < max_terms:
        terms.append(-n * math.log(n))
        n *= t
        r += 1
    return math.fsum(terms)


def purity_by_quadrature(kernel: Callable, half_width: float, nodes: int = NYSTROM_NODES,
                         method: Literal["gauss-legendre", "adaptive"] = "gauss-legendre") -> float:
    """Tr[rho^2] = integral of rho(r, r') rho(r', r) over the plane."""
    if method == "gauss-legendre":
        rule = gauss_legendre(nodes, -half_width, half_width, self_test=False)
        x, w = rule.nodes, rule.weights
        k = kernel(x[:, None], x[None, :])
        return float(np.einsum("i,ij,ji,j->", w, k, k, w))
    if method == "adaptive":
        val, _ = integrate.dblquad(
            lambda rp, r: float(kernel(r, rp) * kernel(rp, r)),
            -half_width, half_width, -half_width, half_width, epsabs=1e-13, epsrel=1e-11,
        )
        return float(val)
    raise ValueError(f"unknown method {method!r}")


def moment_by_quadrature(n: int, m: int, a: float, c: float, nodes: int = 200,
                         method: Literal["gauss-legendre", "adaptive"] = "gauss-legendre") -> float:
    """Integral of x^n y^m exp(-a (x^2 + y^2) + 2 c x y) by plain 2D quadrature."""
    if a <= abs(c):
        raise ValueError("integrand is not integrable")
    soft = a - abs(c)
    half_width = math.sqrt((60.0 + n + m) / soft)

    def f(x, y):
        return x**n * y**m * np.exp(-a * (x * x + y * y) + 2.0 * c * x * y)

    if method == "gauss-legendre":
        rule = gauss_legendre(nodes, -half_width, half_width, self_test=False)
        x, w = rule.nodes, rule.weights
        return float(w @ f(x[:, None], x[None, :]) @ w)
    if method == "adaptive":
        val, _ = integrate.dblquad(lambda y, x: f(x, y), -np.inf, np.inf, -np.inf, np.inf, epsabs=0, epsrel=1e-12)
        return float(val)
    raise ValueError(f"unknown method {method!r}")


def cross_integral_by_quadrature(k: int, q_a: LinearForm, q_b: LinearForm, beta_sq: float,
                                 r: float, rp: float, nodes: int = 200) -> float:
    """Integral of exp(-u^2) H_k(q_a - beta u) H_k(q_b - beta u) du on Gauss-Hermite nodes.

    For beta^2 < 0, beta is imaginary; the odd powers of beta cancel between
    the symmetric nodes, leaving a real result.
    """
    beta = complex(0.0, math.sqrt(-beta_sq)) if beta_sq < 0 else complex(math.sqrt(beta_sq), 0.0)
    rule = gauss_hermite(nodes, self_test=False)
    coeff = np.zeros(k + 1)
    coeff[k] = 1.0
    xa = q_a(r, rp) - beta * rule.nodes
    xb = q_b(r, rp) - beta * rule.nodes
    val = np.dot(rule.weights, npherm.hermval(xa, coeff) * npherm.hermval(xb, coeff))
    scale = max(1.0, float(np.dot(rule.weights, np.abs(npherm.hermval(xa, coeff) * npherm.hermval(xb, coeff)))))
    if abs(val.imag) > 1e-9 * scale:
        raise RuntimeError(f"cross integral has an imaginary part {val.imag:.3e}")
    return float(val.real)
