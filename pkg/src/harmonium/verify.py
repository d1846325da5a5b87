"""Cross-checks of every closed form against an independent oracle.

``run_checks("quick")`` runs in a few seconds; ``"full"`` adds the direct
three-fermion wavefunction integration and the larger purity quadratures.
``tolerance_scale`` multiplies every tolerance; comparisons are strict, so
a scale of 0 makes every check fail, which is how the harness is self-tested.
"""
from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass
from typing import IO, Callable

import numpy as np

from . import boson, oracle
from .fermion_spinless import build_kernel, density_polynomial, purity
from .fermion_spinned import spinned_block, spinned_purity
from .model import (
    Frequencies,
    ModelParams,
    fermion_spinless_ground_energy,
    fermion_spinned_ground_energy,
    frequencies,
    ratio_from_energy,
)
from .polyalg import (
    LinearForm,
    _hermite_coeffs,
    gaussian_moment,
    hermite,
    hermite_cross_integral,
    multiply_arrays,
)
from .reference import COEFFICIENT_TABLES, SPINLESS_PURITIES

GRID7 = np.linspace(-1.5, 1.5, 7)
FERMION_RATIOS = (-1 / 15, 1.0, 4.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _rel(a, b) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def moment_scale(n: int, m: int, a: float, c: float) -> float:
    """Cauchy-Schwarz bound sqrt(I(2n, 0) I(0, 2m)) on |I(n, m)|, from quadrature.

    Used as the denominator of moment errors so that the moments that vanish
    by symmetry are judged against the size of their integrand.
    """
    return math.sqrt(oracle.moment_by_quadrature(2 * n, 0, a, c) * oracle.moment_by_quadrature(0, 2 * m, a, c))


def _fmt(err: float, tol: float) -> str:
    return f"max err {err:.2e} (tol {tol:.0e})"


class _Suite:
    def __init__(self, scale: float):
        self.scale = scale

    def ok(self, err: float, tol: float) -> bool:
        return bool(err < tol * self.scale)

    # ---- polyalg -------------------------------------------------------

    def hermite_recurrence(self):
        bad = 0
        for n in range(1, 20):
            h_next, h, h_prev = _hermite_coeffs(n + 1), _hermite_coeffs(n), _hermite_coeffs(n - 1)
            rhs = [0] * (n + 2)
            for i, c in enumerate(h):
                rhs[i + 1] += 2 * c
            for i, c in enumerate(h_prev):
                rhs[i] -= 2 * n * c
            bad += list(h_next) != rhs
        bad += hermite(5).coeffs != (0, 120, 0, -160, 0, 32)
        return self.ok(bad, 1), f"{bad} integer mismatches for n <= 20"

    def cross_integral(self):
        err = 0.0
        mu = 1.7
        for beta_sq in (-0.3, 0.0, 0.5):
            root = math.sqrt(mu)
            q = LinearForm(root * (1 - beta_sq / 2), -root * beta_sq / 2)
            for k in range(9):
                poly = hermite_cross_integral(k, q, q.swapped(), beta_sq)
                for r, rp in ((0.3, -0.7), (1.1, 0.4)):
                    ref = oracle.cross_integral_by_quadrature(k, q, q.swapped(), beta_sq, r, rp)
                    err = max(err, abs(poly(r, rp) - ref) / max(1.0, abs(ref)))
        return self.ok(err, 1e-10), _fmt(err, 1e-10) + " over k <= 8, beta^2 in {-0.3, 0, 0.5}"

    def moments(self):
        err = 0.0
        for a in (1.0, 2.0):
            for c in (0.0, 0.4 * a, -0.4 * a):
                for n in range(13):
                    for m in range(13 - n):
                        if (n + m) % 2:
                            continue
                        ref = oracle.moment_by_quadrature(n, m, a, c)
                        err = max(err, abs(gaussian_moment(n, m, a, c) - ref) / moment_scale(n, m, a, c))
        return self.ok(err, 1e-10), _fmt(err, 1e-10) + " for n + m <= 12"

    def moment_gamma_variant(self):
        a, c = 1.0, 0.3
        ref = oracle.moment_by_quadrature(2, 0, a, c)
        good = _rel(gaussian_moment(2, 0, a, c, variant="polar"), ref)
        bad = _rel(gaussian_moment(2, 0, a, c, variant="printed"), ref)
        passed = self.ok(good, 1e-10) and bad > 1e-3
        return passed, f"(2,0): Gamma((i+j+1)/2) err {good:.2e}; Gamma((n+m+1)/2) err {bad:.2e} (must fail)"

    # ---- spinless fermions ----------------------------------------------

    def coefficient_tables(self):
        rng = np.random.default_rng(20240601)
        err = 0.0
        for n, table in COEFFICIENT_TABLES.items():
            for _ in range(5):
                w = float(rng.uniform(0.5, 2.0))
                mu = float(rng.uniform(0.3, 4.0))
                coeffs = density_polynomial(Frequencies(w, mu), n).coeffs
                expect = np.zeros_like(coeffs)
                for (i, j), v in table(w, mu).items():
                    expect[i, j] = v
                scale = np.abs(expect).max()
                err = max(err, float(np.abs(coeffs - expect).max() / scale))
        return self.ok(err, 1e-12), _fmt(err, 1e-12) + " for N = 1, 2, 3 at 5 random (omega, mu)"

    def kernel_trace(self):
        worst = 0.0
        for n in range(1, 9):
            for r in (-1 / 15, 1.0, 10.0):
                k = build_kernel(frequencies(ModelParams(n, r)), n)
                worst = max(worst, abs(k.trace_defect), abs(k.integrated_trace() - 1.0))
        return self.ok(worst, 1e-10), _fmt(worst, 1e-10) + " trace defect of the closed-form prefactor, N <= 8"

    def published_purities(self):
        parts, passed = [], True
        for (ratio, n), (value, tol) in SPINLESS_PURITIES.items():
            got = purity(frequencies(ModelParams(n, ratio)), n)
            passed &= self.ok(abs(got - value), tol)
            parts.append(f"N={n} d/k={ratio:g}: {got:.5f} vs {value}")
        return passed, "; ".join(parts)

    def purity_mapping(self, n_max: int):
        err = 0.0
        for n in range(2, n_max + 1):
            for r in (-1 / 15, 0.5, 1.0, 4.0, 10.0):
                f = frequencies(ModelParams(n, r))
                k = build_kernel(f, n)
                ref = oracle.purity_by_quadrature(k, oracle.default_half_width(f, n))
                err = max(err, _rel(k.trace_of_square(), ref))
        # exponents (a, c) instead of (2a, 2c) for the squared kernel
        f = frequencies(ModelParams(2, 1.0))
        k = build_kernel(f, 2)
        p = k.params
        coeffs = k.poly.coeffs
        prod = multiply_arrays(coeffs, coeffs)
        wrong = sum(
            prod[i, j] * gaussian_moment(i, j, p.a_n, p.c_n)
            for i in range(prod.shape[0]) for j in range(prod.shape[1]) if prod[i, j] != 0
        ) * k.norm**2
        alt = _rel(wrong, oracle.purity_by_quadrature(k, oracle.default_half_width(f, 2)))
        passed = self.ok(err, 1e-8) and alt > 1e-3
        return passed, _fmt(err, 1e-8) + f" for N <= {n_max}; unmapped exponents miss by {alt:.2e} (must fail)"

    def fermion_direct(self, n: int):
        err = 0.0
        for r in FERMION_RATIOS:
            f = frequencies(ModelParams(n, r))
            k = build_kernel(f, n)
            state = oracle.spinless_state(f, n)
            direct = state.marginal_grid(GRID7, GRID7)
            err = max(err, float(np.abs(k(GRID7[:, None], GRID7[None, :]) - direct).max()))
        return self.ok(err, 1e-8), _fmt(err, 1e-8) + f" on a 7x7 grid, N={n}, d/k in {{-1/15, 1, 4}}"

    def fermion_nystrom(self):
        worst_bound, worst_sum = -1.0, 0.0
        for n in (2, 3, 4):
            for r in FERMION_RATIOS:
                f = frequencies(ModelParams(n, r))
                spec = oracle.nystrom_occupations(build_kernel(f, n), oracle.default_half_width(f, n), check=False)
                worst_bound = max(worst_bound, spec.eigenvalues[0] - 1.0 / n)
                worst_sum = max(worst_sum, abs(spec.total - 1.0))
        passed = worst_bound <= 1e-8 * self.scale and self.ok(worst_sum, 1e-8)
        return passed, f"max(n_0 - 1/N) = {worst_bound:.2e}, trace err {worst_sum:.2e}"

    # ---- bosons -----------------------------------------------------------

    def boson_nystrom(self):
        err = 0.0
        for n in (2, 6, 20):
            for r in (1.0, 5.0):
                f = frequencies(ModelParams(n, r))
                ob = boson.boson_one_body(f, n)
                kern = oracle.wigner_to_position_kernel(ob.lambda_n, ob.gamma_n)
                spec = oracle.nystrom_occupations(kern, oracle.default_half_width(f), check=False)
                occ = boson.occupations(ob)
                m = min(len(occ), 30)
                err = max(err, float(np.abs(spec.eigenvalues[:m] - occ[:m]).max()))
        return self.ok(err, 1e-8), _fmt(err, 1e-8) + " Nystrom vs (1-t) t^r, N in {2, 6, 20}, d/k in {1, 5}"

    def boson_kernel_direct(self):
        err = 0.0
        for n in (2, 3):
            f = frequencies(ModelParams(n, 1.0))
            ob = boson.boson_one_body(f, n)
            kern = oracle.wigner_to_position_kernel(ob.lambda_n, ob.gamma_n)
            for r, rp in ((0.0, 0.0), (0.5, -0.2), (1.2, 0.7)):
                err = max(err, abs(kern(r, rp) - oracle.boson_kernel_direct(f, n, r, rp, nodes=12)))
        return self.ok(err, 1e-10), _fmt(err, 1e-10) + " Wigner-derived kernel vs direct integration"

    def boson_entropy(self):
        err, printed = 0.0, 0.0
        for n in (2, 3, 6, 20):
            for r in (0.5, 1.0, 5.0):
                t = boson.boson_one_body(frequencies(ModelParams(n, r)), n).t_n
                ref = oracle.entropy_by_summation(t)
                err = max(err, abs(boson.entropy_from_t(t) - ref))
                printed = max(printed, abs(boson.entropy_from_t_printed(t) - ref))
        return self.ok(err, 1e-12), (
            _fmt(err, 1e-12) + f"; log(t) form agrees, log(1-t) form misses by up to {printed:.2e}"
        )

    def critical_consistency(self):
        a = boson.critical_particle_number(5.0)
        b = boson.critical_particle_number(5.0, objective="n0")
        return self.ok(abs(a - b), 1e-6), f"argmax S = {a:.8f}, argmin n0 = {b:.8f}"

    # ---- spinned fermions -------------------------------------------------

    def spinned_checks(self):
        f = frequencies(ModelParams(2, 1.0, paired=True))
        blk = spinned_block(f, 2)
        tr = abs(blk.up_block.integrated_trace() - 0.5)
        ref = 4 * 2 * oracle.purity_by_quadrature(blk.up_block, oracle.default_half_width(f, 4))
        perr = _rel(spinned_purity(f, 2), ref)
        passed = self.ok(tr, 1e-10) and self.ok(perr, 1e-8)
        return passed, f"block trace err {tr:.2e}, purity vs quadrature {perr:.2e}"

    def spinned_singlet(self):
        err = 0.0
        for r in (-0.3, 1.0, 6.0):
            f = frequencies(ModelParams(1, r, paired=True))
            blk = spinned_block(f, 1)
            ob = boson.boson_one_body(f, 2)
            kern = oracle.wigner_to_position_kernel(ob.lambda_n, ob.gamma_n)
            for x, y in ((0.0, 0.0), (0.4, -0.9), (1.3, 0.2)):
                err = max(err, abs(blk(x, y) - 0.5 * kern(x, y)))
        return self.ok(err, 1e-10), _fmt(err, 1e-10) + " one pair vs half the two-boson kernel"

    def spinned_direct(self):
        err = 0.0
        for r in FERMION_RATIOS:
            f = frequencies(ModelParams(2, r, paired=True))
            blk = spinned_block(f, 2)
            state = oracle.spinned_state(f, 2)
            for x, y in ((0.0, 0.3), (0.8, -0.5), (-1.2, 1.0)):
                err = max(err, abs(blk(x, y) - 0.5 * state.marginal(x, y)))
        return self.ok(err, 1e-8), _fmt(err, 1e-8) + " two pairs vs direct 3D integration"

    # ---- model / identities -------------------------------------------------

    def trivial_coupling(self):
        worst = 0.0
        for n in (1, 2, 5):
            f = frequencies(ModelParams(n, 0.0))
            worst = max(worst, boson.von_neumann_entropy(boson.boson_one_body(f, n)))
            worst = max(worst, abs(1.0 - purity(f, n)))
            fs = frequencies(ModelParams(n, 0.0, paired=True))
            worst = max(worst, abs(1.0 - spinned_purity(fs, n)))
        return self.ok(worst, 1e-12), _fmt(worst, 1e-12) + " entropies at delta = 0"

    def energy_round_trip(self):
        err = 0.0
        for n in (2, 3, 5):
            for r in (-0.1, 0.0, 0.7, 12.0):
                f = frequencies(ModelParams(n, r))
                e = fermion_spinless_ground_energy(f, n) / f.omega
                err = max(err, abs(ratio_from_energy(e, n, "spinless") - r) / max(1.0, abs(r)))
                fp = frequencies(ModelParams(n, r / 2, paired=True))
                e = fermion_spinned_ground_energy(fp, n) / fp.omega
                err = max(err, abs(ratio_from_energy(e, n, "spinned") - r / 2) / max(1.0, abs(r)))
        return self.ok(err, 1e-12), _fmt(err, 1e-12) + " energy -> coupling -> energy"


def _checks(suite: _Suite, level: str) -> list[tuple[str, Callable]]:
    quick = [
        ("hermite recurrence", suite.hermite_recurrence),
        ("hermite cross integral vs quadrature", suite.cross_integral),
        ("gaussian moments vs 2D quadrature", suite.moments),
        ("moment gamma-factor variant", suite.moment_gamma_variant),
        ("coefficient tables N=1,2,3", suite.coefficient_tables),
        ("kernel normalisation", suite.kernel_trace),
        ("published purities", suite.published_purities),
        ("purity exponent mapping, N<=4", lambda: suite.purity_mapping(4)),
        ("spinless kernel vs direct integration, N=2", lambda: suite.fermion_direct(2)),
        ("fermion occupation bound", suite.fermion_nystrom),
        ("boson occupations vs Nystrom", suite.boson_nystrom),
        ("boson Wigner kernel vs direct integration", suite.boson_kernel_direct),
        ("boson entropy vs summation", suite.boson_entropy),
        ("critical N: entropy vs n0", suite.critical_consistency),
        ("spinned block trace and purity", suite.spinned_checks),
        ("spinned single pair vs boson kernel", suite.spinned_singlet),
        ("trivial coupling identities", suite.trivial_coupling),
        ("energy round trip", suite.energy_round_trip),
    ]
    if level == "quick":
        return quick
    if level == "full":
        return quick + [
            ("spinless kernel vs direct integration, N=3", lambda: suite.fermion_direct(3)),
            ("purity exponent mapping, N<=6", lambda: suite.purity_mapping(6)),
            ("spinned two pairs vs direct integration", suite.spinned_direct),
        ]
    raise ValueError(f"unknown level {level!r}")


def run_checks(level: str = "quick", tolerance_scale: float = 1.0, stream: IO[str] | None = None) -> list[CheckResult]:
    suite = _Suite(tolerance_scale)
    out = []
    for name, fn in _checks(suite, level):
        t0 = time.perf_counter()
        try:
            passed, detail = fn()
        except Exception as exc:  # a crashing check is a failing check
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        res = CheckResult(name, bool(passed), detail, time.perf_counter() - t0)
        out.append(res)
        if stream is not None:
            stream.write(f"{'PASS' if res.passed else 'FAIL'}  {name}: {detail} [{res.seconds:.2f}s]\n")
            stream.flush()
    return out


def main(level: str = "quick", tolerance_scale: float = 1.0, stream: IO[str] = sys.stdout) -> int:
    results = run_checks(level, tolerance_scale, stream)
    failed = [r.name for r in results if not r.passed]
    stream.write(f"{len(results) - len(failed)}/{len(results)} checks passed\n")
    if failed:
        stream.write("failed: " + ", ".join(failed) + "\n")
        return 1
    return 0
