"""Published closed forms and numbers used as fixed reference points.

The N = 2 and N = 3 coefficient formulas were derived symbolically and
printed in closed form in the literature; the purities are the quoted
strong- and weak-coupling values.  Keys of the coefficient tables are
(i, j) for the monomial r^i r'^j.
"""
from __future__ import annotations


def spinless_coefficients_n1(omega: float, mu: float) -> dict[tuple[int, int], float]:
    return {(0, 0): 1.0}


def spinless_coefficients_n2(omega: float, mu: float) -> dict[tuple[int, int], float]:
    w, m = omega, mu
    s = w + m
    c20 = m * (w - m) * (3 * w + m) / (2 * s**2)
    return {
        (0, 0): 2 * m / s,
        (1, 1): m * (m * m + 2 * m * w + 5 * w * w) / s**2,
        (2, 0): c20,
        (0, 2): c20,
    }


def spinless_coefficients_n3(omega: float, mu: float) -> dict[tuple[int, int], float]:
    w, m = omega, mu
    d = 2 * w + m
    c20 = -m * (39 * w**3 - 3 * m * w**2 + 15 * m**2 * w + 3 * m**3) / (2 * d**3)
    c40 = m**2 * (5 * w + m) ** 2 * (w - m) ** 2 / (8 * d**4)
    c31 = m**2 * (w - m) * (65 * w**3 + 33 * m * w**2 + 9 * m**2 * w + m**3) / (2 * d**4)
    return {
        (0, 0): 1.5 * (1 + (w - m) ** 2 / d**2),
        (1, 1): m * (-15 * w**3 + 51 * m * w**2 + 15 * m**2 * w + 3 * m**3) / d**3,
        (2, 2): m**2 * (363 * w**4 + 168 * m * w**3 + 90 * m**2 * w**2 + 24 * m**3 * w + 3 * m**4) / (4 * d**4),
        (2, 0): c20,
        (0, 2): c20,
        (4, 0): c40,
        (0, 4): c40,
        (3, 1): c31,
        (1, 3): c31,
    }


COEFFICIENT_TABLES = {
    1: spinless_coefficients_n1,
    2: spinless_coefficients_n2,
    3: spinless_coefficients_n3,
}

# (coupling ratio, N) -> (quoted purity, tolerance)
SPINLESS_PURITIES = {
    (10.0, 2): (0.92, 0.005),
    (10.0, 10): (0.94, 0.005),
    (1.0, 2): (0.998, 0.002),
    (1.0, 10): (0.992, 0.002),
}

# the quoted location of the bosonic entropy maximum
CRITICAL_N_BRACKET = (3.0, 4.0)
