import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from harmonium import oracle
from harmonium.boson import (
    boson_one_body,
    critical_particle_number,
    entropy_from_t_printed,
    occupation_number,
    occupations,
    quasidensity,
    quasidensity_1d,
    von_neumann_entropy,
)
from harmonium.errors import NoInteriorMaximum
from harmonium.model import Frequencies, ModelParams, frequencies

S3 = Frequencies(1.0, math.sqrt(3))


def test_one_body_examples():
    ob = boson_one_body(Frequencies(1.0, 1.0), 7)
    assert ob.lambda_n == 1.0 and ob.t_n == 0.0
    ob = boson_one_body(S3, 2)
    assert ob.lambda_n == pytest.approx(2 * 3**0.25 / (1 + math.sqrt(3)), rel=1e-14)
    assert abs(boson_one_body(S3, 1000).lambda_n - 1) < 1e-3


def test_occupations_pure_state():
    ob = boson_one_body(Frequencies(1.0, 1.0), 4)
    assert occupation_number(ob, 0) == 1.0
    assert occupation_number(ob, 3) == 0.0
    assert list(occupations(ob)) == [1.0]


def test_occupations_sum_and_truncation():
    ob = boson_one_body(frequencies(ModelParams(3, 10.0)), 3)
    occ = occupations(ob)
    assert occ[-1] >= 1e-18 and occ[-1] * ob.t_n < 1e-18
    assert math.fsum(occ) == pytest.approx(1.0, abs=1e-15)
    assert np.all(np.diff(occ) < 0)
    with pytest.raises(ValueError):
        occupation_number(ob, -1)


def test_occupations_vs_nystrom_n2():
    ob = boson_one_body(S3, 2)
    kern = oracle.wigner_to_position_kernel(ob.lambda_n, ob.gamma_n)
    spec = oracle.nystrom_occupations(kern, 8 / math.sqrt(S3.mu))
    assert spec.eigenvalues[0] == pytest.approx(occupation_number(ob, 0), abs=1e-8)
    assert spec.eigenvalues[1] == pytest.approx(occupation_number(ob, 1), abs=1e-8)


def test_entropy_examples():
    assert von_neumann_entropy(boson_one_body(Frequencies(1.0, 1.0), 3)) == 0.0
    ob = boson_one_body(S3, 2)
    assert von_neumann_entropy(ob) == pytest.approx(oracle.entropy_by_summation(ob.t_n), abs=1e-12)
    assert von_neumann_entropy(boson_one_body(S3, 10**6)) < 1e-2
    assert von_neumann_entropy(ob, "2") == pytest.approx(von_neumann_entropy(ob) / math.log(2), rel=1e-15)
    with pytest.raises(ValueError):
        von_neumann_entropy(ob, "10")


def test_printed_entropy_form_is_different():
    t = boson_one_body(S3, 2).t_n
    assert entropy_from_t_printed(t) == pytest.approx(-math.log1p(-t) / (1 - t), rel=1e-14)
    assert abs(entropy_from_t_printed(t) - oracle.entropy_by_summation(t)) > 1e-3


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 200), st.floats(-0.004, 50.0))
def test_invariants(n, ratio):
    f = frequencies(ModelParams(n, ratio))
    ob = boson_one_body(f, n)
    assert 0 < ob.lambda_n <= 1
    assert 0 <= ob.t_n < 1
    assert ob.a_big_n >= n * n * f.omega * f.mu * (1 - 1e-12)
    s = von_neumann_entropy(ob)
    assert s >= 0
    assert s == pytest.approx(oracle.entropy_by_summation(ob.t_n), abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 40), st.floats(1e-3, 20.0))
def test_entropy_zero_only_without_coupling(n, ratio):
    assert von_neumann_entropy(boson_one_body(frequencies(ModelParams(n, ratio)), n)) > 0
    assert von_neumann_entropy(boson_one_body(frequencies(ModelParams(1, ratio)), 1)) == 0


@pytest.mark.parametrize("ratio", [0.5, 1.0, 5.0, 20.0])
def test_single_interior_maximum_on_grid(ratio):
    s = [von_neumann_entropy(boson_one_body(frequencies(ModelParams(n, ratio)), n)) for n in range(1, 51)]
    peak = int(np.argmax(s))
    assert 0 < peak < 49
    assert np.all(np.diff(s[: peak + 1]) > 0)
    assert np.all(np.diff(s[peak:]) < 0)


def test_critical_number_entropy_and_n0_agree():
    a = critical_particle_number(5.0)
    b = critical_particle_number(5.0, objective="n0")
    assert abs(a - b) < 1e-6


def test_critical_number_moves_out_at_weak_coupling():
    # the maximum drifts to large N as the coupling vanishes
    assert critical_particle_number(0.1) > critical_particle_number(1.0) > critical_particle_number(10.0)
    with pytest.raises(NoInteriorMaximum):
        critical_particle_number(1e-4)


def test_critical_number_errors():
    with pytest.raises(ValueError):
        critical_particle_number(-0.1)
    with pytest.raises(NoInteriorMaximum):
        critical_particle_number(1.0, bracket=(1.0, 2.0))


def test_quasidensity_examples():
    f = frequencies(ModelParams(6, 1.0))
    x, w = np.polynomial.hermite.hermgauss(40)
    ob = boson_one_body(f, 6)
    # scale nodes to each Gaussian width; the 1D factor integrates to 1
    sx = 1 / (math.sqrt(ob.lambda_n) * ob.gamma_n)
    sp = ob.gamma_n / math.sqrt(ob.lambda_n)
    xx, pp = np.meshgrid(x * sx, x * sp, indexing="ij")
    vals = quasidensity_1d(f, 6, xx, pp) * np.exp(x[:, None] ** 2 + x[None, :] ** 2)
    total_1d = float(w @ vals @ w) * sx * sp
    assert total_1d == pytest.approx(1.0, abs=1e-10)
    assert total_1d**3 == pytest.approx(1.0, abs=1e-10)

    free = Frequencies(1.0, 1.0)
    r = np.array([0.3, -0.2, 0.5])
    p = np.array([0.1, 0.4, -0.6])
    assert quasidensity(free, 4, r, p) == pytest.approx(math.exp(-r @ r - p @ p) / math.pi**3, rel=1e-14)

    ob2 = boson_one_body(S3, 2)
    expect = (8 / math.pi**3) * (S3.omega * S3.mu / ob2.a_big_n) ** 1.5
    assert quasidensity(S3, 2, np.zeros(3), np.zeros(3)) == pytest.approx(expect, rel=1e-14)


def test_quasidensity_matches_closed_3d_form():
    f = frequencies(ModelParams(4, 2.5))
    n = 4
    ob = boson_one_body(f, n)
    r = np.array([0.2, -0.5, 0.9])
    p = np.array([-0.3, 0.7, 0.1])
    w, mu = f.omega, f.mu
    expect = (n**3 / math.pi**3) * (w * mu / ob.a_big_n) ** 1.5 * math.exp(
        -n * w * mu * (r @ r) / ((n - 1) * w + mu) - n * (p @ p) / (w + (n - 1) * mu)
    )
    assert quasidensity(f, n, r, p) == pytest.approx(expect, rel=1e-13)
    with pytest.raises(ValueError):
        quasidensity(f, n, np.zeros(2), np.zeros(2))
