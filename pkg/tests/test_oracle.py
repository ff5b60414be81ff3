import numpy as np
import pytest
from hypothesis import given, strategies as st

from schwarzpick.errors import CapabilityError, DomainError
from schwarzpick.extremal import build_extremal
from schwarzpick.oracle import (claim_checks, constant_harmonic, containment_trial,
                                discretize_class, discretized_max, random_harmonic,
                                run_trials, sphere_directions)
from schwarzpick.poisson import evaluate_poisson_general, functional_L
from schwarzpick.region import build_region, margin, witness_function


def test_discretized_class_weights():
    dc = discretize_class(3, 0.5, 400)
    assert abs(dc.weights.sum() - 1.0) < 1e-12
    assert np.allclose(dc.weights, 1 / 400, atol=1e-12)


def test_discretized_heinz():
    assert discretized_max(2, 0.5, 0.0, 0.0) == pytest.approx(0.59033, abs=5e-4)


def test_discretized_matches_extremal():
    d = discretized_max(3, 0.5, 0.3, 0.4)
    L = functional_L(build_extremal(3, 0.5, 0.3, 0.4), 3, 0.5)
    assert abs(d - L) / abs(L) < 5e-4
    assert d <= L + 1e-9


def test_discretized_near_constant():
    d = discretized_max(3, 0.5, 0.99, 0.0)
    assert 0.99 <= d <= 1.0


def test_discretized_solution_feasible():
    val, dc = discretized_max(2, 0.4, -0.2, 0.5, return_class=True)
    mean, root = dc.constraints(dc.u)
    assert abs(mean + 0.2) < 1e-7 and root >= 0.5 - 1e-7
    assert np.all(np.abs(dc.u) <= 1)
    assert val == pytest.approx(dc.objective(dc.u))


def test_discretized_domain():
    with pytest.raises(DomainError):
        discretized_max(2, 0.5, 0.0, 0.0, M=50)
    with pytest.raises(DomainError):
        discretized_max(2, 0.5, 0.9, 0.5)


def test_constant_sample():
    s = constant_harmonic(3, 0.2 + 0.3j)
    x = 0.4 * sphere_directions(3, 10)
    assert np.allclose(s(x), 0.2 + 0.3j)
    e = containment_trial(s, 0.5)
    assert e.worst_margin < 0 and not e.failures


def test_random_deterministic():
    a = random_harmonic(3, 11, 4)
    b = random_harmonic(3, 11, 4)
    assert a.F0 == b.F0
    assert np.array_equal(a.data.coeffs, b.data.coeffs)


@pytest.mark.parametrize("n", [2, 3])
def test_random_bounded(n):
    pts = sphere_directions(n, 2000)
    for seed in range(100):
        s = random_harmonic(n, seed, 3)
        assert abs(s.F0) < 1
        assert np.max(np.abs(s.data(pts))) <= 1.0


def test_random_domain():
    with pytest.raises(CapabilityError):
        random_harmonic(4, 0, 2)
    with pytest.raises(DomainError):
        random_harmonic(2, 0, 0)


@given(st.integers(0, 10_000), st.sampled_from([2, 3]))
def test_random_mean_value(seed, n):
    s = random_harmonic(n, seed, 2)
    assert s(np.zeros(n)) == pytest.approx(s.F0, abs=1e-12)


def test_directions_unit():
    for n in (2, 3):
        d = sphere_directions(n, 64)
        assert np.allclose(np.linalg.norm(d, axis=1), 1.0)
    with pytest.raises(CapabilityError):
        sphere_directions(4, 8)


def test_witness_trial_margin_zero():
    R = build_region(2, 0.5, 0.5, 64)
    w = R.curve.f[20]
    W = witness_function(2, 0.5, 0.5, w, region=R)

    def F(x):
        return sum(k * rot * evaluate_poisson_general(p, x) for k, rot, p in W.terms())

    assert abs(F(np.zeros(2)) - 0.5) < 1e-7
    assert abs(margin(R, F(np.array([0.0, 0.5])))) < 1e-6


def test_run_trials_small_and_deterministic():
    a = run_trials(2, 0.5, 15, 3)
    b = run_trials(2, 0.5, 15, 3)
    assert a.passed and a.failures == []
    assert a.to_json() == b.to_json()
    with pytest.raises(DomainError):
        run_trials(2, 0.5, 0, 3)


def test_claim_checks_pass():
    checks = claim_checks(2, 0.5)
    assert checks and all(c.passed for c in checks), [c for c in checks if not c.passed]
