import numpy as np
import pytest
from hypothesis import given, strategies as st

from schwarzpick.errors import DomainError
from schwarzpick.poisson import classical_schwarz_bound, evaluate_F_on_axis
from schwarzpick.region import (boundary_point, build_region, contains, margin,
                                polygon_from_support, rotated_contains, support_value,
                                witness_function)

HEINZ_HALF = 0.59033447


@pytest.fixture(scope="module")
def region_2():
    return build_region(2, 0.5, 0.5, 256)


@pytest.fixture(scope="module")
def region_3():
    return build_region(3, 0.5, 0.4, 128)


def test_support_value_rho0():
    for beta in (-2.0, 0.0, 1.0, np.pi):
        assert support_value(2, 0.5, 0.0, beta) == pytest.approx(HEINZ_HALF, abs=1e-8)


def test_support_value_examples():
    assert support_value(3, 0.5, 0.4, 0.0) > 0.4
    assert support_value(3, 0.5, 0.4, 0.8) == pytest.approx(support_value(3, 0.5, 0.4, -0.8), abs=1e-8)
    with pytest.raises(DomainError):
        support_value(3, 0.5, 1.0, 0.0)


def test_boundary_point_examples():
    c = classical_schwarz_bound(3, 0.5)
    assert boundary_point(3, 0.5, 0.0, 1.2) == pytest.approx(c * np.exp(1.2j), abs=1e-10)
    f = boundary_point(2, 0.5, 0.4, 0.7)
    g = boundary_point(2, 0.5, 0.4, -0.7)
    assert abs(f - g.conjugate()) < 1e-8
    f0 = boundary_point(2, 0.5, 0.4, 0.0)
    assert f0.imag == 0.0 and f0.real == pytest.approx(support_value(2, 0.5, 0.4, 0.0), abs=1e-12)
    assert abs((f * np.exp(-0.7j)).real - support_value(2, 0.5, 0.4, 0.7)) < 1e-8


@pytest.mark.parametrize("fx", ["region_2", "region_3"])
def test_curve_invariants(fx, request):
    R = request.getfixturevalue(fx)
    c = R.curve
    assert np.max(np.abs(c.h - c.h[::-1])) < 1e-8
    assert np.max(np.abs((c.f * np.exp(-1j * c.betas)).real - c.h)) < 1e-8
    assert np.all(c.h > c.rho * np.cos(c.betas))
    assert np.all(np.abs(c.f) < 1)
    assert abs(c.f[0] - c.f[-1]) < 1e-8


@pytest.mark.parametrize("fx", ["region_2", "region_3"])
def test_polygon_invariants(fx, request):
    R = request.getfixturevalue(fx)
    z = R.polygon.vertices
    assert z[0] == z[-1]
    e = np.diff(z)
    cross = (np.conj(e[:-1]) * e[1:]).imag
    assert np.all(cross >= -1e-15)
    assert contains(R, R.curve.rho).status == "inside"
    assert len(z) - 1 <= R.curve.betas.size - 1
    step = R.curve.betas[1] - R.curve.betas[0]
    over = (margin(R, R.curve.f) <= 1e-12)
    assert np.all(over)
    assert max(R.polygon.distance_to_boundary(w) for w in R.curve.f) < 1e-4 * R.polygon.diameter()
    assert step > 0


def test_rho0_disk():
    m = 64
    R = build_region(2, 0.5, 0.0, m)
    rad = classical_schwarz_bound(2, 0.5)
    dev = np.abs(np.abs(R.polygon.vertices) - rad)
    assert np.max(dev) <= (1 / np.cos(np.pi / m) - 1) * rad + 1e-12


def test_inside_outside(region_2):
    assert contains(region_2, 0.5).status == "inside"
    assert contains(region_2, 1.0).status == "outside"
    assert contains(region_2, 2.0).status == "outside"
    for w in region_2.curve.f[::17]:
        assert contains(region_2, w, 1e-6).status == "boundary"


def test_area_convergence():
    a64 = build_region(3, 0.5, 0.5, 64).polygon.area()
    a256 = build_region(3, 0.5, 0.5, 256).polygon.area()
    assert abs(a64 - a256) / a256 < 5e-3


@given(st.floats(-np.pi, np.pi), st.floats(1.0, 3.0), st.floats(1.0, 3.0))
def test_margin_monotone_radially(phi, s1, s2):
    R = build_region(2, 0.5, 0.3, 64)
    d = np.exp(1j * phi)
    lo, hi = sorted((s1, s2))
    m1 = margin(R, 0.3 + 0.2 * lo * d)
    m2 = margin(R, 0.3 + 0.2 * hi * d)
    assert m2 >= m1 - 1e-15


def test_rotation_equivariance(region_3):
    alpha = 0.9
    rot = region_3.rotated(alpha)
    z = region_3.polygon.vertices * np.exp(1j * alpha)
    assert np.max(np.abs(rot.polygon.vertices - z)) <= 1e-10
    F0 = 0.4 * np.exp(1j * alpha)
    w = 0.3 + 0.4j
    a = rotated_contains(3, 0.5, F0, w, region=region_3)
    b = contains(region_3, w * np.exp(-1j * alpha))
    assert a.status == b.status and a.margin == pytest.approx(b.margin, abs=1e-15)


def test_rotated_contains_examples(region_2):
    F0 = 0.5j
    assert rotated_contains(2, 0.5, F0, F0, region=region_2).status == "inside"
    f0 = region_2.curve.f[128]
    assert rotated_contains(2, 0.5, F0, f0 * 1j, region=region_2).status == "boundary"
    assert rotated_contains(2, 0.5, 0.5, -1.0, region=region_2).status == "outside"
    assert rotated_contains(2, 0.5, 0.5, 0.5, m_beta=32).status == "inside"
    with pytest.raises(DomainError):
        rotated_contains(2, 0.5, 1.0, 0.0)


def test_polygon_drops_redundant_lines():
    betas = np.linspace(-np.pi, np.pi, 33)[:-1]
    h = np.ones_like(betas)
    h[5] = 1.5  # far outside: redundant
    P = polygon_from_support(betas, h)
    assert P.beta_of_edge.size == 31
    rad = np.sort(np.abs(P.vertices[:-1]))
    assert np.allclose(rad[:-1], 1 / np.cos(np.pi / 32))
    assert rad[-1] == pytest.approx(1 / np.cos(2 * np.pi / 32))


def test_witness_degenerate(region_2):
    w = region_2.curve.f[40]
    W = witness_function(2, 0.5, 0.5, w, region=region_2)
    assert W.k1 == 1.0 and W.beta1 == region_2.curve.betas[40]
    assert abs(W.evaluate(0.5) - w) < 1e-6


def test_witness_center(region_2):
    W = witness_function(2, 0.5, 0.5, 0.5, region=region_2)
    assert abs(W.evaluate(0.5) - 0.5) < 1e-6
    assert abs(W.evaluate(0.0) - 0.5) < 1e-7


def test_witness_midpoint(region_2):
    f = region_2.curve
    w = 0.5 * (f.f[128] + f.f[0])
    W = witness_function(2, 0.5, 0.5, w, region=region_2)
    assert W.k1 == pytest.approx(0.5, abs=1e-8) and W.k2 == pytest.approx(0.5, abs=1e-8)
    assert {round(abs(W.beta1), 12), round(abs(W.beta2), 12)} == {0.0, round(np.pi, 12)}
    assert abs(W.evaluate(0.5) - w) < 1e-6


def test_witness_outside(region_2):
    with pytest.raises(DomainError):
        witness_function(2, 0.5, 0.5, 0.99, region=region_2)


@given(st.floats(-np.pi, np.pi), st.floats(0.0, 0.98))
def test_witness_end_to_end(phi, frac):
    R = build_region(3, 0.5, 0.4, 64)
    c = R.polygon.centroid()
    k = int((phi + np.pi) / (2 * np.pi) * 64) % 64
    w = c + frac * (R.curve.f[k] - c)
    W = witness_function(3, 0.5, 0.4, w, region=R)
    assert abs(W.evaluate(0.0) - 0.4) < 1e-7
    assert abs(W.evaluate(0.5) - w) < 1e-6
    for s in (0.1, 0.5, 0.9):
        assert abs(W.evaluate(s)) < 1
