"""The value region of ``F(rN)`` over harmonic ``F: B^n -> D`` with ``F(0) = rho``.

For each direction ``beta`` the largest value of ``Re(F(rN) e^{-i beta})`` is
the support value

    h(beta) = U_{a, b, r}(rN),   (a, b) = (rho cos beta, -rho sin beta),

attained by the rotated extremal ``e^{i beta} F_{a,b,r}``, whose value at
``rN`` is the boundary point ``f(beta)``.  The region is the intersection of
the half-planes ``Re(w e^{-i beta}) <= h(beta)``; sampling ``beta`` on a grid
gives a circumscribed polygon, hence a superset of the true region.
"""
from dataclasses import dataclass, replace
from math import pi
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .errors import ConsistencyError, DomainError
from .extremal import build_extremal, solve_lagrange_batch
from .poisson import axis_integral, axis_values_smooth, evaluate_F_on_axis
from .zonal import PANEL_ORDER, solve_cap_threshold

DEFAULT_M_BETA = 256
DEFAULT_TOL = 1e-6
SNAP = 1e-12


def _check(r, rho):
    if not 0.0 < r < 1.0:
        raise DomainError(f"need 0 < r < 1, got {r}")
    if not 0.0 <= rho < 1.0:
        raise DomainError(f"need 0 <= rho < 1, got {rho}")


def _ab(rho, beta):
    beta = np.asarray(beta, dtype=float)
    a = rho * np.cos(beta)
    b = -rho * np.sin(beta)
    b = np.where(np.abs(np.sin(beta)) < SNAP, 0.0, b)
    return a, b


def _profile(n, r, rho, beta):
    a, b = _ab(rho, beta)
    return build_extremal(n, r, float(a), float(b))


def support_value(n, r, rho, beta):
    """``h(beta) = U_{rho cos beta, -rho sin beta, r}(rN)``."""
    _check(r, rho)
    return evaluate_F_on_axis(_profile(n, r, rho, beta), r).real


def boundary_point(n, r, rho, beta):
    """``f(beta) = e^{i beta} F_{rho cos beta, -rho sin beta, r}(rN)``."""
    _check(r, rho)
    return complex(np.exp(1j * beta) * evaluate_F_on_axis(_profile(n, r, rho, beta), r))


@dataclass(frozen=True)
class SupportCurve:
    n: int
    r: float
    rho: float
    betas: np.ndarray
    h: np.ndarray
    f: np.ndarray
    lam: np.ndarray
    mu: np.ndarray
    alpha: float = 0.0


@dataclass(frozen=True)
class RegionPolygon:
    """Closed convex polygon (``vertices[0] == vertices[-1]``).

    Edge ``j`` joins ``vertices[j]`` and ``vertices[j+1]`` and lies on the
    support line with direction ``beta_of_edge[j]``.
    """

    vertices: np.ndarray
    beta_of_edge: np.ndarray

    def area(self):
        z = self.vertices
        return 0.5 * float(np.sum((z[:-1].conj() * z[1:]).imag))

    def centroid(self):
        z = self.vertices
        cr = (z[:-1].conj() * z[1:]).imag
        return complex(np.sum((z[:-1] + z[1:]) * cr) / (3.0 * np.sum(cr)))

    def diameter(self):
        z = self.vertices[:-1]
        return float(np.max(np.abs(z[:, None] - z[None, :])))

    def distance_to_boundary(self, w):
        """Unsigned distance from ``w`` to the polygon boundary."""
        p, q = self.vertices[:-1], self.vertices[1:]
        d = q - p
        s = np.clip(((w - p) * d.conj()).real / np.maximum(np.abs(d) ** 2, 1e-300), 0.0, 1.0)
        return float(np.min(np.abs(p + s * d - w)))


class Region(NamedTuple):
    curve: SupportCurve
    polygon: RegionPolygon

    @property
    def alpha(self):
        return self.curve.alpha

    def rotated(self, alpha):
        """The region ``e^{i alpha} E``: every datum is rotated literally."""
        rot = np.exp(1j * alpha)
        c = self.curve
        curve = replace(c, betas=c.betas + alpha, f=c.f * rot, alpha=c.alpha + alpha)
        poly = RegionPolygon(self.polygon.vertices * rot, self.polygon.beta_of_edge + alpha)
        return Region(curve, poly)


def _beta_grid(m_beta):
    if m_beta < 16 or m_beta % 2:
        raise DomainError(f"beta sample count must be even and >= 16, got {m_beta}")
    betas = np.linspace(-pi, pi, m_beta + 1)
    # exact grid values where the reflection symmetry makes b vanish
    betas[m_beta // 2] = 0.0
    return betas


def _cap_axis_value(n, r, a):
    cap = solve_cap_threshold(n, a)
    return axis_integral(n, lambda t: np.sign(t - cap.t_a), r, [np.arccos(cap.t_a)]).real


def _curve_values(n, r, rho, betas, order=PANEL_ORDER, init=None):
    a, b = _ab(rho, betas)
    U = np.empty(betas.size)
    V = np.zeros(betas.size)
    lam = np.full(betas.size, np.nan)
    mu = np.full(betas.size, np.nan)
    smooth = np.flatnonzero(b != 0.0)
    if smooth.size:
        guess = None if init is None else (init[0][smooth], init[1][smooth])
        if guess is not None and not np.all(np.isfinite(guess[1])):
            guess = None
        ls, ms, _, _ = solve_lagrange_batch(n, r, a[smooth], np.abs(b[smooth]), order, init=guess)
        Us, Vs = axis_values_smooth(n, r, ls, ms, r, order)
        U[smooth] = Us
        V[smooth] = np.sign(b[smooth]) * Vs
        lam[smooth], mu[smooth] = ls, ms
    cache = {}
    for i in np.flatnonzero(b == 0.0):
        key = float(a[i])
        if key not in cache:
            cache[key] = _cap_axis_value(n, r, key)
        U[i] = cache[key]
    return U, np.exp(1j * betas) * (U + 1j * V), lam, mu


def support_values(n, r, rho, betas, order=PANEL_ORDER):
    """Batched ``(h(beta), f(beta))`` at arbitrary directions."""
    _check(r, rho)
    h, f, _, _ = _curve_values(n, r, rho, np.atleast_1d(np.asarray(betas, dtype=float)), order)
    return h, f


def support_curve(n, r, rho, m_beta=DEFAULT_M_BETA, order=PANEL_ORDER, warm=None):
    """Sample ``h`` and ``f`` on the uniform grid of ``m_beta + 1`` points in ``[-pi, pi]``.

    ``warm`` is a previously built curve on the same grid whose multipliers
    seed the Newton solves.
    """
    _check(r, rho)
    betas = _beta_grid(m_beta)
    init = None
    if warm is not None and warm.betas.size == betas.size:
        init = (warm.lam, warm.mu)
    h, f, lam, mu = _curve_values(n, r, rho, betas, order, init)
    return SupportCurve(int(n), float(r), float(rho), betas, h, f, lam, mu)


def _intersect(b1, h1, b2, h2):
    det = np.sin(b2 - b1)
    x = (h1 * np.sin(b2) - h2 * np.sin(b1)) / det
    y = (h2 * np.cos(b1) - h1 * np.cos(b2)) / det
    return x + 1j * y


def polygon_from_support(betas, h):
    """Intersection of the half-planes ``Re(w e^{-i beta_k}) <= h_k`` (one period of betas).

    Lines that end up with negative edge length are redundant and dropped
    until every remaining line contributes an edge.
    """
    keep = np.arange(betas.size)
    while True:
        if keep.size < 3:
            raise ConsistencyError("support lines do not bound a polygon")
        bk, hk = betas[keep], h[keep]
        gap = np.diff(np.concatenate((bk, [bk[0] + 2 * pi])))
        if np.any(gap >= pi):
            raise ConsistencyError("support directions leave an unbounded half-plane gap")
        prev = np.roll(np.arange(keep.size), 1)
        # vertex j sits between line j-1 and line j
        verts = _intersect(bk[prev], hk[prev], bk, hk)
        nxt = np.roll(verts, -1)
        length = ((nxt - verts) * np.conj(1j * np.exp(1j * bk))).real
        bad = length < -1e-14
        if not bad.any():
            break
        # drop the worst offender only; its neighbours' edges then change
        keep = np.delete(keep, int(np.argmin(length)))
    return RegionPolygon(np.concatenate((verts, verts[:1])), bk.copy())


def build_region(n, r, rho, m_beta=DEFAULT_M_BETA, order=PANEL_ORDER, warm=None):
    """Support curve and circumscribed polygon of the region for ``F(0) = rho``."""
    curve = support_curve(n, r, rho, m_beta, order, warm)
    poly = polygon_from_support(curve.betas[:-1], curve.h[:-1])
    return Region(curve, poly)


@dataclass(frozen=True)
class Containment:
    status: str
    margin: float


def margin(region, w):
    """``max_k Re(w e^{-i beta_k}) - h_k`` over the sampled directions; vectorized in ``w``."""
    c = region.curve
    w = np.asarray(w, dtype=complex)
    m = (w[..., None] * np.exp(-1j * c.betas)).real - c.h
    return np.max(m, axis=-1)


def classify(m, tol=DEFAULT_TOL):
    if m > tol:
        return "outside"
    if m >= -tol:
        return "boundary"
    return "inside"


def contains(region, w, tol=DEFAULT_TOL):
    """Classify ``w`` against the sampled half-planes with a ``tol`` boundary band."""
    m = float(margin(region, w))
    return Containment(classify(m, tol), m)


def rotated_contains(n, r, F0, w, tol=DEFAULT_TOL, m_beta=DEFAULT_M_BETA, region=None):
    """Test ``w`` against ``e^{i alpha} E_{r, |F0|}`` with ``alpha = arg F0``.

    A prebuilt ``region`` for ``rho = |F0|`` (at alpha 0) may be passed in.
    """
    F0 = complex(F0)
    rho = abs(F0)
    if rho >= 1.0:
        raise DomainError("need |F(0)| < 1")
    alpha = float(np.angle(F0)) if rho > 0 else 0.0
    if region is None:
        region = build_region(n, r, rho, m_beta)
    return contains(region, complex(w) * np.exp(-1j * alpha), tol)


# --- witnesses -----------------------------------------------------------------


@dataclass(frozen=True)
class WitnessSpec:
    """``F = k1 e^{i beta1} F_1 + k2 e^{i beta2} F_2`` with ``F(0) = rho`` and ``F(rN) = target``."""

    n: int
    r: float
    rho: float
    beta1: float
    beta2: float
    k1: float
    k2: float
    target: complex
    profiles: tuple

    def evaluate(self, s):
        """Value at the axis point ``sN``."""
        out = 0j
        for k, beta, p in zip((self.k1, self.k2), (self.beta1, self.beta2), self.profiles):
            if k != 0.0:
                out += k * np.exp(1j * beta) * evaluate_F_on_axis(p, s)
        return complex(out)

    def terms(self):
        """``(weight, rotation, ExtremalProfile)`` triples with nonzero weight."""
        return [(k, np.exp(1j * beta), p)
                for k, beta, p in zip((self.k1, self.k2), (self.beta1, self.beta2), self.profiles)
                if k != 0.0]


def _chord_fn(n, r, rho, c, d):
    def g(beta):
        return (np.conj(d) * (boundary_point(n, r, rho, beta) - c)).imag
    return g


def witness_function(n, r, rho, w_prime, region=None, tol=DEFAULT_TOL, m_beta=DEFAULT_M_BETA):
    """Two boundary points whose convex combination is ``w_prime``.

    The chord through the polygon centroid and ``w_prime`` crosses the
    boundary curve twice; the crossings are bracketed on the sampled curve
    and polished by root finding in ``beta``.
    """
    _check(r, rho)
    if region is None:
        region = build_region(n, r, rho, m_beta)
    w_prime = complex(w_prime)
    if contains(region, w_prime, tol).status == "outside":
        raise DomainError(f"{w_prime} lies outside the region")
    c = region.curve
    betas, f = c.betas[:-1], c.f[:-1]
    scale = region.polygon.diameter()

    hit = np.flatnonzero(np.abs(f - w_prime) <= 1e-12 * max(scale, 1.0))
    if hit.size:
        beta = float(betas[hit[0]])
        p = _profile(n, r, rho, beta)
        return WitnessSpec(n, r, rho, beta, beta, 1.0, 0.0, w_prime, (p, p))

    center = region.polygon.centroid()
    d = w_prime - center
    if abs(d) < 1e-9 * max(scale, 1e-300):
        d = 1.0 + 0j
    g = (np.conj(d) * (f - center)).imag
    eps = 1e-14 * abs(d) * max(scale, 1.0)
    m = betas.size
    roots = []
    k = 0
    while k < m:
        g0, g1 = g[k], g[(k + 1) % m]
        if abs(g0) <= eps:
            roots.append(float(betas[k]))
        elif abs(g1) > eps and g0 * g1 < 0.0:
            lo = betas[k]
            hi = betas[k + 1] if k + 1 < m else betas[0] + 2 * pi
            roots.append(brentq(_chord_fn(n, r, rho, center, d), lo, hi, xtol=1e-15, rtol=1e-15))
        k += 1
    if len(roots) != 2:
        raise ConsistencyError(f"chord met the boundary curve {len(roots)} times")
    pts = [boundary_point(n, r, rho, b) for b in roots]
    s = [(np.conj(d) * (p - center)).real / abs(d) ** 2 for p in pts]
    # the chord is center + s d; w_prime sits at parameter s_w
    s_w = (np.conj(d) * (w_prime - center)).real / abs(d) ** 2
    k1 = (s_w - s[1]) / (s[0] - s[1])
    k1 = float(np.clip(k1, 0.0, 1.0))
    profiles = tuple(_profile(n, r, rho, b) for b in roots)
    beta1, beta2 = (float(np.angle(np.exp(1j * b))) for b in roots)
    return WitnessSpec(n, r, rho, beta1, beta2, k1, 1.0 - k1, w_prime, profiles)
