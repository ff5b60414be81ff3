"""Quadrature for zonal integrands on the unit sphere S^{n-1}.

A zonal function depends on a point of the sphere only through its last
coordinate ``t = omega_n = cos(theta)``.  Against the normalized surface
measure sigma such a function integrates as

    int_S f(omega_n) dsigma = c_n int_0^pi f(cos theta) sin^{n-2}(theta) dtheta

with ``c_n = Gamma(n/2) / (sqrt(pi) Gamma((n-1)/2))``.
"""
from dataclasses import dataclass
from functools import lru_cache
from math import lgamma, pi, sqrt, exp

import numpy as np
from scipy.special import betainc, roots_jacobi, roots_legendre

from .errors import DomainError

DEFAULT_ORDER = 64
PANEL_ORDER = 24


@dataclass(frozen=True)
class ZonalRule:
    """Nodes (colatitudes) and weights integrating zonal functions against sigma."""

    dimension: int
    order: int
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def t(self):
        return np.cos(self.nodes)


@dataclass(frozen=True)
class CapThreshold:
    """Level ``t_a`` of the cap ``{omega_n > t_a}`` whose measure is (1+a)/2.

    ``d_a`` is the chordal radius ``|N - x|`` of the boundary circle.  When an
    evaluation radius ``r`` is attached, ``J_a = |rN - x|`` for ``x`` on that
    circle.
    """

    dimension: int
    a: float
    t_a: float
    d_a: float
    r: float | None = None
    J_a: float | None = None

    def with_radius(self, r):
        J = sqrt(1.0 - 2.0 * r * self.t_a + r * r)
        return CapThreshold(self.dimension, self.a, self.t_a, self.d_a, r, J)

    def lambda0(self, r=None):
        """Limit of the Lagrange multiplier lambda as b -> 0: ``J_a^{-n}``."""
        cap = self if r is None else self.with_radius(r)
        if cap.J_a is None:
            raise DomainError("lambda0 needs a radius r")
        return cap.J_a ** (-self.dimension)


def density_constant(n):
    """``c_n`` such that c_n * sin^{n-2}(theta) dtheta has total mass 1 on [0, pi]."""
    if n < 2:
        raise DomainError(f"dimension must be >= 2, got {n}")
    return exp(lgamma(n / 2.0) - lgamma((n - 1) / 2.0)) / sqrt(pi)


@lru_cache(maxsize=64)
def _jacobi_rule(n, m):
    alpha = (n - 3) / 2.0
    t, w = roots_jacobi(m, alpha, alpha)
    w = w / w.sum()
    theta = np.arccos(t)[::-1].copy()
    w = w[::-1].copy()
    theta.setflags(write=False)
    w.setflags(write=False)
    return theta, w


def make_rule(n, m=DEFAULT_ORDER):
    """Gauss rule for zonal integrands on S^{n-1}.

    Built as Gauss-Jacobi in ``t`` with weight ``(1-t^2)^{(n-3)/2}``, so it is
    exact for polynomials in ``t`` of degree ``2m-1``.  Weights are normalized
    to sum to one.
    """
    if int(n) != n or n < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {n}")
    if int(m) != m or m < 1:
        raise DomainError(f"order must be an integer >= 1, got {m}")
    theta, w = _jacobi_rule(int(n), int(m))
    return ZonalRule(int(n), int(m), theta, w)


def integrate_zonal(rule, f):
    """Sum of ``w_i f(cos theta_i)``; ``f`` must accept an array of t values."""
    vals = np.asarray(f(rule.t))
    return np.sum(rule.weights * vals)


def panel_rule(n, theta_breaks, order=PANEL_ORDER):
    """Composite Gauss-Legendre rule in theta over consecutive breakpoints.

    ``theta_breaks`` has shape ``(..., K)`` and must be sorted along the last
    axis.  Returns ``(theta, weights)`` of shape ``(..., (K-1)*order)``; the
    weights already include the density ``c_n sin^{n-2}``.  Zero-length
    panels get zero weight, which keeps batched shapes fixed.
    """
    x, wx = _legendre(order)
    breaks = np.asarray(theta_breaks, dtype=float)
    lo = breaks[..., :-1, None]
    hi = breaks[..., 1:, None]
    half = 0.5 * (hi - lo)
    theta = lo + half * (x + 1.0)
    w = half * wx * density_constant(n) * np.sin(theta) ** (n - 2)
    shape = breaks.shape[:-1] + (-1,)
    return theta.reshape(shape), w.reshape(shape)


@lru_cache(maxsize=16)
def _legendre(order):
    x, w = roots_legendre(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _theta_breaks(breakpoints):
    t = np.asarray(breakpoints, dtype=float).ravel()
    if np.any((t <= -1.0) | (t >= 1.0)):
        raise DomainError("breakpoints must lie strictly inside (-1, 1)")
    th = np.arccos(t)
    return np.unique(np.concatenate(([0.0, pi], th)))


def split_rule(rule, breakpoints):
    """Composite rule with a fresh order-``rule.order`` panel between breakpoints."""
    theta, w = panel_rule(rule.dimension, _theta_breaks(breakpoints), rule.order)
    return ZonalRule(rule.dimension, rule.order, theta, w)


def integrate_zonal_split(rule, f, breakpoints):
    """Integrate ``f`` piecewise so discontinuities sit on panel endpoints.

    With no breakpoints this is the plain Gauss rule of ``rule``.
    """
    if len(np.atleast_1d(breakpoints)) == 0:
        return integrate_zonal(rule, f)
    return integrate_zonal(split_rule(rule, breakpoints), f)


def cap_measure(n, t_a):
    """sigma({omega : omega_n > t_a}) via the regularized incomplete beta function."""
    t = np.asarray(t_a, dtype=float)
    if np.any((t < -1.0) | (t > 1.0)):
        raise DomainError("cap level must lie in [-1, 1]")
    # the polar form loses t near 0 to rounding in 1 - t^2; the equatorial
    # form loses relative accuracy of tiny caps near the poles
    polar = 0.5 * betainc((n - 1) / 2.0, 0.5, 1.0 - t * t)
    polar = np.where(t >= 0.0, polar, 1.0 - polar)
    equatorial = 0.5 - 0.5 * np.sign(t) * betainc(0.5, (n - 1) / 2.0, t * t)
    out = np.where(np.abs(t) < 0.5, equatorial, polar)
    return out if out.ndim else float(out)


def solve_cap_threshold(n, a, r=None, width=1e-13):
    """Find ``t_a`` with cap_measure(n, t_a) = (1+a)/2 by bisection."""
    if not -1.0 < a < 1.0:
        raise DomainError(f"need -1 < a < 1, got {a}")
    target = 0.5 * (1.0 + a)
    lo, hi = -1.0, 1.0
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if cap_measure(n, mid) > target:
            lo = mid
        else:
            hi = mid
    t_a = 0.5 * (lo + hi)
    cap = CapThreshold(int(n), float(a), t_a, sqrt(2.0 - 2.0 * t_a))
    return cap if r is None else cap.with_radius(r)


def solve_cap_thresholds(n, a, width=1e-13):
    """Vectorized ``solve_cap_threshold`` returning only the levels ``t_a``."""
    a = np.asarray(a, dtype=float)
    if np.any(np.abs(a) >= 1.0):
        raise DomainError("need |a| < 1")
    target = 0.5 * (1.0 + a)
    lo = np.full(a.shape, -1.0)
    hi = np.full(a.shape, 1.0)
    while np.max(hi - lo) > width:
        mid = 0.5 * (lo + hi)
        above = cap_measure(n, mid) > target
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    return 0.5 * (lo + hi)
