"""Poisson integrals over the unit sphere.

The harmonic extension of boundary data ``g`` is

    G(x) = int_S (1 - |x|^2) / |x - omega|^n  g(omega) dsigma(omega).

Zonal data evaluated on the polar axis reduce to one-dimensional integrals in
the colatitude.  Zonal data at a general point reduce (by rotating the point
into a coordinate plane) to a two-dimensional integral for n >= 3 and to a
circle integral for n = 2.  Sampled data are supported for n = 2 and n = 3
only.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from math import pi
from typing import Callable

import numpy as np
from scipy.special import roots_jacobi

from .errors import CapabilityError, DomainError
from .extremal import ExtremalProfile, _batch_rule, _kernel, _u_v, kernel_thetas
from .zonal import PANEL_ORDER, cap_measure, make_rule, panel_rule


def poisson_kernel(n, x, omega):
    """``(1 - |x|^2) / |x - omega|^n``.

    A scalar ``x`` stands for the axis point ``x N`` and ``omega`` is then the
    last coordinate ``t`` of the boundary point.
    """
    if np.ndim(x) == 0:
        s = float(x)
        if not 0.0 <= abs(s) < 1.0:
            raise DomainError("need |x| < 1")
        t = np.asarray(omega, dtype=float)
        return (1.0 - s * s) * (1.0 - 2.0 * s * t + s * s) ** (-0.5 * n)
    x = np.asarray(x, dtype=float)
    nx = float(np.dot(x, x))
    if nx >= 1.0:
        raise DomainError("need |x| < 1")
    d = np.asarray(omega, dtype=float) - x
    return (1.0 - nx) / np.sum(d * d, axis=-1) ** (0.5 * n)


def _axis_breaks(s, interior):
    return np.unique(np.concatenate(([0.0, pi], np.asarray(interior, dtype=float).ravel(),
                                     kernel_thetas(s))))


def axis_integral(n, values, s, theta_breaks=(), order=PANEL_ORDER):
    """Poisson integral at ``sN`` of a zonal profile ``values(t)``."""
    if not 0.0 <= s < 1.0:
        raise DomainError(f"need 0 <= s < 1, got {s}")
    theta, w = panel_rule(n, _axis_breaks(s, theta_breaks), order)
    t = np.cos(theta)
    return np.sum(w * poisson_kernel(n, s, t) * values(t))


def functional_L(u, n, r, breakpoints=(), order=PANEL_ORDER):
    """``L_r(u) = int (1-r^2)/|rN - omega|^n u(omega_n) dsigma``.

    ``u`` is an ``ExtremalProfile`` or a callable of ``t``; for a callable,
    ``breakpoints`` lists t-values where it jumps.
    """
    if not 0.0 < r < 1.0:
        raise DomainError(f"need 0 < r < 1, got {r}")
    if isinstance(u, ExtremalProfile):
        return float(axis_integral(n, u.u, r, u.theta_breaks(), order))
    bp = np.asarray(breakpoints, dtype=float)
    if np.any((bp <= -1.0) | (bp >= 1.0)):
        raise DomainError("breakpoints must lie strictly inside (-1, 1)")
    return float(np.real(axis_integral(n, u, r, np.arccos(bp), order)))


def evaluate_F_on_axis(profile, s, order=PANEL_ORDER):
    """``U + iV`` of the extremal harmonic function at the axis point ``sN``."""
    if not 0.0 <= s < 1.0:
        raise DomainError(f"need 0 <= s < 1, got {s}")
    return complex(axis_integral(profile.n, profile.boundary_value, s,
                                 profile.theta_breaks(), order))


def classical_schwarz_bound(n, r, order=PANEL_ORDER):
    """Value at ``rN`` of the Poisson integral of +1 on the north and -1 on the south hemisphere."""
    if not 0.0 < r < 1.0:
        raise DomainError(f"need 0 < r < 1, got {r}")
    return functional_L(np.sign, n, r, breakpoints=[0.0], order=order)


def axis_values_smooth(n, r, lam, mu, s, order=PANEL_ORDER):
    """Batched ``(U, V)`` at ``sN`` for smooth profiles with multipliers ``(lam, mu)``."""
    lam = np.atleast_1d(lam)
    mu = np.atleast_1d(mu)
    theta, w = _batch_rule(n, r, lam, mu, s=s, order=order)
    t = np.cos(theta)
    A = (_kernel(n, r, t) - lam[:, None]) / mu[:, None]
    u, v = _u_v(A)
    P = poisson_kernel(n, s, t)
    return np.sum(w * P * u, axis=1), np.sum(w * P * v, axis=1)


# --- boundary data -------------------------------------------------------------


def _unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def _north(n):
    e = np.zeros(n)
    e[-1] = 1.0
    return e


@dataclass(frozen=True)
class ZonalData:
    """Data ``g(omega) = values(omega . axis)``, possibly jumping at ``breakpoints``."""

    n: int
    values: Callable
    breakpoints: tuple = ()
    axis: np.ndarray | None = None
    bound: bool = False

    def direction(self):
        return _north(self.n) if self.axis is None else _unit(self.axis)

    def __call__(self, omega):
        return self.values(np.asarray(omega) @ self.direction())


@dataclass(frozen=True)
class GriddedData:
    """Samples of boundary data on a product grid.

    n = 2: ``values[j]`` at angle ``2 pi j / M``.  n = 3: ``values[i, j]`` at
    the zonal Gauss colatitude ``theta_i`` and azimuth ``2 pi j / M``.
    """

    n: int
    values: np.ndarray
    bound: bool = False

    @classmethod
    def from_function(cls, n, g, m_theta=64, m_phi=128):
        pts, _ = _grid(n, m_theta, m_phi)
        vals = np.asarray(g(pts.reshape(-1, n)), dtype=complex).reshape(pts.shape[:-1])
        return cls(n, vals, bool(np.all(np.abs(vals) <= 1.0)))


@dataclass(frozen=True)
class CapSumData:
    """``base + sum_k coeff_k * 1{omega . center_k > level_k}``."""

    n: int
    base: complex
    centers: np.ndarray
    levels: np.ndarray
    coeffs: np.ndarray
    bound: bool = field(default=False)

    def __call__(self, omega):
        omega = np.asarray(omega, dtype=float)
        inside = (omega @ self.centers.T) > self.levels
        return self.base + inside.astype(float) @ self.coeffs

    def mean(self):
        return complex(self.base + np.sum(self.coeffs * cap_measure(self.n, self.levels)))


def _grid(n, m_theta, m_phi):
    if n == 2:
        phi = 2.0 * pi * np.arange(m_phi) / m_phi
        pts = np.stack((np.cos(phi), np.sin(phi)), axis=-1)
        return pts, np.full(m_phi, 1.0 / m_phi)
    if n == 3:
        rule = make_rule(3, m_theta)
        phi = 2.0 * pi * np.arange(m_phi) / m_phi
        th = rule.nodes[:, None]
        pts = np.stack((np.sin(th) * np.cos(phi), np.sin(th) * np.sin(phi),
                        np.broadcast_to(np.cos(th), (m_theta, m_phi))), axis=-1)
        return pts, rule.weights[:, None] / m_phi * np.ones(m_phi)
    raise CapabilityError(f"gridded boundary data is implemented for n = 2, 3 only (n = {n})")


def _graded_around(gamma, s, extra):
    """Theta breakpoints: data jumps plus grading around the kernel peak at ``gamma``."""
    gamma = np.atleast_1d(gamma)
    ks = kernel_thetas(s) if s > 0 else np.empty(0)
    offs = np.concatenate((-ks, ks))
    peak = np.clip(gamma[:, None] + offs[None, :], 0.0, pi)
    fixed = np.broadcast_to(np.concatenate(([0.0, pi], extra)), (gamma.size, len(extra) + 2))
    br = np.concatenate((fixed, gamma[:, None], peak), axis=1)
    br.sort(axis=1)
    return br


def _zonal_general(data, x, order):
    n = data.n
    e = data.direction()
    x = np.atleast_2d(np.asarray(x, dtype=float))
    s = np.linalg.norm(x, axis=1)
    if np.any(s >= 1.0):
        raise DomainError("need |x| < 1")
    cg = np.where(s > 0, (x @ e) / np.where(s > 0, s, 1.0), 1.0)
    gamma = np.arccos(np.clip(cg, -1.0, 1.0))
    jumps = np.arccos(np.asarray(data.breakpoints, dtype=float))
    out = np.empty(x.shape[0], dtype=complex)
    # points with (nearly) equal |x| share the kernel grading
    key = np.round(s, 12)
    for kv in np.unique(key):
        sel = np.flatnonzero(key == kv)
        sv = float(np.max(s[sel]))
        ss = s[sel][:, None]
        br = _graded_around(gamma[sel], sv, jumps)
        theta, w = panel_rule(n, br, order)
        g = np.asarray(data.values(np.cos(theta)), dtype=complex)
        if n == 2:
            # fold psi -> -psi: kernel averaged over the two mirror images of x
            gm = gamma[sel][:, None]
            d1 = 1.0 - 2.0 * ss * np.cos(theta - gm) + ss * ss
            d2 = 1.0 - 2.0 * ss * np.cos(theta + gm) + ss * ss
            P = 0.5 * (1.0 - ss * ss) * (1.0 / d1 + 1.0 / d2)
            out[sel] = np.sum(w * P * g, axis=1)
            continue
        # Chebyshev-type convergence in eta at rate 1/s (Bernstein ellipse)
        m_eta = int(np.clip(np.ceil(18.0 / -np.log(max(sv, 1e-3))), 8, 512))
        alpha = (n - 4) / 2.0
        eta, we = _eta_rule(m_eta, alpha)
        gm = gamma[sel][:, None, None]
        th = theta[:, :, None]
        s3 = ss[:, :, None]
        dot = s3 * (np.cos(gm) * np.cos(th) + np.sin(gm) * np.sin(th) * eta)
        d = 1.0 - 2.0 * dot + s3 * s3
        P = (1.0 - s3 * s3) / (d * np.sqrt(d)) if n == 3 else (1.0 - s3 * s3) * d ** (-0.5 * n)
        Pm = P @ we
        out[sel] = np.sum(w * Pm * g, axis=1)
    return out


@lru_cache(maxsize=64)
def _eta_rule(m, alpha):
    eta, we = roots_jacobi(m, alpha, alpha)
    return eta, we / we.sum()


def _gridded_general(data, x, m_theta=None):
    n = data.n
    vals = np.asarray(data.values)
    if n == 2:
        pts, w = _grid(2, 0, vals.shape[0])
    elif n == 3:
        pts, w = _grid(3, vals.shape[0], vals.shape[1])
    else:
        raise CapabilityError(f"gridded boundary data is implemented for n = 2, 3 only (n = {n})")
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if np.any(np.sum(x * x, axis=1) >= 1.0):
        raise DomainError("need |x| < 1")
    pts = pts.reshape(-1, n)
    d = pts[None, :, :] - x[:, None, :]
    P = (1.0 - np.sum(x * x, axis=1))[:, None] / np.sum(d * d, axis=2) ** (0.5 * n)
    return P @ (w.ravel() * vals.ravel())


def evaluate_poisson_general(data, x, order=PANEL_ORDER):
    """Harmonic extension of ``data`` at ``x`` (shape ``(n,)`` or ``(P, n)``)."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    if isinstance(data, ZonalData):
        out = _zonal_general(data, x, order)
    elif isinstance(data, GriddedData):
        out = _gridded_general(data, x)
    elif isinstance(data, CapSumData):
        out = np.full(np.atleast_2d(x).shape[0], data.base, dtype=complex)
        for c, lev, k in zip(data.centers, data.levels, data.coeffs):
            ind = ZonalData(data.n, _indicator(lev), (float(lev),), c)
            out = out + k * _zonal_general(ind, x, order)
    elif isinstance(data, ExtremalProfile):
        out = _zonal_general(ZonalData(data.n, data.boundary_value,
                                       tuple(np.cos(data.theta_breaks()))), x, order)
    else:
        raise CapabilityError(f"unsupported boundary data {type(data).__name__}")
    return complex(out[0]) if single else out


def _indicator(level):
    def f(t):
        return (t > level).astype(float)
    return f
