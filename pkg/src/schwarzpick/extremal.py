"""Lagrange system and extremal boundary functions for the functional L_r.

For ``mu > 0`` and real ``lambda`` the kernel

    A(t) = ((1 - 2 r t + r^2)^{-n/2} - lambda) / mu

defines ``u = A / sqrt(1 + A^2)`` and ``v = 1 / sqrt(1 + A^2)``.  Their means
``R = int u`` and ``I = int v`` map ``(lambda, mu)`` one-to-one onto the upper
half disk; inverting that map gives the maximizer of ``L_r`` among boundary
functions with mean ``a`` and ``int sqrt(1 - u^2) >= b``.  On ``b = 0`` the
maximizer is the step function +1 on a polar cap and -1 off it.

Everything below works on batches (1-d arrays of parameters) so that a full
support curve can be solved in one pass.
"""
from dataclasses import dataclass
from math import pi, sqrt

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, SolverError
from .zonal import (PANEL_ORDER, CapThreshold, panel_rule, solve_cap_threshold,
                    solve_cap_thresholds)

GUARD = 0.9999
TOL = 1e-11
MAX_ITER = 100


@dataclass(frozen=True)
class LagrangeParams:
    lam: float
    mu: float
    residual: tuple
    iterations: int


def _kernel(n, r, t):
    return (1.0 - 2.0 * r * t + r * r) ** (-0.5 * n)


def kernel_A(n, r, lam, mu, t):
    """``(1/mu) * (|rN - omega|^{-n} - lam)`` for ``omega_n = t``."""
    if np.any(np.asarray(mu) <= 0):
        raise DomainError("mu must be positive")
    return (_kernel(n, r, np.asarray(t, dtype=float)) - lam) / mu


def _u_v(A):
    # hypot keeps both forms finite when |A| is huge (mu -> 0)
    h = np.hypot(1.0, A)
    return A / h, 1.0 / h


def kernel_thetas(s, limit=pi):
    """Colatitudes graded toward the pole at the scale ``1 - s`` of the Poisson kernel."""
    if s <= 0.0:
        return np.empty(0)
    d = 1.0 - s
    th = d * 2.0 ** np.arange(-1, 64)
    return th[th < limit]


def _n_levels(n, r, mu):
    if r == 0.0:
        return 0
    spread = (1.0 - r) ** (-n) - (1.0 + r) ** (-n)
    ratio = spread / max(float(np.min(mu)), 1e-300)
    return int(np.clip(np.ceil(np.log(max(ratio, 1.0)) / np.log(4.0)) + 1, 1, 40))


def level_thetas(n, r, lam, mu, n_levels=None):
    """Colatitudes where ``A`` crosses +-1, +-4, +-16, ...; shape ``(B, 2*L)``.

    Levels outside the range of the kernel collapse onto the poles.
    """
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    if n_levels is None:
        n_levels = _n_levels(n, r, mu)
    if n_levels == 0:
        return np.empty(lam.shape + (0,))
    powers = 4.0 ** np.arange(n_levels)
    levels = np.concatenate((-powers[::-1], powers))
    k = lam[:, None] + mu[:, None] * levels[None, :]
    kmin, kmax = (1.0 + r) ** (-n), (1.0 - r) ** (-n)
    k = np.clip(k, kmin, kmax)
    t = np.clip((1.0 + r * r - k ** (-2.0 / n)) / (2.0 * r), -1.0, 1.0)
    return np.arccos(t)


def _batch_rule(n, r, lam, mu, s=None, order=PANEL_ORDER):
    lt = level_thetas(n, r, lam, mu)
    kt = kernel_thetas(r if s is None else s)
    B = lt.shape[0]
    breaks = np.concatenate(
        (np.zeros((B, 1)), np.full((B, 1), pi), lt, np.broadcast_to(kt, (B, kt.size))), axis=1)
    breaks.sort(axis=1)
    return panel_rule(n, breaks, order)


def _ri(n, r, lam, mu, order):
    theta, w = _batch_rule(n, r, lam, mu, order=order)
    A = (_kernel(n, r, np.cos(theta)) - lam[:, None]) / mu[:, None]
    u, v = _u_v(A)
    return np.sum(w * u, axis=1), np.sum(w * v, axis=1)


def _ri_jac(n, r, lam, mu, order):
    theta, w = _batch_rule(n, r, lam, mu, order=order)
    A = (_kernel(n, r, np.cos(theta)) - lam[:, None]) / mu[:, None]
    u, v = _u_v(A)
    R = np.sum(w * u, axis=1)
    I = np.sum(w * v, axis=1)
    # (1+A^2)^{-3/2} = v^3, A v^3 = u v^2, A^2 v^3 = u^2 v
    s1 = np.sum(w * v ** 3, axis=1)
    sA = np.sum(w * u * v * v, axis=1)
    sA2 = np.sum(w * u * u * v, axis=1)
    J = np.empty(lam.shape + (2, 2))
    J[:, 0, 0] = -s1 / mu
    J[:, 0, 1] = -sA / mu
    J[:, 1, 0] = sA / mu
    J[:, 1, 1] = sA2 / mu
    return R, I, J


def R_I_values(n, r, lam, mu, order=PANEL_ORDER):
    """Means of ``u = A/sqrt(1+A^2)`` and ``v = 1/sqrt(1+A^2)`` over the sphere."""
    if mu <= 0:
        raise DomainError("mu must be positive")
    if not 0.0 <= r < 1.0:
        raise DomainError("need 0 <= r < 1")
    R, I = _ri(n, r, np.array([float(lam)]), np.array([float(mu)]), order)
    return float(R[0]), float(I[0])


def jacobian(n, r, lam, mu, order=PANEL_ORDER):
    """``[[dR/dlam, dR/dmu], [dI/dlam, dI/dmu]]`` from the integral formulas."""
    if mu <= 0:
        raise DomainError("mu must be positive")
    if not 0.0 <= r < 1.0:
        raise DomainError("need 0 <= r < 1")
    _, _, J = _ri_jac(n, r, np.array([float(lam)]), np.array([float(mu)]), order)
    return J[0]


def _check_ab(a, b, guard=GUARD):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    rad = a * a + b * b
    if np.any(rad >= 1.0):
        raise DomainError("need a^2 + b^2 < 1")
    if np.any(rad > guard):
        raise DomainError(f"a^2 + b^2 exceeds the conditioning guard {guard}")


def _kernel_moments(n, r, order):
    theta, w = panel_rule(n, np.concatenate(([0.0], kernel_thetas(r), [pi])), order)
    k = _kernel(n, r, np.cos(theta))
    mean = np.sum(w * k)
    return mean, np.sum(w * (k - mean) ** 2)


def _initial_guess(n, r, a, b, order):
    """Seed Newton from whichever asymptotic regime fits ``(a, b)`` better.

    Near the unit circle ``mu`` is large and ``A`` is nearly the constant
    ``a/b``; a second-order expansion in ``1/mu`` fixes the scale of ``mu``
    from the radial deficit ``1 - |a + ib|``.  Near the real diameter ``mu``
    is small and ``lambda`` sits at the cap value ``J_a^{-n}``; there ``mu``
    is bracketed by bisection on ``I``.  Both seeds are scored and the one
    with the smaller residual is kept.
    """
    kbar, kvar = _kernel_moments(n, r, order)
    slope = np.clip(a / b, -1e150, 1e150)
    deficit = np.maximum(1.0 - np.hypot(a, b), 1e-12)
    mu_c = np.sqrt(kvar / (2.0 * deficit)) / (1.0 + slope * slope)
    mu_c = np.clip(mu_c, 1e-12, 1e12)
    lam_c = kbar - slope * mu_c

    t_a = solve_cap_thresholds(n, a)
    lam_d = (1.0 - 2.0 * r * t_a + r * r) ** (-0.5 * n)
    lo = np.full(lam_d.shape, -40.0)
    hi = np.full(lam_d.shape, 15.0)
    for _ in range(30):
        mid = 0.5 * (lo + hi)
        _, I = _ri(n, r, lam_d, np.exp(mid), order)
        big = I > b
        hi = np.where(big, mid, hi)
        lo = np.where(big, lo, mid)
    mu_d = np.exp(0.5 * (lo + hi))

    def score(lam, mu):
        R, I = _ri(n, r, lam, mu, order)
        return np.hypot(R - a, I - b)

    near_circle = score(lam_c, mu_c) < score(lam_d, mu_d)
    return np.where(near_circle, lam_c, lam_d), np.where(near_circle, mu_c, mu_d)


def _lambda_for_mu(n, r, a, mu, order, lam=None, iters=120):
    """Bracketed Newton for ``R(lambda, mu) = a`` at fixed ``mu`` (vectorized).

    A bisection step replaces Newton whenever the last step failed to halve
    the residual, so the bracket shrinks geometrically.
    """
    T = 2.0 * (np.abs(a) / np.sqrt(1.0 - a * a) + 1.0)
    lo = (1.0 + r) ** (-n) - mu * T
    hi = (1.0 - r) ** (-n) + mu * T
    lam = 0.5 * (lo + hi) if lam is None else np.clip(lam, lo, hi)
    prev = np.full(a.shape, np.inf)
    for _ in range(iters):
        R, _, J = _ri_jac(n, r, lam, mu, order)
        g = R - a
        if np.all((np.abs(g) < 1e-14) | (hi - lo <= 4e-16 * np.maximum(1.0, np.abs(lam)))):
            break
        # R decreases in lambda
        lo = np.where(g > 0, lam, lo)
        hi = np.where(g < 0, lam, hi)
        nxt = lam - g / J[:, 0, 0]
        bad = ~((nxt > lo) & (nxt < hi)) | (np.abs(g) > 0.5 * prev)
        prev = np.abs(g)
        lam = np.where(bad | ~np.isfinite(nxt), 0.5 * (lo + hi), nxt)
    return lam


def _nested_guess(n, r, a, b, order, steps=24):
    """Bisect ``log mu`` on the monotone map ``mu -> I(lambda(mu), mu)``."""
    lo = np.full(a.shape, -40.0)
    hi = np.full(a.shape, 40.0)
    lam = None
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        lam = _lambda_for_mu(n, r, a, np.exp(mid), order, lam)
        _, I = _ri(n, r, lam, np.exp(mid), order)
        big = I > b
        hi = np.where(big, mid, hi)
        lo = np.where(big, lo, mid)
    mu = np.exp(0.5 * (lo + hi))
    return _lambda_for_mu(n, r, a, mu, order, lam), mu


def _newton(n, r, a, b, lam, mu, order, tol, max_iter):
    """Damped Newton in ``(lambda, log mu)``; returns state and a convergence mask."""
    lam = lam.copy()
    ell = np.log(mu)
    target = 1e-2 * tol
    iters = np.zeros(a.shape, dtype=int)
    active = np.ones(a.shape, dtype=bool)
    failed = np.zeros(a.shape, dtype=bool)
    for _ in range(max_iter):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        mu_i = np.exp(ell[idx])
        R, I, J = _ri_jac(n, r, lam[idx], mu_i, order)
        Fi = np.stack((R - a[idx], I - b[idx]), axis=1)
        res = np.max(np.abs(Fi), axis=1)
        done = res < target
        active[idx[done]] = False
        keep = ~done
        idx, Fi, J, mu_i, res = idx[keep], Fi[keep], J[keep], mu_i[keep], res[keep]
        if idx.size == 0:
            break
        iters[idx] += 1
        J[:, :, 1] *= mu_i[:, None]
        step = -np.linalg.solve(J, Fi[..., None])[..., 0]
        # bound log-mu moves so a single bad step cannot overflow
        scale = np.minimum(1.0, 4.0 / np.maximum(np.abs(step[:, 1]), 1e-300))
        step *= scale[:, None]
        phi0 = np.sum(Fi * Fi, axis=1)
        alpha = np.ones(idx.size)
        pending = np.ones(idx.size, dtype=bool)
        for _ in range(40):
            p = np.flatnonzero(pending)
            tl = lam[idx[p]] + alpha[p] * step[p, 0]
            te = np.clip(ell[idx[p]] + alpha[p] * step[p, 1], -300.0, 300.0)
            R2, I2 = _ri(n, r, tl, np.exp(te), order)
            phi = (R2 - a[idx[p]]) ** 2 + (I2 - b[idx[p]]) ** 2
            ok = phi <= (1.0 - 1e-4 * alpha[p]) * phi0[p]
            acc = p[ok]
            lam[idx[acc]] = tl[ok]
            ell[idx[acc]] = te[ok]
            pending[acc] = False
            alpha[p[~ok]] *= 0.5
            if not pending.any():
                break
        stalled = idx[pending]
        # no further decrease possible: done if already within contract
        active[stalled] = False
        failed[stalled[res[pending] >= tol]] = True
        # crawling steps signal a poor basin; give up early and let the caller reseed
        slow = idx[~pending & (alpha < 1e-2) & (iters[idx] > 10)]
        active[slow] = False
        failed[slow] = True
    failed |= active
    return lam, np.exp(ell), iters, failed


def solve_lagrange_batch(n, r, a, b, order=PANEL_ORDER, tol=TOL, max_iter=MAX_ITER,
                         init=None):
    """Solve ``R(lambda, mu) = a``, ``I(lambda, mu) = b`` elementwise.

    Damped Newton in ``(lambda, log mu)`` with Armijo backtracking, started
    from ``init`` or from the asymptotic seeds.  Elements that stall are
    reseeded by bisection along the monotone curve ``lambda(mu)`` and
    re-run.  Returns ``(lam, mu, residual[B, 2], iterations[B])``; raises
    ``SolverError`` if any element still misses ``tol``.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    if np.any(b <= 0.0):
        raise DomainError("smooth branch needs b > 0")
    _check_ab(a, b)
    if not 0.0 < r < 1.0:
        raise DomainError("need 0 < r < 1")

    if init is None:
        lam0, mu0 = _initial_guess(n, r, a, b, order)
    else:
        lam0 = np.broadcast_to(np.asarray(init[0], dtype=float), a.shape).copy()
        mu0 = np.broadcast_to(np.asarray(init[1], dtype=float), a.shape).copy()
    lam, mu, iters, failed = _newton(n, r, a, b, lam0, mu0, order, tol, max_iter)
    if failed.any():
        f = np.flatnonzero(failed)
        lam1, mu1 = _nested_guess(n, r, a[f], b[f], order)
        l2, m2, it2, _ = _newton(n, r, a[f], b[f], lam1, mu1, order, tol, max_iter)
        lam[f], mu[f], iters[f] = l2, m2, iters[f] + it2

    R, I = _ri(n, r, lam, mu, order)
    F = np.stack((R - a, I - b), axis=1)
    res = np.max(np.abs(F), axis=1)
    if np.any(~(res < tol)):
        bad = int(np.argmax(np.where(np.isfinite(res), res, np.inf)))
        raise SolverError(
            f"no convergence for (a, b) = ({a[bad]}, {b[bad]}) within {max_iter} iterations",
            F[bad].copy())
    return lam, mu, F, iters


def solve_lagrange(n, r, a, b, order=PANEL_ORDER, tol=TOL, max_iter=MAX_ITER):
    """Multipliers ``(lambda, mu)`` with ``R = a`` and ``I = b`` for ``b > 0``."""
    if b <= 0:
        raise DomainError("solve_lagrange needs b > 0; b = 0 is the cap branch")
    lam, mu, F, it = solve_lagrange_batch(n, r, [a], [b], order, tol, max_iter)
    return LagrangeParams(float(lam[0]), float(mu[0]), (float(F[0, 0]), float(F[0, 1])),
                          int(it[0]))


def solve_lambda(n, r, mu, a, order=PANEL_ORDER):
    """For fixed ``mu`` the unique ``lambda`` with ``R(lambda, mu) = a``."""
    if mu <= 0:
        raise DomainError("mu must be positive")
    if not -1.0 < a < 1.0:
        raise DomainError("need -1 < a < 1")
    T = 2.0 * (abs(a) / sqrt(1.0 - a * a) + 1.0)
    lo = (1.0 + r) ** (-n) - mu * T
    hi = (1.0 - r) ** (-n) + mu * T

    def g(lam):
        return R_I_values(n, r, lam, mu, order)[0] - a

    return brentq(g, lo, hi, xtol=1e-15 * max(1.0, abs(lo), abs(hi)), rtol=1e-15, maxiter=500)


@dataclass(frozen=True)
class ExtremalProfile:
    """Maximizer ``u`` of ``L_r`` with mean ``a`` and ``sign_b * int v = b``.

    ``kind`` is ``"smooth"`` (``params`` set) or ``"cap"`` (``cap`` set).  For
    ``b < 0`` the profile ``u`` is the one for ``|b|`` and ``sign_b = -1``.
    """

    n: int
    r: float
    a: float
    b: float
    kind: str
    params: LagrangeParams | None
    cap: CapThreshold | None
    sign_b: int

    def u(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "cap":
            return np.sign(t - self.cap.t_a)
        return _u_v(kernel_A(self.n, self.r, self.params.lam, self.params.mu, t))[0]

    def v(self, t):
        """``sqrt(1 - u^2)`` (nonnegative; the sign lives in ``sign_b``)."""
        t = np.asarray(t, dtype=float)
        if self.kind == "cap":
            return np.where(t == self.cap.t_a, 1.0, 0.0)
        return _u_v(kernel_A(self.n, self.r, self.params.lam, self.params.mu, t))[1]

    def boundary_value(self, t):
        return self.u(t) + 1j * self.sign_b * self.v(t)

    def theta_breaks(self):
        """Interior colatitudes where the profile changes fastest (or jumps)."""
        if self.kind == "cap":
            return np.array([np.arccos(self.cap.t_a)])
        return level_thetas(self.n, self.r, self.params.lam, self.params.mu)[0]

    def moments(self, order=PANEL_ORDER):
        """``(int u dsigma, sign_b * int v dsigma)``."""
        breaks = np.unique(np.concatenate(([0.0, pi], self.theta_breaks(),
                                           kernel_thetas(self.r))))
        theta, w = panel_rule(self.n, breaks, order)
        t = np.cos(theta)
        return float(np.sum(w * self.u(t))), float(self.sign_b * np.sum(w * self.v(t)))


def build_extremal(n, r, a, b, order=PANEL_ORDER, tol=TOL):
    """Extremal profile for ``(a, b)``: cap form at ``b = 0``, reflection for ``b < 0``."""
    return build_extremals(n, r, [a], [b], order, tol)[0]


def build_extremals(n, r, a, b, order=PANEL_ORDER, tol=TOL):
    """Batched ``build_extremal``; the smooth cases share one Newton solve."""
    if not 0.0 < r < 1.0:
        raise DomainError("need 0 < r < 1")
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    _check_ab(a, b)
    out = [None] * a.size
    smooth = np.flatnonzero(b != 0.0)
    if smooth.size:
        lam, mu, F, it = solve_lagrange_batch(n, r, a[smooth], np.abs(b[smooth]), order, tol)
        for j, i in enumerate(smooth):
            p = LagrangeParams(float(lam[j]), float(mu[j]), (float(F[j, 0]), float(F[j, 1])),
                               int(it[j]))
            out[i] = ExtremalProfile(int(n), float(r), float(a[i]), float(b[i]), "smooth", p,
                                     None, 1 if b[i] > 0 else -1)
    for i in np.flatnonzero(b == 0.0):
        cap = solve_cap_threshold(n, float(a[i]), r=r)
        out[i] = ExtremalProfile(int(n), float(r), float(a[i]), 0.0, "cap", None, cap, 0)
    return out


__all__ = [
    "LagrangeParams", "ExtremalProfile", "kernel_A", "R_I_values", "jacobian",
    "solve_lagrange", "solve_lagrange_batch", "solve_lambda", "build_extremal",
    "build_extremals", "level_thetas", "kernel_thetas", "GUARD", "TOL",
]
