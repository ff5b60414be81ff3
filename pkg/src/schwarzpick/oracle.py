"""Independent checks of the extremal machinery.

* ``discretized_max`` maximizes the discretized functional over the feasible
  class with a generic conic solver, never touching the closed-form optimum.
* ``random_harmonic`` / ``containment_trial`` / ``run_trials`` test that
  random bounded harmonic functions map the closed ball of radius r into the
  rotated region.
* ``claim_checks`` samples the structural properties of the (R, I) map.
"""
import json
from dataclasses import asdict, dataclass, field
from math import pi, sqrt

import cvxpy as cp
import numpy as np

from .errors import CapabilityError, DomainError, SolverError
from .extremal import (R_I_values, build_extremal, jacobian, solve_lagrange,
                       solve_lambda)
from .poisson import (CapSumData, evaluate_F_on_axis, evaluate_poisson_general,
                      functional_L)
from .region import build_region, margin, support_values
from .zonal import cap_measure, solve_cap_thresholds


class InfeasibleError(DomainError):
    """The discretized class is empty."""


# --- discretized extremal problem ----------------------------------------------


@dataclass(frozen=True)
class DiscretizedClass:
    """Equal-measure bins in ``t``; ``kernel[i]`` is the bin average of the Poisson kernel."""

    n: int
    r: float
    M: int
    edges: np.ndarray
    weights: np.ndarray
    kernel: np.ndarray
    u: np.ndarray | None = None

    def objective(self, u):
        return float(np.sum(self.weights * self.kernel * u))

    def constraints(self, u):
        return float(np.sum(self.weights * u)), float(np.sum(self.weights * np.sqrt(1 - u * u)))


def discretize_class(n, r, M=400, sub=64):
    if M < 1:
        raise DomainError("need M >= 1")
    levels = np.empty(M + 1)
    levels[0], levels[-1] = 1.0, -1.0
    # cap measure of {t > level_k} is k/M
    levels[1:-1] = solve_cap_thresholds(n, 2.0 * np.arange(1, M) / M - 1.0)
    weights = np.diff(cap_measure(n, levels))
    # bin averages of the kernel by Gauss-Legendre in theta inside each bin
    x, wx = np.polynomial.legendre.leggauss(sub)
    th0, th1 = np.arccos(levels[:-1]), np.arccos(levels[1:])
    th = 0.5 * (th0 + th1)[:, None] + 0.5 * (th1 - th0)[:, None] * x
    dens = np.sin(th) ** (n - 2) * wx * 0.5 * (th1 - th0)[:, None]
    k = (1.0 - r * r) * (1.0 - 2.0 * r * np.cos(th) + r * r) ** (-0.5 * n)
    kernel = np.sum(k * dens, axis=1) / np.sum(dens, axis=1)
    return DiscretizedClass(int(n), float(r), int(M), levels, weights, kernel)


def discretized_max(n, r, a, b, M=400, return_class=False):
    """Maximize ``sum w_i k_i u_i`` subject to ``|u_i| <= 1``, ``sum w_i u_i = a``,
    ``sum w_i sqrt(1 - u_i^2) >= b``.

    Written as a second-order cone program with ``s_i <= sqrt(1 - u_i^2)``
    and solved by an interior-point method.  Only ``b >= 0`` is meaningful
    (for ``b < 0`` the constraint is inactive, as for ``b = 0``).
    """
    if M < 100:
        raise DomainError("need M >= 100")
    if a * a + b * b > 0.99:
        raise DomainError("need a^2 + b^2 <= 0.99")
    dc = discretize_class(n, r, M)
    w = dc.weights
    u = cp.Variable(M)
    s = cp.Variable(M)
    cons = [cp.norm(cp.vstack([u, s]), 2, axis=0) <= 1.0,
            w @ u == a, w @ s >= max(b, 0.0), s >= 0]
    prob = cp.Problem(cp.Maximize((w * dc.kernel) @ u), cons)
    prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-11, tol_gap_rel=1e-11, tol_feas=1e-11)
    if prob.status in ("infeasible", "infeasible_inaccurate"):
        raise InfeasibleError(f"discretized class empty for a={a}, b={b}, M={M}")
    if prob.status != "optimal":
        raise SolverError(f"conic solver status {prob.status}", None)
    uv = np.clip(u.value, -1.0, 1.0)
    mean, root = dc.constraints(uv)
    if abs(mean - a) > 1e-7 or root < b - 1e-7:
        raise SolverError("conic solution violates the constraints", (mean - a, root - b))
    val = dc.objective(uv)
    if return_class:
        return val, DiscretizedClass(dc.n, dc.r, dc.M, dc.edges, dc.weights, dc.kernel, uv)
    return val


# --- random bounded harmonic functions ------------------------------------------


@dataclass(frozen=True)
class HarmonicSample:
    """Poisson extension of a finite sum of cap indicators with ``|g| <= 1``."""

    n: int
    seed: int
    complexity: int
    data: CapSumData
    F0: complex

    def __call__(self, x):
        return evaluate_poisson_general(self.data, x)


def _random_unit(rng, n, k):
    v = rng.standard_normal((k, n))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _subset_sup(base, coeffs):
    """``max |base + sum_{k in S} c_k|`` over all subsets S: a rigorous sup bound."""
    k = coeffs.size
    mask = (np.arange(2 ** k)[:, None] >> np.arange(k)) & 1
    return float(np.max(np.abs(base + mask @ coeffs)))


def random_harmonic(n, seed, complexity=3):
    """Random boundary data ``base + sum c_k 1{cap_k}`` scaled so ``|g| <= 1``.

    The scaling uses the maximum of ``|base + sum_{k in S} c_k|`` over every
    subset S of the caps, which dominates every value the data can take.
    """
    if n not in (2, 3):
        raise CapabilityError(f"random harmonic samples are implemented for n = 2, 3 only (n = {n})")
    if int(complexity) != complexity or complexity < 1 or complexity > 12:
        raise DomainError("complexity must be an integer in [1, 12]")
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), int(n)]))
    k = int(complexity)
    centers = _random_unit(rng, n, k)
    levels = rng.uniform(-0.9, 0.9, k)
    coeffs = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    base = complex(rng.standard_normal() + 1j * rng.standard_normal())
    if rng.uniform() < 0.5:
        # two-valued data with both values on the unit circle: close to extremal
        p, q = np.exp(2j * pi * rng.uniform(size=2))
        base, coeffs = p, np.concatenate(([q - p], 0.05 * coeffs[1:]))
    scale = rng.uniform(0.9, 1.0) / _subset_sup(base, coeffs)
    data = CapSumData(int(n), base * scale, centers, levels, coeffs * scale, bound=True)
    return HarmonicSample(int(n), int(seed), k, data, data.mean())


def constant_harmonic(n, c):
    """The sample ``g == c``."""
    if abs(c) > 1:
        raise DomainError("need |c| <= 1")
    data = CapSumData(int(n), complex(c), np.zeros((0, n)), np.zeros(0), np.zeros(0, complex), True)
    return HarmonicSample(int(n), -1, 0, data, complex(c))


def sphere_directions(n, m):
    """Deterministic low-discrepancy directions: golden-angle circle or Fibonacci sphere."""
    golden = (sqrt(5.0) - 1.0) / 2.0
    j = np.arange(m)
    if n == 2:
        phi = 2.0 * pi * ((j * golden + 0.5 / m) % 1.0)
        return np.stack((np.cos(phi), np.sin(phi)), axis=1)
    if n == 3:
        z = 1.0 - (2.0 * j + 1.0) / m
        phi = 2.0 * pi * ((j * golden) % 1.0)
        rr = np.sqrt(1.0 - z * z)
        return np.stack((rr * np.cos(phi), rr * np.sin(phi), z), axis=1)
    raise CapabilityError(f"directions implemented for n = 2, 3 only (n = {n})")


# --- containment trials ---------------------------------------------------------


@dataclass
class TrialEntry:
    function_id: int
    rho: float
    worst_margin: float
    failures: list = field(default_factory=list)


@dataclass
class TrialReport:
    seed: int
    n: int
    r: float
    trials: int
    m_points: int
    m_beta: int
    tol: float
    worst_margin: float
    failures: list

    @property
    def passed(self):
        return not self.failures

    def to_json(self):
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


def _refined_margin(n, r, rho, region, w, m0, tol):
    """Tighten near-boundary margins with extra support lines around the binding direction.

    Points are refined when their margin is within twice the corner overshoot
    of the sampled polygon, ``(sec(step/2) - 1) max h``.
    """
    betas = region.curve.betas
    step = betas[1] - betas[0]
    band = 2.0 * (1.0 / np.cos(0.5 * step) - 1.0) * float(np.max(region.curve.h)) + tol
    out = m0.copy()
    for i in np.flatnonzero(m0 > -band):
        k = int(np.argmax((w[i] * np.exp(-1j * betas)).real - region.curve.h))
        extra = betas[k] + step * np.linspace(-1.0, 1.0, 17)
        h, _ = support_values(n, r, rho, extra)
        out[i] = max(m0[i], float(np.max((w[i] * np.exp(-1j * extra)).real - h)))
    return out


def containment_trial(sample, r, m_points=64, tol=1e-6, m_beta=64, region=None,
                      interior=(0.5,)):
    """Evaluate ``F`` on ``m_points`` directions at radius ``r`` (and at the
    fractions ``interior`` of ``r``) and test each value against the rotated region.
    """
    F0 = sample.F0
    rho = abs(F0)
    if rho > 0.999:
        raise DomainError("need |F(0)| <= 0.999")
    alpha = float(np.angle(F0)) if rho > 0 else 0.0
    if region is None:
        region = build_region(sample.n, r, rho, m_beta)
    dirs = sphere_directions(sample.n, m_points)
    pts = [r * dirs]
    pts += [f * r * dirs[: max(1, m_points // 8)] for f in interior]
    x = np.concatenate(pts)
    vals = np.asarray(sample(x)) * np.exp(-1j * alpha)
    m = margin(region, vals)
    m = _refined_margin(sample.n, r, rho, region, vals, m, tol)
    entry = TrialEntry(sample.seed, float(rho), float(np.max(m)))
    for i in np.flatnonzero(m > tol):
        entry.failures.append({"function_id": sample.seed, "point": [float(c) for c in x[i]],
                               "margin": float(m[i])})
    return entry


def run_trials(n, r, trials, seed, m_points=64, tol=1e-6, m_beta=64, complexity=3):
    """Seeded trial corpus; regions are built in order of ``|F(0)|`` with warm starts."""
    if trials < 1:
        raise DomainError("need trials >= 1")
    samples = [random_harmonic(n, seed * 1_000_003 + i, complexity) for i in range(trials)]
    order = sorted(range(trials), key=lambda i: abs(samples[i].F0))
    entries = [None] * trials
    prev = None
    for i in order:
        s = samples[i]
        region = build_region(n, r, abs(s.F0), m_beta, warm=None if prev is None else prev.curve)
        prev = region
        entries[i] = containment_trial(s, r, m_points, tol, m_beta, region)
    failures = [f for e in entries for f in e.failures]
    worst = max(e.worst_margin for e in entries)
    return TrialReport(int(seed), int(n), float(r), int(trials), int(m_points), int(m_beta),
                       float(tol), float(worst), failures)


# --- structural claims ----------------------------------------------------------


@dataclass
class Check:
    name: str
    passed: bool
    detail: str


def claim_checks(n, r):
    """Sample the structural properties of the multiplier map and the extremals."""
    out = []
    lams = np.linspace(-1.0, 4.0, 5)
    mus = np.array([0.05, 0.3, 1.0, 3.0, 10.0])
    dets = np.array([[np.linalg.det(jacobian(n, r, l, m)) for m in mus] for l in lams])
    out.append(Check("jacobian determinant negative", bool(np.all(dets < 0)),
                     f"max det {dets.max():.3e}"))
    mono = True
    for m in mus:
        R = np.array([R_I_values(n, r, l, m)[0] for l in np.linspace(-2.0, 6.0, 17)])
        mono &= bool(np.all(np.diff(R) < 0))
    out.append(Check("R strictly decreasing in lambda", mono, "17-point lambda grid"))
    inside = True
    for l in lams:
        for m in mus:
            R, I = R_I_values(n, r, l, m)
            inside &= bool(-1 < R < 1 and 0 < I < 1)
    out.append(Check("-1 < R < 1 and 0 < I < 1", inside, "5x5 grid"))
    for a in (0.0, 0.3, 0.6):
        Is = []
        for m in (0.1, 1.0, 10.0, 1e2, 1e4):
            lam = solve_lambda(n, r, m, a)
            Is.append(R_I_values(n, r, lam, m)[1])
        Is = np.array(Is)
        lim = sqrt(1 - a * a)
        ok = bool(np.all(np.diff(Is) > 0) and abs(Is[-1] - lim) < 1e-3)
        out.append(Check(f"I along lambda(mu, {a}) increases to sqrt(1-a^2)", ok,
                         f"I(1e4) = {Is[-1]:.6f}, limit {lim:.6f}"))
    for a in (-0.5, 0.0, 0.5):
        p = solve_lagrange(n, r, a, 1e-3)
        cap = build_extremal(n, r, a, 0.0).cap
        lam0 = cap.lambda0(r)
        ok = p.mu < 0.05 and abs(p.lam - lam0) < 1e-2
        out.append(Check(f"b -> 0 limits at a = {a}", bool(ok),
                         f"mu = {p.mu:.3e}, lambda - lambda0 = {p.lam - lam0:.3e}"))
    for a, b in ((0.3, 0.4), (-0.5, 0.2), (0.0, 0.0), (0.6, -0.3)):
        prof = build_extremal(n, r, a, b)
        top = evaluate_F_on_axis(prof, r).real
        below = [evaluate_F_on_axis(prof, s).real for s in (0.0, r / 4, r / 2, 3 * r / 4)]
        out.append(Check(f"axis maximum at rN for (a, b) = ({a}, {b})",
                         bool(max(below) < top), f"gap {top - max(below):.3e}"))
        val = functional_L(prof, n, r)
        out.append(Check(f"F(0) = a + ib for (a, b) = ({a}, {b})",
                         abs(evaluate_F_on_axis(prof, 0.0) - complex(a, b)) < 1e-8,
                         f"L = {val:.9f}"))
    return out
