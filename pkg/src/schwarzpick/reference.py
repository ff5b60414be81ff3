"""Closed forms and brute-force quadratures used as independent cross-checks.

Nothing here shares code with the main quadrature path; tests compare the two.
"""
from math import atan, gamma, pi, sqrt

import numpy as np


def heinz_bound(r):
    """Sharp bound ``(4/pi) arctan r`` for the real part of a harmonic map of the disk into itself."""
    return 4.0 / pi * atan(r)


def hemisphere_bound_3d(r):
    """Poisson integral at ``rN`` in B^3 of +1 on the upper and -1 on the lower hemisphere.

    Antiderivative of ``(1-r^2)/2 * (1 - 2rt + r^2)^{-3/2}`` in ``t``.
    """
    return (1.0 - (1.0 - r * r) / sqrt(1.0 + r * r)) / r


def cap_measure_2d(t):
    return np.arccos(t) / pi


def cap_measure_3d(t):
    return (1.0 - np.asarray(t)) / 2.0


def arc_harmonic_measure(z, a1, a2):
    """Harmonic measure at ``z`` in the unit disk of the arc from angle ``a1`` to ``a2`` (ccw)."""
    z = complex(z)
    w = (np.exp(1j * a2) - z) / (np.exp(1j * a1) - z)
    return float(np.angle(w) / pi - (a2 - a1) / (2.0 * pi)) % 1.0


def rotated_half_sign(z, phi):
    """Harmonic extension of ``sign(sin(psi - phi))`` on the circle."""
    return 2.0 * arc_harmonic_measure(z, phi, phi + pi) - 1.0


def brute_zonal_mean(n, f, m=1_000_001):
    """Trapezoid rule in the colatitude against ``sin^{n-2}`` with explicit Gamma normalization."""
    theta = np.linspace(0.0, pi, m)
    c = gamma(n / 2.0) / (sqrt(pi) * gamma((n - 1) / 2.0))
    g = c * np.sin(theta) ** (n - 2) * f(np.cos(theta))
    return float(np.trapezoid(g, theta)) if hasattr(np, "trapezoid") else float(np.trapz(g, theta))


def brute_R_I(n, r, lam, mu, m=1_000_001):
    """Means of ``A/sqrt(1+A^2)`` and ``1/sqrt(1+A^2)`` by the trapezoid rule."""
    def A(t):
        return ((1.0 - 2.0 * r * t + r * r) ** (-n / 2.0) - lam) / mu

    R = brute_zonal_mean(n, lambda t: A(t) / np.sqrt(1.0 + A(t) ** 2), m)
    I = brute_zonal_mean(n, lambda t: 1.0 / np.sqrt(1.0 + A(t) ** 2), m)
    return R, I


def monte_carlo_sphere(n, f, samples=2_000_000, seed=0):
    """Monte-Carlo mean of ``f(omega)`` over uniform points of S^{n-1}."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((samples, n))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return float(np.mean(f(x)))
