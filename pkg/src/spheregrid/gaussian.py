"""Gaussian latitudes: roots of the Legendre polynomial of degree 2n.

Latitudes are asin(x_k) for the 2n roots x_k of P_2n, found by Newton
iteration from Chebyshev initial guesses.  Only the northern-hemisphere
roots are solved; the southern half is the exact mirror, so the returned
sequence is antisymmetric at the bit level.
"""

from __future__ import annotations

import math

import numpy as np

_MAX_ITER = 100
_NEWTON_TOL = 1e-15


def legendre(n: int, x):
    """Evaluate P_n(x) and P_n'(x) by the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    p_prev = np.ones_like(x)
    p = x.copy()
    if n == 0:
        return p_prev, np.zeros_like(x)
    for k in range(2, n + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
    with np.errstate(divide="ignore", invalid="ignore"):
        dp = n * (x * p - p_prev) / (x * x - 1.0)
    # endpoints: P_n'(±1) = (±1)^(n+1) n(n+1)/2
    at_end = np.abs(x) == 1.0
    if np.any(at_end):
        dp = np.where(at_end, x ** (n + 1) * n * (n + 1) / 2.0, dp)
    return p, dp


def gaussian_latitudes(n: int) -> np.ndarray:
    """2n Gaussian latitudes in degrees, strictly north to south."""
    if n < 1:
        raise ValueError("n must be >= 1")
    m = 2 * n
    # northern-hemisphere roots: k = 1..n give the n largest roots of P_2n
    k = np.arange(1, n + 1)
    x = np.cos(np.pi * (k - 0.25) / (m + 0.5))
    for _ in range(_MAX_ITER):
        p, dp = legendre(m, x)
        dx = p / dp
        x -= dx
        if np.max(np.abs(dx)) < _NEWTON_TOL:
            break
    lat_north = np.degrees(np.arcsin(x))
    # asin/degrees round-trip costs a few ulps; polish each latitude so the
    # residual |P_2n(sin lat)| is minimal for the *returned* degree value
    for i, lat in enumerate(lat_north):
        candidates = [lat]
        lo = hi = lat
        for _ in range(4):
            lo = np.nextafter(lo, -np.inf)
            hi = np.nextafter(hi, np.inf)
            candidates += [lo, hi]
        lat_north[i] = min(candidates, key=lambda c: abs(legendre(m, math.sin(math.radians(c)))[0]))
    return np.concatenate([lat_north, -lat_north[::-1]])


def legendre_residual(n: int, lats_deg: np.ndarray) -> np.ndarray:
    """|P_2n(sin lat)| for each latitude; near zero for true nodes."""
    p, _ = legendre(2 * n, np.sin(np.radians(lats_deg)))
    return np.abs(p)
