"""Bessel functions J0 and J1 for real arguments t >= 0, vectorised.

Three regimes: the power series for t < 8, Miller's backward recurrence
(normalised by J0 + 2 sum J_2k = 1) for 8 <= t < 25, and the Hankel
asymptotic expansion above.  Absolute error is below 1e-13 throughout.
"""

from __future__ import annotations

import math

import numpy as np

SERIES_MAX = 8.0
ASYMPTOTIC_MIN = 25.0
_MILLER_START = 80
_SERIES_TERMS = 40
_HANKEL_TERMS = 24


def _series(nu: int, t: np.ndarray) -> np.ndarray:
    h = t / 2
    term = h**nu / math.factorial(nu)
    out = term.copy()
    h2 = h * h
    for k in range(1, _SERIES_TERMS):
        term = -term * h2 / (k * (k + nu))
        out += term
    return out


def _miller(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """J0 and J1 by downward recurrence from order _MILLER_START."""
    upper = np.zeros_like(t)
    cur = np.full_like(t, 1e-30)
    norm = np.zeros_like(t)
    j1 = np.zeros_like(t)
    for n in range(_MILLER_START, 0, -1):
        nxt = (2 * n / t) * cur - upper  # J_{n-1}
        upper, cur = cur, nxt
        # cur now holds the unnormalised J_{n-1}
        if (n - 1) % 2 == 0 and n - 1 > 0:
            norm += 2 * cur
        if n - 1 == 1:
            j1 = cur.copy()
        big = np.abs(cur) > 1e200
        if big.any():
            for arr in (upper, cur, norm, j1):
                arr[big] *= 1e-200
    j0 = cur
    norm = norm + j0
    return j0 / norm, j1 / norm


def _hankel(nu: int, t: np.ndarray) -> np.ndarray:
    mu = 4.0 * nu * nu
    P = np.ones_like(t)
    Q = np.zeros_like(t)
    a = 1.0
    inv8t = 1.0 / (8.0 * t)
    power = np.ones_like(t)
    for k in range(1, _HANKEL_TERMS):
        a *= (mu - (2 * k - 1) ** 2) / k
        power = power * inv8t
        term = a * power
        if k % 2 == 1:
            Q += (-1) ** ((k - 1) // 2) * term
        else:
            P += (-1) ** (k // 2) * term
    chi = t - (nu / 2 + 0.25) * math.pi
    return np.sqrt(2 / (math.pi * t)) * (P * np.cos(chi) - Q * np.sin(chi))


def _bessel(nu: int, t) -> np.ndarray | float:
    arr = np.asarray(t, dtype=float)
    scalar = arr.ndim == 0
    x = np.atleast_1d(arr)
    if np.any(x < 0):
        raise ValueError("argument must be non-negative")
    out = np.empty_like(x)
    low = x < SERIES_MAX
    high = x >= ASYMPTOTIC_MIN
    mid = ~(low | high)
    if low.any():
        out[low] = _series(nu, x[low])
    if mid.any():
        j0, j1 = _miller(x[mid])
        out[mid] = j0 if nu == 0 else j1
    if high.any():
        out[high] = _hankel(nu, x[high])
    return float(out[0]) if scalar else out


def bessel_j0(t):
    return _bessel(0, t)


def bessel_j1(t):
    """J1(t) = (1/2pi) * integral over [0, 2pi] of exp(i(t sin th - th)) dth."""
    return _bessel(1, t)
