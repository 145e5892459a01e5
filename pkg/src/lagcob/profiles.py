"""Smooth interpolation profiles used by the geometric constructors.

Everything here is built from the quintic smoothstep, which is C^2 with
vanishing first and second derivatives at both ends.  C^2 regularity is
enough for the immersions in this package: evaluation maps are C^2, so
their Jacobians (what the Lagrangian check consumes) are C^1.

All functions are vectorized over numpy arrays and each comes with exact
first (and where needed second) derivatives, so that model Jacobians can
be assembled analytically.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "smoothstep", "smoothstep_d1", "smoothstep_d2",
    "step", "step_d1", "step_d2",
    "plateau_bump", "plateau_bump_d1",
    "odd_step", "odd_step_d1", "odd_step_ratio",
    "smooth_clamp", "smooth_clamp_d1",
    "truncation_profile", "truncation_profile_ds",
]


def smoothstep(x):
    """Quintic smoothstep on [0,1]: 0 below, 1 above, C^2 everywhere."""
    x = np.clip(x, 0.0, 1.0)
    return x * x * x * (10.0 + x * (-15.0 + 6.0 * x))


def smoothstep_d1(x):
    y = np.asarray(x, dtype=float)
    inside = (y > 0.0) & (y < 1.0)
    z = np.clip(y, 0.0, 1.0)
    d = 30.0 * z * z * (1.0 - z) ** 2
    return np.where(inside, d, 0.0)


def smoothstep_d2(x):
    y = np.asarray(x, dtype=float)
    inside = (y > 0.0) & (y < 1.0)
    z = np.clip(y, 0.0, 1.0)
    d = 60.0 * z * (1.0 - z) * (1.0 - 2.0 * z)
    return np.where(inside, d, 0.0)


def step(t, a, b):
    """Smooth 0->1 transition over [a, b]."""
    return smoothstep((np.asarray(t, dtype=float) - a) / (b - a))


def step_d1(t, a, b):
    return smoothstep_d1((np.asarray(t, dtype=float) - a) / (b - a)) / (b - a)


def step_d2(t, a, b):
    return smoothstep_d2((np.asarray(t, dtype=float) - a) / (b - a)) / (b - a) ** 2


def plateau_bump(t, inner, outer):
    """Even bump: 1 on [-inner, inner], 0 outside [-outer, outer]."""
    return 1.0 - smoothstep((np.abs(np.asarray(t, dtype=float)) - inner) / (outer - inner))


def plateau_bump_d1(t, inner, outer):
    t = np.asarray(t, dtype=float)
    w = outer - inner
    return -smoothstep_d1((np.abs(t) - inner) / w) * np.sign(t) / w


def odd_step(x, s0, s1):
    """Odd plateau function: 0 on [-s0, s0], ±1 outside ±s1, C^2 monotone."""
    x = np.asarray(x, dtype=float)
    return np.sign(x) * smoothstep((np.abs(x) - s0) / (s1 - s0))


def odd_step_d1(x, s0, s1):
    x = np.asarray(x, dtype=float)
    return smoothstep_d1((np.abs(x) - s0) / (s1 - s0)) / (s1 - s0)


def odd_step_ratio(x, s0, s1):
    """odd_step_d1(x)/x, extended smoothly by 0 through x = 0.

    Well defined because the derivative vanishes identically on |x| <= s0.
    """
    x = np.asarray(x, dtype=float)
    d = odd_step_d1(x, s0, s1)
    out = np.zeros_like(d)
    np.divide(d, x, out=out, where=np.abs(x) > 0.5 * s0)
    return out


def smooth_clamp(t, lo, hi, width):
    """Monotone C^2 clamp of t to [lo, hi]; identity on [lo+width, hi-width]."""
    t = np.asarray(t, dtype=float)
    s_hi = smoothstep((t - (hi - width)) / width)
    s_lo = smoothstep(((lo + width) - t) / width)
    out = t + s_hi * (hi - t) + s_lo * (lo - t)
    # the two transition zones never overlap provided hi-lo > 2*width
    return out


def smooth_clamp_d1(t, lo, hi, width):
    t = np.asarray(t, dtype=float)
    x_hi = (t - (hi - width)) / width
    x_lo = ((lo + width) - t) / width
    d = (1.0
         + smoothstep_d1(x_hi) / width * (hi - t) - smoothstep(x_hi)
         - smoothstep_d1(x_lo) / width * (lo - t) - smoothstep(x_lo))
    return d


def truncation_profile(t, s, eps):
    """Two-parameter family rho(t, s) interpolating the identity to a clamp.

    Satisfies:
        rho(t, s) = t           for s <= 0,
        rho(t, s) = t           for |t| >= 2*eps/3 (all s),
        rho(t, 1) = 0           for |t| <= eps/3,
        d rho / d s = 0         for s >= 1.
    """
    t = np.asarray(t, dtype=float)
    sigma = smoothstep(np.asarray(s, dtype=float))
    beta = plateau_bump(t, eps / 3.0, 2.0 * eps / 3.0)
    return t * (1.0 - sigma * beta)


def truncation_profile_ds(t, s, eps):
    t = np.asarray(t, dtype=float)
    dsigma = smoothstep_d1(np.asarray(s, dtype=float))
    beta = plateau_bump(t, eps / 3.0, 2.0 * eps / 3.0)
    return -t * dsigma * beta
