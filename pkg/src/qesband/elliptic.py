"""Jacobi elliptic functions and the complete elliptic integral K(m).

Everything here is computed from the arithmetic-geometric mean (AGM) and the
descending Landen recursion for the amplitude, so no special-function library
is needed. The amplitude ``am`` is returned *unwrapped*: it grows by exactly
2*pi per period 4K, which keeps half-angle factors such as ``cos(am/2)``
smooth across the whole real line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "EllipticPoint",
    "MODULUS_SWITCH",
    "complete_elliptic_k",
    "ellipj",
    "jacobi_point",
    "half_angle_factors",
    "cn_inverse",
]

# below m (or 1 - m) this size the trigonometric / hyperbolic forms are used
MODULUS_SWITCH = 1e-12

_EPS = np.finfo(float).eps
_MAX_AGM_STEPS = 64


@dataclass(frozen=True)
class EllipticPoint:
    """Values of sn, cn, dn and the unwrapped amplitude at one (x, m)."""

    x: float
    m: float
    sn: float
    cn: float
    dn: float
    am: float


def _check_modulus(m: float, *, allow_one: bool = True) -> float:
    m = float(m)
    if not math.isfinite(m) or m < 0.0 or m > 1.0:
        raise DomainError(f"elliptic parameter m must lie in [0, 1], got {m!r}")
    if not allow_one and m == 1.0:
        raise DomainError("K(m) diverges at m = 1")
    return m


def _agm_ladder(m: float) -> tuple[list[float], list[float]]:
    """AGM sequences a_n, c_n starting from (1, sqrt(1-m), sqrt(m))."""
    a, b, c = 1.0, math.sqrt(1.0 - m), math.sqrt(m)
    a_seq, c_seq = [a], [c]
    for _ in range(_MAX_AGM_STEPS):
        if abs(c) <= _EPS * a:
            break
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        a_seq.append(a)
        c_seq.append(c)
    return a_seq, c_seq


def complete_elliptic_k(m: float) -> float:
    """Complete elliptic integral of the first kind, K(m) = pi / (2 AGM(1, sqrt(1-m))).

    Raises DomainError for m outside [0, 1) since K diverges logarithmically at m = 1.
    """
    m = _check_modulus(m, allow_one=False)
    if m == 0.0:
        return 0.5 * math.pi
    a_seq, _ = _agm_ladder(m)
    return 0.5 * math.pi / a_seq[-1]


def _gudermannian(x):
    return 2.0 * np.arctan(np.tanh(0.5 * x))


def _sech(x):
    # overflow-free for large |x|
    e = np.exp(-np.abs(x))
    return 2.0 * e / (1.0 + e * e)


def ellipj(x, m: float):
    """Vectorised Jacobi functions.

    Returns ``(sn, cn, dn, am)`` as arrays shaped like ``x``; ``am`` is the
    unwrapped amplitude, ``am(x + 4K) = am(x) + 2*pi``.
    """
    m = _check_modulus(m)
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("x must be finite")

    if m < MODULUS_SWITCH:
        return np.sin(x), np.cos(x), np.ones_like(x), x.copy()
    if 1.0 - m < MODULUS_SWITCH:
        sech = _sech(x)
        return np.tanh(x), sech, sech.copy(), _gudermannian(x)

    a_seq, c_seq = _agm_ladder(m)
    n_steps = len(a_seq) - 1
    quarter = 0.5 * math.pi / a_seq[-1]
    period = 4.0 * quarter

    turns = np.floor(x / period)
    r = x - turns * period
    phi = (2.0**n_steps) * a_seq[-1] * r
    for n in range(n_steps, 0, -1):
        phi = 0.5 * (phi + np.arcsin(c_seq[n] / a_seq[n] * np.sin(phi)))
    am = phi + 2.0 * math.pi * turns

    sn = np.sin(phi)
    cn = np.cos(phi)
    # cn^2 + (1-m) sn^2 has no cancellation, unlike 1 - m sn^2 near m -> 1
    dn = np.sqrt(cn * cn + (1.0 - m) * sn * sn)
    return sn, cn, dn, am


def jacobi_point(x: float, m: float) -> EllipticPoint:
    """Evaluate sn, cn, dn and the unwrapped amplitude at a single point."""
    sn, cn, dn, am = ellipj(float(x), m)
    return EllipticPoint(float(x), float(m), float(sn), float(cn), float(dn), float(am))


def half_angle_factors(p: EllipticPoint) -> tuple[float, float]:
    """``(cos(am/2), sin(am/2))``: the smooth branches of sqrt((1 +- cn)/2).

    Both are antiperiodic over 4K and change sign where the square roots
    would only touch zero.
    """
    return math.cos(0.5 * p.am), math.sin(0.5 * p.am)


def cn_inverse(t, m: float, *, tol: float = 1e-15):
    """Solve cn(x, m) = t for x in [0, 2K] by bisection.

    cn decreases monotonically from 1 to -1 on that interval. ``t`` may be an
    array; entries must lie in [-1, 1].
    """
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1.0):
        raise DomainError("cn takes values in [-1, 1]")
    K = complete_elliptic_k(m)
    lo = np.zeros_like(t)
    hi = np.full_like(t, 2.0 * K)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        _, cn, _, _ = ellipj(mid, m)
        above = cn > t
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
        if np.max(hi - lo, initial=0.0) <= tol * K:
            break
    return 0.5 * (lo + hi)
