"""The elliptic QES potential, its limiting and companion forms, and the
wavefunction layers that turn a sector solution u(x) into psi(x).

Units are hbar = 2m = 1, so the Schrodinger equation reads
psi'' + (E - V) psi = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .elliptic import complete_elliptic_k, ellipj
from .errors import DomainError

__all__ = [
    "GAUGE_SWITCH",
    "PotentialParams",
    "WavefunctionLayers",
    "parse_half_integer",
    "v_elliptic",
    "v_dsg",
    "v_dshg",
    "v_hyperbolic",
    "v_companion",
    "gauge_exponent",
    "gauge_factor",
    "dn_power",
    "assemble_psi",
    "schrodinger_residual",
]

# series forms of the gauge exponent are used when m or 1 - m is below this
GAUGE_SWITCH = 1e-10


def parse_half_integer(a) -> int:
    """Return ``2a`` for a non-negative integer or half-integer ``a``.

    Accepts numbers or strings such as ``"3/2"`` and ``"1.5"``.
    """
    try:
        frac = Fraction(str(a).strip()) if isinstance(a, str) else Fraction(a)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"cannot read a={a!r} as a half-integer") from exc
    twice = 2 * frac
    if twice.denominator != 1 or twice < 0:
        raise DomainError(f"a must be a non-negative integer or half-integer, got {a!r}")
    return int(twice)


@dataclass(frozen=True)
class PotentialParams:
    """Parameters (a, b, m) of the elliptic potential; ``a`` is stored as ``twice_a``."""

    twice_a: int
    b: float
    m: float
    K: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.twice_a) != self.twice_a or self.twice_a < 0:
            raise DomainError(f"twice_a must be a non-negative integer, got {self.twice_a!r}")
        object.__setattr__(self, "twice_a", int(self.twice_a))
        b, m = float(self.b), float(self.m)
        if not math.isfinite(b):
            raise DomainError("b must be finite")
        if not (0.0 <= m <= 1.0):
            raise DomainError(f"m must lie in [0, 1], got {m!r}")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "K", math.inf if m == 1.0 else complete_elliptic_k(m))

    @classmethod
    def from_a(cls, a, b: float, m: float) -> "PotentialParams":
        return cls(parse_half_integer(a), b, m)

    @property
    def a(self) -> float:
        return self.twice_a / 2

    @property
    def is_integer(self) -> bool:
        return self.twice_a % 2 == 0

    @property
    def period(self) -> float:
        return 4.0 * self.K

    def with_b(self, b: float) -> "PotentialParams":
        return PotentialParams(self.twice_a, b, self.m)

    def require_band(self) -> None:
        if self.m >= 1.0:
            raise DomainError("band-structure quantities need m < 1; use the hyperbolic forms at m = 1")


@dataclass(frozen=True)
class WavefunctionLayers:
    """The three factors of psi = exp(gauge_exponent) * dn^(-a) * u."""

    gauge_exponent: Callable[[np.ndarray], np.ndarray]
    dn_power: Callable[[np.ndarray], np.ndarray]
    u_part: Callable[[np.ndarray], np.ndarray]


def v_elliptic(x, p: PotentialParams):
    p.require_band()
    a, b, m = p.a, p.b, p.m
    sn, cn, dn, _ = ellipj(x, m)
    dn2 = dn * dn
    return (0.25 * b * b - m * (1.0 - m) * a * (a + 1.0)) * sn * sn / dn2 - b * (a + 0.5) * cn / dn2


def v_dsg(x, a: float, b: float):
    """Double sine-Gordon potential, the m = 0 member of the elliptic family."""
    x = np.asarray(x, dtype=float)
    return 0.25 * b * b * np.sin(x) ** 2 - b * (a + 0.5) * np.cos(x)


def v_dshg(x, a: float, b: float):
    """Double sinh-Gordon potential, the fixed-x limit m -> 1."""
    x = np.asarray(x, dtype=float)
    return 0.25 * b * b * np.sinh(x) ** 2 - b * (a + 0.5) * np.cosh(x)


def v_hyperbolic(x, a: float, beta: float):
    x = np.asarray(x, dtype=float)
    e = np.exp(-np.abs(x))
    sech = 2.0 * e / (1.0 + e * e)
    return (0.25 * beta * beta - a * (a + 1.0)) * sech * sech - beta * (a + 0.5) * sech * np.tanh(x)


def v_companion(x, p: "PotentialParams | object"):
    """Companion potential [beta^2/4 - m a(a+1)] cn^2 + beta (a + 1/2) sn dn.

    ``p`` needs ``a``, ``beta`` and ``m`` attributes (see
    :class:`qesband.transforms.CompanionParams`). Note the +sn dn term: as
    m -> 1 this tends to ``v_hyperbolic(-x, a, beta)``.
    """
    a, beta, m = p.a, p.beta, p.m
    if m >= 1.0:
        raise DomainError("companion potential needs m < 1")
    sn, cn, dn, _ = ellipj(x, m)
    return (0.25 * beta * beta - m * a * (a + 1.0)) * cn * cn + beta * (a + 0.5) * sn * dn


def gauge_exponent(x, p: PotentialParams):
    """Log of the gauge factor, (b / 2 sqrt(m(1-m))) * arctan(sqrt(m/(1-m)) cn).

    Its derivative is -(b/2) sn/dn, which removes the sn^2/dn^2 part of the
    potential. For m < GAUGE_SWITCH the m -> 0 series (b/2) cn/(1-m) is used;
    for 1 - m < GAUGE_SWITCH a divergent constant is subtracted so the factor
    stays bounded (it becomes exp(-(b/2) cosh x) near x = 0 in the DSHG limit).
    """
    p.require_band()
    b, m = p.b, p.m
    _, cn, _, _ = ellipj(x, m)
    if b == 0.0:
        return np.zeros_like(cn)
    if m < GAUGE_SWITCH:
        return 0.5 * b * cn / (1.0 - m)
    scale = 0.5 * b / math.sqrt(m * (1.0 - m))
    slope = math.sqrt(m / (1.0 - m))
    z = slope * cn
    if 1.0 - m < GAUGE_SWITCH:
        # arctan(z) - sign(b) pi/2, written without cancellation
        inv = np.arctan(1.0 / np.where(z == 0.0, np.finfo(float).tiny, z))
        if b > 0:
            shifted = np.where(z > 0, -inv, -math.pi - inv)
        else:
            shifted = np.where(z < 0, -inv, math.pi - inv)
        return scale * shifted
    big = np.abs(z) > 1.0
    safe = np.where(big, z, 1.0)
    at = np.where(big, np.sign(z) * 0.5 * math.pi - np.arctan(1.0 / safe), np.arctan(z))
    return scale * at


def gauge_factor(x, p: PotentialParams):
    return np.exp(gauge_exponent(x, p))


def dn_power(x, p: PotentialParams):
    """dn(x)^(-a); positive and 2K-periodic."""
    _, _, dn, _ = ellipj(x, p.m)
    return dn ** (-p.a)


def assemble_psi(layers: WavefunctionLayers, x):
    x = np.asarray(x, dtype=float)
    return np.exp(layers.gauge_exponent(x)) * layers.dn_power(x) * layers.u_part(x)


def schrodinger_residual(psi: Callable, potential: Callable, E: float, x, h: float = 1e-3) -> float:
    """max |psi'' + (E - V) psi| / ((1 + |E|) max|psi|) with a five-point stencil."""
    x = np.asarray(x, dtype=float)
    f0 = psi(x)
    d2 = (-psi(x + 2 * h) + 16 * psi(x + h) - 30 * f0 + 16 * psi(x - h) - psi(x - 2 * h)) / (12 * h * h)
    res = d2 + (E - potential(x)) * f0
    return float(np.max(np.abs(res)) / ((1.0 + abs(E)) * np.max(np.abs(f0))))
