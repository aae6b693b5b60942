"""Maps between the elliptic potential, its quarter-period-shifted companion,
and the m -> 0 / m -> 1 limits.

Shifting x by -K turns the elliptic potential with coupling b into the
companion potential [beta^2/4 - m a(a+1)] cn^2 + beta (a + 1/2) sn dn with
beta = -b / sqrt(1 - m). Spectra are therefore identical and eigenfunctions
are translates: psi_companion(x) = psi_elliptic(x - K).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .closed_form import ORACLE_TWICE_A, closed_form_energies
from .errors import DomainError
from .potentials import PotentialParams, assemble_psi, parse_half_integer
from .qes_core import BandEdgeSolution, solve_band_edges, wavefunction_layers

__all__ = [
    "CompanionParams",
    "LimitKind",
    "to_companion",
    "from_companion",
    "companion_edges",
    "companion_psi",
    "limit_edges",
]

# distances 1 - m for numerical limits: s = sqrt(1 - m) at s1, 2 s1, 4 s1
_EXTRAPOLATION_GAPS = (1e-6, 4e-6, 16e-6)
# weights of the quadratic in s through those three points, evaluated at s = 0
_EXTRAPOLATION_WEIGHTS = (8.0 / 3.0, -2.0, 1.0 / 3.0)


@dataclass(frozen=True)
class CompanionParams:
    twice_a: int
    beta: float
    m: float

    def __post_init__(self):
        if not math.isfinite(self.beta):
            raise DomainError("beta must be finite")
        if not (0.0 <= self.m < 1.0):
            raise DomainError("companion parameters need 0 <= m < 1")

    @property
    def a(self) -> float:
        return self.twice_a / 2


class LimitKind(str, Enum):
    DSG_M0 = "DSG_m0"
    DSHG_M1 = "DSHG_m1"
    HYPERBOLIC_M1 = "Hyperbolic_m1"


def to_companion(p: PotentialParams) -> CompanionParams:
    if p.m >= 1.0:
        raise DomainError("the companion map needs m < 1")
    return CompanionParams(p.twice_a, -p.b / math.sqrt(1.0 - p.m), p.m)


def from_companion(c: CompanionParams) -> PotentialParams:
    return PotentialParams(c.twice_a, -math.sqrt(1.0 - c.m) * c.beta, c.m)


def companion_edges(c: CompanionParams) -> list[BandEdgeSolution]:
    """Band edges of the companion potential; same objects as for the mapped elliptic one."""
    return solve_band_edges(from_companion(c))


def companion_psi(solution: BandEdgeSolution, c: CompanionParams, x):
    """Companion eigenfunction: the elliptic eigenfunction translated by +K."""
    p = from_companion(c)
    return assemble_psi(wavefunction_layers(solution, p), np.asarray(x, dtype=float) - p.K)


def _numeric_m1_limit(twice_a: int, coupling, hyperbolic: bool) -> list[float]:
    # energies are analytic in s = sqrt(1 - m); two Richardson steps remove the s and s^2 terms.
    # Levels are tracked within each sector so near-degenerate pairs from different sectors never mix.
    runs = []
    for gap in _EXTRAPOLATION_GAPS:
        m = 1.0 - gap
        b = -math.sqrt(gap) * coupling if hyperbolic else coupling
        sols = solve_band_edges(PotentialParams(twice_a, b, m))
        runs.append(np.array([sol.E for sol in sorted(sols, key=lambda s: (s.sector.tag.value, s.E))]))
    limit = sum(w * r for w, r in zip(_EXTRAPOLATION_WEIGHTS, runs))
    return sorted(float(E) for E in limit)


def limit_edges(a, b_or_beta: float, which) -> list[float]:
    """Band-edge energies in the DSG (m = 0), DSHG (m = 1) or hyperbolic limit.

    For the hyperbolic limit ``b_or_beta`` is beta and b = -sqrt(1 - m) beta
    is substituted before m -> 1, which removes beta from the energies.
    """
    twice_a = parse_half_integer(a)
    which = LimitKind(which)
    closed = twice_a in ORACLE_TWICE_A
    if which is LimitKind.DSG_M0:
        if closed:
            return closed_form_energies(twice_a, b_or_beta, 0.0)
        return [sol.E for sol in solve_band_edges(PotentialParams(twice_a, b_or_beta, 0.0))]
    if which is LimitKind.DSHG_M1:
        if closed:
            return closed_form_energies(twice_a, b_or_beta, 1.0)
        return _numeric_m1_limit(twice_a, b_or_beta, hyperbolic=False)
    if closed:
        return closed_form_energies(twice_a, 0.0, 1.0)
    return _numeric_m1_limit(twice_a, b_or_beta, hyperbolic=True)
