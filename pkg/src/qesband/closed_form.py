"""Explicit band edges for a = 0, 1/2, 1, 3/2, 2.

Energies come from the closed expressions; the polynomial constants of each
eigenfunction are recovered by back-substitution into the small sector
systems written out in :func:`exact_sector_matrix`. Neither path uses the
collocation machinery in :mod:`qesband.qes_core`, so the two can check each
other.

The a = 2 sn-type pair is E = [(5 - 10m) +- sqrt(9 + 4b^2)] / 2. The form
with the radical not halved does not solve the band-edge equation; it is kept
as :func:`printed_eq23_energies` for the discrepancy audit only.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, NotAnOracleError
from .potentials import PotentialParams
from .qes_core import BandEdgeSolution, Sector, SectorTag, count_nodes, enumerate_sectors

__all__ = [
    "ORACLE_TWICE_A",
    "exact_sector_matrix",
    "cubic_companion_roots",
    "closed_form_levels",
    "closed_form_energies",
    "printed_eq23_energies",
    "closed_form_edges",
]

ORACLE_TWICE_A = (0, 1, 2, 3, 4)


def exact_sector_matrix(twice_a: int, b: float, m: float, s: Sector) -> np.ndarray:
    """Action of the E-free operator on prefactor * cn^k, worked out by hand.

    Column k holds the cn^j coefficients of the image of basis function k.
    Valid for any m in [0, 1], including the m = 1 endpoint.
    """
    a = twice_a / 2
    n = s.dim
    H = np.zeros((n, n))
    for k in range(n):
        entries = {}
        entries[k - 2] = k * (k - 1) * (m - 1)
        if s.tag is SectorTag.INTEGER_EVEN:
            entries[k - 1] = -b * k
            entries[k] = (1 - 2 * m) * k * k + 2 * m * a * k - m * a * a
            entries[k + 1] = b * (k - a)
            entries[k + 2] = m * (a - k) * (a - k - 1)
        elif s.tag is SectorTag.INTEGER_ODD:
            entries[k - 1] = -b * k
            entries[k] = -a * a * m + 2 * a * k * m - 2 * k * k * m + k * k - 2 * k * m + 2 * k - m + 1
            entries[k + 1] = -b * (a - k - 1)
            entries[k + 2] = m * (a - k - 2) * (a - k - 1)
        else:
            common = 4 * a * a * m - 8 * a * k * m + 8 * k * k * m - 4 * k * k + 4 * k * m - 4 * k + m - 1
            if s.tag is SectorTag.HALF_PLUS:
                entries[k - 1] = -k * (b - m + 1)
                entries[k] = -(common + 2 * b) / 4
                entries[k + 1] = -(b - m) * (2 * a - 2 * k - 1) / 2
            else:
                entries[k - 1] = -k * (b + m - 1)
                entries[k] = -(common - 2 * b) / 4
                entries[k + 1] = -(b + m) * (2 * a - 2 * k - 1) / 2
            entries[k + 2] = m * (2 * a - 2 * k - 3) * (2 * a - 2 * k - 1) / 4
        for j, value in entries.items():
            if 0 <= j < n:
                H[j, k] = value
    return H


def cubic_companion_roots(c2: float, c1: float, c0: float) -> np.ndarray:
    """Real roots of x^3 + c2 x^2 + c1 x + c0 from its companion matrix, ascending."""
    C = np.array([[-c2, -c1, -c0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    r = np.linalg.eigvals(C)
    if np.max(np.abs(r.imag)) > 1e-8 * max(1.0, float(np.max(np.abs(r.real)))):
        raise ArithmeticError("cubic has complex roots")
    return np.sort(r.real)


def closed_form_levels(twice_a: int, b: float, m: float) -> list[tuple[SectorTag, float]]:
    """(sector, energy) pairs from the explicit formulas; m may equal 1."""
    if twice_a not in ORACLE_TWICE_A:
        raise NotAnOracleError(f"no closed form for a = {twice_a / 2}")
    if not (0.0 <= m <= 1.0):
        raise DomainError("m must lie in [0, 1]")
    even, odd = SectorTag.INTEGER_EVEN, SectorTag.INTEGER_ODD
    plus, minus = SectorTag.HALF_PLUS, SectorTag.HALF_MINUS
    if twice_a == 0:
        return [(even, 0.0)]
    if twice_a == 1:
        return [(plus, (1 - 2 * m - 2 * b) / 4), (minus, (1 - 2 * m + 2 * b) / 4)]
    if twice_a == 2:
        r = math.sqrt(1 + 4 * b * b)
        return [(odd, 1 - 2 * m), (even, (1 - 2 * m - r) / 2), (even, (1 - 2 * m + r) / 2)]
    if twice_a == 3:
        rp = math.sqrt(1 - m * (1 - m) + (1 - 2 * m) * b + b * b)
        rm = math.sqrt(1 - m * (1 - m) - (1 - 2 * m) * b + b * b)
        cp = (5 - 10 * m - 2 * b) / 4
        cm = (5 - 10 * m + 2 * b) / 4
        return [(plus, cp - rp), (plus, cp + rp), (minus, cm - rm), (minus, cm + rm)]
    r = math.sqrt(9 + 4 * b * b)
    roots = cubic_companion_roots(2 * (2 * m - 1), -(4 * b * b + 3), 8 * (1 - 2 * m) * b * b)
    levels = [(odd, ((5 - 10 * m) - r) / 2), (odd, ((5 - 10 * m) + r) / 2)]
    levels += [(even, float(x) + 1 - 2 * m) for x in roots]
    return levels


def closed_form_energies(twice_a: int, b: float, m: float) -> list[float]:
    return sorted(E for _, E in closed_form_levels(twice_a, b, m))


def printed_eq23_energies(b: float, m: float) -> list[float]:
    """The a = 2 sn-type pair with the radical left unhalved (does not solve the equation)."""
    r = math.sqrt(9 + 4 * b * b)
    return [(5 - 10 * m) / 2 - r, (5 - 10 * m) / 2 + r]


def _null_vector(H: np.ndarray, E: float) -> np.ndarray:
    _, _, vt = np.linalg.svd(H - E * np.eye(H.shape[0]))
    v = vt[-1]
    big = np.nonzero(np.abs(v) > 1e-12 * np.max(np.abs(v)))[0]
    return v / v[big[-1]]


def closed_form_edges(p: PotentialParams) -> list[BandEdgeSolution]:
    p.require_band()
    sectors = {s.tag: s for s in enumerate_sectors(p)}
    out = []
    for tag, E in closed_form_levels(p.twice_a, p.b, p.m):
        s = sectors[tag]
        coeffs = _null_vector(exact_sector_matrix(p.twice_a, p.b, p.m, s), E)
        sol = BandEdgeSolution(float(E), s, coeffs)
        sol.nodes_4K = count_nodes(sol, p)
        out.append(sol)
    out.sort(key=lambda sol: sol.E)
    return out
