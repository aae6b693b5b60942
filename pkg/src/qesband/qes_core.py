"""Finite invariant sectors of the gauged band-edge equation and their spectra.

After removing the gauge factor and dn^(-a), the band-edge function u(x)
satisfies

    u'' + [2am sn cn/dn - b sn/dn] u' + [E + am + ab cn + m a(a-1) sn^2] u = 0.

For half-integral ``2a`` this operator maps each of a few finite function
spaces (prefactor times a polynomial in cn) into itself. The matrix of the
operator on such a space is found here by collocation: apply the operator
analytically at points spread over a half period, expand the result back on
the basis by least squares, and refuse the answer unless held-out points
reproduce it. Eigenvalues of the matrix are the band-edge energies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from numpy.polynomial import polynomial as P

from .elliptic import cn_inverse, ellipj
from .errors import ConditioningError, ConsistencyError, DomainError
from .potentials import PotentialParams, WavefunctionLayers, dn_power, gauge_exponent

__all__ = [
    "SectorTag",
    "Periodicity",
    "Sector",
    "SectorMatrix",
    "BandEdgeSolution",
    "NodeReport",
    "enumerate_sectors",
    "build_sector_matrix",
    "monomial_action_matrix",
    "sector_eigenpairs",
    "solve_band_edges",
    "evaluate_u",
    "wavefunction_layers",
    "node_report",
    "count_nodes",
]

CLOSURE_TOL = 1e-8
REALITY_TOL = 1e-8
CONDITION_LIMIT = 1e12
DEGENERACY_TOL = 1e-10
MAX_SECTOR_DIM = 64
NODE_GRID = 4096


class SectorTag(str, Enum):
    INTEGER_EVEN = "IntegerEven"
    INTEGER_ODD = "IntegerOdd"
    HALF_PLUS = "HalfPlus"
    HALF_MINUS = "HalfMinus"


class Periodicity(str, Enum):
    """Period of psi: 4K (periodic over 4K) or 8K (antiperiodic over 4K)."""

    P4K = "4K"
    A4K = "8K"


@dataclass(frozen=True)
class Sector:
    tag: SectorTag
    dim: int

    @property
    def periodicity(self) -> Periodicity:
        if self.tag in (SectorTag.INTEGER_EVEN, SectorTag.INTEGER_ODD):
            return Periodicity.P4K
        return Periodicity.A4K


@dataclass
class SectorMatrix:
    """Matrix H with (-L0) phi_k = sum_j H[j, k] phi_j, L0 the E-free operator.

    Its eigenvalues are the sector energies directly.
    """

    sector: Sector
    entries: np.ndarray
    closure_residual: float = 0.0
    condition: float = 1.0


@dataclass
class BandEdgeSolution:
    E: float
    sector: Sector
    coeffs: np.ndarray  # coefficients of cn^0 .. cn^(dim-1), highest nonzero one equal to 1
    nodes_4K: int = -1
    periodicity: Periodicity = field(default=Periodicity.P4K)
    imag_part: float = 0.0

    def __post_init__(self):
        self.periodicity = self.sector.periodicity


@dataclass
class NodeReport:
    count: int
    zeros: list[float]
    tangential: list[float]


def enumerate_sectors(p: PotentialParams) -> list[Sector]:
    n = p.twice_a // 2
    if p.is_integer:
        sectors = [Sector(SectorTag.INTEGER_EVEN, n + 1)]
        if n > 0:
            sectors.append(Sector(SectorTag.INTEGER_ODD, n))
        return sectors
    return [Sector(SectorTag.HALF_PLUS, n + 1), Sector(SectorTag.HALF_MINUS, n + 1)]


def _check_sector(p: PotentialParams, s: Sector) -> None:
    if s not in enumerate_sectors(p):
        raise DomainError(f"{s.tag.value} of dimension {s.dim} is not a sector for a = {p.a}")
    if s.dim > MAX_SECTOR_DIM:
        raise DomainError(f"sector dimension {s.dim} exceeds {MAX_SECTOR_DIM}")


def _prefactor(tag: SectorTag, sn, cn, dn, am, m):
    """Prefactor f and its first two x-derivatives."""
    if tag is SectorTag.INTEGER_EVEN:
        one = np.ones_like(sn)
        return one, 0.0 * one, 0.0 * one
    if tag is SectorTag.INTEGER_ODD:
        return sn, cn * dn, -sn * dn * dn - m * sn * cn * cn
    ch, sh = np.cos(0.5 * am), np.sin(0.5 * am)
    if tag is SectorTag.HALF_PLUS:
        return ch, -0.5 * sh * dn, -0.25 * ch * dn * dn + 0.5 * m * sh * sn * cn
    return sh, 0.5 * ch * dn, -0.25 * sh * dn * dn - 0.5 * m * ch * sn * cn


def _prefactor_value(tag: SectorTag, sn, am):
    if tag is SectorTag.INTEGER_EVEN:
        return np.ones_like(sn)
    if tag is SectorTag.INTEGER_ODD:
        return sn
    if tag is SectorTag.HALF_PLUS:
        return np.cos(0.5 * am)
    return np.sin(0.5 * am)


def _apply_operator(p: PotentialParams, tag: SectorTag, dim: int, x):
    """Columns (-L0 phi_k)(x) / f(x) and the plain powers cn(x)^k, k < dim."""
    a, b, m = p.a, p.b, p.m
    sn, cn, dn, am = ellipj(x, m)
    f, f1, f2 = _prefactor(tag, sn, cn, dn, am, m)
    drift = 2.0 * a * m * sn * cn / dn - b * sn / dn
    q0 = a * m + a * b * cn + m * a * (a - 1.0) * sn * sn

    powers = np.empty((x.size, dim))
    out = np.empty((x.size, dim))
    for k in range(dim):
        g = cn**k
        g1 = -k * cn ** max(k - 1, 0) * sn * dn
        g2 = k * (k - 1) * cn ** max(k - 2, 0) * sn * sn * dn * dn - k * g * dn * dn + k * m * sn * sn * g
        phi = f * g
        phi1 = f1 * g + f * g1
        phi2 = f2 * g + 2.0 * f1 * g1 + f * g2
        powers[:, k] = g
        out[:, k] = -(phi2 + drift * phi1 + q0 * phi) / f
    return out, powers


def _collocation_points(p: PotentialParams, count: int, kind: int):
    # interior Chebyshev abscissae in cn; kind 1 and kind 2 sets never coincide for even count
    j = np.arange(count)
    if kind == 1:
        t = np.cos(math.pi * (j + 0.5) / count)
    else:
        t = np.cos(math.pi * (j + 1) / (count + 1))
    return cn_inverse(t, p.m)


def build_sector_matrix(p: PotentialParams, s: Sector) -> SectorMatrix:
    """Collocation matrix of one sector, with closure and conditioning checks."""
    p.require_band()
    _check_sector(p, s)
    n_pts = 2 * s.dim
    x_fit = _collocation_points(p, n_pts, kind=1)
    rhs, vander = _apply_operator(p, s.tag, s.dim, x_fit)
    cond = float(np.linalg.cond(vander))
    if cond > CONDITION_LIMIT:
        raise ConditioningError(f"collocation fit condition number {cond:.3g} exceeds {CONDITION_LIMIT:g}")
    H, *_ = np.linalg.lstsq(vander, rhs, rcond=None)

    x_check = _collocation_points(p, n_pts, kind=2)
    rhs_c, vander_c = _apply_operator(p, s.tag, s.dim, x_check)
    miss = np.linalg.norm(vander_c @ H - rhs_c, axis=0)
    # a column may vanish identically (E = 0 levels); floor the scale at O(1) per point
    scale = np.maximum(np.linalg.norm(rhs_c, axis=0), math.sqrt(n_pts))
    closure = float(np.max(miss / scale))
    if closure > CLOSURE_TOL:
        raise ConsistencyError(
            f"{s.tag.value} basis is not closed under the operator (relative residual {closure:.3g})"
        )
    return SectorMatrix(s, H, closure, cond)


def monomial_action_matrix(p: PotentialParams) -> np.ndarray:
    """Exact IntegerEven matrix on cn^k, k = 0..n, from the operator in t = cn."""
    if not p.is_integer:
        raise DomainError("the monomial-action matrix is defined for integer a")
    n = p.twice_a // 2
    a, b, m = float(n), p.b, p.m
    H = np.zeros((n + 1, n + 1))
    for k in range(n + 1):
        H[k, k] = (1 - 2 * m) * k * k + 2 * m * a * k - m * a * a
        if k + 1 <= n:
            H[k + 1, k] = b * (k - a)
        if k + 2 <= n:
            H[k + 2, k] = m * (a - k) * (a - k - 1)
        if k >= 1:
            H[k - 1, k] = -b * k
        if k >= 2:
            H[k - 2, k] = -(1 - m) * k * (k - 1)
    return H


def _normalise_leading(v: np.ndarray) -> np.ndarray:
    v = np.real_if_close(v).astype(float)
    big = np.nonzero(np.abs(v) > 1e-12 * np.max(np.abs(v)))[0]
    return v / v[big[-1]]


def sector_eigenpairs(H: np.ndarray, tol: float = REALITY_TOL):
    """Real eigenvalues (ascending), their imaginary remnants, and null vectors.

    Eigenvalues closer than DEGENERACY_TOL form one cluster; its vectors are
    the trailing right singular vectors of H - E I and hence orthonormal.
    """
    w = np.linalg.eigvals(H)
    worst = float(np.max(np.abs(w.imag), initial=0.0))
    if worst > tol:
        raise ConsistencyError(f"sector matrix has complex eigenvalues (|Im| up to {worst:.3g})")
    order = np.argsort(w.real, kind="stable")
    energies = w.real[order]
    imags = np.abs(w.imag[order])

    vectors = [None] * len(energies)
    i = 0
    while i < len(energies):
        j = i + 1
        while j < len(energies) and energies[j] - energies[j - 1] < DEGENERACY_TOL:
            j += 1
        E = float(np.mean(energies[i:j]))
        _, _, vt = np.linalg.svd(H - E * np.eye(H.shape[0]))
        block = vt[-(j - i):][::-1]
        for r in range(j - i):
            vectors[i + r] = _normalise_leading(block[r])
        i = j
    return energies, imags, vectors


def evaluate_u(solution: BandEdgeSolution, p: PotentialParams, x):
    sn, cn, _, am = ellipj(x, p.m)
    return _prefactor_value(solution.sector.tag, sn, am) * P.polyval(cn, solution.coeffs)


def wavefunction_layers(solution: BandEdgeSolution, p: PotentialParams) -> WavefunctionLayers:
    return WavefunctionLayers(
        gauge_exponent=lambda x: gauge_exponent(x, p),
        dn_power=lambda x: dn_power(x, p),
        u_part=lambda x: evaluate_u(solution, p, x),
    )


def node_report(solution: BandEdgeSolution, p: PotentialParams, n_grid: int = NODE_GRID) -> NodeReport:
    """Sign changes of u over one period 4K, located by bisection.

    Sampling uses the half-shifted grid (i + 1/2) h, i = 0..n_grid, so every
    zero in [0, 4K) falls inside exactly one bracket.
    """
    p.require_band()
    L = p.period
    h = L / n_grid
    x = (np.arange(n_grid + 1) + 0.5) * h
    u = evaluate_u(solution, p, x)
    scale = float(np.max(np.abs(u)))
    if scale == 0.0:
        raise ConsistencyError("u vanishes identically")
    sign = np.sign(u)

    # all brackets are bisected together
    idx = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    lo, hi, s_lo = x[idx], x[idx + 1], sign[idx]
    for _ in range(60):
        if idx.size == 0:
            break
        mid = 0.5 * (lo + hi)
        s_mid = np.sign(evaluate_u(solution, p, mid))
        exact = s_mid == 0
        left = (s_mid == s_lo) & ~exact
        lo = np.where(left | exact, mid, lo)
        hi = np.where(~left | exact, mid, hi)
    zeros = [float(z % L) for z in 0.5 * (lo + hi)]

    mag = np.abs(u) / scale
    c = mag[1:-1]
    touch = (c < 1e-9) & (c <= mag[:-2]) & (c <= mag[2:]) & (sign[:-2] == sign[2:])
    tangential = [float(t % L) for t in x[1:-1][touch]]
    return NodeReport(len(zeros), sorted(zeros), tangential)


def count_nodes(solution: BandEdgeSolution, p: PotentialParams) -> int:
    return node_report(solution, p).count


def solve_band_edges(p: PotentialParams) -> list[BandEdgeSolution]:
    """All 2a+1 algebraic band edges, sorted by energy."""
    p.require_band()
    out = []
    for s in enumerate_sectors(p):
        H = build_sector_matrix(p, s).entries
        energies, imags, vectors = sector_eigenpairs(H)
        for E, im, v in zip(energies, imags, vectors):
            sol = BandEdgeSolution(float(E), s, v, imag_part=float(im))
            sol.nodes_4K = count_nodes(sol, p)
            out.append(sol)
    out.sort(key=lambda sol: sol.E)
    return out
