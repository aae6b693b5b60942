"""Solvers that know nothing about quasi-exact solvability.

``floquet_edges`` diagonalises -d^2/dx^2 + V in a real trigonometric basis on
one period, giving periodic or antiperiodic band edges of any smooth periodic
potential. ``bound_states_line`` finds bound states of the hyperbolic
potential with three-point finite differences on a truncated line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import DomainError, DomainSizeError
from .potentials import v_hyperbolic

__all__ = [
    "BoundaryCondition",
    "FloquetSpec",
    "NumericSpectrum",
    "trig_basis",
    "floquet_hamiltonian",
    "floquet_edges",
    "bound_states_line",
    "BOUND_HALF_WIDTH",
    "BOUND_GRID",
]

QUADRATURE_OVERSAMPLING = 8
PERIODICITY_TOL = 1e-9
BOUND_HALF_WIDTH = 25.0
BOUND_GRID = 4001
BOUND_THRESHOLD = -1e-6
EDGE_MASS_TOL = 1e-8


class BoundaryCondition(str, Enum):
    PERIODIC = "periodic"
    ANTIPERIODIC = "antiperiodic"


@dataclass
class FloquetSpec:
    period: float
    bc: BoundaryCondition
    n_basis: int
    potential: Callable[[np.ndarray], np.ndarray]

    def __post_init__(self):
        self.bc = BoundaryCondition(self.bc)
        if not (self.period > 0 and math.isfinite(self.period)):
            raise DomainError("period must be positive and finite")
        if self.n_basis < 16 or self.n_basis % 2:
            raise DomainError("n_basis must be an even integer >= 16")


@dataclass
class NumericSpectrum:
    eigenvalues: np.ndarray
    bc: str
    metadata: dict = field(default_factory=dict)


def trig_basis(L: float, bc: BoundaryCondition, n_basis: int, x):
    """Orthonormal real basis on [0, L] and its wavenumbers.

    Periodic: 1, cos(2 pi j x/L) for j <= n/2, sin(2 pi j x/L) for j < n/2.
    Antiperiodic: cos and sin of (2j+1) pi x / L for j < n/2.
    Returns ``(B, k)`` with ``B[q, i]`` basis function i at x[q].
    """
    x = np.asarray(x, dtype=float)
    half = n_basis // 2
    norm = math.sqrt(2.0 / L)
    if bc is BoundaryCondition.PERIODIC:
        kc = 2.0 * math.pi * np.arange(1, half + 1) / L
        ks = 2.0 * math.pi * np.arange(1, half) / L
        cols = [np.full((x.size, 1), 1.0 / math.sqrt(L)), norm * np.cos(np.outer(x, kc)), norm * np.sin(np.outer(x, ks))]
        k = np.concatenate([[0.0], kc, ks])
    else:
        kj = math.pi * (2 * np.arange(half) + 1) / L
        cols = [norm * np.cos(np.outer(x, kj)), norm * np.sin(np.outer(x, kj))]
        k = np.concatenate([kj, kj])
    return np.hstack(cols), k


def floquet_hamiltonian(spec: FloquetSpec) -> np.ndarray:
    L = spec.period
    n_q = QUADRATURE_OVERSAMPLING * spec.n_basis
    xq = np.arange(n_q) * (L / n_q)
    V = np.asarray(spec.potential(xq), dtype=float)
    V_shift = np.asarray(spec.potential(xq + L), dtype=float)
    scale = 1.0 + float(np.max(np.abs(V)))
    if np.max(np.abs(V_shift - V)) > PERIODICITY_TOL * scale:
        raise DomainError("potential is not periodic with the given period")
    B, k = trig_basis(L, spec.bc, spec.n_basis, xq)
    H = (L / n_q) * (B.T * V) @ B
    H[np.diag_indices_from(H)] += k * k
    return 0.5 * (H + H.T)


def floquet_edges(spec: FloquetSpec, count: int) -> NumericSpectrum:
    """Lowest ``count`` eigenvalues for the chosen Floquet boundary condition."""
    if not 0 < count <= spec.n_basis:
        raise DomainError(f"count must lie in 1..{spec.n_basis}")
    w = np.linalg.eigvalsh(floquet_hamiltonian(spec))
    return NumericSpectrum(np.sort(w)[:count], spec.bc.value, {"n_basis": spec.n_basis, "period": spec.period})


def _fd_bound_states(a, beta, W, n_grid, want_vector=False):
    x = np.linspace(-W, W, n_grid)
    h = x[1] - x[0]
    xi = x[1:-1]
    diag = 2.0 / h**2 + v_hyperbolic(xi, a, beta)
    off = np.full(xi.size - 1, -1.0 / h**2)
    if want_vector:
        w, v = eigh_tridiagonal(diag, off, select="i", select_range=(0, 0))
        return w, v[:, 0], xi
    w = eigh_tridiagonal(diag, off, eigvals_only=True, select="v", select_range=(-np.inf, BOUND_THRESHOLD))
    return np.sort(w)


def bound_states_line(a: float, beta: float, half_width: float = BOUND_HALF_WIDTH, n_grid: int = BOUND_GRID) -> NumericSpectrum:
    """Bound states (E < -1e-6) of the hyperbolic potential on [-W, W], Dirichlet ends.

    The three-point eigenvalues on grids h and h/2 are combined by one
    Richardson step (error O(h^4)). The same estimate formed from h/2 and h/4
    must agree within 1e-5, which is recorded as ``richardson_change``.
    """
    if half_width < 20:
        raise DomainError("half_width must be at least 20")
    if n_grid < 2001 or n_grid % 2 == 0:
        raise DomainError("n_grid must be odd and at least 2001")

    e0, psi0, xi = _fd_bound_states(a, beta, half_width, n_grid, want_vector=True)
    rim = np.abs(xi) > 0.95 * half_width
    if np.sum(psi0[rim] ** 2) / np.sum(psi0**2) > EDGE_MASS_TOL:
        raise DomainSizeError("ground state reaches the box edge; enlarge half_width")

    grids = [n_grid, 2 * n_grid - 1, 4 * n_grid - 3]
    raw = [_fd_bound_states(a, beta, half_width, g) for g in grids]
    count = min(len(r) for r in raw)
    raw = [r[:count] for r in raw]
    coarse = (4.0 * raw[1] - raw[0]) / 3.0
    fine = (4.0 * raw[2] - raw[1]) / 3.0
    change = float(np.max(np.abs(fine - coarse), initial=0.0))
    if change > 1e-5:
        raise DomainError(f"finite-difference eigenvalues not converged (Richardson change {change:.2g})")
    h = 2.0 * half_width / (n_grid - 1)
    meta = {"half_width": half_width, "n_grid": n_grid, "h": h, "richardson_change": change, "raw": raw[0].tolist()}
    return NumericSpectrum(coarse, "dirichlet", meta)
