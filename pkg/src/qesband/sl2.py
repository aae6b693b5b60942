"""The sl(2) generators on polynomials of degree <= n and the quadratic
combination that reproduces the IntegerEven sector operator.

    J+ = t^2 d/dt - n t,   J0 = t d/dt - n/2,   J- = d/dt

act on the monomials t^k, k = 0..n, as (k - n) t^(k+1), (k - n/2) t^k and
k t^(k-1). With these definitions [J0, J+-] = +-J+- and [J+, J-] = -2 J0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .potentials import PotentialParams
from .qes_core import monomial_action_matrix

__all__ = ["Sl2Triple", "sl2_triple", "lambda_shift", "sl2_commutators", "sl2_operator", "sl2_verify"]


@dataclass(frozen=True)
class Sl2Triple:
    """Exact (Fraction-valued) matrices of J+, J0, J- on t^0..t^n."""

    n: int
    jplus: np.ndarray
    jzero: np.ndarray
    jminus: np.ndarray


def sl2_triple(n: int) -> Sl2Triple:
    if n < 0:
        raise DomainError("n must be non-negative")
    size = n + 1
    zero = Fraction(0)
    jp = np.full((size, size), zero, dtype=object)
    j0 = np.full((size, size), zero, dtype=object)
    jm = np.full((size, size), zero, dtype=object)
    for k in range(size):
        j0[k, k] = Fraction(2 * k - n, 2)
        if k + 1 <= n:
            jp[k + 1, k] = Fraction(k - n)
        if k >= 1:
            jm[k - 1, k] = Fraction(k)
    return Sl2Triple(n, jp, j0, jm)


def lambda_shift(E: float, n: int, m: float) -> float:
    return -(E + m * n * n / 2 - n * n / 4)


def sl2_commutators(n: int) -> dict[str, bool]:
    """Exact rational check of the three commutation relations."""
    T = sl2_triple(n)
    jp, j0, jm = T.jplus, T.jzero, T.jminus

    def comm(x, y):
        return x.dot(y) - y.dot(x)

    return {
        "[J0,J+]=+J+": bool(np.all(comm(j0, jp) == jp)),
        "[J0,J-]=-J-": bool(np.all(comm(j0, jm) == -jm)),
        "[J+,J-]=-2J0": bool(np.all(comm(jp, jm) == -2 * j0)),
    }


def sl2_operator(n: int, m: float, b: float, E: float = 0.0) -> np.ndarray:
    """m J+J+ + (1-2m) J0J0 - (1-m) J-J- + n J0 + b (J+ - J-) + lambda(E)."""
    T = sl2_triple(n)
    jp, j0, jm = (M.astype(float) for M in (T.jplus, T.jzero, T.jminus))
    eye = np.eye(n + 1)
    return (
        m * jp @ jp
        + (1 - 2 * m) * j0 @ j0
        - (1 - m) * jm @ jm
        + n * j0
        + b * (jp - jm)
        + lambda_shift(E, n, m) * eye
    )


def sl2_verify(p: PotentialParams) -> float:
    """Largest entry of |sl2 combination (E = 0) - IntegerEven matrix|."""
    if not p.is_integer:
        raise DomainError("the sl(2) form needs integer a")
    n = p.twice_a // 2
    return float(np.max(np.abs(sl2_operator(n, p.m, p.b) - monomial_action_matrix(p))))
