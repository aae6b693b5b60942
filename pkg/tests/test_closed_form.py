import math

import numpy as np
import pytest

from helpers import multiset_deviation
from qesband.closed_form import (
    ORACLE_TWICE_A,
    closed_form_edges,
    closed_form_energies,
    closed_form_levels,
    cubic_companion_roots,
    exact_sector_matrix,
    printed_eq23_energies,
)
from qesband.errors import DomainError, NotAnOracleError
from qesband.potentials import PotentialParams
from qesband.qes_core import SectorTag, build_sector_matrix, enumerate_sectors, solve_band_edges

M_GRID = (0.1, 0.3, 0.5, 0.7, 0.9)
B_GRID = (0.5, 1.0, 2.0)


@pytest.mark.parametrize("twice_a", ORACLE_TWICE_A)
def test_oracle_agrees_with_collocation(twice_a):
    for m in M_GRID:
        for b in B_GRID:
            p = PotentialParams(twice_a, b, m)
            got = [s.E for s in solve_band_edges(p)]
            assert multiset_deviation(got, closed_form_energies(twice_a, b, m)) < 1e-9


@pytest.mark.parametrize("twice_a", ORACLE_TWICE_A)
def test_levels_land_in_their_sector(twice_a):
    p = PotentialParams(twice_a, 1.3, 0.35)
    by_tag = {}
    for s in solve_band_edges(p):
        by_tag.setdefault(s.sector.tag, []).append(s.E)
    for tag, E in closed_form_levels(twice_a, 1.3, 0.35):
        assert min(abs(E - x) for x in by_tag[tag]) < 1e-10


def test_three_halves_formula():
    b, m = 0.8, 0.2
    r = math.sqrt(1 - m * (1 - m) + (1 - 2 * m) * b + b * b)
    plus = sorted(E for tag, E in closed_form_levels(3, b, m) if tag is SectorTag.HALF_PLUS)
    c = (5 - 10 * m - 2 * b) / 4
    assert plus == pytest.approx([c - r, c + r], abs=1e-15)


@pytest.mark.parametrize("b", [0.3, 1.0, 2.5])
def test_cubic_at_half_modulus(b):
    even = sorted(E for tag, E in closed_form_levels(4, b, 0.5) if tag is SectorTag.INTEGER_EVEN)
    r = math.sqrt(4 * b * b + 3)
    assert even == pytest.approx([-r, 0.0, r], abs=1e-12)


def test_cubic_roots():
    # x^3 + 2x^2 - 3x = 0
    assert cubic_companion_roots(2.0, -3.0, 0.0) == pytest.approx([-3.0, 0.0, 1.0], abs=1e-14)


def test_hyperbolic_corner():
    # m = 1, b = 0: x^3 + 2x^2 - 3x gives E = x - 1 in {-4, -1, 0}
    even = sorted(E for tag, E in closed_form_levels(4, 0.0, 1.0) if tag is SectorTag.INTEGER_EVEN)
    assert even == pytest.approx([-4.0, -1.0, 0.0], abs=1e-13)
    odd = sorted(E for tag, E in closed_form_levels(4, 0.0, 1.0) if tag is SectorTag.INTEGER_ODD)
    assert odd == pytest.approx([-4.0, -1.0], abs=1e-14)


def test_derived_pair_solves_its_sector():
    for m in M_GRID:
        for b in B_GRID:
            p = PotentialParams(4, b, m)
            odd = [s for s in enumerate_sectors(p) if s.tag is SectorTag.INTEGER_ODD][0]
            w = np.sort(np.linalg.eigvals(exact_sector_matrix(4, b, m, odd)).real)
            r = math.sqrt(9 + 4 * b * b)
            assert w == pytest.approx([(5 - 10 * m - r) / 2, (5 - 10 * m + r) / 2], abs=1e-12)
            # the unhalved radical is not an eigenvalue of that matrix
            assert max(min(abs(E - x) for x in w) for E in printed_eq23_energies(b, m)) > 0.5


@pytest.mark.parametrize("twice_a", range(0, 14))
def test_exact_matrices_match_collocation(twice_a):
    for m in (0.15, 0.5, 0.85):
        p = PotentialParams(twice_a, -0.9, m)
        for s in enumerate_sectors(p):
            H = build_sector_matrix(p, s).entries
            assert np.max(np.abs(H - exact_sector_matrix(twice_a, -0.9, m, s))) < 1e-10


def test_edges_carry_vectors_and_nodes():
    p = PotentialParams(4, 1.0, 0.5)
    analytic = closed_form_edges(p)
    numeric = solve_band_edges(p)
    assert [s.nodes_4K for s in analytic] == [s.nodes_4K for s in numeric]
    for a_sol, n_sol in zip(analytic, numeric):
        assert a_sol.E == pytest.approx(n_sol.E, abs=1e-10)
        assert np.allclose(a_sol.coeffs, n_sol.coeffs, atol=1e-8)


def test_not_an_oracle():
    with pytest.raises(NotAnOracleError):
        closed_form_energies(5, 1.0, 0.5)
    with pytest.raises(NotAnOracleError):
        closed_form_edges(PotentialParams(6, 1.0, 0.5))


def test_modulus_checked():
    with pytest.raises(DomainError):
        closed_form_energies(2, 1.0, 1.2)
