import math

import numpy as np
import pytest

from helpers import multiset_deviation, subset_deviation
from qesband.errors import DomainError
from qesband.numeric_spectra import FloquetSpec, bound_states_line, floquet_edges
from qesband.potentials import PotentialParams, schrodinger_residual, v_companion, v_elliptic
from qesband.qes_core import solve_band_edges
from qesband.transforms import (
    CompanionParams,
    LimitKind,
    companion_edges,
    companion_psi,
    from_companion,
    limit_edges,
    to_companion,
)


class TestMaps:
    def test_examples(self):
        assert to_companion(PotentialParams(2, 0.0, 0.5)).beta == 0.0
        assert to_companion(PotentialParams(2, 1.0, 0.75)).beta == pytest.approx(-2.0, abs=1e-15)

    def test_round_trip(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            p = PotentialParams(int(rng.integers(0, 9)), rng.uniform(-3, 3), rng.uniform(0, 0.99))
            q = from_companion(to_companion(p))
            assert q.twice_a == p.twice_a and q.m == p.m
            assert q.b == pytest.approx(p.b, rel=1e-15, abs=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            to_companion(PotentialParams(2, 1.0, 1.0))
        with pytest.raises(DomainError):
            CompanionParams(2, float("nan"), 0.5)
        with pytest.raises(DomainError):
            CompanionParams(2, 1.0, 1.0)


class TestCompanionSpectrum:
    def test_energies_equal_exactly(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            c = CompanionParams(int(rng.integers(0, 5)), rng.uniform(-3, 3), rng.uniform(0.05, 0.95))
            mine = [s.E for s in companion_edges(c)]
            assert mine == [s.E for s in solve_band_edges(from_companion(c))]

    def test_floquet_runs_agree(self):
        rng = np.random.default_rng(12)
        for _ in range(10):
            twice_a = int(rng.integers(0, 5))
            c = CompanionParams(twice_a, rng.uniform(-3, 3), rng.uniform(0.05, 0.9))
            p = from_companion(c)
            bc = "periodic" if twice_a % 2 == 0 else "antiperiodic"
            wc = floquet_edges(FloquetSpec(p.period, bc, 128, lambda x: v_companion(x, c)), 24).eigenvalues
            we = floquet_edges(FloquetSpec(p.period, bc, 128, lambda x: v_elliptic(x, p)), 24).eigenvalues
            assert np.max(np.abs(wc - we)) < 1e-8
            assert subset_deviation([s.E for s in companion_edges(c)], wc) < 1e-6

    def test_companion_eigenfunctions_solve_equation(self):
        c = CompanionParams(3, 1.4, 0.6)
        p = from_companion(c)
        x = np.linspace(0, p.period, 1000)
        for sol in companion_edges(c):
            r = schrodinger_residual(lambda y: companion_psi(sol, c, y), lambda y: v_companion(y, c), sol.E, x)
            assert r < 1e-6

    def test_eigenfunctions_depend_on_beta(self):
        m = 1 - 1e-6
        x = np.linspace(-4, 4, 201)
        c1, c2 = CompanionParams(4, 0.5, m), CompanionParams(4, 1.5, m)
        s1, s2 = companion_edges(c1)[0], companion_edges(c2)[0]
        f1, f2 = companion_psi(s1, c1, x), companion_psi(s2, c2, x)
        f1, f2 = f1 / np.max(np.abs(f1)), f2 / np.max(np.abs(f2))
        assert abs(s1.E - s2.E) < 1e-2
        assert np.max(np.abs(f1 - f2)) > 1e-3

    def test_near_one_approaches_hyperbolic_levels(self):
        Es = [s.E for s in companion_edges(CompanionParams(4, 1.0, 1 - 1e-8))]
        assert multiset_deviation(Es, [-4, -4, -1, -1, 0]) < 1e-3


class TestLimits:
    def test_dsg_a1(self):
        b = 0.7
        r = math.sqrt(1 + 4 * b * b)
        assert limit_edges(1, b, "DSG_m0") == pytest.approx(sorted([1, (1 - r) / 2, (1 + r) / 2]), abs=1e-14)

    def test_dshg_half(self):
        b = 0.6
        assert limit_edges(0.5, b, LimitKind.DSHG_M1) == pytest.approx(sorted([(-1 - 2 * b) / 4, (-1 + 2 * b) / 4]))

    def test_hyperbolic_half(self):
        assert limit_edges("1/2", 3.3, "Hyperbolic_m1") == [-0.25, -0.25]

    @pytest.mark.parametrize("a", [0, 0.5, 1, 1.5, 2])
    def test_beta_independence_exact(self, a):
        ref = limit_edges(a, 0.5, "Hyperbolic_m1")
        for beta in (1.5, 3.0, -2.0):
            assert limit_edges(a, beta, "Hyperbolic_m1") == ref

    @pytest.mark.parametrize("a,beta", [(1, 0.7), (2, 1.5), (2, 0.5), (1.5, 1.0)])
    def test_hyperbolic_matches_bound_states(self, a, beta):
        limit = limit_edges(a, beta, "Hyperbolic_m1")
        bound = bound_states_line(a, beta).eigenvalues
        assert subset_deviation(bound, limit) < 1e-4
        assert set(np.round(bound, 3)) == {x for x in np.round(limit, 3) if x < -1e-6}

    def test_numeric_path_general_a(self):
        # a = 3 and a = 5/2 have no closed form; the extrapolated limits should be -(a - n)^2 and 0
        E3 = limit_edges(3, 1.0, "Hyperbolic_m1")
        assert multiset_deviation(E3, [-9, -9, -4, -4, -1, -1, 0]) < 1e-5
        bound = bound_states_line(2.5, 1.0).eigenvalues
        assert subset_deviation(bound, limit_edges(2.5, 1.0, "Hyperbolic_m1")) < 1e-4

    def test_dsg_general_a(self):
        Es = limit_edges(3, 1.0, "DSG_m0")
        assert Es == pytest.approx([s.E for s in solve_band_edges(PotentialParams(6, 1.0, 0.0))])

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            limit_edges(1, 1.0, "nope")
