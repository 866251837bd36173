"""Wavefunction sampling, normalization, node counting, oracle comparison."""

import math
from fractions import Fraction

import numpy as np
import pytest

from qhj import get_model
from qhj.errors import InvalidStateError
from qhj.polynomial_system import solve_spectrum
from qhj.schrodinger_oracle import solve_band_edges, solve_bound
from qhj.wavefunction_assembly import (L2_ONE, SUP_NORM_ONE, assemble,
                                       overlap, parity_deviation,
                                       subspace_overlap,
                                       verify_against_oracle)

HALF = Fraction(1, 2)


@pytest.fixture(scope="module")
def scarf_pair():
    model = get_model("scarf1", A=2, B=HALF, alpha=1)
    return solve_spectrum(model, levels=3), solve_bound(model, k=3)


class TestAssemble:
    def test_sup_normalization_and_zeros(self):
        xs = np.linspace(0.1, math.pi - 0.1, 801)
        wf = assemble(lambda x: np.sin(3 * x), xs)
        assert wf.normalization == SUP_NORM_ONE
        assert np.max(np.abs(wf.values)) == pytest.approx(1.0)
        assert wf.is_real
        assert wf.node_count() == 2
        assert list(wf.zero_locations) == pytest.approx(
            [math.pi / 3, 2 * math.pi / 3], abs=1e-5)

    def test_l2_normalization(self):
        xs = np.linspace(0.0, math.pi, 2001)
        wf = assemble(lambda x: np.sin(x), xs, normalization=L2_ONE)
        norm = np.sqrt(np.trapezoid(np.abs(wf.values) ** 2, xs))
        assert norm == pytest.approx(1.0, abs=1e-6)

    def test_complex_profile_zero_at_grid_point(self):
        xs = np.linspace(0.0, 2.0, 201)  # hits x = 1 exactly
        wf = assemble(lambda x: np.exp(1j * x) * (x - 1.0), xs)
        assert not wf.is_real
        assert list(wf.zero_locations) == pytest.approx([1.0], abs=1e-9)

    def test_rejects_identically_zero_profiles(self):
        xs = np.linspace(0.0, 1.0, 101)
        with pytest.raises(InvalidStateError):
            assemble(lambda x: np.zeros_like(x), xs)

    def test_rejects_non_finite_profiles(self):
        xs = np.linspace(0.0, 1.0, 101)
        with np.errstate(divide="ignore"):
            with pytest.raises(InvalidStateError):
                assemble(lambda x: 1.0 / (x - 0.5), xs)


class TestOverlapHelpers:
    def test_orthogonal_modes_do_not_overlap(self):
        xs = np.linspace(0.0, math.pi, 4001)
        assert overlap(np.sin(xs), np.sin(2 * xs)) < 1e-10

    def test_subspace_overlap_inside_the_span(self):
        xs = np.linspace(0.0, math.pi, 4001)
        basis = [np.sin(xs), np.sin(2 * xs)]
        mix = 0.6 * np.sin(xs) - 0.8 * np.sin(2 * xs)
        assert subspace_overlap(mix, basis) == pytest.approx(1.0, abs=1e-10)
        assert subspace_overlap(np.sin(3 * xs), basis) < 1e-10


class TestOracleComparison:
    def test_levels_match_with_node_counts(self, scarf_pair):
        spectrum, oracle = scarf_pair
        for level, sol in enumerate(spectrum.solutions):
            report = verify_against_oracle(sol.recipe, oracle, level)
            assert report.passed
            assert report.overlap > 1 - 1e-6
            assert report.modulus_deviation < 1e-4
            assert report.predicted_nodes == report.oracle_nodes == level

    def test_report_is_scale_invariant(self, scarf_pair):
        spectrum, oracle = scarf_pair
        recipe = spectrum.solutions[1].recipe
        base = verify_against_oracle(recipe, oracle, 1)
        scaled = verify_against_oracle(lambda x: -3.0 * recipe(x), oracle, 1)
        assert scaled.overlap == pytest.approx(base.overlap, abs=1e-12)
        assert scaled.modulus_deviation == pytest.approx(
            base.modulus_deviation, abs=1e-12)

    def test_mismatched_level_fails_loudly(self, scarf_pair):
        spectrum, oracle = scarf_pair
        report = verify_against_oracle(spectrum.solutions[0].recipe, oracle, 2)
        assert not report.passed
        assert report.overlap < 0.5

    def test_degenerate_cluster_uses_subspace_projection(self):
        model = get_model("assoc_lame_qes", a=Fraction(7, 2), b=HALF, m=HALF)
        spectrum = solve_spectrum(model, levels=8)
        top = float(np.real(spectrum.solutions[-1].energy))
        oracle = solve_band_edges(model, k=5, emax=top + 0.5)
        # the algebraic level set is a strict subset of the full edge list
        assert oracle.eigenvalues[7] == pytest.approx(top, abs=5e-4)
        assert oracle.eigenvalues[8] == pytest.approx(top, abs=5e-4)
        pair = spectrum.solutions[-2:]
        for sol in pair:
            report = verify_against_oracle(sol.recipe, oracle, 7,
                                           cluster_levels=[7, 8],
                                           check_nodes=False)
            assert report.overlap > 1 - 1e-6
        xs = oracle.xs
        a = np.asarray(pair[0].recipe(xs), dtype=complex)
        b = np.asarray(pair[1].recipe(xs), dtype=complex)
        assert overlap(a, b) < 1e-8  # genuinely independent eigenfunctions


class TestParity:
    def test_lame_ground_state_is_even_about_the_cell_center(self):
        model = get_model("lame", j=2, m=HALF)
        ground = solve_spectrum(model, levels=6).solutions[0]
        center = sum(model.x_window()) / 2
        assert parity_deviation(ground.recipe, center, 1.0, "even") < 1e-12
        assert parity_deviation(ground.recipe, center, 1.0, "odd") > 1.0

    def test_alternating_parity_up_the_lame_tower(self):
        model = get_model("lame", j=2, m=HALF)
        spectrum = solve_spectrum(model, levels=6)
        center = sum(model.x_window()) / 2
        # sn is even about the half-period, so only the cn exponent flips
        # sign there and the edge states alternate parity strictly
        expected = ["even", "odd", "even", "odd", "even"]
        for sol, par in zip(spectrum.solutions, expected):
            assert parity_deviation(sol.recipe, center, 1.0, par) < 1e-10
