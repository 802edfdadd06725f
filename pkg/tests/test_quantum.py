import itertools
from fractions import Fraction
from math import factorial

import numpy as np
import pytest
from scipy import integrate

from rho_moments.combinat import CycleType, lower_triangle_count
from rho_moments.errors import CapExceededError
from rho_moments.quantum import (
    EntryMomentSpec,
    ScaledRational,
    TraceProductExpr,
    det_lemma_value,
    entry_moment,
    hs_volume,
    int_lemma_value,
    mgf_coefficient,
    moment_traces,
    omega_expand,
    purity_mean,
)

from oracles import exact_det

F = Fraction


def bloch_ball_expectation(g):
    """Quadrature oracle for N=2 ensemble means of g(rho11, |rho12|^2).

    Integrating out rho22 with the trace delta leaves coordinates
    a = rho11 in [0,1] and the off-diagonal disk |c|^2 <= a(1-a); in
    u = |c|^2 the measure becomes 2*pi du da.
    """
    num, _ = integrate.dblquad(lambda u, a: 2 * np.pi * g(a, u), 0, 1, 0, lambda a: a * (1 - a))
    den, _ = integrate.quad(lambda a: 2 * np.pi * a * (1 - a), 0, 1)
    return num / den


class TestScaledRational:
    def test_zero_canonicalizes_exponent(self):
        assert ScaledRational(F(0), 5) == ScaledRational(F(0), 0)

    def test_to_float(self):
        value = ScaledRational(F(1, 6), 1)
        assert value.to_float() == pytest.approx(np.pi / 3)

    def test_multiplication(self):
        value = ScaledRational(F(1, 6), 1) * ScaledRational(F(3), 2)
        assert value == ScaledRational(F(1, 2), 3)
        assert ScaledRational(F(1, 10)) * F(5) == ScaledRational(F(1, 2))

    def test_str(self):
        assert str(ScaledRational(F(1, 6), 1)) == "1/6·(2π)^1"
        assert str(ScaledRational(F(3, 4))) == "3/4"


class TestHsVolume:
    def test_single_point(self):
        assert hs_volume(1) == ScaledRational(F(1), 0)

    def test_qubit_matches_quadrature(self):
        value = hs_volume(2)
        assert value == ScaledRational(F(1, 6), 1)
        oracle, _ = integrate.quad(lambda a: 2 * np.pi * a * (1 - a), 0, 1)
        assert value.to_float() == pytest.approx(oracle, rel=1e-10)

    def test_qutrit(self):
        assert hs_volume(3) == ScaledRational(F(2, factorial(8)), 3)


class TestDetLemma:
    @pytest.mark.parametrize(
        "beta,expected", [((0, 1), 1), ((0, 1, 2), 4), ((2, 2), 0)]
    )
    def test_goldens(self, beta, expected):
        assert det_lemma_value(beta) == expected

    def test_golden_against_determinant(self):
        for beta in [(0, 1), (0, 1, 2), (3, 0, 2)]:
            n = len(beta)
            matrix = [[factorial(i + beta[j]) for j in range(n)] for i in range(n)]
            assert det_lemma_value(beta) == exact_det(matrix)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            det_lemma_value((1, -1))


class TestIntLemma:
    def test_golden_matches_quadrature(self):
        # N=2, beta=(0,1): int_0^1 (1-2x)(1-x) dx after the delta collapse
        value = int_lemma_value((0, 1))
        assert value == F(1, 6)
        oracle, _ = integrate.quad(lambda x: (1 - 2 * x) * (1 - x), 0, 1)
        assert abs(float(value) - oracle) < 1e-10

    def test_repeated_entries_vanish(self):
        assert int_lemma_value((1, 1)) == 0
        assert int_lemma_value((0, 0, 0)) == 0

    @pytest.mark.parametrize("n", range(1, 5))
    def test_crosscheck_with_det_lemma(self, n):
        for beta in itertools.product(range(5), repeat=n):
            nu = sum(beta) + lower_triangle_count(n) + n - 1
            assert int_lemma_value(beta) * factorial(nu) == det_lemma_value(beta)


class TestMgfCoefficient:
    def test_zeroth_is_one(self):
        assert mgf_coefficient(0, 3, np.zeros((3, 3))) == 1.0

    def test_first_is_normalized_trace(self):
        rng = np.random.default_rng(0)
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        assert mgf_coefficient(1, 3, a) == pytest.approx(np.trace(a) / 3)

    @pytest.mark.parametrize("n", (2, 3, 4))
    @pytest.mark.parametrize("k", range(0, 7))
    def test_identity_series_term(self, n, k):
        # At A = I the K-th coefficient must be 1/K! so the series sums to e
        assert mgf_coefficient(k, n, np.eye(n)) == pytest.approx(1 / factorial(k))

    @pytest.mark.parametrize("n", (2, 3))
    @pytest.mark.parametrize("k", range(1, 5))
    def test_route_consistency_with_moment_traces(self, n, k):
        rng = np.random.default_rng(100 * n + k)
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        a = (g + g.conj().T) / 2
        series_term = factorial(k) * mgf_coefficient(k, n, a)
        direct = moment_traces([a] * k)
        assert abs(direct - series_term) <= 1e-9 * (1 + abs(direct))


class TestOmegaExpand:
    def test_single_box(self):
        expr = omega_expand(CycleType((1,)), 1)
        assert expr.terms == {((1,),): F(1)}

    def test_full_cycle_pattern(self):
        expr = omega_expand(CycleType((0, 0, 0, 1)), 4)
        # 24 permutations collapse onto (4-1)! = 6 distinct cyclic words
        assert len(expr.terms) == 6
        assert set(expr.terms.values()) == {F(4)}
        assert expr.total_coefficient() == 24

    def test_pair_product_pattern(self):
        expr = omega_expand(CycleType((0, 2)), 4)
        assert len(expr.terms) == 3
        assert set(expr.terms.values()) == {F(8)}
        assert expr.total_coefficient() == 24

    def test_mixed_pattern(self):
        expr = omega_expand(CycleType((2, 1)), 4)
        assert expr.total_coefficient() == 24
        assert expr.terms[((1, 2), (3,), (4,))] == F(4)

    def test_box_weight_mismatch(self):
        with pytest.raises(ValueError):
            omega_expand(CycleType((1,)), 2)

    def test_evaluate_matches_product_rule(self):
        rng = np.random.default_rng(4)
        mats = [rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(2)]
        expr = omega_expand(CycleType((0, 1)), 2)  # t2 pattern
        expected = 2 * np.trace(mats[0] @ mats[1])
        assert expr.evaluate(mats) == pytest.approx(expected)


class TestTraceProductExpr:
    def test_rejects_incomplete_cover(self):
        with pytest.raises(ValueError):
            TraceProductExpr(3, {((1, 2),): F(1)})

    def test_canonicalizes_rotations(self):
        a = TraceProductExpr(3, {((2, 3, 1),): F(1)})
        b = TraceProductExpr(3, {((1, 2, 3),): F(1)})
        assert a == b

    def test_entry_pair_evaluation(self):
        expr = TraceProductExpr(2, {((1, 2),): F(1)})
        assert expr.evaluate_entry_pairs(((1, 2), (2, 1))) == 1
        assert expr.evaluate_entry_pairs(((1, 2), (1, 2))) == 0


class TestMomentTraces:
    def test_k1_closed_form(self):
        rng = np.random.default_rng(8)
        for n in (2, 3, 4):
            c = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            assert moment_traces([c]) == pytest.approx(np.trace(c) / n)

    def test_k2_closed_form(self):
        rng = np.random.default_rng(9)
        for n in (2, 3, 4):
            c1 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            c2 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            expected = (n * np.trace(c1) * np.trace(c2) + np.trace(c1 @ c2)) / (
                n * (n * n + 1)
            )
            assert moment_traces([c1, c2]) == pytest.approx(expected)

    def test_k2_identity_observables(self):
        assert moment_traces([np.eye(3), np.eye(3)]) == 1.0

    @pytest.mark.parametrize("n", (2, 3, 4))
    @pytest.mark.parametrize("k", range(1, 7))
    def test_trace_power_normalization(self, n, k):
        assert moment_traces([np.eye(n)] * k) == 1.0 + 0.0j

    def test_cycle_relabeling_invariance(self):
        diagonals = [np.diag([1.0, 2.0, 5.0]), np.diag([3.0, 7.0, 2.0]), np.diag([4.0, 1.0, 6.0])]
        values = {moment_traces(list(p)) for p in itertools.permutations(diagonals)}
        assert len(values) == 1

    def test_cap_enforced(self):
        with pytest.raises(CapExceededError):
            moment_traces([np.eye(2)] * 9)
        assert moment_traces([np.eye(2)] * 3, max_boxes=3) == 1.0

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            moment_traces([np.eye(2), np.eye(3)])


class TestEntryMoment:
    @pytest.mark.parametrize("n", range(1, 5))
    def test_diagonal_mean(self, n):
        assert entry_moment(EntryMomentSpec(n, ((1, 1),))) == F(1, n)

    def test_offdiag_pair_golden(self):
        value = entry_moment(EntryMomentSpec(2, ((1, 2), (2, 1))))
        assert value == F(1, 10)
        oracle = bloch_ball_expectation(lambda a, u: u)
        assert abs(float(value) - oracle) < 1e-9

    def test_diag_square_golden(self):
        value = entry_moment(EntryMomentSpec(2, ((1, 1), (1, 1))))
        assert value == F(3, 10)
        oracle = bloch_ball_expectation(lambda a, u: a * a)
        assert abs(float(value) - oracle) < 1e-9

    def test_phase_asymmetric_moment_vanishes(self):
        # rho12 picks up a free phase under diagonal-unitary conjugation
        assert entry_moment(EntryMomentSpec(2, ((1, 1), (1, 1), (1, 2)))) == 0

    def test_matches_moment_traces_with_selector_matrices(self):
        n = 3
        rng = np.random.default_rng(12)
        for _ in range(10):
            k = int(rng.integers(1, 4))
            pairs = tuple((int(rng.integers(1, n + 1)), int(rng.integers(1, n + 1))) for _ in range(k))
            selectors = []
            for i, j in pairs:
                c = np.zeros((n, n))
                c[i - 1, j - 1] = 1.0
                selectors.append(c)
            exact = entry_moment(EntryMomentSpec(n, pairs))
            numeric = moment_traces(selectors)
            assert abs(numeric - float(exact)) < 1e-12

    @pytest.mark.parametrize("n", (2, 3))
    def test_swap_invariance_exhaustive(self, n):
        indices = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
        for k in (1, 2, 3):
            for pairs in itertools.combinations_with_replacement(indices, k):
                spec = EntryMomentSpec(n, pairs)
                assert entry_moment(spec) == entry_moment(spec.swapped())

    def test_cap_enforced(self):
        with pytest.raises(CapExceededError):
            entry_moment(EntryMomentSpec(2, ((1, 1),) * 9))

    def test_out_of_range_pair_rejected(self):
        with pytest.raises(ValueError):
            EntryMomentSpec(2, ((1, 3),))


class TestPurityMean:
    @pytest.mark.parametrize(
        "n,expected", [(1, F(1)), (2, F(4, 5)), (3, F(3, 5))]
    )
    def test_goldens(self, n, expected):
        assert purity_mean(n) == expected

    @pytest.mark.parametrize("n", range(1, 7))
    def test_closed_form(self, n):
        assert purity_mean(n) == F(2 * n, n * n + 1)

    def test_qubit_matches_bloch_quadrature(self):
        oracle = bloch_ball_expectation(lambda a, u: a * a + (1 - a) ** 2 + 2 * u)
        assert abs(float(purity_mean(2)) - oracle) < 1e-9


class TestOmegaRouteAgainstEntryMoments:
    @pytest.mark.parametrize("k", (1, 2, 3))
    def test_exhaustive_n2(self, k):
        from rho_moments.characters import dim_char_sum

        poly = dim_char_sum(k, 2)
        prefactor = F(factorial(3), factorial(k + 3))
        expansions = {
            key: omega_expand(CycleType(key), k) for key in poly.terms
        }
        indices = [(i, j) for i in range(1, 3) for j in range(1, 3)]
        for pairs in itertools.product(indices, repeat=k):
            via_omega = sum(
                (coeff * expansions[key].evaluate_entry_pairs(pairs) for key, coeff in poly.terms.items()),
                F(0),
            )
            assert prefactor * via_omega == entry_moment(EntryMomentSpec(2, pairs))
