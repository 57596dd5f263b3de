import math

import numpy as np
import pytest

from amdriver import (
    DeterministicAction,
    InstructionArray,
    PayoffSchedule,
    born_distribution,
    compare,
    crossovers,
    sweep,
    three_intersection_schedule,
)

GHZ_ID = (1, 6)  # {001, 110}
W_ID = (1, 2, 4)  # {001, 010, 100}
GHZ_PRIME_ID = (3, 4)  # {011, 100}

# Frozen from a 10^7-point grid maximization of 5p - p^2 - 3p^3.
N5_COIN_P = 0.6424811092361409
N5_COIN_PAYOFF = 2.004009705545369


def single_point_curve(n):
    return sweep(n, n + 1e-6, 1.0)


class TestCompare:
    def test_two_intersection_classic(self):
        result = compare(PayoffSchedule((0, 4), 1))
        assert result.deterministic.payoff == 1.0
        assert result.deterministic.action is DeterministicAction.ALWAYS_CONTINUE
        assert result.probabilistic.p_star == pytest.approx(2 / 3, abs=1e-9)
        assert result.probabilistic.payoff == pytest.approx(4 / 3, abs=1e-9)
        assert result.quantum.payoff == pytest.approx(2.0, abs=1e-12)
        assert result.quantum.vertex_id == (1, 2)

    def test_quantum_state_realizes_the_vertex(self):
        result = compare(PayoffSchedule((0, 5, 4), 1))
        assert result.quantum.payoff == pytest.approx(3.0, abs=1e-12)
        assert result.quantum.vertex_id == W_ID
        dist = born_distribution(result.quantum.state)
        assert {v.to_int() for v in dist.support} == set(W_ID)

    def test_all_zero_payoffs_collapse(self):
        result = compare(PayoffSchedule((0, 0), 0))
        assert result.deterministic.payoff == 0.0
        assert result.probabilistic.payoff == 0.0
        assert result.quantum.payoff == 0.0

    def test_ordering_invariant(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            n = int(rng.integers(2, 5))
            schedule = PayoffSchedule(tuple(rng.uniform(0, 10, n)), rng.uniform(0, 10))
            result = compare(schedule)
            assert result.quantum.payoff >= result.probabilistic.payoff - 1e-9
            assert result.probabilistic.payoff >= result.deterministic.payoff - 2e-9


class TestThreeIntersectionSchedule:
    def test_midrange(self):
        schedule = three_intersection_schedule(5)
        assert schedule.exit_payoffs == (0.0, 5.0, 4.0)
        assert schedule.motel_payoff == 1.0

    def test_boundary_zero(self):
        assert three_intersection_schedule(0).exit_payoffs == (0.0, 0.0, 4.0)

    def test_rejects_negative(self):
        with pytest.raises(ValueError, match="nonnegative"):
            three_intersection_schedule(-1)

    def test_both_optima_meet_at_two(self):
        result = compare(three_intersection_schedule(2))
        assert result.quantum.payoff == pytest.approx(2.0, abs=1e-12)
        assert result.quantum.vertex_id in (GHZ_ID, W_ID)


class TestSweep:
    def test_low_range_prefers_anticorrelated_pair(self):
        row = single_point_curve(1.0).rows[0]
        assert row.quantum == pytest.approx(2.0, abs=1e-12)
        assert row.optimal_vertex_id == GHZ_ID

    def test_high_range_prefers_half_split_pair(self):
        row = single_point_curve(10.0).rows[0]
        assert row.quantum == pytest.approx(5.0, abs=1e-12)
        assert row.optimal_vertex_id == GHZ_PRIME_ID

    def test_midrange_values(self):
        row = single_point_curve(5.0).rows[0]
        assert row.quantum == pytest.approx(3.0, abs=1e-12)
        assert row.probabilistic == pytest.approx(N5_COIN_PAYOFF, abs=1e-9)

    def test_midrange_coin_probability(self):
        from amdriver import probabilistic_optimum

        p_star, payoff = probabilistic_optimum(three_intersection_schedule(5))
        assert p_star == pytest.approx(N5_COIN_P, abs=1e-9)
        assert payoff == pytest.approx(N5_COIN_PAYOFF, abs=1e-9)

    def test_grid_is_inclusive_and_increasing(self):
        curve = sweep(0.0, 12.0, 0.1)
        assert len(curve.n_values) == 121
        assert curve.n_values[0] == 0.0
        assert curve.n_values[-1] == pytest.approx(12.0, abs=1e-9)
        assert all(b > a for a, b in zip(curve.n_values, curve.n_values[1:]))

    def test_rejects_bad_grid(self):
        with pytest.raises(ValueError, match="n_min"):
            sweep(5.0, 1.0, 0.1)
        with pytest.raises(ValueError, match="step"):
            sweep(0.0, 1.0, 0.0)

    def test_quantum_curve_piecewise_closed_form(self):
        curve = sweep(0.0, 12.0, 0.1)
        for row in curve.rows:
            want = max(2.0, (4.0 + row.n) / 3.0, row.n / 2.0)
            assert row.quantum == pytest.approx(want, abs=1e-9)

    def test_deterministic_curve_constant(self):
        curve = sweep(0.0, 12.0, 0.5)
        assert all(row.deterministic == 1.0 for row in curve.rows)

    def test_pointwise_dominance_with_gaps(self):
        curve = sweep(0.0, 12.0, 0.1)
        for row in curve.rows:
            assert row.quantum >= row.probabilistic - 1e-9
            assert row.probabilistic >= row.deterministic - 1e-9
        by_n = {round(row.n, 6): row for row in curve.rows}
        for n in (1.0, 5.0, 10.0):
            row = by_n[n]
            assert row.quantum - row.probabilistic >= 0.3
            assert row.probabilistic - row.deterministic >= 0.05

    def test_optimal_vertex_regions(self):
        curve = sweep(0.0, 12.0, 0.1)
        for row in curve.rows:
            if 0 < row.n < 2 - 1e-9:
                assert row.optimal_vertex_id == GHZ_ID
            elif 2 + 1e-9 < row.n < 8 - 1e-9:
                assert row.optimal_vertex_id == W_ID
            elif row.n > 8 + 1e-9:
                assert row.optimal_vertex_id == GHZ_PRIME_ID


class TestCrossovers:
    def test_full_sweep_finds_both(self):
        curve = sweep(0.0, 12.0, 0.1)
        found = crossovers(curve)
        assert len(found) == 2
        first, second = found
        assert first.n == pytest.approx(2.0, abs=1e-6)
        assert (first.vertex_before, first.vertex_after) == (GHZ_ID, W_ID)
        assert second.n == pytest.approx(8.0, abs=1e-6)
        assert (second.vertex_before, second.vertex_after) == (W_ID, GHZ_PRIME_ID)

    def test_constant_region_has_none(self):
        assert crossovers(sweep(9.0, 12.0, 0.5)) == []

    def test_narrow_sweep_single_crossover(self):
        found = crossovers(sweep(0.0, 3.0, 0.1))
        assert len(found) == 1
        assert found[0].n == pytest.approx(2.0, abs=1e-6)

    def test_rejects_single_row(self):
        with pytest.raises(ValueError, match="two rows"):
            crossovers(single_point_curve(1.0))
