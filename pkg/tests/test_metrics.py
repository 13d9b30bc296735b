"""Difficulty metrics: completion-time estimators, ladders, PIC."""

import math
import random

import numpy as np
import pytest

from eden.errors import UnreachableThresholdError
from eden.metrics import (
    AnalyticDifficultyParams,
    DifficultyReport,
    TaskSpec,
    estimate_ttmn,
    first_completion_cdf,
    goal_ladder,
    obtain_water_params,
    obtain_water_task,
    obtain_water_world,
    pic_estimate,
    pic_over_goals,
    ttmn_search,
    ttmx_analytic,
    ttmx_monte_carlo,
)


def toy(p_req, p_use, th=0.9):
    g = len(p_req)
    return AnalyticDifficultyParams(g=g, e=0.0, p_required=p_req, p_useless=p_use, th=th)


class TestEstimateTtmn:
    def test_integer_decomposition(self):
        assert estimate_ttmn(2, 0) == 2

    def test_fractional_moves_round_up(self):
        assert estimate_ttmn(2, 3.5) == 6

    def test_empty_task(self):
        assert estimate_ttmn(0, 0) == 0

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            estimate_ttmn(-1, 0)
        with pytest.raises(ValueError):
            estimate_ttmn(0, -0.5)


class TestCompletionCdf:
    def test_single_stage_values(self):
        params = toy((0.5,), (0.5,))
        assert first_completion_cdf(params, 1) == pytest.approx(0.5)
        assert first_completion_cdf(params, 2) == pytest.approx(0.75)

    def test_zero_steps(self):
        assert first_completion_cdf(toy((0.5,), (0.5,)), 0) == 0.0

    def test_before_stage_count_is_zero(self):
        params = toy((0.5, 0.5), (0.25, 0.25))
        assert first_completion_cdf(params, 1) == 0.0

    def test_stageless_task_is_complete(self):
        params = AnalyticDifficultyParams(g=0, e=0.0, p_required=(), p_useless=())
        assert first_completion_cdf(params, 0) == 1.0
        assert ttmx_analytic(params) == 0

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            first_completion_cdf(toy((0.5,), (0.5,)), -1)

    def test_single_stage_closed_form(self):
        ps, pu = 0.4, 0.35
        params = toy((ps,), (pu,))
        for t in range(1, 21):
            expected = ps * (1 - pu**t) / (1 - pu)
            assert first_completion_cdf(params, t) == pytest.approx(expected, abs=1e-12)

    def test_matches_independent_recursion(self):
        # f(stage, k): completion chance within k steps starting at stage
        p_req = (0.3, 0.5, 0.25)
        p_use = (0.2, 0.1, 0.5)

        def f(stage, k):
            if stage == len(p_req):
                return 1.0
            if k == 0:
                return 0.0
            return p_req[stage] * f(stage + 1, k - 1) + p_use[stage] * f(stage, k - 1)

        params = toy(p_req, p_use)
        for t in (0, 1, 2, 3, 5, 8, 13):
            assert first_completion_cdf(params, t) == pytest.approx(f(0, t), abs=1e-12)

    def test_monotone_in_t(self):
        params = obtain_water_params()
        values = [first_completion_cdf(params, t) for t in range(0, 120)]
        assert all(a <= b + 1e-15 for a, b in zip(values, values[1:]))


class TestTtmxAnalytic:
    def test_toy_golden(self):
        assert ttmx_analytic(toy((0.5,), (0.5,))) == 4

    def test_deterministic_task_needs_one_step(self):
        assert ttmx_analytic(toy((1.0,), (0.0,), th=0.99)) == 1

    def test_crossing_matches_cdf(self):
        params = obtain_water_params(0.9)
        t = ttmx_analytic(params)
        assert first_completion_cdf(params, t) >= 0.9
        assert first_completion_cdf(params, t - 1) < 0.9

    def test_obtain_water_goldens(self):
        assert ttmx_analytic(obtain_water_params(0.9)) == 34
        assert ttmx_analytic(obtain_water_params(0.95)) == 41
        assert ttmx_analytic(obtain_water_params(0.99)) == 57

    def test_non_decreasing_in_threshold(self):
        values = [ttmx_analytic(obtain_water_params(th)) for th in (0.9, 0.95, 0.99)]
        assert values == sorted(values)

    def test_easier_stages_never_slower(self):
        slow = toy((0.2, 0.2), (0.8, 0.8))
        fast = toy((0.4, 0.4), (0.6, 0.6))
        assert ttmx_analytic(fast) <= ttmx_analytic(slow)

    def test_unreachable_threshold(self):
        # completion mass converges to 0.1/0.5 = 0.2 < 0.9
        with pytest.raises(UnreachableThresholdError):
            ttmx_analytic(toy((0.1,), (0.5,)))


class TestParamsValidation:
    def test_wrong_list_length(self):
        with pytest.raises(ValueError):
            AnalyticDifficultyParams(g=2, e=0.0, p_required=(0.5,), p_useless=(0.5,))

    def test_required_probability_range(self):
        with pytest.raises(ValueError):
            toy((0.0,), (0.5,))
        with pytest.raises(ValueError):
            toy((1.1,), (0.0,))

    def test_useless_probability_range(self):
        with pytest.raises(ValueError):
            toy((0.5,), (1.0,))
        with pytest.raises(ValueError):
            toy((0.5,), (-0.1,))

    def test_mass_must_not_exceed_one(self):
        with pytest.raises(ValueError):
            toy((0.6,), (0.5,))

    def test_threshold_range(self):
        with pytest.raises(ValueError):
            toy((0.5,), (0.5,), th=0.5)
        with pytest.raises(ValueError):
            toy((0.5,), (0.5,), th=1.0)


class TestSearchAndMonteCarlo:
    def test_obtain_water_minimum_is_two(self):
        assert ttmn_search(obtain_water_world, obtain_water_task(), bound=3) == 2

    def test_satisfied_at_reset(self):
        task = TaskSpec("noop", lambda events: True, horizon=10)
        assert ttmn_search(obtain_water_world, task, bound=2) == 0

    def test_bound_too_small_finds_nothing(self):
        assert ttmn_search(obtain_water_world, obtain_water_task(), bound=1) is None

    def test_mc_report_shape(self):
        report = ttmx_monte_carlo(
            obtain_water_world, obtain_water_task(), th=0.5, rollouts=300, max_t=200
        )
        assert report.rollouts == 300
        assert not report.unreachable
        assert isinstance(report.ttmx, int)
        cdf = report.cdf()
        assert all(a <= b for a, b in zip(cdf, cdf[1:]))
        assert cdf[report.ttmx] >= 0.5 > cdf[report.ttmx - 1]
        assert report.completions <= 300

    def test_mc_deterministic_for_seed(self):
        a = ttmx_monte_carlo(obtain_water_world, obtain_water_task(), 0.5, 100, 120, base_seed=7)
        b = ttmx_monte_carlo(obtain_water_world, obtain_water_task(), 0.5, 100, 120, base_seed=7)
        assert a.counts == b.counts and a.ttmx == b.ttmx

    def test_mc_worker_count_invisible(self):
        serial = ttmx_monte_carlo(obtain_water_world, obtain_water_task(), 0.5, 120, 120)
        parallel = ttmx_monte_carlo(
            obtain_water_world, obtain_water_task(), 0.5, 120, 120, workers=2
        )
        assert serial.counts == parallel.counts
        assert serial.ttmx == parallel.ttmx

    def test_mc_unreachable_threshold(self):
        task = TaskSpec("never", lambda events: False, horizon=10)
        report = ttmx_monte_carlo(obtain_water_world, task, th=0.5, rollouts=20, max_t=10)
        assert report.unreachable and report.ttmx is None
        assert report.completions == 0

    def test_mc_validation(self):
        with pytest.raises(ValueError):
            ttmx_monte_carlo(obtain_water_world, obtain_water_task(), 0.5, 0, 10)
        with pytest.raises(ValueError):
            ttmx_monte_carlo(obtain_water_world, obtain_water_task(), 1.5, 10, 10)

    def test_mc_to_dict(self):
        report = ttmx_monte_carlo(obtain_water_world, obtain_water_task(), 0.5, 50, 80)
        blob = report.to_dict()
        assert blob["rollouts"] == 50
        assert blob["ttmx"] == report.ttmx
        assert len(blob["cdf"]) == 81


class TestGoalLadder:
    def test_even_split(self):
        ladder = goal_ladder(2, 10, 4)
        assert ladder.breakpoints == (2, 4, 6, 8, 10)
        assert [g.deadline for g in ladder.goals] == [2, 4, 6, 8]
        assert [g.level for g in ladder.goals] == [1, 2, 3, 4]

    def test_uneven_span_still_covers(self):
        ladder = goal_ladder(3, 10, 3)
        assert ladder.breakpoints[0] == 3 and ladder.breakpoints[-1] == 10
        assert all(a < b for a, b in zip(ladder.breakpoints, ladder.breakpoints[1:]))

    def test_custom_breakpoints(self):
        ladder = goal_ladder(2, 10, 3, breakpoints=(2, 3, 7, 10))
        assert [g.deadline for g in ladder.goals] == [2, 3, 7]

    def test_custom_breakpoints_validated(self):
        with pytest.raises(ValueError):
            goal_ladder(2, 10, 3, breakpoints=(2, 3, 10))  # wrong count
        with pytest.raises(ValueError):
            goal_ladder(2, 10, 3, breakpoints=(3, 5, 7, 10))  # must start at ttmn
        with pytest.raises(ValueError):
            goal_ladder(2, 10, 3, breakpoints=(2, 7, 5, 10))  # not increasing

    def test_n_range(self):
        with pytest.raises(ValueError):
            goal_ladder(2, 10, 1)
        with pytest.raises(ValueError):
            goal_ladder(2, 10, 9)

    def test_to_dict(self):
        blob = goal_ladder(2, 10, 4).to_dict()
        assert blob["breakpoints"] == [2, 4, 6, 8, 10]
        assert blob["goals"][0] == {"level": 1, "deadline": 2}


class TestPic:
    def test_identical_distributions_carry_no_information(self):
        rng = np.random.default_rng(0)
        shared = rng.normal(size=500)
        assert pic_estimate([shared, shared.copy()], bins=16) <= 1e-12

    def test_disjoint_constants_hit_log2(self):
        a = [0.0] * 400
        b = [1.0] * 400
        assert abs(pic_estimate([a, b], bins=2) - math.log(2)) <= 1e-9

    def test_bounded_by_log_bins(self):
        rng = random.Random(123)
        for _ in range(100):
            n_pol = rng.randint(2, 5)
            bins = rng.randint(2, 12)
            samples = [
                [rng.gauss(rng.uniform(-2, 2), rng.uniform(0.1, 2)) for _ in range(rng.randint(1, 60))]
                for _ in range(n_pol)
            ]
            value = pic_estimate(samples, bins)
            assert 0.0 <= value <= math.log(bins) + 1e-12

    def test_sample_order_irrelevant(self):
        rng = np.random.default_rng(5)
        a = list(rng.normal(size=200))
        b = list(rng.normal(loc=2.0, size=200))
        base = pic_estimate([a, b], bins=8)
        shuffled = pic_estimate([a[::-1], list(np.random.default_rng(9).permutation(b))], bins=8)
        assert base == pytest.approx(shuffled, abs=1e-12)

    def test_affine_rescaling_irrelevant(self):
        # integer-valued samples keep everything far from bin edges
        a = [0.0, 1.0, 2.0, 3.0, 4.0] * 20
        b = [5.0, 6.0, 7.0, 8.0, 9.0] * 20
        base = pic_estimate([a, b], bins=5)
        scaled = pic_estimate([[2 * x + 10 for x in a], [2 * x + 10 for x in b]], bins=5)
        assert base == pytest.approx(scaled, abs=1e-12)

    def test_degenerate_range_is_zero(self):
        assert pic_estimate([[3.0, 3.0], [3.0, 3.0]], bins=4) == 0.0

    def test_preconditions(self):
        with pytest.raises(ValueError):
            pic_estimate([[1.0, 2.0]], bins=4)
        with pytest.raises(ValueError):
            pic_estimate([[1.0], [2.0]], bins=1)
        with pytest.raises(ValueError):
            pic_estimate([[1.0], []], bins=4)


class TestPicOverGoals:
    def test_ladder_smoke(self):
        ladder = goal_ladder(2, 34, 4)
        values = pic_over_goals(
            obtain_water_world,
            obtain_water_task(),
            ladder,
            n_policies=2,
            episodes_per_policy=20,
            bins=2,
        )
        assert len(values) == 4
        assert all(0.0 <= v <= math.log(2) + 1e-12 for v in values)

    def test_trivial_goal_carries_no_information(self):
        task = TaskSpec("noop", lambda events: True, horizon=10)
        ladder = goal_ladder(2, 10, 2)
        values = pic_over_goals(
            obtain_water_world, task, ladder, n_policies=2, episodes_per_policy=5, bins=2
        )
        assert values == [0.0, 0.0]

    def test_preconditions(self):
        ladder = goal_ladder(2, 10, 2)
        with pytest.raises(ValueError):
            pic_over_goals(obtain_water_world, obtain_water_task(), ladder, 1, 5, 2)
        with pytest.raises(ValueError):
            pic_over_goals(obtain_water_world, obtain_water_task(), ladder, 2, 0, 2)


class TestDifficultyReport:
    def test_bounds_ordered(self):
        with pytest.raises(ValueError):
            DifficultyReport("t", ttmn_hat=5, ttmx_hat=3)

    def test_to_dict_minimal(self):
        blob = DifficultyReport("t", 2, 34).to_dict()
        assert blob == {"task": "t", "ttmn_hat": 2, "ttmx_hat": 34}

    def test_to_dict_with_ladder(self):
        report = DifficultyReport("t", 2, 10, ladder=goal_ladder(2, 10, 2), extras={"note": 1})
        blob = report.to_dict()
        assert blob["ladder"]["ttmn"] == 2
        assert blob["note"] == 1
