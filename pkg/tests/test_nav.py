"""Navigation world: offsets, telescoping rewards, termination."""

import math
import random

import pytest

from eden.config import preset
from eden.errors import ContractError, GenerationError
from eden.nav import nav_reset, nav_step, new_nav_world


class TestReset:
    def test_starts_at_center(self):
        state, obs = nav_reset(0)
        assert (state.x, state.y) == (20.0, 20.0)
        assert obs.shape == (2,)
        assert list(obs) == [20.0, 20.0]

    def test_goal_is_a_river_spot(self):
        for seed in range(10):
            state, _ = nav_reset(seed)
            assert (int(state.goal_x), int(state.goal_y)) in state.rivers

    def test_same_seed_same_world(self):
        a, _ = nav_reset(42)
        b, _ = nav_reset(42)
        assert (a.goal_x, a.goal_y) == (b.goal_x, b.goal_y)
        assert a.rivers == b.rivers

    def test_seeds_vary_goals(self):
        goals = {nav_reset(s)[0].goal_x for s in range(20)}
        assert len(goals) > 1

    def test_requires_nav_section(self, day_and_night):
        with pytest.raises(GenerationError):
            new_nav_world(day_and_night, 0)


class TestStep:
    def test_offset_truncates_toward_zero(self):
        state, _ = nav_reset(0)
        state, obs, _, _ = nav_step(state, (3.7, -5.0))
        # 3.7 -> 3 -> clipped to 2; -5.0 -> -2
        assert list(obs) == [22.0, 18.0]

    def test_negative_fraction_truncates_up(self):
        state, _ = nav_reset(0)
        state, obs, _, _ = nav_step(state, (-0.9, 0.9))
        assert list(obs) == [20.0, 20.0]

    def test_position_clamped_to_map(self):
        state, _ = nav_reset(0)
        state.x, state.y = 0.0, 40.0
        state, obs, _, _ = nav_step(state, (-2.0, 2.0))
        assert list(obs) == [0.0, 40.0]

    def test_reward_is_squared_distance_decrease(self):
        state, _ = nav_reset(5)
        d2 = (state.x - state.goal_x) ** 2 + (state.y - state.goal_y) ** 2
        state, _, reward, _ = nav_step(state, (2.0, 0.0))
        d2_after = (state.x - state.goal_x) ** 2 + (state.y - state.goal_y) ** 2
        assert reward == pytest.approx(d2 - d2_after, abs=1e-12)

    def test_returns_telescope(self):
        rng = random.Random(9)
        for seed in range(20):
            state, _ = nav_reset(seed)
            start_d2 = (state.x - state.goal_x) ** 2 + (state.y - state.goal_y) ** 2
            total = 0.0
            while not state.done:
                off = (rng.uniform(-3, 3), rng.uniform(-3, 3))
                state, _, reward, _ = nav_step(state, off)
                total += reward
            final_d2 = (state.x - state.goal_x) ** 2 + (state.y - state.goal_y) ** 2
            assert abs(total - (start_d2 - final_d2)) <= 1e-9

    def test_horizon_bounds_episode(self):
        state, _ = nav_reset(1)
        steps = 0
        while not state.done:
            state, _, _, done = nav_step(state, (0.0, 0.0))
            steps += 1
            assert steps <= 20
        assert steps == state.cfg.nav.horizon == 20

    def test_reaching_goal_terminates_early(self):
        state, _ = nav_reset(2)
        state.x = state.goal_x + 1.0
        state.y = state.goal_y
        state, _, _, done = nav_step(state, (-1.0, 0.0))
        assert done
        assert state.distance_to_goal() < 0.1

    def test_step_after_done_raises(self):
        state, _ = nav_reset(3)
        for _ in range(20):
            nav_step(state, (0.0, 0.0))
        assert state.done
        with pytest.raises(ContractError):
            nav_step(state, (1.0, 0.0))

    def test_greedy_policy_reaches_goal(self):
        solved = 0
        for seed in range(10):
            state, _ = nav_reset(seed)
            while not state.done:
                dx = state.goal_x - state.x
                dy = state.goal_y - state.y
                off = (math.copysign(min(abs(dx), 2), dx), math.copysign(min(abs(dy), 2), dy))
                state, _, _, _ = nav_step(state, off)
            if state.distance_to_goal() < 0.1:
                solved += 1
        assert solved == 10  # center-to-goal is always within the horizon

    def test_copy_is_independent(self):
        state, _ = nav_reset(4)
        clone = state.copy()
        nav_step(state, (2.0, 2.0))
        assert (clone.x, clone.y) == (20.0, 20.0)
        assert clone.t == 0 and not clone.done
