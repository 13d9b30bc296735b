"""Continuous-offset navigation world on a 40x40 map.

The agent starts at the map center and must reach a goal picked from the
generated river spots. Per step the caller supplies a real-valued offset
pair; components are rounded toward zero and clipped to the configured
limit (x grows rightward, y grows upward). The reward is the decrease in
squared Euclidean distance to the goal, so episode returns telescope to
d2(start) - d2(final) exactly.
"""

from __future__ import annotations

import math

import numpy as np

from .config import WorldConfig, preset
from .errors import ContractError, GenerationError
from .rng import SplitMix64

# Headings for the river random walk, king-move adjacency.
_HEADINGS = ((1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1))


class NavState:
    __slots__ = ("cfg", "seed", "x", "y", "goal_x", "goal_y", "t", "done", "rivers")

    def __init__(self, cfg: WorldConfig, seed: int) -> None:
        self.cfg = cfg
        self.seed = seed
        self.x = cfg.map_width / 2.0
        self.y = cfg.map_height / 2.0
        self.t = 0
        self.done = False
        self.rivers: tuple[tuple[int, int], ...] = ()
        self.goal_x = 0.0
        self.goal_y = 0.0

    def observation(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=np.float64)

    def distance_to_goal(self) -> float:
        return math.hypot(self.x - self.goal_x, self.y - self.goal_y)

    def copy(self) -> "NavState":
        s = NavState.__new__(NavState)
        s.cfg = self.cfg
        s.seed = self.seed
        s.x = self.x
        s.y = self.y
        s.goal_x = self.goal_x
        s.goal_y = self.goal_y
        s.t = self.t
        s.done = self.done
        s.rivers = self.rivers
        return s


def new_nav_world(cfg: WorldConfig, seed: int) -> NavState:
    """Generate rivers and a goal for (cfg, seed); agent at the center."""
    if cfg.nav is None:
        raise GenerationError("config has no navigation section")
    state = NavState(cfg, seed)
    rng = SplitMix64(seed)
    w, h = cfg.map_width, cfg.map_height

    spots: set[tuple[int, int]] = set()
    for _ in range(cfg.nav.river_count):
        x = rng.randrange(w)
        y = rng.randrange(h)
        heading = _HEADINGS[rng.randrange(8)]
        for _ in range(cfg.nav.river_length):
            spots.add((x, y))
            if rng.uniform() >= 0.7:  # meander: occasionally change heading
                heading = _HEADINGS[rng.randrange(8)]
            x = min(max(x + heading[0], 0), w - 1)
            y = min(max(y + heading[1], 0), h - 1)
    if not spots:
        raise GenerationError("river generation produced no spots")
    state.rivers = tuple(sorted(spots))

    # The goal is the river spot nearest to a uniformly drawn anchor point.
    anchor_x = rng.uniform() * w
    anchor_y = rng.uniform() * h
    best = None
    best_d2 = math.inf
    for sx, sy in state.rivers:
        d2 = (sx - anchor_x) ** 2 + (sy - anchor_y) ** 2
        if d2 < best_d2:
            best = (sx, sy)
            best_d2 = d2
    state.goal_x = float(best[0])
    state.goal_y = float(best[1])
    return state


def nav_reset(seed: int, cfg: WorldConfig | None = None) -> tuple[NavState, np.ndarray]:
    """Fresh navigation episode; returns (state, observation)."""
    state = new_nav_world(cfg if cfg is not None else preset("navigation40"), seed)
    return state, state.observation()


def nav_step(state: NavState, offset: tuple[float, float]) -> tuple[NavState, np.ndarray, float, bool]:
    """Apply one offset. Returns (state, observation, reward, done)."""
    if state.done:
        raise ContractError("cannot step a finished navigation episode")
    nav = state.cfg.nav
    limit = nav.offset_limit
    ox = int(offset[0])  # int() truncates toward zero
    oy = int(offset[1])
    ox = min(max(ox, -limit), limit)
    oy = min(max(oy, -limit), limit)

    prev_d2 = (state.x - state.goal_x) ** 2 + (state.y - state.goal_y) ** 2
    state.x = min(max(state.x + ox, 0.0), float(state.cfg.map_width))
    state.y = min(max(state.y + oy, 0.0), float(state.cfg.map_height))
    new_d2 = (state.x - state.goal_x) ** 2 + (state.y - state.goal_y) ** 2
    reward = prev_d2 - new_d2

    state.t += 1
    if math.sqrt(new_d2) < nav.goal_distance or state.t >= nav.horizon:
        state.done = True
    return state, state.observation(), reward, state.done
