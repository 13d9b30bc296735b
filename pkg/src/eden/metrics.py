"""Task-difficulty metrics: completion-time estimators and PIC.

Three families of tools live here:

* Completion-time bounds for a task. `estimate_ttmn` gives the minimum
  steps an optimal agent needs; `ttmx_analytic` gives the steps a
  uniform-random agent needs to complete the task with probability
  `th`, computed from a per-stage success model; `ttmx_monte_carlo`
  estimates the same quantity empirically and serves as the oracle the
  analytic form is validated against; `ttmn_search` proves the minimum
  by breadth-first search over short action sequences.

* Goal ladders: partitions of [ttmn, ttmx] into completion deadlines of
  increasing slack.

* PIC (policy information capacity): the mutual information between
  episode scores and which policy produced them, estimated with
  histogram entropies. High PIC means policy identity predicts returns,
  i.e. the task differentiates policies.

The completion model behind the analytic estimator: a task needs E
required actions in order (stage j succeeds with probability p*_j per
step); every other step is a useless-but-harmless action (probability
p_j); remaining mass is an aborting outcome. First-completion
probabilities follow by dynamic programming over (stage, elapsed).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .act import action_count, decode
from .config import override, preset
from .engine import WorldState, new_fixed_world, step
from .errors import UnreachableThresholdError
from .rng import SplitMix64, mix

Events = Sequence[tuple]


@dataclass(frozen=True)
class TaskSpec:
    """A completion-detectable task.

    `predicate` reads the episode's accumulated event stream and must be
    monotone: once true it stays true as events append.
    """

    task_id: str
    predicate: Callable[[Events], bool]
    horizon: int


@dataclass(frozen=True)
class AnalyticDifficultyParams:
    """Per-stage success model for the analytic completion-time CDF.

    g: required non-move action count; e: expected move steps;
    p_required[j]: chance the stage-j required action happens on a given
    step; p_useless[j]: chance of a valid action that leaves stage j
    unchanged. Lists have length ceil(g + e).
    """

    g: int
    e: float
    p_required: tuple[float, ...]
    p_useless: tuple[float, ...]
    th: float = 0.9

    def __post_init__(self):
        stages = estimate_ttmn(self.g, self.e)
        if len(self.p_required) != stages or len(self.p_useless) != stages:
            raise ValueError(f"probability lists must have length {stages} (= ceil(g + e))")
        for p in self.p_required:
            if not 0.0 < p <= 1.0:
                raise ValueError("required-action probabilities must lie in (0, 1]")
        for j, p in enumerate(self.p_useless):
            if not 0.0 <= p < 1.0:
                raise ValueError("useless-action probabilities must lie in [0, 1)")
            if self.p_required[j] + p > 1.0 + 1e-12:
                raise ValueError("per-stage probabilities must sum to at most 1")
        if not 0.9 <= self.th < 1.0:
            raise ValueError("threshold must lie in [0.9, 1)")

    @property
    def stages(self) -> int:
        return len(self.p_required)


def estimate_ttmn(g: float, e: float) -> int:
    """Minimum completion time under the additive decomposition."""
    if g < 0 or e < 0:
        raise ValueError("g and e must be non-negative")
    return math.ceil(g + e)


def first_completion_cdf(params: AnalyticDifficultyParams, t: int) -> float:
    """Probability the task is first completed at or before step t."""
    if t < 0:
        raise ValueError("t must be non-negative")
    E = params.stages
    if E == 0:
        return 1.0
    if t < E:
        return 0.0
    # mass[j] = probability of currently needing required action j+1,
    # having neither completed nor aborted. Stepping either advances a
    # stage, stays put (useless action), or drops out of the model.
    mass = [0.0] * E
    mass[0] = 1.0
    total = 0.0
    for _ in range(t):
        carry = 0.0
        for j in range(E):
            advanced = mass[j] * params.p_required[j]
            mass[j] = mass[j] * params.p_useless[j] + carry
            carry = advanced
        total += carry  # mass leaving the last stage completes the task
    return total


def ttmx_analytic(params: AnalyticDifficultyParams, bound: int = 1_000_000) -> int:
    """Smallest t whose first-completion CDF reaches params.th."""
    E = params.stages
    if E == 0:
        return 0
    # The CDF's limit is the product of per-stage completion masses;
    # below th the threshold can never be crossed.
    limit = 1.0
    for ps, pu in zip(params.p_required, params.p_useless):
        limit *= ps / (1.0 - pu)
    if limit < params.th:
        raise UnreachableThresholdError(
            f"completion probability converges to {limit:.6g} < threshold {params.th}"
        )
    mass = [0.0] * E
    mass[0] = 1.0
    total = 0.0
    for t in range(1, bound + 1):
        carry = 0.0
        for j in range(E):
            advanced = mass[j] * params.p_required[j]
            mass[j] = mass[j] * params.p_useless[j] + carry
            carry = advanced
        total += carry
        if total >= params.th:
            return t
    raise UnreachableThresholdError(f"threshold {params.th} not reached within {bound} steps")


# ---------------------------------------------------------------------------
# Monte-Carlo oracle

@dataclass(frozen=True)
class MonteCarloReport:
    """Empirical first-completion distribution from random rollouts."""

    rollouts: int
    max_t: int
    th: float
    base_seed: int
    counts: tuple[int, ...]  # counts[t] = rollouts first completing at step t
    ttmx: int | None  # None when the threshold was not reached by max_t
    unreachable: bool

    @property
    def completions(self) -> int:
        return sum(self.counts)

    def cdf(self) -> list[float]:
        out = []
        acc = 0
        for c in self.counts:
            acc += c
            out.append(acc / self.rollouts)
        return out

    def to_dict(self) -> dict:
        return {
            "rollouts": self.rollouts,
            "max_t": self.max_t,
            "th": self.th,
            "base_seed": self.base_seed,
            "completions": self.completions,
            "ttmx": self.ttmx,
            "unreachable": self.unreachable,
            "cdf": self.cdf(),
        }


def _rollout_first_completion(
    template: WorldState, task: TaskSpec, preset_name: str, n_actions: int, seed: int, max_t: int
) -> int | None:
    world = template.copy()
    rng = SplitMix64(seed)
    events: list[tuple] = []
    if task.predicate(events):
        return 0
    for t in range(1, max_t + 1):
        cmd = decode(preset_name, rng.randrange(n_actions), world)
        out = step(world, cmd)
        events.extend(out.events)
        if task.predicate(events):
            return t
        if out.done:
            return None
    return None


def _mc_chunk(args) -> list[int]:
    factory, task, preset_name, start, length, base_seed, max_t = args
    template = factory()
    n_actions = action_count(preset_name)
    counts = [0] * (max_t + 1)
    for i in range(start, start + length):
        t = _rollout_first_completion(template, task, preset_name, n_actions, base_seed + i, max_t)
        if t is not None:
            counts[t] += 1
    return counts


def ttmx_monte_carlo(
    factory: Callable[[], WorldState],
    task: TaskSpec,
    th: float,
    rollouts: int,
    max_t: int,
    preset_name: str = "baseline9",
    base_seed: int = 0,
    workers: int = 1,
) -> MonteCarloReport:
    """Estimate the threshold completion time by uniform-random rollouts.

    Rollout i always uses policy seed base_seed + i, so the report is
    identical for any worker count. A threshold the rollouts never reach
    yields an unreachable report rather than an error.
    """
    if rollouts < 1:
        raise ValueError("rollouts must be >= 1")
    if not 0.0 < th < 1.0:
        raise ValueError("th must lie in (0, 1)")
    counts = [0] * (max_t + 1)
    if workers > 1:
        chunk = -(-rollouts // (workers * 4))
        jobs = []
        start = 0
        while start < rollouts:
            length = min(chunk, rollouts - start)
            jobs.append((factory, task, preset_name, start, length, base_seed, max_t))
            start += length
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_mc_chunk, jobs):
                for t, c in enumerate(part):
                    counts[t] += c
    else:
        counts = _mc_chunk((factory, task, preset_name, 0, rollouts, base_seed, max_t))

    ttmx = None
    acc = 0
    for t, c in enumerate(counts):
        acc += c
        if acc >= th * rollouts:
            ttmx = t
            break
    return MonteCarloReport(
        rollouts=rollouts,
        max_t=max_t,
        th=th,
        base_seed=base_seed,
        counts=tuple(counts),
        ttmx=ttmx,
        unreachable=ttmx is None,
    )


def ttmn_search(
    factory: Callable[[], WorldState],
    task: TaskSpec,
    bound: int,
    preset_name: str = "baseline9",
) -> int | None:
    """Shortest completing action-sequence length, or None within bound.

    Exhaustive breadth-first search over action sequences; intended for
    small worlds and small bounds.
    """
    root = factory()
    if task.predicate(()):
        return 0
    n_actions = action_count(preset_name)
    frontier: list[tuple[WorldState, tuple]] = [(root, ())]
    for depth in range(1, bound + 1):
        nxt: list[tuple[WorldState, tuple]] = []
        for world, events in frontier:
            for a in range(n_actions):
                w = world.copy()
                out = step(w, decode(preset_name, a, w))
                ev = events + tuple(out.events)
                if task.predicate(ev):
                    return depth
                if not out.done:
                    nxt.append((w, ev))
        frontier = nxt
        if not frontier:
            break
    return None


# ---------------------------------------------------------------------------
# Goal ladders

@dataclass(frozen=True)
class Goal:
    level: int
    deadline: int  # complete at or before this step


@dataclass(frozen=True)
class GoalLadder:
    ttmn: int
    ttmx: int
    breakpoints: tuple[int, ...]
    goals: tuple[Goal, ...]

    def to_dict(self) -> dict:
        return {
            "ttmn": self.ttmn,
            "ttmx": self.ttmx,
            "breakpoints": list(self.breakpoints),
            "goals": [{"level": g.level, "deadline": g.deadline} for g in self.goals],
        }


def goal_ladder(ttmn: int, ttmx: int, n: int, breakpoints: Sequence[int] | None = None) -> GoalLadder:
    """Split [ttmn, ttmx] into n deadlines of increasing slack.

    Goal at level i+1 must be completed at or before breakpoint a_i; the
    default breakpoints cut the interval into n equal integer parts.
    """
    if not 2 <= n <= ttmx - ttmn:
        raise ValueError("need 2 <= n <= ttmx - ttmn")
    if breakpoints is None:
        span = ttmx - ttmn
        points = tuple(ttmn + (i * span) // n for i in range(n + 1))
    else:
        points = tuple(int(b) for b in breakpoints)
        if len(points) != n + 1:
            raise ValueError(f"need exactly {n + 1} breakpoints")
        if points[0] != ttmn or points[-1] != ttmx:
            raise ValueError("breakpoints must run from ttmn to ttmx")
        if any(b >= c for b, c in zip(points, points[1:])):
            raise ValueError("breakpoints must be strictly increasing")
    goals = tuple(Goal(level=i + 1, deadline=points[i]) for i in range(n))
    return GoalLadder(ttmn=ttmn, ttmx=ttmx, breakpoints=points, goals=goals)


# ---------------------------------------------------------------------------
# PIC

def _histogram_probs(samples: np.ndarray, lo: float, hi: float, bins: int) -> np.ndarray:
    counts, _ = np.histogram(samples, bins=bins, range=(lo, hi))
    return counts / len(samples)


def pic_estimate(reward_samples: Sequence[Sequence[float]], bins: int) -> float:
    """Mutual information between rewards and policy identity.

    Histograms use `bins` equal-width cells over the pooled min-max
    range; entropies are in nats. A degenerate pooled range returns 0.
    The result always lies in [0, ln bins].
    """
    if len(reward_samples) < 2:
        raise ValueError("need at least two policies")
    if bins < 2:
        raise ValueError("need at least two bins")
    arrays = [np.asarray(s, dtype=np.float64) for s in reward_samples]
    if any(a.size == 0 for a in arrays):
        raise ValueError("every policy needs at least one sample")
    lo = min(float(a.min()) for a in arrays)
    hi = max(float(a.max()) for a in arrays)
    if lo == hi:
        return 0.0

    def entropy(p: np.ndarray) -> float:
        nz = p[p > 0.0]
        return float(-(nz * np.log(nz)).sum())

    per_policy = [_histogram_probs(a, lo, hi, bins) for a in arrays]
    mixture = np.mean(per_policy, axis=0)
    value = entropy(mixture) - sum(entropy(p) for p in per_policy) / len(per_policy)
    return min(max(value, 0.0), math.log(bins))


def _softmax(logits: np.ndarray) -> np.ndarray:
    z = np.exp(logits - logits.max())
    return z / z.sum()


def _sample_index(probs: np.ndarray, u: float) -> int:
    acc = 0.0
    for i, p in enumerate(probs):
        acc += p
        if u < acc:
            return i
    return len(probs) - 1


def pic_over_goals(
    factory: Callable[[], WorldState],
    task: TaskSpec,
    ladder: GoalLadder,
    n_policies: int,
    episodes_per_policy: int,
    bins: int,
    preset_name: str = "baseline9",
    prior_seed: int = 0,
    max_t: int | None = None,
    base_seed: int = 0,
) -> list[float]:
    """Per-goal PIC for a ladder, under a random-logit policy prior.

    Policy i draws one logit per action from a standard normal (seeded
    by prior_seed) and samples actions through a softmax. Each episode's
    first-completion time is scored against every goal deadline (1 if
    completed in time, else 0), so one batch of rollouts prices the
    whole ladder.
    """
    if n_policies < 2:
        raise ValueError("need at least two policies")
    if episodes_per_policy < 1:
        raise ValueError("need at least one episode per policy")
    horizon = max_t if max_t is not None else max(g.deadline for g in ladder.goals)
    n_actions = action_count(preset_name)
    template = factory()

    times: list[list[int | None]] = []
    for i in range(n_policies):
        prior = SplitMix64(mix(prior_seed, i))
        logits = np.array([prior.normal() for _ in range(n_actions)])
        probs = _softmax(logits)
        completions: list[int | None] = []
        for j in range(episodes_per_policy):
            world = template.copy()
            rng = SplitMix64(mix(base_seed, i * episodes_per_policy + j))
            events: list[tuple] = []
            done_at: int | None = 0 if task.predicate(events) else None
            t = 0
            while done_at is None and t < horizon:
                t += 1
                cmd = decode(preset_name, _sample_index(probs, rng.uniform()), world)
                out = step(world, cmd)
                events.extend(out.events)
                if task.predicate(events):
                    done_at = t
                elif out.done:
                    break
            completions.append(done_at)
        times.append(completions)

    out = []
    for goal in ladder.goals:
        samples = [
            [1.0 if t is not None and t <= goal.deadline else 0.0 for t in policy_times]
            for policy_times in times
        ]
        out.append(pic_estimate(samples, bins))
    return out


# ---------------------------------------------------------------------------
# The reference micro-task

def obtain_water_world() -> WorldState:
    """A 3x3 world with one river beside the agent; nothing else."""
    cfg = override(preset("day_and_night"), map_width=3, map_height=3, life_limit=300)
    return new_fixed_world(cfg, agent_pos=(0, 0), placements=(("river", 1, 1),), seed=11)


def _water_picked(events: Events) -> bool:
    return any(ev[0] == "pickup" and ev[1] == "water" for ev in events)


def obtain_water_task() -> TaskSpec:
    """Obtain water: collect from the river, then pick the drop up."""
    return TaskSpec(task_id="obtain_water", predicate=_water_picked, horizon=300)


def obtain_water_params(th: float = 0.9) -> AnalyticDifficultyParams:
    """The matched analytic model for obtain_water under baseline9.

    Two required stages (collect, then pick), each hit by exactly one of
    the nine actions; the other eight never break reachability on the
    3x3 map, so p* = 1/9 and p = 8/9 per stage, exactly.
    """
    return AnalyticDifficultyParams(
        g=2, e=0.0, p_required=(1 / 9, 1 / 9), p_useless=(8 / 9, 8 / 9), th=th
    )


@dataclass(frozen=True)
class DifficultyReport:
    """Bundle of difficulty numbers for one task, as the CLI emits it."""

    task_id: str
    ttmn_hat: int
    ttmx_hat: int
    mc_ttmn: int | None = None
    mc_report: MonteCarloReport | None = None
    ladder: GoalLadder | None = None
    goal_pic: list[float] | None = None
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.ttmn_hat > self.ttmx_hat:
            raise ValueError("ttmn_hat must not exceed ttmx_hat")

    def to_dict(self) -> dict:
        out = {"task": self.task_id, "ttmn_hat": self.ttmn_hat, "ttmx_hat": self.ttmx_hat}
        if self.mc_ttmn is not None:
            out["mc_ttmn"] = self.mc_ttmn
        if self.mc_report is not None:
            out["monte_carlo"] = self.mc_report.to_dict()
        if self.ladder is not None:
            out["ladder"] = self.ladder.to_dict()
        if self.goal_pic is not None:
            out["goal_pic"] = self.goal_pic
        out.update(self.extras)
        return out
