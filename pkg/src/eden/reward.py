"""Reward shaping variants and per-step reward computation.

A reward spec maps event types from a step outcome to scalar rewards.
Three variants ship:

  dense        full shaping table (the default)
  deceptive    dense with consume-when-needed zeroed and pickup
               inflated, so hoarding looks better than surviving
  sparse       +1 for each consume of meat or water, nothing else
  very_sparse  -1 once, when the episode ends

`compute_reward` is pure: it reads only the outcome's event list and
flags, so replaying a recorded episode reproduces rewards bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .engine import StepOutcome

DENSE_TABLE: dict[str, float] = {
    "kill": 5.0,
    "hit": 1.0,
    "collect": 1.0,
    "pickup": 1.0,
    "consume_needed": 5.0,
    "consume_full": -1.0,
    "synthesize": 3.0,
    "equip": 1.0,
    "fail": -1.0,
    "step": -0.01,
    "death": -10.0,
}

VARIANTS = ("dense", "deceptive", "sparse", "very_sparse")


@dataclass(frozen=True)
class RewardSpec:
    variant: str
    table: dict[str, float]
    sparse_value: float = 1.0
    terminal_value: float = -1.0


def reward_spec(variant: str = "dense") -> RewardSpec:
    if variant == "dense":
        return RewardSpec("dense", dict(DENSE_TABLE))
    if variant == "deceptive":
        table = dict(DENSE_TABLE)
        table["consume_needed"] = 0.0
        table["pickup"] = 5.0
        return RewardSpec("deceptive", table)
    if variant == "sparse":
        return RewardSpec("sparse", {})
    if variant == "very_sparse":
        return RewardSpec("very_sparse", {})
    raise ValueError(f"unknown reward variant {variant!r}")


def compute_reward(prev, cmd, outcome: StepOutcome, done: bool, spec: RewardSpec) -> float:
    """Score one transition under a reward spec.

    `prev` (the world before the step) and `cmd` are part of the
    transition but the shipped variants only need the outcome's event
    list and the done flag; both are accepted so callers can pass the
    full transition uniformly.
    """
    if spec.variant == "sparse":
        total = 0.0
        for ev in outcome.events:
            if ev[0] == "consume" and ev[1] in ("meat", "water"):
                total += spec.sparse_value
        return total
    if spec.variant == "very_sparse":
        return spec.terminal_value if done else 0.0

    table = spec.table
    total = table["step"]
    if not outcome.result:
        total += table["fail"]
    for ev in outcome.events:
        tag = ev[0]
        if tag == "consume":
            total += table["consume_needed"] if ev[2] else table["consume_full"]
        elif tag == "kill":
            total += table["kill"]
        elif tag == "hit":
            total += table["hit"]
        elif tag == "collect":
            total += table["collect"]
        elif tag == "pickup":
            total += table["pickup"]
        elif tag == "synthesize":
            total += table["synthesize"]
        elif tag == "equip":
            total += table["equip"]
        elif tag == "death":
            total += table["death"]
    return total


def episode_return(rewards, gamma: float = 1.0) -> float:
    """Discounted sum of a reward sequence."""
    total = 0.0
    scale = 1.0
    for r in rewards:
        total += scale * r
        scale *= gamma
    return total


def table_json(spec: RewardSpec) -> str:
    return json.dumps({"variant": spec.variant, "table": spec.table}, sort_keys=True)
