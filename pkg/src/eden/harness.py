"""Episode execution, built-in policies, and trajectory logs.

An episode record captures everything needed to audit a run without
storing observations: the config digest, the seed, and per-step action
indices, decoded commands, rewards, event lists, and a 64-bit FNV-1a
digest of each post-step observation vector. `replay` re-executes the
recorded actions on a fresh world and reports any divergence, which is
the package's determinism check.

Policies are world-reading callables built from a PolicySpec. The
scripted survival policy demonstrates that the default world is
survivable far past its idle lifetime using only the baseline action
set; it is a rule chain, not a learner.
"""

from __future__ import annotations

import csv
import hashlib
import json
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .act import ACTION_PRESETS, action_count, decode
from .config import WorldConfig, serialize_config
from .engine import WorldState, new_world, step
from .nav import NavState, nav_step
from .obs import observe
from .reward import RewardSpec, compute_reward, reward_spec
from .rng import ALGORITHM_ID, SplitMix64

SCHEMA = "episode/v1"

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for b in data:
        h = ((h ^ b) * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


def obs_digest(vector) -> str:
    """FNV-1a 64 over the little-endian float64 bytes of a vector."""
    buf = np.asarray(vector, dtype="<f8").tobytes()
    return f"{fnv1a64(buf):016x}"


def config_digest(cfg: WorldConfig) -> str:
    return hashlib.sha256(serialize_config(cfg).encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# Policies

POLICY_KINDS = ("idle", "random", "scripted_survival", "nav_greedy", "random_logit")


@dataclass(frozen=True)
class PolicySpec:
    kind: str
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in POLICY_KINDS:
            raise ValueError(f"unknown policy kind {self.kind!r}")
        if self.kind in ("random", "random_logit") and self.seed is None:
            raise ValueError(f"policy {self.kind!r} needs an explicit seed")


@dataclass(frozen=True)
class PresetBundle:
    obs: str = "baseline"
    act: str = "baseline9"
    reward: str = "dense"


def make_policy(spec: PolicySpec, bundle: PresetBundle):
    """Build a callable world -> action index for a survival world."""
    n = action_count(bundle.act)
    names = ACTION_PRESETS[bundle.act]
    if spec.kind == "idle":
        idle_index = names.index("idle")
        return lambda world: idle_index
    if spec.kind == "random":
        rng = SplitMix64(spec.seed)
        return lambda world: rng.randrange(n)
    if spec.kind == "random_logit":
        rng = SplitMix64(spec.seed)
        logits = np.array([rng.normal() for _ in range(n)])
        z = np.exp(logits - logits.max())
        probs = z / z.sum()

        def logit_policy(world) -> int:
            u = rng.uniform()
            acc = 0.0
            for i, p in enumerate(probs):
                acc += p
                if u < acc:
                    return i
            return n - 1

        return logit_policy
    if spec.kind == "scripted_survival":
        if bundle.act != "baseline9":
            raise ValueError("scripted_survival drives the baseline9 action set")
        return _scripted_survival
    raise ValueError(f"policy {spec.kind!r} does not drive survival worlds")


_IDX_ATTACK = 0
_IDX_COLLECT = 1
_IDX_PICKUP = 2
_IDX_CONSUME = 3
_IDX_SYNTH = 4
_IDX_EQUIP = 6
_IDX_MOVE = 7

_WATER_PILE = 24
_WOOD_STOCK = 2
_MEAT_STOCK = 4


def _nearest_visible(world: WorldState, kind: str):
    from .engine import vision_radius

    r = vision_radius(world)
    ax, ay = world.agent.x, world.agent.y
    best = None
    for e in world.entities.values():
        if e.kind != kind:
            continue
        dx, dy = e.x - ax, e.y - ay
        if -r <= dx <= r and -r <= dy <= r:
            key = (dx * dx + dy * dy, e.eid)
            if best is None or key < best[0]:
                best = (key, e, max(abs(dx), abs(dy)))
    return (best[1], best[2]) if best else (None, None)


def _kind_at(world: WorldState, x: int, y: int) -> str | None:
    for e in world.entities.values():
        if e.x == x and e.y == y:
            return e.kind
    return None


def _ground_in_reach(world: WorldState, item: str) -> int:
    a = world.agent
    total = 0
    for ox in (-1, 0, 1):
        for oy in (-1, 0, 1):
            cell = world.ground.get((a.x + ox, a.y + oy))
            if cell:
                total += cell.get(item, 0)
    return total


def _scripted_survival(world: WorldState) -> int:
    """Rule chain: eat/drink when low, loot, pile water at a river bank
    before loading it, hunt when hungry, craft and wear a torch,
    otherwise explore.

    The bank pile exists because auto-collect targets by backpack
    scarcity: one picked-up water flips it to trees, so the policy
    collects with the pack empty (drops accrue on the ground) and only
    then lets pickups chain the whole pile into one stack."""
    a = world.agent
    cap = world.cfg.life_limit
    low = 0.4 * cap

    # Consume when the pressing bar is low and the auto-chosen item is
    # held; failing that, grab whatever is in reach and retry next tick.
    if a.satiety < low or a.thirsty < low:
        needed = "meat" if a.satiety <= a.thirsty else "water"
        bar = a.satiety if needed == "meat" else a.thirsty
        if bar < low:
            if world.backpack_count(needed) > 0:
                return _IDX_CONSUME
            if decode("baseline9", _IDX_PICKUP, world).verb == "pick":
                return _IDX_PICKUP

    pig, dist = _nearest_visible(world, "pig")
    # A pig in reach is always meat on the hoof; killing it also ends
    # the chase so the next target pulls the walk in a fresh direction.
    if pig is not None and dist <= 1:
        return _IDX_ATTACK

    # Stock up when the auto-collect target is in reach and still
    # wanted. This must outrank the loot rule: picking up mid-pile
    # would flip the scarcity target away from the river.
    cmd = decode("baseline9", _IDX_COLLECT, world)
    if cmd.verb == "collect" and max(abs(cmd.p1 - a.x), abs(cmd.p2 - a.y)) <= 1:
        kind = _kind_at(world, cmd.p1, cmd.p2)
        has_torch = a.equipment.get("hand") == "torch" or world.backpack_count("torch") > 0
        if (
            kind == "river"
            and _ground_in_reach(world, "water") < _WATER_PILE
            and (a.satiety > low or world.backpack_count("meat") > 0)
        ):
            return _IDX_COLLECT
        if kind == "tree" and not has_torch and world.backpack_count("wood") < _WOOD_STOCK:
            return _IDX_COLLECT

    # Loot anything within arm's reach.
    if decode("baseline9", _IDX_PICKUP, world).verb == "pick":
        return _IDX_PICKUP

    # Torchcraft: wear one if held, build one if wood allows.
    if a.equipment.get("hand") is None and world.backpack_count("torch") > 0:
        return _IDX_EQUIP
    if (
        a.equipment.get("hand") != "torch"
        and world.backpack_count("torch") == 0
        and world.backpack_count("wood") >= 2
    ):
        return _IDX_SYNTH

    # Thirst search. The only steerable movement is the pig chase: a
    # chased pig flees straight away from the agent, so following a pig
    # whose flee bearing points at visible water carries the agent
    # there; killing a misaligned pig re-aims at the next-nearest one.
    if a.thirsty < 0.7 * cap and world.backpack_count("water") == 0:
        river, rdist = _nearest_visible(world, "river")
        if river is not None and rdist is not None and rdist > 1 and pig is not None:
            fx = (pig.x > a.x) - (pig.x < a.x)
            fy = (pig.y > a.y) - (pig.y < a.y)
            ux = (river.x > a.x) - (river.x < a.x)
            uy = (river.y > a.y) - (river.y < a.y)
            if fx * ux + fy * uy >= 1:
                return _IDX_MOVE

    # Chase only while hungry, low on meat, and not dying of thirst.
    if (
        pig is not None
        and a.satiety < 0.7 * cap
        and world.backpack_count("meat") < _MEAT_STOCK
        and (a.thirsty >= 0.6 * cap or world.backpack_count("water") > 0)
    ):
        return _IDX_MOVE

    # Explore (ballistic walk when no pig is visible).
    return _IDX_MOVE


def nav_greedy(state: NavState) -> tuple[int, int]:
    """Clip the goal direction to the per-step offset box."""
    lim = state.cfg.nav.offset_limit
    dx = int(max(-lim, min(lim, state.goal_x - state.x)))
    dy = int(max(-lim, min(lim, state.goal_y - state.y)))
    return (dx, dy)


def make_nav_policy(spec: PolicySpec):
    if spec.kind == "nav_greedy":
        return nav_greedy
    if spec.kind == "random":
        rng = SplitMix64(spec.seed)

        def random_offsets(state: NavState) -> tuple[int, int]:
            lim = state.cfg.nav.offset_limit
            span = 2 * lim + 1
            return (rng.randrange(span) - lim, rng.randrange(span) - lim)

        return random_offsets
    raise ValueError(f"policy {spec.kind!r} does not drive navigation worlds")


# ---------------------------------------------------------------------------
# Episode records

@dataclass
class EpisodeRecord:
    schema: str
    config_digest: str
    seed: int
    rng_algorithm: str
    bundle: dict
    policy: dict
    steps: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def to_lines(self) -> list[str]:
        header = {
            "schema": self.schema,
            "config_digest": self.config_digest,
            "seed": self.seed,
            "rng_algorithm": self.rng_algorithm,
            "bundle": self.bundle,
            "policy": self.policy,
        }
        lines = [json.dumps(header, sort_keys=True)]
        lines.extend(json.dumps(s, sort_keys=True) for s in self.steps)
        lines.append(json.dumps({"summary": self.summary}, sort_keys=True))
        return lines


def _cmd_dict(cmd) -> dict:
    return {"verb": cmd.verb, "p1": cmd.p1, "p2": cmd.p2, "untargeted": cmd.untargeted}


def run_episode(
    cfg: WorldConfig, seed: int, bundle: PresetBundle, policy_spec: PolicySpec
) -> EpisodeRecord:
    """Run one survival episode to completion and record every step."""
    world = new_world(cfg, seed)
    if not isinstance(world, WorldState):
        raise ValueError("run_episode drives survival worlds; use run_nav_episode")
    policy = make_policy(policy_spec, bundle)
    rspec = reward_spec(bundle.reward)
    record = EpisodeRecord(
        schema=SCHEMA,
        config_digest=config_digest(cfg),
        seed=seed,
        rng_algorithm=ALGORITHM_ID,
        bundle={"obs": bundle.obs, "act": bundle.act, "reward": bundle.reward},
        policy={"kind": policy_spec.kind, "seed": policy_spec.seed},
    )
    total = 0.0
    t = 0
    while not world.done:
        t += 1
        idx = policy(world)
        cmd = decode(bundle.act, idx, world)
        out = step(world, cmd)
        r = compute_reward(None, cmd, out, out.done, rspec)
        total += r
        record.steps.append(
            {
                "t": t,
                "action": idx,
                "cmd": _cmd_dict(cmd),
                "result": out.result,
                "reward": r,
                "done": out.done,
                "events": [list(ev) for ev in out.events],
                "obs_digest": obs_digest(observe(world, bundle.obs)),
            }
        )
    record.summary = {
        "lifetime": t,
        "total_reward": total,
        "cause": world.cause or "",
    }
    return record


def run_nav_episode(cfg: WorldConfig, seed: int, policy_spec: PolicySpec) -> EpisodeRecord:
    """Run one navigation episode; actions are (dx, dy) offsets."""
    state = new_world(cfg, seed)
    if not isinstance(state, NavState):
        raise ValueError("run_nav_episode drives navigation worlds")
    policy = make_nav_policy(policy_spec)
    record = EpisodeRecord(
        schema=SCHEMA,
        config_digest=config_digest(cfg),
        seed=seed,
        rng_algorithm=ALGORITHM_ID,
        bundle={"obs": "native", "act": "offset", "reward": "native"},
        policy={"kind": policy_spec.kind, "seed": policy_spec.seed},
    )
    total = 0.0
    t = 0
    start_d2 = state.distance_to_goal() ** 2
    while not state.done:
        t += 1
        offset = policy(state)
        state, obs, r, done = nav_step(state, offset)
        total += r
        record.steps.append(
            {
                "t": t,
                "action": [offset[0], offset[1]],
                "reward": r,
                "done": done,
                "obs_digest": obs_digest(obs),
            }
        )
    record.summary = {
        "lifetime": t,
        "total_reward": total,
        "cause": "goal" if state.distance_to_goal() < state.cfg.nav.goal_distance else "horizon",
        "start_d2": start_d2,
        "final_d2": state.distance_to_goal() ** 2,
    }
    return record


def _episode_job(args) -> EpisodeRecord:
    cfg, seed, bundle, policy_spec = args
    return run_episode(cfg, seed, bundle, policy_spec)


def run_batch(
    cfg: WorldConfig,
    seeds,
    bundle: PresetBundle,
    policy_spec: PolicySpec,
    parallelism: int = 1,
) -> tuple[list[EpisodeRecord], dict]:
    """Run one episode per seed; aggregates never depend on parallelism."""
    seeds = list(seeds)
    if not seeds:
        raise ValueError("seeds must be non-empty")
    jobs = [(cfg, s, bundle, policy_spec) for s in seeds]
    if parallelism > 1:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            records = list(pool.map(_episode_job, jobs))
    else:
        records = [_episode_job(j) for j in jobs]
    lifetimes = [r.summary["lifetime"] for r in records]
    rewards = [r.summary["total_reward"] for r in records]
    stats = {
        "episodes": len(records),
        "lifetime_mean": statistics.fmean(lifetimes),
        "lifetime_median": statistics.median(lifetimes),
        "lifetime_stdev": statistics.pstdev(lifetimes),
        "reward_mean": statistics.fmean(rewards),
        "reward_median": statistics.median(rewards),
        "reward_stdev": statistics.pstdev(rewards),
    }
    return records, stats


# ---------------------------------------------------------------------------
# Replay and IO

def replay(cfg: WorldConfig, record: EpisodeRecord) -> list[str]:
    """Re-execute a record's actions; return divergence descriptions."""
    problems: list[str] = []
    digest = config_digest(cfg)
    if digest != record.config_digest:
        return [f"config digest {digest} != recorded {record.config_digest}"]
    world = new_world(cfg, record.seed)
    bundle = PresetBundle(**record.bundle)
    rspec = reward_spec(bundle.reward)
    for rec in record.steps:
        if world.done:
            problems.append(f"t={rec['t']}: world ended before recorded step")
            break
        cmd = decode(bundle.act, rec["action"], world)
        if _cmd_dict(cmd) != rec["cmd"]:
            problems.append(f"t={rec['t']}: command {_cmd_dict(cmd)} != {rec['cmd']}")
        out = step(world, cmd)
        r = compute_reward(None, cmd, out, out.done, rspec)
        if r != rec["reward"]:
            problems.append(f"t={rec['t']}: reward {r} != {rec['reward']}")
        if out.result != rec["result"]:
            problems.append(f"t={rec['t']}: result {out.result} != {rec['result']}")
        if out.done != rec["done"]:
            problems.append(f"t={rec['t']}: done {out.done} != {rec['done']}")
        if [list(ev) for ev in out.events] != rec["events"]:
            problems.append(f"t={rec['t']}: events differ")
        d = obs_digest(observe(world, bundle.obs))
        if d != rec["obs_digest"]:
            problems.append(f"t={rec['t']}: obs digest {d} != {rec['obs_digest']}")
    if not world.done:
        problems.append("record ended before the world did")
    return problems


def write_episode_jsonl(record: EpisodeRecord, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in record.to_lines():
            fh.write(line + "\n")


def read_episode_jsonl(path: str) -> EpisodeRecord:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [json.loads(line) for line in fh if line.strip()]
    if not lines or "schema" not in lines[0]:
        raise ValueError(f"{path}: not an episode log")
    header = lines[0]
    if header["schema"] != SCHEMA:
        raise ValueError(f"{path}: unsupported schema {header['schema']!r}")
    record = EpisodeRecord(
        schema=header["schema"],
        config_digest=header["config_digest"],
        seed=header["seed"],
        rng_algorithm=header["rng_algorithm"],
        bundle=header["bundle"],
        policy=header["policy"],
    )
    for obj in lines[1:]:
        if "summary" in obj:
            record.summary = obj["summary"]
        else:
            record.steps.append(obj)
    return record


def write_batch_csv(records: list[EpisodeRecord], stats: dict, path: str) -> None:
    """One row per episode plus a trailing aggregate row."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["seed", "lifetime", "total_reward", "cause"])
        for r in records:
            writer.writerow(
                [r.seed, r.summary["lifetime"], r.summary["total_reward"], r.summary["cause"]]
            )
        writer.writerow([])
        for key in sorted(stats):
            writer.writerow([key, stats[key]])
