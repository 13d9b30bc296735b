"""Discrete action presets and their decoding into world commands.

A preset is an ordered tuple of abstract action names; `decode` turns
(preset, index, world) into a concrete `ActionCommand` with auto-chosen
targets. Decoding is a pure function of the world snapshot: equal states
decode equally, and no decoded command ever points outside the map.
Auto-targeting that finds nothing yields an idle-equivalent command
flagged `untargeted`, which resolves as a failed action while the world
still ticks.

Targeting rules (normative):

  attack_nearest   nearest creature that has hit points
  attack_pig_k     k-th nearest pig (1-based)
  collect_auto     river vs tree by backpack scarcity (water vs wood
                   counts, tie prefers river), nearest of that kind;
                   falls back to the other kind when none is visible
  pickup_auto      among stacks within reach 1, the item with the
                   smallest backpack count; ties by meat < water < wood,
                   then by item code
  consume_auto     meat when satiety <= thirsty, else water
  move_to_pig      toward the nearest visible pig, else a pseudo-random
                   direction held for a stretch of steps (hash of the
                   world rng state and clock/12, so exploration is
                   ballistic rather than diffusive)

"Nearest" always means smallest squared Euclidean distance with entity
id as the tie-break, among entities inside the current vision radius.
"""

from __future__ import annotations

from .engine import ActionCommand, WorldState, vision_radius
from .rng import mix

_IDLE = ActionCommand("idle")

BASELINE9 = (
    "attack_nearest",
    "collect_auto",
    "pickup_auto",
    "consume_auto",
    "synthesize_torch",
    "discard_torch",
    "equip_torch",
    "move_to_pig",
    "idle",
)


def _pig_variant(k: int) -> tuple[str, ...]:
    names: list[str] = []
    for name in BASELINE9:
        if name == "attack_nearest":
            names.extend(f"attack_pig_{i}" for i in range(1, k + 1))
        elif name == "move_to_pig":
            names.extend(f"move_to_pig_{i}" for i in range(1, k + 1))
        else:
            names.append(name)
    return tuple(names)


def _expanded(auto: str, replacements: tuple[str, ...]) -> tuple[str, ...]:
    names: list[str] = []
    for name in BASELINE9:
        if name == auto:
            names.extend(replacements)
        else:
            names.append(name)
    return tuple(names)


ACTION_PRESETS: dict[str, tuple[str, ...]] = {
    "baseline9": BASELINE9,
    "pig3": _pig_variant(3),
    "pig5": _pig_variant(5),
    "expand_consume": _expanded("consume_auto", ("consume_meat", "consume_water")),
    "expand_pickup": _expanded("pickup_auto", ("pickup_meat", "pickup_water", "pickup_wood")),
    "expand_collect": _expanded("collect_auto", ("collect_river", "collect_tree")),
    # The full catalog: every expanded variant plus the auto actions and
    # five-pig targeting. 26 actions.
    "expand_all": (
        "attack_nearest",
        "attack_pig_1",
        "attack_pig_2",
        "attack_pig_3",
        "attack_pig_4",
        "attack_pig_5",
        "collect_auto",
        "collect_river",
        "collect_tree",
        "pickup_auto",
        "pickup_meat",
        "pickup_water",
        "pickup_wood",
        "consume_auto",
        "consume_meat",
        "consume_water",
        "synthesize_torch",
        "discard_torch",
        "equip_torch",
        "move_to_pig",
        "move_to_pig_1",
        "move_to_pig_2",
        "move_to_pig_3",
        "move_to_pig_4",
        "move_to_pig_5",
        "idle",
    ),
}

EXPAND_ALL_COUNT = 26


def action_count(preset: str) -> int:
    return len(_preset(preset))


def preset_catalog() -> dict[str, tuple[str, ...]]:
    return dict(ACTION_PRESETS)


def _preset(preset: str) -> tuple[str, ...]:
    try:
        return ACTION_PRESETS[preset]
    except KeyError:
        raise ValueError(f"unknown action preset {preset!r}") from None


def describe(preset: str) -> dict:
    """Machine-readable catalog entry (CLI `describe-actions`)."""
    names = _preset(preset)
    return {"preset": preset, "count": len(names), "actions": list(names)}


# ---------------------------------------------------------------------------
# Decoding

def decode(preset: str, index: int, world: WorldState) -> ActionCommand:
    """Decode an action index against a world snapshot."""
    names = _preset(preset)
    if not 0 <= index < len(names):
        raise ValueError(f"action index {index} out of range for {preset!r} (0..{len(names) - 1})")
    name = names[index]

    if name == "idle":
        return _IDLE
    if name == "attack_nearest":
        target = _nearest(world, _visible_prey(world), 1)
        return ActionCommand("attack", target.x, target.y) if target else _untargeted()
    if name.startswith("attack_pig_"):
        target = _nearest(world, _visible_kind(world, "pig"), int(name.rsplit("_", 1)[1]))
        return ActionCommand("attack", target.x, target.y) if target else _untargeted()
    if name == "collect_auto":
        return _collect_auto(world)
    if name == "collect_river":
        return _collect_kind(world, "river")
    if name == "collect_tree":
        return _collect_kind(world, "tree")
    if name == "pickup_auto":
        return _pickup_auto(world)
    if name.startswith("pickup_"):
        return _item_cmd(world, "pick", name[len("pickup_") :], 1)
    if name == "consume_auto":
        a = world.agent
        return _item_cmd(world, "consume", "meat" if a.satiety <= a.thirsty else "water", 1)
    if name.startswith("consume_"):
        return _item_cmd(world, "consume", name[len("consume_") :], 1)
    if name == "synthesize_torch":
        return _item_cmd(world, "synthesize", "torch", 1)
    if name == "discard_torch":
        return _item_cmd(world, "discard", "torch", 1)
    if name == "equip_torch":
        return _item_cmd(world, "equip", "torch", 0)
    if name == "move_to_pig":
        return _move_to_pig(world)
    if name.startswith("move_to_pig_"):
        target = _nearest(world, _visible_kind(world, "pig"), int(name.rsplit("_", 1)[1]))
        return _move_toward(world, target) if target else _untargeted()
    raise ValueError(f"unhandled action name {name!r}")


def _untargeted() -> ActionCommand:
    return ActionCommand("idle", untargeted=True)


def _item_cmd(world: WorldState, verb: str, item: str, count: int) -> ActionCommand:
    try:
        code = world.cfg.item_code(item)
    except KeyError:
        return _untargeted()
    return ActionCommand(verb, code, count)


def _visible_prey(world: WorldState):
    r = vision_radius(world)
    ax, ay = world.agent.x, world.agent.y
    out = []
    for e in world.entities.values():
        if e.hp is None:
            continue
        dx = e.x - ax
        dy = e.y - ay
        if -r <= dx <= r and -r <= dy <= r:
            out.append((dx * dx + dy * dy, e.eid, e))
    return out


def _visible_kind(world: WorldState, kind: str):
    r = vision_radius(world)
    ax, ay = world.agent.x, world.agent.y
    out = []
    for e in world.entities.values():
        if e.kind != kind:
            continue
        dx = e.x - ax
        dy = e.y - ay
        if -r <= dx <= r and -r <= dy <= r:
            out.append((dx * dx + dy * dy, e.eid, e))
    return out


def _nearest(world: WorldState, candidates, k: int):
    if len(candidates) < k:
        return None
    candidates.sort(key=lambda t: (t[0], t[1]))
    return candidates[k - 1][2]


def _collect_auto(world: WorldState) -> ActionCommand:
    water = world.backpack_count("water")
    wood = world.backpack_count("wood")
    first, second = ("river", "tree") if water <= wood else ("tree", "river")
    for kind in (first, second):
        target = _nearest(world, _visible_kind(world, kind), 1)
        if target is not None:
            return ActionCommand("collect", target.x, target.y)
    return _untargeted()


def _collect_kind(world: WorldState, kind: str) -> ActionCommand:
    target = _nearest(world, _visible_kind(world, kind), 1)
    return ActionCommand("collect", target.x, target.y) if target else _untargeted()


_PICK_TIE_ORDER = {"meat": 0, "water": 1, "wood": 2}


def _pickup_auto(world: WorldState) -> ActionCommand:
    from .engine import _REACH_ORDER  # shared scan order keeps ties identical

    a = world.agent
    seen: set[str] = set()
    for ox, oy in _REACH_ORDER:
        cell = world.ground.get((a.x + ox, a.y + oy))
        if cell:
            seen.update(item for item, n in cell.items() if n > 0)
    if not seen:
        return _untargeted()
    cfg = world.cfg

    def rank(item: str) -> tuple:
        return (
            world.backpack_count(item),
            _PICK_TIE_ORDER.get(item, len(_PICK_TIE_ORDER)),
            cfg.item_code(item),
        )

    best = min(seen, key=rank)
    return ActionCommand("pick", cfg.item_code(best), 1)


_DIRS = ((1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1))


def _move_to_pig(world: WorldState) -> ActionCommand:
    target = _nearest(world, _visible_kind(world, "pig"), 1)
    if target is not None:
        return _move_toward(world, target)
    # Exploration fallback: a deterministic pseudo-random heading, held
    # for 12-tick stretches so the walk actually covers ground, and
    # reflected off map borders instead of pinning against them.
    dx, dy = _DIRS[mix(world.rng.state, world.clock // 12) & 7]
    r = world.cfg.move_radius
    a = world.agent
    if (dx < 0 and a.x < r) or (dx > 0 and a.x >= world.width - r):
        dx = -dx
    if (dy < 0 and a.y < r) or (dy > 0 and a.y >= world.height - r):
        dy = -dy
    return ActionCommand("move", dx * r, dy * r)


def _move_toward(world: WorldState, target) -> ActionCommand:
    a = world.agent
    r = world.cfg.move_radius
    dx = target.x - a.x
    dy = target.y - a.y
    step_x = min(abs(dx), r) * (1 if dx > 0 else -1) if dx else 0
    step_y = min(abs(dy), r) * (1 if dy > 0 else -1) if dy else 0
    return ActionCommand("move", step_x, step_y)
