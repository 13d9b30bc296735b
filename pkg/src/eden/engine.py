"""Grid-world simulation core.

A survival world is a bounded grid of geography cells populated by
creatures (the agent among them), ground item stacks, and a clock that
drives day/night and season phases. `step` advances the world by one
tick in a fixed order:

  1. the agent's action resolves,
  2. creature AI moves (flee/pursue) and adjacent hostiles strike,
  3. satiety and thirst decay,
  4. the clock advances; phases and buffs refresh,
  5. death is checked (hp, satiety, or thirst at zero ends the episode).

All randomness flows through the world's splitmix64 stream, so equal
(config, seed) pairs produce bit-identical histories. Worlds mutate in
place; `WorldState.copy()` is the supported way to branch a timeline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import WorldConfig
from .errors import ContractError, GenerationError
from .rng import SplitMix64, mix

# Fixed scan order for reach-1 cell searches: the agent's own cell first,
# then neighbors row-major. Deterministic tie-breaking depends on it.
_REACH_ORDER = ((0, 0), (-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1))

_SEASONS = ("spring", "summer", "autumn", "winter")
_WEATHER_STATES = 3  # sun, rain, snow

VERBS = ("idle", "move", "attack", "collect", "pick", "consume", "synthesize", "discard", "equip")


@dataclass(frozen=True)
class ActionCommand:
    """A concrete world-level command.

    p1/p2 meaning depends on the verb: target cell for attack/collect,
    offset for move, (item code, count) for the inventory verbs.
    `untargeted` marks auto-targeting that found nothing; the step still
    ticks but the action resolves as a failure.
    """

    verb: str
    p1: int = 0
    p2: int = 0
    untargeted: bool = False


class StepOutcome:
    """Result of one tick: events, terminal flag, info, action success."""

    __slots__ = ("events", "done", "info", "result")

    def __init__(self, events: list, done: bool, info: dict, result: bool) -> None:
        self.events = events
        self.done = done
        self.info = info
        self.result = result


class Entity:
    __slots__ = ("eid", "kind", "x", "y", "hp", "aggro", "remaining")

    def __init__(self, eid: int, kind: str, x: int, y: int, hp: float | None, remaining: int | None) -> None:
        self.eid = eid
        self.kind = kind
        self.x = x
        self.y = y
        self.hp = hp
        self.aggro = False
        self.remaining = remaining

    def copy(self) -> "Entity":
        e = Entity(self.eid, self.kind, self.x, self.y, self.hp, self.remaining)
        e.aggro = self.aggro
        return e


class AgentState:
    __slots__ = ("x", "y", "hp", "hp_cap", "satiety", "thirsty", "attack", "defense", "backpack", "equipment")

    def __init__(self) -> None:
        self.x = 0
        self.y = 0
        self.hp = 0.0
        self.hp_cap = 0.0
        self.satiety = 0.0
        self.thirsty = 0.0
        self.attack = 0.0
        self.defense = 0.0
        self.backpack: list = []  # slots: None or [item, count-or-durability]
        self.equipment: dict = {"hand": None, "body": None}

    def count_of(self, item: str, stackable: bool) -> int:
        n = 0
        for slot in self.backpack:
            if slot is not None and slot[0] == item:
                n += slot[1] if stackable else 1
        return n

    def copy(self) -> "AgentState":
        a = AgentState.__new__(AgentState)
        a.x = self.x
        a.y = self.y
        a.hp = self.hp
        a.hp_cap = self.hp_cap
        a.satiety = self.satiety
        a.thirsty = self.thirsty
        a.attack = self.attack
        a.defense = self.defense
        a.backpack = [None if s is None else [s[0], s[1]] for s in self.backpack]
        a.equipment = {k: (None if v is None else [v[0], v[1]]) for k, v in self.equipment.items()}
        return a


class WorldState:
    __slots__ = (
        "cfg",
        "seed",
        "rng",
        "width",
        "height",
        "clock",
        "night",
        "season",  # -1 when seasons are disabled
        "done",
        "cause",
        "last_result",
        "agent",
        "entities",
        "mobile",
        "ground",
        "geo",  # row-major list of geography codes (1-based)
        "weather_base",  # row-major list of base weather codes (0..2)
        "geo_np",  # (height, width) mirrors of geo / weather_base
        "weather_np",
        "buffs",
        "geo_names",
        "_kspec",
        "_ispec",
        "_kill_drops",
        "_collect_drops",
        "_recipes",
        "_enabled_buffs",
        "_forest_code",
        "_water_code",
        "_life_cap",
    )

    def geography_at(self, x: int, y: int) -> int:
        return self.geo[y * self.width + x]

    def weather_at(self, x: int, y: int) -> int:
        base = self.weather_base[y * self.width + x]
        if self.season < 0:
            return base
        return (base + self.season) % _WEATHER_STATES

    def backpack_count(self, item: str) -> int:
        spec = self._ispec.get(item)
        if spec is None:
            return 0
        return self.agent.count_of(item, spec.stackable)

    def copy(self) -> "WorldState":
        w = WorldState.__new__(WorldState)
        w.cfg = self.cfg
        w.seed = self.seed
        w.rng = self.rng.copy()
        w.width = self.width
        w.height = self.height
        w.clock = self.clock
        w.night = self.night
        w.season = self.season
        w.done = self.done
        w.cause = self.cause
        w.last_result = self.last_result
        w.agent = self.agent.copy()
        w.entities = {eid: e.copy() for eid, e in self.entities.items()}
        w.mobile = self.mobile
        w.ground = {cell: dict(items) for cell, items in self.ground.items()}
        w.geo = self.geo  # immutable after generation
        w.weather_base = self.weather_base
        w.geo_np = self.geo_np
        w.weather_np = self.weather_np
        w.buffs = set(self.buffs)
        w.geo_names = self.geo_names
        w._kspec = self._kspec
        w._ispec = self._ispec
        w._kill_drops = self._kill_drops
        w._collect_drops = self._collect_drops
        w._recipes = self._recipes
        w._enabled_buffs = self._enabled_buffs
        w._forest_code = self._forest_code
        w._water_code = self._water_code
        w._life_cap = self._life_cap
        return w

    def snapshot(self) -> dict:
        """Plain-data dump of the mutable state, for tests and debugging."""
        a = self.agent
        return {
            "clock": self.clock,
            "night": self.night,
            "season": self.season,
            "done": self.done,
            "cause": self.cause,
            "agent": {
                "x": a.x,
                "y": a.y,
                "hp": a.hp,
                "satiety": a.satiety,
                "thirsty": a.thirsty,
                "backpack": [None if s is None else list(s) for s in a.backpack],
                "equipment": {k: (None if v is None else list(v)) for k, v in a.equipment.items()},
            },
            "entities": sorted(
                (e.eid, e.kind, e.x, e.y, e.hp, e.aggro, e.remaining) for e in self.entities.values()
            ),
            "ground": sorted((x, y, sorted(items.items())) for (x, y), items in self.ground.items()),
            "buffs": sorted(self.buffs),
            "rng_state": self.rng.state,
        }


def _index_config(world: WorldState, cfg: WorldConfig) -> None:
    world._kspec = {c.kind: c for c in cfg.creature_specs}
    world._ispec = {i.item: i for i in cfg.item_specs}
    world._kill_drops = {d.source: tuple(d.items.items()) for d in cfg.drop_table if d.on == "kill"}
    world._collect_drops = {d.source: tuple(d.items.items()) for d in cfg.drop_table if d.on == "collect"}
    world._recipes = {r.output: r for r in cfg.synthesis_table}
    world._enabled_buffs = frozenset(b.buff for b in cfg.buff_specs)
    # sorted so equal configs generate equal worlds whatever the JSON key order
    names = sorted(cfg.terrain_spec.geography_weights.keys())
    world.geo_names = names
    world._forest_code = names.index("forest") + 1 if "forest" in names else 0
    world._water_code = names.index("water") + 1 if "water" in names else 0
    world._life_cap = float(cfg.life_limit)


def _init_agent(world: WorldState, cfg: WorldConfig, x: int, y: int) -> None:
    attrs = world._kspec["agent"].attributes if "agent" in world._kspec else {}
    a = AgentState()
    a.x = x
    a.y = y
    a.hp_cap = float(attrs.get("hp", 100.0))
    a.hp = a.hp_cap
    a.attack = float(attrs.get("attack", 10.0))
    a.defense = float(attrs.get("defense", 0.0))
    a.satiety = float(cfg.life_limit)
    a.thirsty = float(cfg.life_limit)
    a.backpack = [None] * cfg.backpack_slots
    world.agent = a


def new_world(cfg: WorldConfig, seed: int):
    """Generate a fresh world for (cfg, seed).

    Navigation configs build a navigation state instead (same factory,
    different world type). Raises GenerationError when a required
    placement (river, food source, agent land cell) cannot be made.
    """
    if cfg.kind == "navigation":
        from .nav import new_nav_world

        return new_nav_world(cfg, seed)

    world = WorldState.__new__(WorldState)
    world.cfg = cfg
    world.seed = seed
    world.rng = SplitMix64(seed)
    world.width = cfg.map_width
    world.height = cfg.map_height
    world.clock = 0
    world.season = 0 if cfg.season_length > 0 else -1
    world.night = False
    world.done = False
    world.cause = None
    world.last_result = True
    world.entities = {}
    world.ground = {}
    world.buffs = set()
    _index_config(world, cfg)

    rng = world.rng
    w, h = world.width, world.height
    terrain = cfg.terrain_spec

    # Geography is assigned per block; each block samples one geography
    # from the configured weights.
    names = world.geo_names
    weights = [max(0.0, terrain.geography_weights[n]) for n in names]
    total = sum(weights)
    if total <= 0:
        raise GenerationError("no geography has positive weight")
    cum = []
    acc = 0.0
    for value in weights:
        acc += value / total
        cum.append(acc)

    bs = terrain.block_size
    bw = (w + bs - 1) // bs
    bh = (h + bs - 1) // bs
    block_codes = []
    for _ in range(bw * bh):
        u = rng.uniform()
        code = len(names)
        for i, edge in enumerate(cum):
            if u < edge:
                code = i + 1
                break
        block_codes.append(min(code, len(names)))

    geo = [0] * (w * h)
    for y in range(h):
        brow = (y // bs) * bw
        row = y * w
        for x in range(w):
            geo[row + x] = block_codes[brow + x // bs]
    world.geo = geo

    # Base weather per cell; seasons rotate it, otherwise it is static.
    world.weather_base = [_base_weather(mix(seed, 0x5EA50000 + i)) for i in range(w * h)]
    world.geo_np = np.asarray(geo, dtype=np.int64).reshape(h, w)
    world.weather_np = np.asarray(world.weather_base, dtype=np.int64).reshape(h, w)

    # Density-driven creature spawns, scanned in row-major cell order.
    densities = terrain.densities
    dens_by_code: list = [None] * (len(names) + 1)
    for geo_name, table in densities.items():
        if geo_name in names:
            entries = tuple((kind, d) for kind, d in sorted(table.items()) if d > 0)
            dens_by_code[names.index(geo_name) + 1] = entries
    eid = 1
    for y in range(h):
        row = y * w
        for x in range(w):
            entries = dens_by_code[geo[row + x]]
            if not entries:
                continue
            for kind, density in entries:
                if rng.uniform() < density:
                    world.entities[eid] = _make_entity(world, eid, kind, x, y)
                    eid += 1

    # Guarantee a drinkable source and a food source somewhere on the map.
    eid = _ensure_source(world, eid, _is_water_source, "river")
    eid = _ensure_source(world, eid, _is_food_source, "food source")

    world.mobile = tuple(
        e.eid for e in world.entities.values() if world._kspec[e.kind].behavior in ("flee", "aggressive")
    )

    land = [
        (x, y) for y in range(h) for x in range(w) if geo[y * w + x] != world._water_code
    ]
    if not land:
        raise GenerationError("no land cell available for the agent")
    ax, ay = land[rng.randrange(len(land))]
    _init_agent(world, cfg, ax, ay)
    _refresh_phase_and_buffs(world)
    return world


def new_fixed_world(
    cfg: WorldConfig,
    agent_pos: tuple[int, int],
    placements: list[tuple[str, int, int]],
    seed: int = 0,
) -> WorldState:
    """Build a world with explicit entity placements (uniform geography).

    Used by micro-world benchmarks and tests where the exact map matters
    more than generated variety. All cells take the first configured
    geography; weather is uniformly clear.
    """
    world = WorldState.__new__(WorldState)
    world.cfg = cfg
    world.seed = seed
    world.rng = SplitMix64(seed)
    world.width = cfg.map_width
    world.height = cfg.map_height
    world.clock = 0
    world.season = 0 if cfg.season_length > 0 else -1
    world.night = False
    world.done = False
    world.cause = None
    world.last_result = True
    world.entities = {}
    world.ground = {}
    world.buffs = set()
    _index_config(world, cfg)
    world.geo = [1] * (world.width * world.height)
    world.weather_base = [0] * (world.width * world.height)
    world.geo_np = np.ones((world.height, world.width), dtype=np.int64)
    world.weather_np = np.zeros((world.height, world.width), dtype=np.int64)
    eid = 1
    for kind, x, y in placements:
        if kind not in world._kspec:
            raise GenerationError(f"unknown creature kind {kind!r}")
        if not (0 <= x < world.width and 0 <= y < world.height):
            raise GenerationError(f"placement {kind!r} at ({x}, {y}) is outside the map")
        world.entities[eid] = _make_entity(world, eid, kind, x, y)
        eid += 1
    world.mobile = tuple(
        e.eid for e in world.entities.values() if world._kspec[e.kind].behavior in ("flee", "aggressive")
    )
    ax, ay = agent_pos
    if not (0 <= ax < world.width and 0 <= ay < world.height):
        raise GenerationError("agent position is outside the map")
    _init_agent(world, cfg, ax, ay)
    _refresh_phase_and_buffs(world)
    return world


def _base_weather(h: int) -> int:
    # Mostly clear skies; a thin band of rain and snow cells.
    u = (h >> 11) * 2.0**-53
    if u < 0.80:
        return 0
    if u < 0.92:
        return 1
    return 2


def _make_entity(world: WorldState, eid: int, kind: str, x: int, y: int) -> Entity:
    spec = world._kspec[kind]
    hp = spec.attributes.get("hp")
    remaining = spec.collect_capacity if kind in world._collect_drops else None
    return Entity(eid, kind, x, y, float(hp) if hp is not None else None, remaining)


def _is_water_source(world: WorldState, kind: str) -> bool:
    for item, _count in world._collect_drops.get(kind, ()):
        spec = world._ispec.get(item)
        if spec is not None and spec.consumable and spec.thirsty_gain > 0:
            return True
    return False


def _is_food_source(world: WorldState, kind: str) -> bool:
    for table in (world._collect_drops, world._kill_drops):
        for item, _count in table.get(kind, ()):
            spec = world._ispec.get(item)
            if spec is not None and spec.consumable and spec.satiety_gain > 0:
                return True
    return False


def _ensure_source(world: WorldState, next_eid: int, predicate, label: str) -> int:
    for e in world.entities.values():
        if predicate(world, e.kind):
            return next_eid
    # Force one spawn on a cell whose geography gives the kind positive
    # density; densities of zero everywhere make the config unsatisfiable.
    names = world.geo_names
    candidates: list[tuple[str, int]] = []  # (kind, geography code)
    for geo_name, table in world.cfg.terrain_spec.densities.items():
        if geo_name not in names or world.cfg.terrain_spec.geography_weights.get(geo_name, 0) < 0:
            continue
        code = names.index(geo_name) + 1
        for kind, density in table.items():
            if density > 0 and kind in world._kspec and predicate(world, kind):
                candidates.append((kind, code))
    for kind, code in candidates:
        cells = [i for i, g in enumerate(world.geo) if g == code]
        if cells:
            i = cells[world.rng.randrange(len(cells))]
            x, y = i % world.width, i // world.width
            world.entities[next_eid] = _make_entity(world, next_eid, kind, x, y)
            return next_eid + 1
    raise GenerationError(f"config cannot place a {label}: no positive spawn density")


# ---------------------------------------------------------------------------
# Stepping

def step(world: WorldState, cmd: ActionCommand) -> StepOutcome:
    """Advance the world one tick. Raises ContractError on a done world."""
    if world.done:
        raise ContractError("cannot step a finished world")
    events: list = []
    ok = _resolve_action(world, cmd, events)
    _creature_ai(world, events)
    _decay(world)
    world.clock += 1
    _refresh_phase_and_buffs(world)
    cause = _death_cause(world)
    info: dict = {}
    if cause is not None:
        world.done = True
        world.cause = cause
        events.append(("death", cause))
        info = {"lifetime": world.clock, "cause": cause}
    world.last_result = ok
    return StepOutcome(events, world.done, info, ok)


def vision_radius(world: WorldState) -> int:
    """Current sight radius: day value, or at night the torch/night value."""
    cfg = world.cfg
    if not world.night:
        return cfg.vision_day
    hand = world.agent.equipment["hand"]
    if hand is not None and "torch_vision_buff" in world.buffs:
        return cfg.vision_torch
    return cfg.vision_night


def _resolve_action(world: WorldState, cmd: ActionCommand, events: list) -> bool:
    if cmd.untargeted:
        return False
    verb = cmd.verb
    if verb == "idle":
        return True
    if verb == "move":
        return _do_move(world, cmd.p1, cmd.p2, events)
    if verb == "attack":
        return _do_attack(world, cmd.p1, cmd.p2, events)
    if verb == "collect":
        return _do_collect(world, cmd.p1, cmd.p2, events)
    if verb == "pick":
        return _do_pick(world, cmd.p1, cmd.p2, events)
    if verb == "consume":
        return _do_consume(world, cmd.p1, events)
    if verb == "synthesize":
        return _do_synthesize(world, cmd.p1, events)
    if verb == "discard":
        return _do_discard(world, cmd.p1, cmd.p2, events)
    if verb == "equip":
        return _do_equip(world, cmd.p1, events)
    return False  # unknown verb: malformed command, the tick still runs


def _do_move(world: WorldState, dx: int, dy: int, events: list) -> bool:
    r = 1 if "rain_slow" in world.buffs else world.cfg.move_radius
    if dx < -r:
        dx = -r
    elif dx > r:
        dx = r
    if dy < -r:
        dy = -r
    elif dy > r:
        dy = r
    a = world.agent
    nx = min(max(a.x + dx, 0), world.width - 1)
    ny = min(max(a.y + dy, 0), world.height - 1)
    events.append(("move", nx - a.x, ny - a.y))
    a.x = nx
    a.y = ny
    return True


def _entity_at(world: WorldState, x: int, y: int, need_hp: bool, need_collect: bool):
    found = None
    for e in world.entities.values():
        if e.x != x or e.y != y:
            continue
        if need_hp and e.hp is None:
            continue
        if need_collect:
            if e.kind not in world._collect_drops:
                continue
            if e.remaining is not None and e.remaining <= 0:
                continue
        if found is None or e.eid < found.eid:
            found = e
    return found


def _do_attack(world: WorldState, tx: int, ty: int, events: list) -> bool:
    a = world.agent
    if not (0 <= tx < world.width and 0 <= ty < world.height):
        return False
    if max(abs(tx - a.x), abs(ty - a.y)) > 1:
        return False
    target = _entity_at(world, tx, ty, need_hp=True, need_collect=False)
    if target is None:
        return False
    power = a.attack + (10.0 if "spear_attack" in world.buffs else 0.0)
    spec = world._kspec[target.kind]
    damage = max(0.0, power - spec.attributes.get("defense", 0.0))
    target.hp = max(0.0, target.hp - damage)
    events.append(("hit", target.kind, damage, tx, ty))
    if target.hp <= 0.0:
        del world.entities[target.eid]
        events.append(("kill", target.kind, tx, ty))
        for item, count in world._kill_drops.get(target.kind, ()):
            _ground_add(world, tx, ty, item, count)
            events.append(("drop", item, count, tx, ty))
    elif spec.behavior == "aggressive":
        target.aggro = True  # retaliation outlives the pursuit radius
    return True


def _do_collect(world: WorldState, tx: int, ty: int, events: list) -> bool:
    a = world.agent
    if not (0 <= tx < world.width and 0 <= ty < world.height):
        return False
    if max(abs(tx - a.x), abs(ty - a.y)) > 1:
        return False
    target = _entity_at(world, tx, ty, need_hp=False, need_collect=True)
    if target is None:
        return False
    events.append(("collect", target.kind, tx, ty))
    for item, count in world._collect_drops[target.kind]:
        _ground_add(world, tx, ty, item, count)
        events.append(("drop", item, count, tx, ty))
    if target.remaining is not None:
        target.remaining -= 1
        if target.remaining <= 0:
            del world.entities[target.eid]
            events.append(("deplete", target.kind, tx, ty))
    return True


def _ground_add(world: WorldState, x: int, y: int, item: str, count: int) -> None:
    cell = world.ground.get((x, y))
    if cell is None:
        world.ground[(x, y)] = {item: count}
    else:
        cell[item] = cell.get(item, 0) + count


def _do_pick(world: WorldState, code: int, count: int, events: list) -> bool:
    if count <= 0:
        return False
    spec = world.cfg.item_by_code(code)
    if spec is None:
        return False
    a = world.agent
    for ox, oy in _REACH_ORDER:
        x, y = a.x + ox, a.y + oy
        cell = world.ground.get((x, y))
        if not cell:
            continue
        available = cell.get(spec.item, 0)
        if available <= 0:
            continue
        take = min(count, available, _backpack_space(a, spec))
        if take <= 0:
            return False
        if spec.stackable:
            _backpack_add_stack(a, spec.item, take)
        else:
            for _ in range(take):
                a.backpack[a.backpack.index(None)] = [spec.item, spec.durability]
        if available == take:
            del cell[spec.item]
            if not cell:
                del world.ground[(x, y)]
        else:
            cell[spec.item] = available - take
        events.append(("pickup", spec.item, take))
        return True
    return False


def _backpack_space(a: AgentState, spec) -> int:
    if spec.stackable:
        for slot in a.backpack:
            if slot is not None and slot[0] == spec.item:
                return 1 << 30  # existing stack absorbs any count
        return (1 << 30) if None in a.backpack else 0
    return sum(1 for slot in a.backpack if slot is None)


def _backpack_add_stack(a: AgentState, item: str, count: int) -> None:
    for slot in a.backpack:
        if slot is not None and slot[0] == item:
            slot[1] += count
            return
    a.backpack[a.backpack.index(None)] = [item, count]


def _do_consume(world: WorldState, code: int, events: list) -> bool:
    spec = world.cfg.item_by_code(code)
    if spec is None or not spec.consumable:
        return False
    a = world.agent
    for i, slot in enumerate(a.backpack):
        if slot is not None and slot[0] == spec.item:
            needed = (spec.satiety_gain > 0 and a.satiety < 0.5 * world._life_cap) or (
                spec.thirsty_gain > 0 and a.thirsty < 0.5 * world._life_cap
            )
            if spec.stackable and slot[1] > 1:
                slot[1] -= 1
            else:
                a.backpack[i] = None
            a.satiety = min(world._life_cap, a.satiety + spec.satiety_gain)
            a.thirsty = min(world._life_cap, a.thirsty + spec.thirsty_gain)
            events.append(("consume", spec.item, 1 if needed else 0))
            return True
    return False


def _do_synthesize(world: WorldState, code: int, events: list) -> bool:
    spec = world.cfg.item_by_code(code)
    if spec is None:
        return False
    recipe = world._recipes.get(spec.item)
    if recipe is None:
        return False
    a = world.agent
    for item, need in recipe.inputs.items():
        ispec = world._ispec[item]
        if a.count_of(item, ispec.stackable) < need:
            return False
    saved = [None if s is None else [s[0], s[1]] for s in a.backpack]
    for item, need in recipe.inputs.items():
        _backpack_remove(a, item, need, world._ispec[item].stackable)
    if spec.stackable:
        _backpack_full = None not in a.backpack and not any(
            s is not None and s[0] == spec.item for s in a.backpack
        )
        if _backpack_full:
            a.backpack = saved
            return False
        _backpack_add_stack(a, spec.item, 1)
    else:
        if None not in a.backpack:
            a.backpack = saved  # no room for the output: atomic failure
            return False
        a.backpack[a.backpack.index(None)] = [spec.item, spec.durability]
    events.append(("synthesize", spec.item))
    return True


def _backpack_remove(a: AgentState, item: str, count: int, stackable: bool) -> None:
    for i, slot in enumerate(a.backpack):
        if count <= 0:
            return
        if slot is None or slot[0] != item:
            continue
        if stackable:
            take = min(count, slot[1])
            slot[1] -= take
            count -= take
            if slot[1] <= 0:
                a.backpack[i] = None
        else:
            a.backpack[i] = None
            count -= 1


def _do_discard(world: WorldState, code: int, count: int, events: list) -> bool:
    if count <= 0:
        return False
    spec = world.cfg.item_by_code(code)
    if spec is None:
        return False
    a = world.agent
    held = a.count_of(spec.item, spec.stackable)
    take = min(count, held)
    if take <= 0:
        return False
    _backpack_remove(a, spec.item, take, spec.stackable)
    _ground_add(world, a.x, a.y, spec.item, take)
    events.append(("discard", spec.item, take))
    return True


def _do_equip(world: WorldState, code: int, events: list) -> bool:
    spec = world.cfg.item_by_code(code)
    if spec is None or spec.equip_slot == "none":
        return False
    a = world.agent
    current = a.equipment[spec.equip_slot]
    if current is None:
        for i, slot in enumerate(a.backpack):
            if slot is not None and slot[0] == spec.item:
                a.equipment[spec.equip_slot] = [slot[0], slot[1]]
                a.backpack[i] = None
                events.append(("equip", spec.item))
                return True
        return False
    if current[0] == spec.item:
        if None not in a.backpack:
            return False
        a.backpack[a.backpack.index(None)] = [current[0], current[1]]
        a.equipment[spec.equip_slot] = None
        events.append(("unequip", spec.item))
        return True
    return False  # slot is occupied by a different item


def _creature_ai(world: WorldState, events: list) -> None:
    a = world.agent
    ax, ay = a.x, a.y
    entities = world.entities
    kspec = world._kspec
    forest_cover = "terrain_forest_cover" in world.buffs
    for eid in world.mobile:
        e = entities.get(eid)
        if e is None:
            continue
        spec = kspec[e.kind]
        dx = ax - e.x
        dy = ay - e.y
        dist = max(abs(dx), abs(dy))
        if spec.behavior == "flee":
            if dist <= spec.flee_radius:
                speed = spec.move_speed
                nx = e.x - (speed if dx > 0 else -speed if dx < 0 else 0)
                ny = e.y - (speed if dy > 0 else -speed if dy < 0 else 0)
                e.x = min(max(nx, 0), world.width - 1)
                e.y = min(max(ny, 0), world.height - 1)
        else:  # aggressive
            radius = spec.aggro_radius // 2 if forest_cover else spec.aggro_radius
            if not (e.aggro or dist <= radius):
                continue
            if dist <= 1:
                damage = max(0.0, spec.attributes.get("attack", 0.0) - a.defense)
                a.hp = max(0.0, a.hp - damage)
                events.append(("damage", damage, e.kind))
            else:
                speed = spec.move_speed
                if dx:
                    e.x += min(speed, abs(dx)) * (1 if dx > 0 else -1)
                if dy:
                    e.y += min(speed, abs(dy)) * (1 if dy > 0 else -1)


def _decay(world: WorldState) -> None:
    a = world.agent
    buffs = world.buffs
    satiety_decay = world.cfg.decay_satiety + (1.0 if "winter_cold" in buffs else 0.0)
    thirsty_decay = world.cfg.decay_thirsty + (1.0 if "summer_heat" in buffs else 0.0)
    a.satiety = max(0.0, a.satiety - satiety_decay)
    a.thirsty = max(0.0, a.thirsty - thirsty_decay)
    if "well_fed_regen" in buffs:
        a.hp = min(a.hp_cap, a.hp + 1.0)


def _refresh_phase_and_buffs(world: WorldState) -> None:
    cfg = world.cfg
    cycle = cfg.day_length + cfg.night_length
    world.night = (world.clock % cycle) >= cfg.day_length if cycle > 0 else False
    if cfg.season_length > 0:
        world.season = (world.clock // cfg.season_length) % 4
    enabled = world._enabled_buffs
    if not enabled:
        world.buffs = set()
        return
    a = world.agent
    buffs = set()
    hand = a.equipment["hand"]
    body = a.equipment["body"]
    if world.night:
        buffs.add("night_vision_debuff")
        if hand is not None and hand[0] == "torch":
            buffs.add("torch_vision_buff")
    coat_on = body is not None and body[0] == "coat"
    if coat_on:
        buffs.add("coat_warmth")
    if world.season == 3 and not coat_on:
        buffs.add("winter_cold")
    if world.season == 1:
        buffs.add("summer_heat")
    if world.weather_at(a.x, a.y) == 1:
        buffs.add("rain_slow")
    if hand is not None and hand[0] == "spear":
        buffs.add("spear_attack")
    if world._forest_code and world.geography_at(a.x, a.y) == world._forest_code:
        buffs.add("terrain_forest_cover")
    if a.satiety >= 0.9 * world._life_cap and a.thirsty >= 0.9 * world._life_cap:
        buffs.add("well_fed_regen")
    world.buffs = buffs if buffs <= enabled else buffs & enabled


def _death_cause(world: WorldState) -> str | None:
    a = world.agent
    if a.hp <= 0.0:
        return "killed"
    if a.satiety <= 0.0:
        return "starvation"
    if a.thirsty <= 0.0:
        return "dehydration"
    return None
