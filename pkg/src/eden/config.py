"""World configuration: schema types, strict JSON parsing, validation, presets.

Config documents are JSON (UTF-8) with a top-level ``schema_version``.
Parsing is total: a successful parse yields a fully-populated
:class:`WorldConfig` with every default filled in, and
``parse_config(serialize_config(cfg))`` round-trips to an equal value.
Unknown keys are rejected everywhere, with errors reporting the offending
path. The normative field reference lives in docs/schema.md.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Any

from .errors import ConfigError

SCHEMA_VERSION = 1

PRESET_NAMES = ("day_and_night", "four_season", "navigation40")

BEHAVIORS = ("static", "flee", "aggressive")
EQUIP_SLOTS = ("none", "hand", "body")

# Registry order is the Block4 flag order in observations.
BUFF_IDS = (
    "night_vision_debuff",
    "torch_vision_buff",
    "winter_cold",
    "summer_heat",
    "rain_slow",
    "coat_warmth",
    "spear_attack",
    "terrain_forest_cover",
    "well_fed_regen",
)

BUFF_SOURCES = ("basic", "environment", "terrain", "equipment")


@dataclass(frozen=True)
class CreatureSpec:
    kind: str
    attributes: dict[str, float] = field(default_factory=dict)
    behavior: str = "static"
    flee_radius: int = 0
    aggro_radius: int = 0
    move_speed: int = 0
    collect_capacity: int | None = None  # None = never depletes


@dataclass(frozen=True)
class ItemSpec:
    item: str
    consumable: bool = False
    satiety_gain: float = 0.0
    thirsty_gain: float = 0.0
    equip_slot: str = "none"
    durability: int = 0
    stackable: bool = True


@dataclass(frozen=True)
class Recipe:
    output: str
    inputs: dict[str, int]


@dataclass(frozen=True)
class DropRule:
    source: str
    on: str  # "kill" | "collect"
    items: dict[str, int]


@dataclass(frozen=True)
class BuffSpec:
    buff: str
    source: str
    effect: str = ""


@dataclass(frozen=True)
class TerrainSpec:
    block_size: int = 8
    geography_weights: dict[str, float] = field(default_factory=lambda: {"plain": 1.0})
    # geography -> creature kind -> per-cell spawn probability
    densities: dict[str, dict[str, float]] = field(default_factory=dict)


@dataclass(frozen=True)
class NavSpec:
    horizon: int = 20
    goal_distance: float = 0.1
    offset_limit: int = 2
    river_count: int = 3
    river_length: int = 40


@dataclass(frozen=True)
class WorldConfig:
    kind: str
    map_width: int
    map_height: int
    life_limit: int
    decay_satiety: float
    decay_thirsty: float
    day_length: int
    night_length: int
    season_length: int  # 0 = seasons disabled
    vision_day: int
    vision_night: int
    vision_torch: int
    move_radius: int
    backpack_slots: int
    obs_max_creatures: int
    obs_max_items: int
    seed_policy: str
    creature_specs: tuple[CreatureSpec, ...]
    item_specs: tuple[ItemSpec, ...]
    synthesis_table: tuple[Recipe, ...]
    drop_table: tuple[DropRule, ...]
    buff_specs: tuple[BuffSpec, ...]
    terrain_spec: TerrainSpec
    nav: NavSpec | None

    def creature(self, kind: str) -> CreatureSpec:
        for spec in self.creature_specs:
            if spec.kind == kind:
                return spec
        raise KeyError(kind)

    def item(self, item: str) -> ItemSpec:
        for spec in self.item_specs:
            if spec.item == item:
                return spec
        raise KeyError(item)

    # Numeric codes used in observation vectors and wire commands.
    # Creatures are coded by position (agent first); items are 1-based
    # so 0 can mean "none".
    def creature_code(self, kind: str) -> int:
        for i, spec in enumerate(self.creature_specs):
            if spec.kind == kind:
                return i
        raise KeyError(kind)

    def item_code(self, item: str) -> int:
        for i, spec in enumerate(self.item_specs):
            if spec.item == item:
                return i + 1
        raise KeyError(item)

    def item_by_code(self, code: int) -> ItemSpec | None:
        if 1 <= code <= len(self.item_specs):
            return self.item_specs[code - 1]
        return None


# ---------------------------------------------------------------------------
# Presets

_WORLD_DEFAULTS: dict[str, Any] = {
    "kind": "survival",
    "map_width": 64,
    "map_height": 64,
    "decay_satiety": 1.0,
    "decay_thirsty": 1.0,
    "day_length": 120,
    "night_length": 60,
    "season_length": 0,
    "vision_day": 15,
    "vision_night": 3,
    "vision_torch": 10,
    "move_radius": 2,
    "backpack_slots": 24,
    "obs_max_creatures": 28,
    "obs_max_items": 32,
    "seed_policy": "splitmix64",
}


def _standard_buffs() -> tuple[BuffSpec, ...]:
    sources = {
        "night_vision_debuff": ("environment", "vision=night"),
        "torch_vision_buff": ("equipment", "vision=torch"),
        "winter_cold": ("environment", "satiety_decay+1"),
        "summer_heat": ("environment", "thirsty_decay+1"),
        "rain_slow": ("environment", "move_radius=1"),
        "coat_warmth": ("equipment", "cancels winter_cold"),
        "spear_attack": ("equipment", "attack+10"),
        "terrain_forest_cover": ("terrain", "halves pursuit range"),
        "well_fed_regen": ("basic", "hp+1"),
    }
    return tuple(BuffSpec(b, sources[b][0], sources[b][1]) for b in BUFF_IDS)


def _day_and_night_creatures() -> tuple[CreatureSpec, ...]:
    return (
        CreatureSpec("agent", {"hp": 100.0, "attack": 10.0, "defense": 0.0}),
        CreatureSpec("pig", {"hp": 10.0}, behavior="flee", flee_radius=5, move_speed=1),
        CreatureSpec("tree", collect_capacity=3),
        CreatureSpec("river", collect_capacity=None),
    )


def _day_and_night_items() -> tuple[ItemSpec, ...]:
    return (
        ItemSpec("water", consumable=True, thirsty_gain=30.0),
        ItemSpec("meat", consumable=True, satiety_gain=30.0),
        ItemSpec("wood"),
        ItemSpec("torch", equip_slot="hand", durability=100, stackable=False),
    )


def _day_and_night_terrain() -> TerrainSpec:
    return TerrainSpec(
        block_size=8,
        geography_weights={"plain": 0.5, "forest": 0.3, "water": 0.12, "rock": 0.08},
        densities={
            "plain": {"pig": 0.01, "tree": 0.01},
            "forest": {"tree": 0.08, "pig": 0.008},
            "water": {"river": 0.3},
            "rock": {},
        },
    )


def preset(name: str, life_limit: int = 100) -> WorldConfig:
    """Return a named reference configuration.

    Known names: ``day_and_night``, ``four_season``, ``navigation40``.
    `life_limit` overrides the survival budget (capacity of the satiety
    and thirst bars); it is ignored by ``navigation40``.
    """
    if name == "day_and_night":
        return WorldConfig(
            life_limit=life_limit,
            creature_specs=_day_and_night_creatures(),
            item_specs=_day_and_night_items(),
            synthesis_table=(Recipe("torch", {"wood": 2}),),
            drop_table=(
                DropRule("pig", "kill", {"meat": 2}),
                DropRule("tree", "collect", {"wood": 1}),
                DropRule("river", "collect", {"water": 1}),
            ),
            buff_specs=_standard_buffs(),
            terrain_spec=_day_and_night_terrain(),
            nav=None,
            **_WORLD_DEFAULTS,
        )
    if name == "four_season":
        base = _day_and_night_terrain()
        terrain = TerrainSpec(
            block_size=base.block_size,
            geography_weights=dict(base.geography_weights),
            densities={
                "plain": {"pig": 0.01, "tree": 0.01, "wolf": 0.002},
                "forest": {"tree": 0.08, "pig": 0.008, "wolf": 0.004},
                "water": {"river": 0.3},
                "rock": {},
            },
        )
        world = dict(_WORLD_DEFAULTS)
        world["season_length"] = 300
        return WorldConfig(
            life_limit=life_limit,
            creature_specs=_day_and_night_creatures()
            + (
                CreatureSpec(
                    "wolf",
                    {"hp": 30.0, "attack": 10.0},
                    behavior="aggressive",
                    aggro_radius=8,
                    move_speed=1,
                ),
            ),
            item_specs=_day_and_night_items()
            + (
                ItemSpec("fur"),
                ItemSpec("coat", equip_slot="body", durability=100, stackable=False),
                ItemSpec("spear", equip_slot="hand", durability=100, stackable=False),
            ),
            synthesis_table=(
                Recipe("torch", {"wood": 2}),
                Recipe("coat", {"fur": 2}),
                Recipe("spear", {"wood": 2, "fur": 1}),
            ),
            drop_table=(
                DropRule("pig", "kill", {"meat": 2}),
                DropRule("wolf", "kill", {"meat": 1, "fur": 1}),
                DropRule("tree", "collect", {"wood": 1}),
                DropRule("river", "collect", {"water": 1}),
            ),
            buff_specs=_standard_buffs(),
            terrain_spec=terrain,
            nav=None,
            **world,
        )
    if name == "navigation40":
        world = dict(_WORLD_DEFAULTS)
        world.update(
            kind="navigation",
            map_width=40,
            map_height=40,
            decay_satiety=0.0,
            decay_thirsty=0.0,
        )
        return WorldConfig(
            life_limit=1,
            creature_specs=(CreatureSpec("river", collect_capacity=None),),
            item_specs=(),
            synthesis_table=(),
            drop_table=(),
            buff_specs=(),
            terrain_spec=TerrainSpec(),
            nav=NavSpec(),
            **world,
        )
    raise ConfigError(f"unknown preset {name!r} (known: {', '.join(PRESET_NAMES)})")


def override(cfg: WorldConfig, **changes: Any) -> WorldConfig:
    """Return a copy of `cfg` with top-level world fields replaced."""
    return replace(cfg, **changes)


# ---------------------------------------------------------------------------
# Parsing

_WORLD_INT_FIELDS = (
    "map_width",
    "map_height",
    "life_limit",
    "day_length",
    "night_length",
    "season_length",
    "vision_day",
    "vision_night",
    "vision_torch",
    "move_radius",
    "backpack_slots",
    "obs_max_creatures",
    "obs_max_items",
)
_WORLD_FLOAT_FIELDS = ("decay_satiety", "decay_thirsty")
_WORLD_STR_FIELDS = ("kind", "seed_policy")


def _expect(obj: Any, kind: type, path: str) -> Any:
    if kind is float:
        if isinstance(obj, bool) or not isinstance(obj, (int, float)):
            raise ConfigError("expected a number", path)
        return float(obj)
    if kind is int:
        if isinstance(obj, bool) or not isinstance(obj, int):
            raise ConfigError("expected an integer", path)
        return obj
    if not isinstance(obj, kind):
        raise ConfigError(f"expected {kind.__name__}", path)
    return obj


def _reject_unknown(obj: dict, allowed: tuple[str, ...], path: str) -> None:
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r}", f"{path}.{key}" if path else key)


def _get(obj: dict, key: str, kind: type, path: str, default: Any = ...) -> Any:
    if key not in obj:
        if default is ...:
            raise ConfigError("missing required key", f"{path}.{key}" if path else key)
        return default
    return _expect(obj[key], kind, f"{path}.{key}" if path else key)


def _str_map(obj: Any, value_kind: type, path: str) -> dict:
    out = {}
    for key, value in _expect(obj, dict, path).items():
        out[key] = _expect(value, value_kind, f"{path}.{key}")
    return out


def _parse_creature(obj: Any, path: str) -> CreatureSpec:
    obj = _expect(obj, dict, path)
    _reject_unknown(
        obj,
        ("kind", "attributes", "behavior", "flee_radius", "aggro_radius", "move_speed", "collect_capacity"),
        path,
    )
    capacity = obj.get("collect_capacity")
    if capacity is not None:
        capacity = _expect(capacity, int, f"{path}.collect_capacity")
    return CreatureSpec(
        kind=_get(obj, "kind", str, path),
        attributes=_str_map(obj.get("attributes", {}), float, f"{path}.attributes"),
        behavior=_get(obj, "behavior", str, path, "static"),
        flee_radius=_get(obj, "flee_radius", int, path, 0),
        aggro_radius=_get(obj, "aggro_radius", int, path, 0),
        move_speed=_get(obj, "move_speed", int, path, 0),
        collect_capacity=capacity,
    )


def _parse_item(obj: Any, path: str) -> ItemSpec:
    obj = _expect(obj, dict, path)
    _reject_unknown(
        obj,
        ("item", "consumable", "satiety_gain", "thirsty_gain", "equip_slot", "durability", "stackable"),
        path,
    )
    return ItemSpec(
        item=_get(obj, "item", str, path),
        consumable=_get(obj, "consumable", bool, path, False),
        satiety_gain=_get(obj, "satiety_gain", float, path, 0.0),
        thirsty_gain=_get(obj, "thirsty_gain", float, path, 0.0),
        equip_slot=_get(obj, "equip_slot", str, path, "none"),
        durability=_get(obj, "durability", int, path, 0),
        stackable=_get(obj, "stackable", bool, path, True),
    )


def parse_config(text: str) -> WorldConfig:
    """Parse a JSON config document into a fully-defaulted WorldConfig."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_config_dict(doc)


def parse_config_dict(doc: Any) -> WorldConfig:
    doc = _expect(doc, dict, "")
    _reject_unknown(
        doc,
        ("schema_version", "world", "creatures", "items", "synthesis", "drops", "buffs", "terrain", "navigation"),
        "",
    )
    version = _get(doc, "schema_version", int, "")
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version} (expected {SCHEMA_VERSION})", "schema_version")

    world = _expect(doc.get("world"), dict, "world") if "world" in doc else None
    if world is None:
        raise ConfigError("missing required key", "world")
    _reject_unknown(world, _WORLD_STR_FIELDS + _WORLD_INT_FIELDS + _WORLD_FLOAT_FIELDS, "world")

    kind = _get(world, "kind", str, "world", "survival")
    if kind not in ("survival", "navigation"):
        raise ConfigError(f"kind must be 'survival' or 'navigation', got {kind!r}", "world.kind")

    # Defaults for the sectioned tables come from the reference presets so
    # that a minimal document (schema_version + world.life_limit) is usable.
    base = preset("navigation40" if kind == "navigation" else "day_and_night")

    fields: dict[str, Any] = {"kind": kind}
    for name in _WORLD_INT_FIELDS:
        if name == "life_limit":
            fields[name] = _get(world, name, int, "world")  # required
        else:
            fields[name] = _get(world, name, int, "world", getattr(base, name))
    for name in _WORLD_FLOAT_FIELDS:
        fields[name] = _get(world, name, float, "world", getattr(base, name))
    fields["seed_policy"] = _get(world, "seed_policy", str, "world", base.seed_policy)

    if "creatures" in doc:
        items = _expect(doc["creatures"], list, "creatures")
        creatures = tuple(_parse_creature(o, f"creatures[{i}]") for i, o in enumerate(items))
    else:
        creatures = base.creature_specs

    if "items" in doc:
        raw = _expect(doc["items"], list, "items")
        item_specs = tuple(_parse_item(o, f"items[{i}]") for i, o in enumerate(raw))
    else:
        item_specs = base.item_specs

    if "synthesis" in doc:
        raw = _expect(doc["synthesis"], list, "synthesis")
        recipes = []
        for i, o in enumerate(raw):
            path = f"synthesis[{i}]"
            o = _expect(o, dict, path)
            _reject_unknown(o, ("output", "inputs"), path)
            recipes.append(Recipe(_get(o, "output", str, path), _str_map(o.get("inputs", {}), int, f"{path}.inputs")))
        synthesis = tuple(recipes)
    else:
        synthesis = base.synthesis_table

    if "drops" in doc:
        raw = _expect(doc["drops"], list, "drops")
        rules = []
        for i, o in enumerate(raw):
            path = f"drops[{i}]"
            o = _expect(o, dict, path)
            _reject_unknown(o, ("source", "on", "items"), path)
            rules.append(
                DropRule(
                    _get(o, "source", str, path),
                    _get(o, "on", str, path),
                    _str_map(o.get("items", {}), int, f"{path}.items"),
                )
            )
        drops = tuple(rules)
    else:
        drops = base.drop_table

    if "buffs" in doc:
        raw = _expect(doc["buffs"], list, "buffs")
        buffs = []
        for i, o in enumerate(raw):
            path = f"buffs[{i}]"
            o = _expect(o, dict, path)
            _reject_unknown(o, ("buff", "source", "effect"), path)
            buffs.append(
                BuffSpec(_get(o, "buff", str, path), _get(o, "source", str, path), _get(o, "effect", str, path, ""))
            )
        buff_specs = tuple(buffs)
    else:
        buff_specs = base.buff_specs

    if "terrain" in doc:
        o = _expect(doc["terrain"], dict, "terrain")
        _reject_unknown(o, ("block_size", "geography_weights", "densities"), "terrain")
        densities = {}
        for geo, dens in _expect(o.get("densities", {}), dict, "terrain.densities").items():
            densities[geo] = _str_map(dens, float, f"terrain.densities.{geo}")
        terrain = TerrainSpec(
            block_size=_get(o, "block_size", int, "terrain", base.terrain_spec.block_size),
            geography_weights=_str_map(
                o.get("geography_weights", dict(base.terrain_spec.geography_weights)),
                float,
                "terrain.geography_weights",
            ),
            densities=densities if "densities" in o else {k: dict(v) for k, v in base.terrain_spec.densities.items()},
        )
    else:
        terrain = base.terrain_spec

    nav = base.nav
    if "navigation" in doc:
        o = _expect(doc["navigation"], dict, "navigation")
        _reject_unknown(o, ("horizon", "goal_distance", "offset_limit", "river_count", "river_length"), "navigation")
        nav = NavSpec(
            horizon=_get(o, "horizon", int, "navigation", 20),
            goal_distance=_get(o, "goal_distance", float, "navigation", 0.1),
            offset_limit=_get(o, "offset_limit", int, "navigation", 2),
            river_count=_get(o, "river_count", int, "navigation", 3),
            river_length=_get(o, "river_length", int, "navigation", 40),
        )
    if kind != "navigation":
        nav = None
    elif nav is None:
        nav = NavSpec()

    return WorldConfig(
        creature_specs=creatures,
        item_specs=item_specs,
        synthesis_table=synthesis,
        drop_table=drops,
        buff_specs=buff_specs,
        terrain_spec=terrain,
        nav=nav,
        **fields,
    )


# ---------------------------------------------------------------------------
# Serialization

def config_dict(cfg: WorldConfig) -> dict:
    """Plain-data form of `cfg`, suitable for JSON."""
    world: dict[str, Any] = {"kind": cfg.kind}
    for name in _WORLD_INT_FIELDS:
        world[name] = getattr(cfg, name)
    for name in _WORLD_FLOAT_FIELDS:
        world[name] = getattr(cfg, name)
    world["seed_policy"] = cfg.seed_policy
    doc: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "world": world,
        "creatures": [
            {
                "kind": c.kind,
                "attributes": dict(c.attributes),
                "behavior": c.behavior,
                "flee_radius": c.flee_radius,
                "aggro_radius": c.aggro_radius,
                "move_speed": c.move_speed,
                "collect_capacity": c.collect_capacity,
            }
            for c in cfg.creature_specs
        ],
        "items": [
            {
                "item": i.item,
                "consumable": i.consumable,
                "satiety_gain": i.satiety_gain,
                "thirsty_gain": i.thirsty_gain,
                "equip_slot": i.equip_slot,
                "durability": i.durability,
                "stackable": i.stackable,
            }
            for i in cfg.item_specs
        ],
        "synthesis": [{"output": r.output, "inputs": dict(r.inputs)} for r in cfg.synthesis_table],
        "drops": [{"source": d.source, "on": d.on, "items": dict(d.items)} for d in cfg.drop_table],
        "buffs": [{"buff": b.buff, "source": b.source, "effect": b.effect} for b in cfg.buff_specs],
        "terrain": {
            "block_size": cfg.terrain_spec.block_size,
            "geography_weights": dict(cfg.terrain_spec.geography_weights),
            "densities": {k: dict(v) for k, v in cfg.terrain_spec.densities.items()},
        },
    }
    if cfg.nav is not None:
        doc["navigation"] = {
            "horizon": cfg.nav.horizon,
            "goal_distance": cfg.nav.goal_distance,
            "offset_limit": cfg.nav.offset_limit,
            "river_count": cfg.nav.river_count,
            "river_length": cfg.nav.river_length,
        }
    return doc


def serialize_config(cfg: WorldConfig) -> str:
    """Canonical JSON text for `cfg` (sorted keys, stable formatting)."""
    return json.dumps(config_dict(cfg), sort_keys=True, indent=2)


# ---------------------------------------------------------------------------
# Validation

def validate(cfg: WorldConfig) -> list[str]:
    """Return schema violations as human-readable strings (empty = valid)."""
    bad: list[str] = []
    if cfg.map_width < 3 or cfg.map_height < 3:
        bad.append(f"world.map_width/map_height: map must be at least 3x3, got {cfg.map_width}x{cfg.map_height}")
    if cfg.life_limit < 1:
        bad.append(f"world.life_limit: must be >= 1, got {cfg.life_limit}")
    if cfg.decay_satiety < 0 or cfg.decay_thirsty < 0:
        bad.append("world.decay_satiety/decay_thirsty: decay rates must be >= 0")
    if cfg.day_length < 1:
        bad.append(f"world.day_length: must be >= 1, got {cfg.day_length}")
    if cfg.night_length < 0 or cfg.season_length < 0:
        bad.append("world.night_length/season_length: must be >= 0")
    for name in ("vision_day", "vision_night", "vision_torch"):
        if getattr(cfg, name) < 0:
            bad.append(f"world.{name}: must be >= 0")
    if cfg.move_radius < 1:
        bad.append("world.move_radius: must be >= 1")
    if cfg.backpack_slots < 1:
        bad.append("world.backpack_slots: must be >= 1")
    if cfg.obs_max_creatures < 1 or cfg.obs_max_items < 1:
        bad.append("world.obs_max_creatures/obs_max_items: must be >= 1")

    kinds = [c.kind for c in cfg.creature_specs]
    if len(set(kinds)) != len(kinds):
        bad.append("creatures: duplicate kind")
    if cfg.kind == "survival" and "agent" not in kinds:
        bad.append("creatures: survival worlds require an 'agent' creature")
    elif cfg.kind == "survival" and kinds and kinds[0] != "agent":
        bad.append("creatures: the agent must be listed first (it is creature code 0)")
    for c in cfg.creature_specs:
        if c.behavior not in BEHAVIORS:
            bad.append(f"creatures.{c.kind}.behavior: unknown behavior {c.behavior!r}")
        if c.behavior in ("flee", "aggressive") and c.move_speed < 1:
            bad.append(f"creatures.{c.kind}.move_speed: mobile creatures need move_speed >= 1")
        if c.flee_radius < 0 or c.aggro_radius < 0 or c.move_speed < 0:
            bad.append(f"creatures.{c.kind}: radii and move_speed must be >= 0")
        if c.collect_capacity is not None and c.collect_capacity < 1:
            bad.append(f"creatures.{c.kind}.collect_capacity: must be >= 1 or null")
        for attr, value in c.attributes.items():
            if value < 0:
                bad.append(f"creatures.{c.kind}.attributes.{attr}: must be >= 0")

    item_ids = [i.item for i in cfg.item_specs]
    if len(set(item_ids)) != len(item_ids):
        bad.append("items: duplicate item id")
    for i in cfg.item_specs:
        if i.equip_slot not in EQUIP_SLOTS:
            bad.append(f"items.{i.item}.equip_slot: unknown slot {i.equip_slot!r}")
        if i.equip_slot != "none" and i.durability < 1:
            bad.append(f"items.{i.item}.durability: equipable items need durability >= 1")
        if i.equip_slot != "none" and i.stackable:
            bad.append(f"items.{i.item}.stackable: equipable items cannot stack")
        if i.satiety_gain < 0 or i.thirsty_gain < 0:
            bad.append(f"items.{i.item}: gains must be >= 0")

    known_items = set(item_ids)
    outputs = [r.output for r in cfg.synthesis_table]
    if len(set(outputs)) != len(outputs):
        bad.append("synthesis: duplicate recipe output")
    for r in cfg.synthesis_table:
        if r.output not in known_items:
            bad.append(f"synthesis.{r.output}: output is not a known item")
        if not r.inputs:
            bad.append(f"synthesis.{r.output}: recipe needs at least one input")
        for item, count in r.inputs.items():
            if item not in known_items:
                bad.append(f"synthesis.{r.output}.inputs.{item}: not a known item")
            if count < 1:
                bad.append(f"synthesis.{r.output}.inputs.{item}: count must be >= 1")

    known_kinds = set(kinds)
    for d in cfg.drop_table:
        if d.source not in known_kinds:
            bad.append(f"drops.{d.source}: source is not a known creature kind")
        if d.on not in ("kill", "collect"):
            bad.append(f"drops.{d.source}.on: must be 'kill' or 'collect', got {d.on!r}")
        if not d.items:
            bad.append(f"drops.{d.source}: drop rule needs at least one item")
        for item, count in d.items.items():
            if item not in known_items:
                bad.append(f"drops.{d.source}.items.{item}: not a known item")
            if count < 1:
                bad.append(f"drops.{d.source}.items.{item}: count must be >= 1")

    seen_buffs = set()
    for b in cfg.buff_specs:
        if b.buff not in BUFF_IDS:
            bad.append(f"buffs.{b.buff}: unknown buff id")
        if b.buff in seen_buffs:
            bad.append(f"buffs.{b.buff}: duplicate buff id")
        seen_buffs.add(b.buff)
        if b.source not in BUFF_SOURCES:
            bad.append(f"buffs.{b.buff}.source: unknown source {b.source!r}")

    t = cfg.terrain_spec
    if t.block_size < 1:
        bad.append("terrain.block_size: must be >= 1")
    if not t.geography_weights or all(w <= 0 for w in t.geography_weights.values()):
        bad.append("terrain.geography_weights: at least one geography needs positive weight")
    for geo, w in t.geography_weights.items():
        if w < 0:
            bad.append(f"terrain.geography_weights.{geo}: must be >= 0")
    for geo, dens in t.densities.items():
        if geo not in t.geography_weights:
            bad.append(f"terrain.densities.{geo}: geography has no weight entry")
        for kind, d in dens.items():
            if kind not in known_kinds or kind == "agent":
                bad.append(f"terrain.densities.{geo}.{kind}: not a spawnable creature kind")
            if not (0.0 <= d <= 1.0):
                bad.append(f"terrain.densities.{geo}.{kind}: density must be in [0, 1]")

    if cfg.kind == "navigation":
        n = cfg.nav
        if n is None:
            bad.append("navigation: navigation worlds require a navigation section")
        else:
            if n.horizon < 1:
                bad.append("navigation.horizon: must be >= 1")
            if not (n.goal_distance > 0) or not math.isfinite(n.goal_distance):
                bad.append("navigation.goal_distance: must be > 0")
            if n.offset_limit < 1:
                bad.append("navigation.offset_limit: must be >= 1")
            if n.river_count < 1 or n.river_length < 1:
                bad.append("navigation.river_count/river_length: must be >= 1")

    return bad
