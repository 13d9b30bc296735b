"""Observation assembly: raw block vectors and compact wrapped presets.

The raw observation is a fixed-length float vector of seven blocks:

  block1  agent attributes + last action result          6
  block2  backpack slots x (item code, count/durability) 2 * slots
  block3  equipment slots (hand, body) x (code, dur)     4
  block4  buff flags, registry order                     len(buffs)
  block5  visible creatures x (type, x, y, hp, 0, 0, 0)  7 * cap
  block6  visible ground stacks x (type, x, y)           3 * cap
  block7  cells x (weather, geography, 0, 0) over the
          day-vision window                              4 * (2*vision_day+1)^2

Creature and stack rows are sorted nearest-first (squared Euclidean
distance, then entity id / item code). Only cells and entities inside
the *current* vision radius are populated; everything else is zero, so
the vector length depends only on the config. Wrapped presets are pure
projections of the raw value onto small fixed layouts (78 / 105 / 195
dims); the field-by-field table lives in docs/obs-layout.md and is also
emitted by `eden describe-obs`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import WorldConfig
from .engine import WorldState, vision_radius

WRAP_PRESETS = ("baseline", "pigs10", "all10")

# Wrapped slot counts per preset: (pigs, trees, rivers, each material).
_SLOT_PLAN = {
    "baseline": (1, 1, 1, 1),
    "pigs10": (10, 1, 1, 1),
    "all10": (10, 10, 10, 5),
}

_MATERIALS = ("meat", "water", "wood")
_COUNT_ITEMS = ("meat", "water", "wood", "torch")
_PATCH_RADIUS = 3  # 7x7 local geography patch; fits the night vision radius

_mask_cache: dict[tuple[int, int], np.ndarray] = {}


@dataclass
class RawObservation:
    cfg: WorldConfig
    agent_x: int
    agent_y: int
    vision: int
    block1: np.ndarray
    block2: np.ndarray
    block3: np.ndarray
    block4: np.ndarray
    block5: np.ndarray  # (cap, 7)
    block6: np.ndarray  # (cap, 3)
    block7: np.ndarray  # (window^2, 4)

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate(
            [
                self.block1,
                self.block2,
                self.block3,
                self.block4,
                self.block5.ravel(),
                self.block6.ravel(),
                self.block7.ravel(),
            ]
        )


@dataclass
class WrappedObservation:
    preset: str
    vector: np.ndarray


def raw_dimension(cfg: WorldConfig) -> int:
    window = 2 * cfg.vision_day + 1
    return (
        6
        + 2 * cfg.backpack_slots
        + 4
        + len(cfg.buff_specs)
        + 7 * cfg.obs_max_creatures
        + 3 * cfg.obs_max_items
        + 4 * window * window
    )


def dimension(cfg: WorldConfig, preset: str) -> int:
    """Observation length for (config, preset) without building a world."""
    if preset == "native":
        if cfg.kind != "navigation":
            raise ValueError("preset 'native' applies to navigation configs")
        return 2
    if cfg.kind == "navigation":
        raise ValueError(f"navigation configs have no {preset!r} observation")
    if preset == "raw":
        return raw_dimension(cfg)
    if preset not in _SLOT_PLAN:
        raise ValueError(f"unknown observation preset {preset!r}")
    pigs, trees, rivers, mats = _SLOT_PLAN[preset]
    patch = (2 * _PATCH_RADIUS + 1) ** 2
    return 11 + 3 * (pigs + trees + rivers + mats * len(_MATERIALS)) + patch


def assemble_raw(world: WorldState) -> RawObservation:
    cfg = world.cfg
    a = world.agent
    r = vision_radius(world)

    block1 = np.array(
        [a.hp, a.satiety, a.thirsty, a.attack, a.defense, 1.0 if world.last_result else 0.0],
        dtype=np.float64,
    )

    block2 = np.zeros(2 * cfg.backpack_slots, dtype=np.float64)
    for i, slot in enumerate(a.backpack):
        if slot is not None:
            block2[2 * i] = cfg.item_code(slot[0])
            block2[2 * i + 1] = slot[1]

    block3 = np.zeros(4, dtype=np.float64)
    for i, name in enumerate(("hand", "body")):
        gear = a.equipment[name]
        if gear is not None:
            block3[2 * i] = cfg.item_code(gear[0])
            block3[2 * i + 1] = gear[1]

    block4 = np.array(
        [1.0 if b.buff in world.buffs else 0.0 for b in cfg.buff_specs], dtype=np.float64
    )

    ax, ay = a.x, a.y
    rows = []
    for e in world.entities.values():
        dx = e.x - ax
        dy = e.y - ay
        if -r <= dx <= r and -r <= dy <= r:
            rows.append((dx * dx + dy * dy, e.eid, e))
    rows.sort(key=lambda t: (t[0], t[1]))
    block5 = np.zeros((cfg.obs_max_creatures, 7), dtype=np.float64)
    for i, (_, _, e) in enumerate(rows[: cfg.obs_max_creatures]):
        block5[i, 0] = cfg.creature_code(e.kind)
        block5[i, 1] = e.x
        block5[i, 2] = e.y
        block5[i, 3] = e.hp if e.hp is not None else 0.0

    stacks = []
    for (x, y), items in world.ground.items():
        dx = x - ax
        dy = y - ay
        if -r <= dx <= r and -r <= dy <= r:
            d2 = dx * dx + dy * dy
            for item in items:
                stacks.append((d2, cfg.item_code(item), y, x))
    stacks.sort()
    block6 = np.zeros((cfg.obs_max_items, 3), dtype=np.float64)
    for i, (_, code, y, x) in enumerate(stacks[: cfg.obs_max_items]):
        block6[i, 0] = code
        block6[i, 1] = x
        block6[i, 2] = y

    block7 = _cell_block(world, r)

    return RawObservation(
        cfg=cfg,
        agent_x=ax,
        agent_y=ay,
        vision=r,
        block1=block1,
        block2=block2,
        block3=block3,
        block4=block4,
        block5=block5,
        block6=block6,
        block7=block7,
    )


def _vision_mask(window: int, r: int) -> np.ndarray:
    key = (window, r)
    mask = _mask_cache.get(key)
    if mask is None:
        half = window // 2
        span = np.abs(np.arange(window) - half)
        mask = (span[:, None] <= r) & (span[None, :] <= r)
        _mask_cache[key] = mask
    return mask


def _cell_block(world: WorldState, r: int) -> np.ndarray:
    cfg = world.cfg
    vd = cfg.vision_day
    window = 2 * vd + 1
    ax, ay = world.agent.x, world.agent.y

    geo = np.zeros((window, window), dtype=np.float64)
    weather = np.zeros((window, window), dtype=np.float64)

    x0 = max(0, ax - vd)
    x1 = min(world.width, ax + vd + 1)
    y0 = max(0, ay - vd)
    y1 = min(world.height, ay + vd + 1)
    if x0 < x1 and y0 < y1:
        geo_map = world.geo_np
        wb = world.weather_np
        gy0, gx0 = y0 - (ay - vd), x0 - (ax - vd)
        sub = geo_map[y0:y1, x0:x1]
        geo[gy0 : gy0 + sub.shape[0], gx0 : gx0 + sub.shape[1]] = sub
        base = wb[y0:y1, x0:x1]
        if world.season >= 0:
            base = (base + world.season) % 3
        weather[gy0 : gy0 + sub.shape[0], gx0 : gx0 + sub.shape[1]] = base + 1.0

    visible = _vision_mask(window, min(r, vd))
    geo *= visible
    weather *= visible

    block = np.zeros((window * window, 4), dtype=np.float64)
    block[:, 0] = weather.ravel()
    block[:, 1] = geo.ravel()
    return block


def wrap(raw: RawObservation, preset: str) -> WrappedObservation:
    """Project a raw observation onto a wrapped preset layout."""
    if preset not in _SLOT_PLAN:
        raise ValueError(f"unknown observation preset {preset!r}")
    cfg = raw.cfg
    pigs, trees, rivers, mats = _SLOT_PLAN[preset]
    out = np.zeros(dimension(cfg, preset), dtype=np.float64)
    out[0:6] = raw.block1

    counts = {name: 0.0 for name in _COUNT_ITEMS}
    for i in range(0, raw.block2.shape[0], 2):
        code = int(raw.block2[i])
        if code:
            spec = cfg.item_by_code(code)
            if spec is not None and spec.item in counts:
                counts[spec.item] += raw.block2[i + 1] if spec.stackable else 1.0
    out[6:10] = [counts[n] for n in _COUNT_ITEMS]

    try:
        torch_code = cfg.item_code("torch")
    except KeyError:
        torch_code = -1
    out[10] = 1.0 if int(raw.block3[0]) == torch_code else 0.0

    pos = 11
    pos = _entity_slots(raw, "pig", pigs, out, pos)
    pos = _entity_slots(raw, "tree", trees, out, pos)
    pos = _entity_slots(raw, "river", rivers, out, pos)
    for name in _MATERIALS:
        pos = _stack_slots(raw, name, mats, out, pos)

    # 7x7 geography patch around the agent, taken from block7.
    vd = cfg.vision_day
    window = 2 * vd + 1
    geo = raw.block7[:, 1].reshape(window, window)
    p = _PATCH_RADIUS
    for dy in range(-p, p + 1):
        for dx in range(-p, p + 1):
            wy, wx = vd + dy, vd + dx
            if 0 <= wy < window and 0 <= wx < window:
                out[pos] = geo[wy, wx]
            pos += 1
    return WrappedObservation(preset, out)


def _entity_slots(raw: RawObservation, kind: str, n: int, out: np.ndarray, pos: int) -> int:
    cfg = raw.cfg
    try:
        code = cfg.creature_code(kind)
        has_hp = "hp" in cfg.creature(kind).attributes
    except KeyError:
        return pos + 3 * n
    filled = 0
    for row in raw.block5:
        if filled >= n:
            break
        if int(row[0]) != code:  # zero rows are padding (code 0 = agent, never listed)
            continue
        out[pos] = row[1] - raw.agent_x
        out[pos + 1] = row[2] - raw.agent_y
        out[pos + 2] = row[3] if has_hp else 1.0
        pos += 3
        filled += 1
    return pos + 3 * (n - filled)


def _stack_slots(raw: RawObservation, item: str, n: int, out: np.ndarray, pos: int) -> int:
    cfg = raw.cfg
    try:
        code = cfg.item_code(item)
    except KeyError:
        return pos + 3 * n
    filled = 0
    for row in raw.block6:
        if filled >= n:
            break
        if int(row[0]) != code:
            continue
        out[pos] = row[1] - raw.agent_x
        out[pos + 1] = row[2] - raw.agent_y
        out[pos + 2] = 1.0
        pos += 3
        filled += 1
    return pos + 3 * (n - filled)


def observe(world: WorldState, preset: str):
    """One-call observation: wrapped preset, raw vector, or raw blocks."""
    if preset == "raw":
        return assemble_raw(world).vector
    return wrap(assemble_raw(world), preset).vector


def layout(preset: str) -> list[str]:
    """Field names, in order, for a wrapped preset."""
    if preset not in _SLOT_PLAN:
        raise ValueError(f"unknown observation preset {preset!r}")
    pigs, trees, rivers, mats = _SLOT_PLAN[preset]
    names = ["hp", "satiety", "thirsty", "attack", "defense", "last_action_result"]
    names += [f"count_{n}" for n in _COUNT_ITEMS]
    names.append("torch_equipped")
    for kind, n in (("pig", pigs), ("tree", trees), ("river", rivers)):
        for i in range(1, n + 1):
            third = "hp" if kind == "pig" else "present"
            names += [f"{kind}{i}_dx", f"{kind}{i}_dy", f"{kind}{i}_{third}"]
    for mat in _MATERIALS:
        for i in range(1, mats + 1):
            names += [f"{mat}{i}_dx", f"{mat}{i}_dy", f"{mat}{i}_present"]
    p = _PATCH_RADIUS
    for dy in range(-p, p + 1):
        for dx in range(-p, p + 1):
            names.append(f"geo_{dy:+d}{dx:+d}")
    return names


def describe(cfg: WorldConfig, preset: str) -> dict:
    """Machine-readable layout description (CLI `describe-obs`)."""
    if cfg.kind == "navigation" or preset == "native":
        return {"preset": "native", "length": 2, "fields": ["x", "y"]}
    if preset == "raw":
        window = 2 * cfg.vision_day + 1
        return {
            "preset": "raw",
            "length": raw_dimension(cfg),
            "blocks": {
                "block1_agent": 6,
                "block2_backpack": 2 * cfg.backpack_slots,
                "block3_equipment": 4,
                "block4_buffs": len(cfg.buff_specs),
                "block5_creatures": [cfg.obs_max_creatures, 7],
                "block6_ground_items": [cfg.obs_max_items, 3],
                "block7_cells": [window * window, 4],
            },
        }
    names = layout(preset)
    return {"preset": preset, "length": len(names), "fields": names}
