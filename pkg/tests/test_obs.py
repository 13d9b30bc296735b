"""Observation vectors: dimensions, layout, purity, padding."""

import numpy as np
import pytest

from eden.config import override, preset
from eden.engine import ActionCommand, new_fixed_world, new_world, step
from eden.obs import (
    WRAP_PRESETS,
    assemble_raw,
    dimension,
    layout,
    observe,
    raw_dimension,
    wrap,
)

DIMS = {"baseline": 78, "pigs10": 105, "all10": 195}


class TestDimension:
    @pytest.mark.parametrize("name,dim", sorted(DIMS.items()))
    def test_wrapped_constants(self, day_and_night, name, dim):
        assert dimension(day_and_night, name) == dim

    def test_raw_reference_value(self, day_and_night):
        assert raw_dimension(day_and_night) == 4203
        assert dimension(day_and_night, "raw") == 4203

    def test_navigation_native(self):
        assert dimension(preset("navigation40"), "native") == 2

    def test_native_rejected_for_survival(self, day_and_night):
        with pytest.raises(ValueError):
            dimension(day_and_night, "native")

    def test_wrapped_rejected_for_navigation(self):
        with pytest.raises(ValueError):
            dimension(preset("navigation40"), "baseline")

    def test_unknown_preset(self, day_and_night):
        with pytest.raises(ValueError):
            dimension(day_and_night, "kitchen_sink")

    @pytest.mark.parametrize("name", WRAP_PRESETS)
    def test_vector_length_matches_dimension(self, day_and_night, name):
        w = new_world(day_and_night, 8)
        for _ in range(5):
            assert observe(w, name).shape == (dimension(day_and_night, name),)
            step(w, ActionCommand("move", 1, 1))

    @pytest.mark.parametrize("name", WRAP_PRESETS)
    def test_layout_names_cover_vector(self, day_and_night, name):
        assert len(layout(name)) == dimension(day_and_night, name)


class TestRawBlocks:
    def test_block_widths(self, day_and_night):
        w = new_world(day_and_night, 2)
        raw = assemble_raw(w)
        assert raw.block5.shape[1] == 7
        assert raw.block6.shape[1] == 3
        assert raw.block7.shape[1] == 4

    def test_fresh_backpack_is_empty_pairs(self, day_and_night):
        w = new_fixed_world(day_and_night, (5, 5), [("river", 0, 0)])
        raw = assemble_raw(w)
        assert raw.block2.shape == (48,)
        assert not raw.block2.any()

    def test_equipped_torch_in_block3(self, day_and_night):
        w = new_fixed_world(day_and_night, (5, 5), [("river", 0, 0)])
        w.agent.backpack[0] = ["torch", 100]
        step(w, ActionCommand("equip", day_and_night.item_code("torch"), 0))
        raw = assemble_raw(w)
        assert raw.block3[0] == day_and_night.item_code("torch")
        assert raw.block3[1] == 100

    def test_visible_pig_in_block5(self, day_and_night):
        w = new_fixed_world(day_and_night, (5, 5), [("pig", 7, 5)])
        rows = assemble_raw(w).block5
        pig_code = day_and_night.creature_code("pig")
        assert any(int(r[0]) == pig_code for r in rows)

    def test_pig_outside_vision_absent(self, day_and_night):
        cfg = override(day_and_night, day_length=2, night_length=8)
        w = new_fixed_world(cfg, (5, 5), [("pig", 30, 30)])
        # at day the pig at Chebyshev 25 > 15 is already hidden
        assert not assemble_raw(w).block5.any()

    def test_night_shrinks_vision(self, day_and_night):
        cfg = override(day_and_night, day_length=2, night_length=8, life_limit=50)
        w = new_fixed_world(cfg, (5, 5), [("river", 10, 5)])
        assert assemble_raw(w).block5.any()  # distance 5 <= day vision 15
        step(w, ActionCommand("idle"))
        step(w, ActionCommand("idle"))
        assert w.night
        assert not assemble_raw(w).block5.any()  # 5 > night vision 3

    def test_block5_sorted_nearest_first(self, day_and_night):
        w = new_fixed_world(day_and_night, (5, 5), [("pig", 12, 5), ("pig", 7, 5)])
        rows = assemble_raw(w).block5
        filled = [r for r in rows if r[0]]
        assert len(filled) == 2
        assert filled[0][1] == 7 and filled[1][1] == 12


class TestWrap:
    def test_pure_projection(self, day_and_night):
        w = new_world(day_and_night, 6)
        raw = assemble_raw(w)
        a = wrap(raw, "baseline").vector
        b = wrap(raw, "baseline").vector
        assert np.array_equal(a, b)

    def test_observe_deterministic(self, day_and_night):
        w1 = new_world(day_and_night, 6)
        w2 = new_world(day_and_night, 6)
        for name in WRAP_PRESETS:
            assert np.array_equal(observe(w1, name), observe(w2, name))

    def test_agent_block_values(self, day_and_night):
        w = new_fixed_world(day_and_night, (5, 5), [("river", 0, 0)])
        v = observe(w, "baseline")
        assert list(v[:6]) == [100.0, 100.0, 100.0, 10.0, 0.0, 1.0]

    def test_backpack_counts_slot(self, day_and_night):
        w = new_fixed_world(day_and_night, (5, 5), [("river", 0, 0)])
        w.agent.backpack[0] = ["water", 3]
        w.agent.backpack[1] = ["wood", 2]
        v = observe(w, "baseline")
        # count order: meat, water, wood, torch
        assert list(v[6:10]) == [0.0, 3.0, 2.0, 0.0]

    def test_arm_flag_tracks_torch(self, day_and_night):
        w = new_fixed_world(day_and_night, (5, 5), [("river", 0, 0)])
        assert observe(w, "baseline")[10] == 0.0
        w.agent.equipment["hand"] = ["torch", 100]
        assert observe(w, "baseline")[10] == 1.0

    def test_pig_slot_relative_coordinates(self, day_and_night):
        w = new_fixed_world(day_and_night, (5, 5), [("pig", 7, 4)])
        v = observe(w, "baseline")
        assert list(v[11:14]) == [2.0, -1.0, 10.0]

    def test_missing_pig_slot_zero_padded(self, day_and_night):
        w = new_fixed_world(day_and_night, (5, 5), [("river", 6, 5)])
        v = observe(w, "baseline")
        assert list(v[11:14]) == [0.0, 0.0, 0.0]

    def test_pigs10_padding_with_two_pigs(self, day_and_night):
        w = new_fixed_world(day_and_night, (5, 5), [("pig", 7, 5), ("pig", 9, 5)])
        v = observe(w, "pigs10")
        pig_rows = v[11:41].reshape(10, 3)
        assert pig_rows[0].any() and pig_rows[1].any()
        assert not pig_rows[2:].any()

    def test_invisible_entity_removal_invariance(self, day_and_night):
        with_far = new_fixed_world(day_and_night, (5, 5), [("pig", 7, 5), ("pig", 40, 40)])
        without = new_fixed_world(day_and_night, (5, 5), [("pig", 7, 5)])
        for name in WRAP_PRESETS:
            assert np.array_equal(observe(with_far, name), observe(without, name))

    def test_unknown_wrap_preset(self, day_and_night):
        w = new_fixed_world(day_and_night, (5, 5), [("river", 0, 0)])
        with pytest.raises(ValueError):
            wrap(assemble_raw(w), "everything")
