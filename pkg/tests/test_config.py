"""Config schema: presets, round-trip serialization, validation."""

import json

import pytest

from eden.config import (
    PRESET_NAMES,
    config_dict,
    override,
    parse_config,
    preset,
    serialize_config,
    validate,
)
from eden.errors import ConfigError


class TestPresets:
    def test_known_names(self):
        assert PRESET_NAMES == ("day_and_night", "four_season", "navigation40")

    @pytest.mark.parametrize("name", PRESET_NAMES)
    def test_presets_validate_clean(self, name):
        assert validate(preset(name)) == []

    def test_day_and_night_items(self):
        cfg = preset("day_and_night")
        assert [i.item for i in cfg.item_specs] == ["water", "meat", "wood", "torch"]

    def test_four_season_adds_wolf_and_gear(self):
        cfg = preset("four_season")
        kinds = {c.kind for c in cfg.creature_specs}
        items = {i.item for i in cfg.item_specs}
        assert "wolf" in kinds
        assert {"fur", "coat", "spear"} <= items
        assert cfg.season_length == 300

    def test_navigation40_river_only(self):
        cfg = preset("navigation40")
        assert cfg.kind == "navigation"
        assert cfg.map_width == 40 and cfg.map_height == 40
        assert [c.kind for c in cfg.creature_specs] == ["river"]

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            preset("atlantis")

    def test_life_limit_argument(self):
        assert preset("day_and_night", life_limit=50).life_limit == 50


class TestRoundTrip:
    @pytest.mark.parametrize("name", PRESET_NAMES)
    def test_parse_serialize_identity(self, name):
        cfg = preset(name)
        assert parse_config(serialize_config(cfg)) == cfg

    def test_schema_version_present(self, day_and_night):
        doc = json.loads(serialize_config(day_and_night))
        assert doc["schema_version"] == 1

    def test_override_round_trips(self, day_and_night):
        cfg = override(day_and_night, life_limit=7, map_width=16, map_height=16)
        assert parse_config(serialize_config(cfg)) == cfg

    def test_integer_fields_survive_exactly(self, day_and_night):
        back = parse_config(serialize_config(day_and_night))
        assert back.backpack_slots == 24
        assert back.vision_day == 15


class TestParsing:
    def test_unknown_top_level_key_rejected(self, day_and_night):
        doc = config_dict(day_and_night)
        doc["flavor"] = "salty"
        with pytest.raises(ConfigError, match="flavor"):
            parse_config(json.dumps(doc))

    def test_unknown_nested_key_rejected(self, day_and_night):
        doc = config_dict(day_and_night)
        doc["world"]["gravity"] = 9.8
        with pytest.raises(ConfigError, match="gravity"):
            parse_config(json.dumps(doc))

    def test_wrong_type_rejected(self, day_and_night):
        doc = config_dict(day_and_night)
        doc["world"]["life_limit"] = "many"
        with pytest.raises(ConfigError):
            parse_config(json.dumps(doc))

    def test_recipe_with_unknown_item_flagged(self, day_and_night):
        doc = config_dict(day_and_night)
        doc["synthesis"].append({"output": "axe", "inputs": {"axe_head": 1}})
        problems = validate(parse_config(json.dumps(doc)))
        assert any("axe" in p for p in problems)

    def test_not_json(self):
        with pytest.raises(ConfigError):
            parse_config("not json at all {")


class TestValidate:
    def test_life_limit_zero(self, day_and_night):
        bad = override(day_and_night, life_limit=0)
        assert any("life_limit" in p for p in validate(bad))

    def test_tiny_map(self, day_and_night):
        bad = override(day_and_night, map_width=2, map_height=2)
        assert any("map_width" in p for p in validate(bad))

    def test_violations_name_field_and_rule(self, day_and_night):
        bad = override(day_and_night, life_limit=0, day_length=0)
        problems = validate(bad)
        assert len(problems) >= 2
        for p in problems:
            assert ":" in p  # field: rule

    def test_validate_returns_data_not_raises(self, day_and_night):
        # violations are values, not exceptions
        bad = override(day_and_night, move_radius=0)
        assert isinstance(validate(bad), list)
