"""CLI subcommands: exit codes, JSON output, file side effects."""

import json
import shutil
import subprocess

import pytest

from eden.cli import main
from eden.config import preset, serialize_config
from eden.harness import read_episode_jsonl, replay


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_config(tmp_path, name="day_and_night", **overrides):
    blob = json.loads(serialize_config(preset(name)))
    blob["world"].update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(blob))
    return str(path)


class TestValidate:
    def test_good_config(self, capsys, tmp_path):
        code, out, _ = run_cli(capsys, "validate", write_config(tmp_path))
        assert code == 0
        assert json.loads(out) == {"ok": True, "kind": "survival"}

    def test_bad_config_lists_violations(self, capsys, tmp_path):
        path = write_config(tmp_path, life_limit=0)
        code, _, err = run_cli(capsys, "validate", path)
        assert code == 1
        assert "life_limit" in err

    def test_json_flag_adds_machine_line(self, capsys, tmp_path):
        path = write_config(tmp_path, life_limit=0)
        code, _, err = run_cli(capsys, "--json", "validate", path)
        assert code == 1
        trailing = json.loads(err.strip().split("\n")[-1])
        assert trailing["ok"] is False and trailing["problems"]

    def test_missing_file(self, capsys):
        code, _, err = run_cli(capsys, "validate", "/nonexistent/config.json")
        assert code == 1
        assert "error:" in err

    def test_unparseable_file(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{ not json")
        code, _, err = run_cli(capsys, "validate", str(path))
        assert code == 1


class TestRun:
    def test_idle_lifetime_is_exact(self, capsys):
        code, out, _ = run_cli(
            capsys, "run", "--life-limit", "50", "--episodes", "2", "--policy", "idle"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["stats"]["lifetime_mean"] == 50.0
        assert payload["last_summary"]["lifetime"] == 50

    def test_writes_episode_log_and_csv(self, capsys, tmp_path):
        log = tmp_path / "episode.jsonl"
        csv_path = tmp_path / "batch.csv"
        code, _, _ = run_cli(
            capsys,
            "run",
            "--life-limit", "30",
            "--policy", "random",
            "--policy-seed", "5",
            "--out", str(log),
            "--csv", str(csv_path),
        )
        assert code == 0
        record = read_episode_jsonl(str(log))
        from eden.config import override

        assert replay(override(preset("day_and_night"), life_limit=30), record) == []
        assert csv_path.read_text().startswith("seed,")

    def test_batch_logs_suffixed_by_seed(self, capsys, tmp_path):
        log = tmp_path / "episode.jsonl"
        code, _, _ = run_cli(
            capsys,
            "run",
            "--life-limit", "20",
            "--episodes", "2",
            "--seed", "10",
            "--out", str(log),
        )
        assert code == 0
        assert (tmp_path / "episode.jsonl.10").exists()
        assert (tmp_path / "episode.jsonl.11").exists()

    def test_config_file_and_preset_interchange(self, capsys, tmp_path):
        path = write_config(tmp_path, life_limit=25)
        code, out, _ = run_cli(capsys, "run", "--config", path)
        assert code == 0
        assert json.loads(out)["last_summary"]["lifetime"] == 25

    def test_navigation_run(self, capsys):
        code, out, _ = run_cli(
            capsys, "run", "--preset", "navigation40", "--policy", "nav_greedy", "--episodes", "3"
        )
        assert code == 0
        stats = json.loads(out)["stats"]
        assert stats["episodes"] == 3
        assert "reward_mean" in stats


class TestMetrics:
    def test_ttmn_search_agrees_with_estimate(self, capsys):
        code, out, _ = run_cli(capsys, "metrics", "ttmn")
        assert code == 0
        payload = json.loads(out)
        assert payload["ttmn_hat"] == 2
        assert payload["ttmn_search"] == 2

    def test_ttmn_bound_too_small_fails(self, capsys):
        code, out, _ = run_cli(capsys, "metrics", "ttmn", "--bound", "1")
        assert code == 1
        assert json.loads(out)["ttmn_search"] is None

    def test_ttmx_reports_both_estimators(self, capsys):
        code, out, _ = run_cli(
            capsys, "metrics", "ttmx", "--rollouts", "400", "--max-t", "150"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["ttmx_hat"] == 34
        assert payload["ttmn_hat"] == 2
        assert isinstance(payload["monte_carlo"]["ttmx"], int)

    def test_pic_ladder(self, capsys):
        code, out, _ = run_cli(
            capsys, "metrics", "pic", "--policies", "2", "--episodes", "10"
        )
        assert code == 0
        payload = json.loads(out)
        assert len(payload["goal_pic"]) == 4
        assert payload["ladder"]["ttmn"] == 2

    def test_unknown_task(self, capsys):
        code, _, err = run_cli(capsys, "metrics", "ttmn", "--task", "obtain_gold")
        assert code == 1
        assert "unknown task" in err


class TestDescribe:
    def test_observation_layout(self, capsys):
        code, out, _ = run_cli(capsys, "describe-obs")
        assert code == 0
        payload = json.loads(out)
        assert payload["length"] == 78
        assert payload["fields"][0] == "hp"

    def test_raw_layout(self, capsys):
        code, out, _ = run_cli(capsys, "describe-obs", "--preset", "raw")
        assert code == 0
        payload = json.loads(out)
        assert payload["length"] == 4203
        assert payload["blocks"]["block5_creatures"] == [28, 7]

    def test_action_catalog(self, capsys):
        code, out, _ = run_cli(capsys, "describe-actions")
        assert code == 0
        payload = json.loads(out)
        assert payload["count"] == 9
        assert payload["actions"][-1] == "idle"

    def test_expanded_action_catalog(self, capsys):
        code, out, _ = run_cli(capsys, "describe-actions", "--preset", "expand_all")
        assert code == 0
        assert json.loads(out)["count"] == 26


class TestUsage:
    def test_unknown_subcommand_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["conquer"])
        assert exc.value.code == 2

    def test_unknown_flag_value_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["run", "--preset", "mars"])
        assert exc.value.code == 2

    def test_console_script_installed(self):
        exe = shutil.which("eden")
        assert exe, "eden entry point not on PATH"
        proc = subprocess.run(
            [exe, "describe-actions", "--preset", "pig5"], capture_output=True, text=True
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["count"] == 17
