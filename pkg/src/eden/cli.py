"""Command-line entry points.

Exit codes: 0 success, 1 domain error (bad config, unreachable
threshold, IO failure), 2 usage error. With --json, errors also emit a
trailing machine-readable JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import act, obs
from .config import PRESET_NAMES, override, parse_config, preset, validate
from .errors import EdenError
from .harness import (
    PolicySpec,
    PresetBundle,
    run_batch,
    run_nav_episode,
    write_batch_csv,
    write_episode_jsonl,
)
from .metrics import (
    DifficultyReport,
    estimate_ttmn,
    goal_ladder,
    obtain_water_params,
    obtain_water_task,
    obtain_water_world,
    pic_over_goals,
    ttmn_search,
    ttmx_analytic,
    ttmx_monte_carlo,
)
from .service import DEFAULT_PORT, serve

_TASKS = {
    "obtain_water": (obtain_water_world, obtain_water_task, obtain_water_params),
}


def _read_config_file(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def _load_config(args) -> object:
    if getattr(args, "config", None):
        cfg = _read_config_file(args.config)
    else:
        cfg = preset(args.preset)
    if getattr(args, "life_limit", None):
        cfg = override(cfg, life_limit=args.life_limit)
    return cfg


def _emit(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _cmd_validate(args) -> int:
    cfg = _read_config_file(args.path)
    problems = validate(cfg)
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        if args.json:
            print(json.dumps({"ok": False, "problems": problems}), file=sys.stderr)
        return 1
    _emit({"ok": True, "kind": cfg.kind})
    return 0


def _cmd_run(args) -> int:
    cfg = _load_config(args)
    seeds = [args.seed + i for i in range(args.episodes)]
    if cfg.kind == "navigation":
        spec = PolicySpec(args.policy, args.policy_seed if args.policy == "random" else None)
        records = [run_nav_episode(cfg, s, spec) for s in seeds]
        stats = {
            "episodes": len(records),
            "lifetime_mean": sum(r.summary["lifetime"] for r in records) / len(records),
            "reward_mean": sum(r.summary["total_reward"] for r in records) / len(records),
        }
    else:
        needs_seed = args.policy in ("random", "random_logit")
        spec = PolicySpec(args.policy, args.policy_seed if needs_seed else None)
        bundle = PresetBundle(obs=args.obs_preset, act=args.act_preset, reward=args.reward)
        records, stats = run_batch(cfg, seeds, bundle, spec, parallelism=args.parallelism)
    if args.out:
        for record in records:
            path = args.out if len(records) == 1 else f"{args.out}.{record.seed}"
            write_episode_jsonl(record, path)
    if args.csv:
        write_batch_csv(records, stats, args.csv)
    _emit({"stats": stats, "last_summary": records[-1].summary})
    return 0


def _task_parts(name: str):
    try:
        world_fn, task_fn, params_fn = _TASKS[name]
    except KeyError:
        raise EdenError(f"unknown task {name!r}; known: {sorted(_TASKS)}") from None
    return world_fn, task_fn(), params_fn


def _cmd_metrics_ttmx(args) -> int:
    world_fn, task, params_fn = _task_parts(args.task)
    params = params_fn(th=args.th)
    analytic = ttmx_analytic(params)
    report = ttmx_monte_carlo(
        world_fn,
        task,
        th=args.th,
        rollouts=args.rollouts,
        max_t=args.max_t,
        base_seed=args.seed,
        workers=args.workers,
    )
    out = DifficultyReport(
        task_id=task.task_id,
        ttmn_hat=estimate_ttmn(params.g, params.e),
        ttmx_hat=analytic,
        mc_report=report,
    )
    _emit(out.to_dict())
    return 0


def _cmd_metrics_ttmn(args) -> int:
    world_fn, task, params_fn = _task_parts(args.task)
    found = ttmn_search(world_fn, task, bound=args.bound)
    params = params_fn()
    payload = {
        "task": task.task_id,
        "ttmn_hat": estimate_ttmn(params.g, params.e),
        "ttmn_search": found,
        "bound": args.bound,
    }
    _emit(payload)
    return 0 if found is not None else 1


def _cmd_metrics_pic(args) -> int:
    world_fn, task, params_fn = _task_parts(args.task)
    params = params_fn(th=args.th)
    ttmn = estimate_ttmn(params.g, params.e)
    ttmx = ttmx_analytic(params)
    ladder = goal_ladder(ttmn, ttmx, args.levels)
    values = pic_over_goals(
        world_fn,
        task,
        ladder,
        n_policies=args.policies,
        episodes_per_policy=args.episodes,
        bins=args.bins,
        prior_seed=args.prior_seed,
        base_seed=args.seed,
    )
    out = DifficultyReport(
        task_id=task.task_id, ttmn_hat=ttmn, ttmx_hat=ttmx, ladder=ladder, goal_pic=values
    )
    _emit(out.to_dict())
    return 0


def _cmd_describe_obs(args) -> int:
    cfg = _load_config(args)
    _emit(obs.describe(cfg, args.obs_preset))
    return 0


def _cmd_describe_actions(args) -> int:
    _emit(act.describe(args.act_preset))
    return 0


def _cmd_serve(args) -> int:
    serve(host=args.host, port=args.port, max_sessions=args.max_sessions,
          idle_timeout=args.timeout)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eden", description="Survival-world environment toolkit")
    parser.add_argument("--json", action="store_true", help="emit trailing JSON on stderr for errors")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a config file")
    p.add_argument("path")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("run", help="run episodes with a built-in policy")
    p.add_argument("--preset", default="day_and_night", choices=PRESET_NAMES)
    p.add_argument("--config", help="config file (overrides --preset)")
    p.add_argument("--life-limit", type=int, dest="life_limit")
    p.add_argument("--policy", default="idle",
                   choices=["idle", "random", "scripted_survival", "nav_greedy", "random_logit"])
    p.add_argument("--policy-seed", type=int, default=0)
    p.add_argument("--episodes", type=int, default=1)
    p.add_argument("--seed", type=int, default=0, help="seed of the first episode")
    p.add_argument("--obs-preset", default="baseline", choices=sorted(obs.WRAP_PRESETS))
    p.add_argument("--act-preset", default="baseline9", choices=sorted(act.ACTION_PRESETS))
    p.add_argument("--reward", default="dense",
                   choices=["dense", "sparse", "very_sparse", "deceptive"])
    p.add_argument("--parallelism", type=int, default=1)
    p.add_argument("--out", help="write episode JSONL here (suffixed by seed for batches)")
    p.add_argument("--csv", help="write per-episode aggregates CSV here")
    p.set_defaults(func=_cmd_run)

    pm = sub.add_parser("metrics", help="task difficulty estimators")
    msub = pm.add_subparsers(dest="metric", required=True)

    p = msub.add_parser("ttmx", help="threshold completion time, analytic vs Monte-Carlo")
    p.add_argument("--task", default="obtain_water")
    p.add_argument("--th", type=float, default=0.9)
    p.add_argument("--rollouts", type=int, default=10000)
    p.add_argument("--max-t", type=int, default=250, dest="max_t")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_metrics_ttmx)

    p = msub.add_parser("ttmn", help="shortest completing sequence by search")
    p.add_argument("--task", default="obtain_water")
    p.add_argument("--bound", type=int, default=4)
    p.set_defaults(func=_cmd_metrics_ttmn)

    p = msub.add_parser("pic", help="per-goal policy information capacity")
    p.add_argument("--task", default="obtain_water")
    p.add_argument("--th", type=float, default=0.9)
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--policies", type=int, default=8)
    p.add_argument("--episodes", type=int, default=50)
    p.add_argument("--bins", type=int, default=2)
    p.add_argument("--prior-seed", type=int, default=0, dest="prior_seed")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_metrics_pic)

    p = sub.add_parser("describe-obs", help="observation layout for a config")
    p.add_argument("--preset", default="baseline", dest="obs_preset",
                   choices=sorted(obs.WRAP_PRESETS) + ["raw"])
    p.add_argument("--world", default="day_and_night", dest="preset", choices=PRESET_NAMES)
    p.add_argument("--config")
    p.set_defaults(func=_cmd_describe_obs, life_limit=None)

    p = sub.add_parser("describe-actions", help="action catalog for a preset")
    p.add_argument("--preset", default="baseline9", dest="act_preset",
                   choices=sorted(act.ACTION_PRESETS))
    p.set_defaults(func=_cmd_describe_actions)

    p = sub.add_parser("serve", help="run the TCP environment server")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=DEFAULT_PORT)
    p.add_argument("--max-sessions", type=int, default=64, dest="max_sessions")
    p.add_argument("--timeout", type=float, default=300.0)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (EdenError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        if args.json:
            print(json.dumps({"ok": False, "error": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
