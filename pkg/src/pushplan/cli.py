"""Command-line interface.

Subcommands: ``plan`` (one-shot planning), ``execute`` (closed-loop run with
optional noise), ``bench`` (variant comparison over random scenes), and
``render`` (scene or plan to SVG).  Exit codes: 0 on success, 1 for bad
input, 2 when planning or execution fails.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path
from typing import Optional

from .bench import BenchConfig, BenchError, run_benchmark, write_benchmark_outputs
from .executor import TerminationReason, execute, report_to_dict
from .geometry import Side
from .planner import PlannerConfig, plan, plan_from_dict, plan_to_dict
from .primitives import PushConfig
from .render import RenderStyle, render_scene
from .scene import (
    InfeasibleActionError,
    InvalidSceneError,
    PickPlace,
    Scene,
    SceneFormatError,
    apply_action,
    scene_from_dict,
)
from .simulator import NO_NOISE, NoiseConfig, SimulationError


class _CliError(Exception):
    def __init__(self, message: str, code: int = 1):
        super().__init__(message)
        self.code = code


def _load_json(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise _CliError(f"cannot read {path}: {e.strerror or e}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise _CliError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    if not isinstance(data, dict):
        raise _CliError(f"{path}: expected a JSON object at the top level")
    return data


def _load_scene(path: str) -> Scene:
    try:
        return scene_from_dict(_load_json(path))
    except (SceneFormatError, InvalidSceneError) as e:
        raise _CliError(f"{path}: {e}") from e


def _resolve_seed(cli_seed: Optional[int], config_seed: Optional[int] = None) -> int:
    if cli_seed is not None:
        return cli_seed
    if config_seed is not None:
        return config_seed
    env = os.environ.get("PPLAN_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise _CliError(f"PPLAN_SEED must be an integer, got {env!r}") from None
    return 0


_PLANNER_FIELDS = {
    "time_budget_s", "max_expansions", "exploration_c", "push_enabled",
    "buffer_max_attempts", "seed", "push",
}
_PUSH_FIELDS = {"clearance", "edge_margin", "side_order"}


def _planner_config(args: argparse.Namespace) -> PlannerConfig:
    raw: dict = {}
    if getattr(args, "config", None):
        raw = _load_json(args.config)
        for key in raw:
            if key not in _PLANNER_FIELDS:
                raise _CliError(f"{args.config}: unknown planner config field {key!r}")
    push_raw = raw.get("push", {})
    if not isinstance(push_raw, dict):
        raise _CliError(f"{args.config}: field 'push' must be an object")
    for key in push_raw:
        if key not in _PUSH_FIELDS:
            raise _CliError(f"{args.config}: unknown push config field 'push.{key}'")
    try:
        push_kwargs = dict(push_raw)
        if "side_order" in push_kwargs:
            push_kwargs["side_order"] = tuple(Side(s) for s in push_kwargs["side_order"])
        push_cfg = PushConfig(**push_kwargs)
    except (TypeError, ValueError) as e:
        raise _CliError(f"{args.config}: invalid push config: {e}") from e

    kwargs: dict = {
        "time_budget_s": raw.get("time_budget_s"),
        "max_expansions": raw.get("max_expansions"),
        "push_cfg": push_cfg,
        "seed": _resolve_seed(args.seed, raw.get("seed")),
    }
    if "exploration_c" in raw:
        kwargs["exploration_c"] = raw["exploration_c"]
    if "buffer_max_attempts" in raw:
        kwargs["buffer_max_attempts"] = raw["buffer_max_attempts"]
    kwargs["push_enabled"] = raw.get("push_enabled", True)
    if args.expansions is not None or args.time_budget is not None:
        kwargs["time_budget_s"] = args.time_budget
        kwargs["max_expansions"] = args.expansions
    if args.no_push:
        kwargs["push_enabled"] = False
    try:
        return PlannerConfig(**kwargs)
    except (TypeError, ValueError) as e:
        raise _CliError(f"invalid planner configuration: {e}") from e


def _add_planner_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="planner configuration JSON")
    budget = p.add_mutually_exclusive_group()
    budget.add_argument("--expansions", type=int, metavar="N",
                        help="deterministic search budget in tree expansions")
    budget.add_argument("--time-budget", type=float, metavar="SECONDS",
                        help="wall-clock search budget (default 2.0)")
    p.add_argument("--no-push", action="store_true",
                   help="disable the push primitive (pick-and-place only)")
    p.add_argument("--seed", type=int,
                   help="random seed (overrides config and PPLAN_SEED)")


def _write_or_print(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_plan(args: argparse.Namespace) -> int:
    scene = _load_scene(args.scene)
    cfg = _planner_config(args)
    result = plan(scene, cfg)
    if result is None:
        print("no plan found within the search budget", file=sys.stderr)
        return 2
    _write_or_print(json.dumps(plan_to_dict(result), indent=2) + "\n", args.out)
    if args.out:
        print(f"plan: {len(result.actions)} actions, total cost {result.total:.4f} -> {args.out}")
    return 0


def _action_setdown(scene: Scene, action) -> tuple:
    if isinstance(action, PickPlace):
        return action.destination, action.object
    return scene.goal[action.object], action.object


def _cmd_execute(args: argparse.Namespace) -> int:
    scene = _load_scene(args.scene)
    cfg = _planner_config(args)
    if args.step_budget < 1:
        raise _CliError(f"--step-budget must be at least 1, got {args.step_budget}")
    noise = NO_NOISE
    if args.noise:
        noise = NoiseConfig(lateral_sigma=args.lateral_sigma, depth_sigma=args.depth_sigma,
                            enabled=True)
    report = execute(scene, cfg, noise, step_budget=args.step_budget,
                     rng=random.Random(cfg.seed))
    _write_or_print(json.dumps(report_to_dict(report), indent=2) + "\n", args.out)
    if args.frames:
        frames_dir = Path(args.frames)
        frames_dir.mkdir(parents=True, exist_ok=True)
        style = RenderStyle(show_gripper=True)
        (frames_dir / "frame_000.svg").write_text(render_scene(scene, style, title="step 0"))
        idx = 0
        for step in report.steps:
            if step.post_scene is None:
                continue
            idx += 1
            gripper = None
            note = " (skipped)" if step.skipped else ""
            if step.executed_action is not None and step.pre_scene is not None:
                gripper, _ = _action_setdown(step.pre_scene, step.executed_action)
            (frames_dir / f"frame_{idx:03d}.svg").write_text(
                render_scene(step.post_scene, style, title=f"step {idx}{note}", gripper=gripper)
            )
    status = report.terminated_by.value
    print(f"execution: {report.total_actions} actions, "
          f"{report.success_rate:.0%} at goal, terminated by {status}", file=sys.stderr)
    return 0 if report.terminated_by is TerminationReason.ALL_AT_GOAL else 2


_BENCH_CONFIG_FIELDS = {
    "master_seed", "object_counts", "scenes_per_count", "runs_per_scene",
    "max_expansions", "time_budget_s", "size_range", "tolerance",
}


def _cmd_bench(args: argparse.Namespace) -> int:
    raw: dict = {}
    if args.config:
        raw = _load_json(args.config)
        for key in raw:
            if key not in _BENCH_CONFIG_FIELDS:
                raise _CliError(f"{args.config}: unknown config field {key!r}")
    seed = _resolve_seed(args.seed, raw.get("master_seed"))
    kwargs: dict = {"master_seed": seed}
    for key in ("scenes_per_count", "runs_per_scene", "max_expansions", "time_budget_s",
                "tolerance"):
        if key in raw:
            kwargs[key] = raw[key]
    if "object_counts" in raw:
        kwargs["object_counts"] = tuple(raw["object_counts"])
    if "size_range" in raw:
        kwargs["size_range"] = tuple(raw["size_range"])
    if args.scenes is not None:
        kwargs["scenes_per_count"] = args.scenes
    if args.runs is not None:
        kwargs["runs_per_scene"] = args.runs
    if args.counts is not None:
        try:
            kwargs["object_counts"] = tuple(int(c) for c in args.counts.split(","))
        except ValueError:
            raise _CliError(f"--counts expects comma-separated integers, got {args.counts!r}") from None
    if args.expansions is not None or args.time_budget is not None:
        kwargs["max_expansions"] = args.expansions
        kwargs["time_budget_s"] = args.time_budget
    try:
        cfg = BenchConfig(**kwargs)
    except TypeError as e:
        raise _CliError(f"invalid benchmark configuration: {e}") from e
    records = run_benchmark(cfg, jobs=args.jobs)
    summary = write_benchmark_outputs(cfg, records, Path(args.out))
    for row in summary["reductions"]:
        print(f"N={row['n']}: baseline {row['baseline_mean_cost']:.4f} "
              f"-> push {row['push_mean_cost']:.4f} "
              f"({row['percent_reduction']:+.2f}% over {row['paired_scenes']} scenes)")
    print(f"wrote records.csv, summary.json, summary.csv, charts.svg -> {args.out}")
    return 0


def _cmd_render(args: argparse.Namespace) -> int:
    scene = _load_scene(args.scene)
    style = RenderStyle(show_goals=not args.no_goals, show_gripper=args.frames is not None,
                        scale=args.scale)
    if args.frames and not args.plan:
        raise _CliError("--frames requires --plan (per-step frames follow a plan)")
    if not args.plan:
        _write_or_print(render_scene(scene, style, title=args.title), args.out)
        return 0
    try:
        result = plan_from_dict(_load_json(args.plan))
    except SceneFormatError as e:
        raise _CliError(f"{args.plan}: {e}") from e
    states = [scene]
    try:
        for action in result.actions:
            states.append(apply_action(states[-1], action))
    except InfeasibleActionError as e:
        raise _CliError(f"{args.plan}: plan does not replay on this scene: {e}") from e
    if args.frames:
        frames_dir = Path(args.frames)
        frames_dir.mkdir(parents=True, exist_ok=True)
        for i, state in enumerate(states):
            gripper = None
            if i > 0:
                gripper, _ = _action_setdown(states[i - 1], result.actions[i - 1])
            (frames_dir / f"frame_{i:03d}.svg").write_text(
                render_scene(state, style, title=f"step {i}", gripper=gripper)
            )
        print(f"wrote {len(states)} frames -> {args.frames}")
        return 0
    _write_or_print(render_scene(states[-1], style, title=args.title), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pushplan",
        description="Plan, execute, and benchmark tabletop rearrangement with push-assisted placement.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="plan a scene and print or save the plan JSON")
    p.add_argument("scene", help="scene JSON file")
    p.add_argument("--out", help="write the plan here instead of stdout")
    _add_planner_flags(p)
    p.set_defaults(func=_cmd_plan)

    p = sub.add_parser("execute", help="run the closed-loop executor on a scene")
    p.add_argument("scene", help="scene JSON file")
    p.add_argument("--out", help="write the execution report here instead of stdout")
    p.add_argument("--noise", action="store_true", help="enable placement noise")
    p.add_argument("--lateral-sigma", type=float, default=0.003,
                   help="noise drift bound across the motion (m, default 0.003)")
    p.add_argument("--depth-sigma", type=float, default=0.002,
                   help="noise drift bound along the motion (m, default 0.002)")
    p.add_argument("--step-budget", type=int, default=15,
                   help="maximum executed actions (default 15)")
    p.add_argument("--frames", metavar="DIR", help="write one SVG per step into DIR")
    _add_planner_flags(p)
    p.set_defaults(func=_cmd_execute)

    p = sub.add_parser("bench", help="compare planner variants over random scenes")
    p.add_argument("--config", help="benchmark configuration JSON")
    p.add_argument("--out", default="bench_out", help="output directory (default bench_out)")
    p.add_argument("--seed", type=int, help="master seed (overrides config and PPLAN_SEED)")
    p.add_argument("--scenes", type=int, help="scenes per object count")
    p.add_argument("--runs", type=int, help="runs per scene")
    p.add_argument("--counts", help="comma-separated object counts, e.g. 4,6,8")
    budget = p.add_mutually_exclusive_group()
    budget.add_argument("--expansions", type=int, help="search budget in expansions")
    budget.add_argument("--time-budget", type=float, help="search budget in seconds")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("render", help="render a scene (or a plan's steps) to SVG")
    p.add_argument("scene", help="scene JSON file")
    p.add_argument("--plan", help="plan JSON to replay over the scene")
    p.add_argument("--frames", metavar="DIR", help="with --plan, write one SVG per step into DIR")
    p.add_argument("--out", help="write the SVG here instead of stdout")
    p.add_argument("--scale", type=float, default=560.0, help="pixels per meter (default 560)")
    p.add_argument("--no-goals", action="store_true", help="hide dashed goal outlines")
    p.add_argument("--title", default="", help="title text drawn above the scene")
    p.set_defaults(func=_cmd_render)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except (SceneFormatError, InvalidSceneError, BenchError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except SimulationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
