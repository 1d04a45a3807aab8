"""Command line front end.

Subcommands:
  plan    run one scenario and report the outcome (optionally writing a trace)
  batch   run a config matrix over scenario files into a CSV report, with
          optional per-run route figures
  render  draw a saved trace as ASCII art or an SVG figure

Exit codes: 0 on success, 2 when the patrol could not be completed, 1 on
usage, parse, or I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import re
import sys
from dataclasses import replace
from pathlib import Path

from .framing import Deontological, Utilitarian
from .render import RenderError, render_ascii, render_svg
from .sim import run_partially_observable, run_scenario, summarize, trace_from_json, trace_to_json
from .world import Scenario, ScenarioError, parse_scenario, serialize_scenario


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


class CliError(Exception):
    pass


def _add_shared_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--framing", choices=["deont", "util"], help="override the scenario framing")
    parser.add_argument("--ch", type=float, help="person-cell surcharge (utilitarian framing only)")
    parser.add_argument("--k", type=int, help="allowed person-cell entries (deontological framing only)")
    parser.add_argument("--meta", choices=["on", "off"], help="enable or disable metacognition")
    parser.add_argument("--meta-threshold", type=float, dest="meta_threshold",
                        help="cost level at or below which a violation triggers review")
    parser.add_argument("--budget", type=int, help="override the movement budget")
    parser.add_argument("--coverage", type=float, help="override the coverage fraction")
    parser.add_argument("--obs-radius", type=int, dest="obs_radius",
                        help="sensing radius; turns on the observe-plan-move loop")
    parser.add_argument("--seed", type=int, help="reserved for stochastic extensions; unused")


def _load_scenario(path: str) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from None
    try:
        return parse_scenario(text)
    except ScenarioError as exc:
        raise CliError(f"{path}: {exc}") from None


def _apply_overrides(scenario: Scenario, args: argparse.Namespace) -> Scenario:
    framing = scenario.framing
    if args.framing == "util":
        c_h = args.ch if args.ch is not None else (
            framing.c_h if isinstance(framing, Utilitarian) else 1.0
        )
        framing = Utilitarian(c_h=c_h)
    elif args.framing == "deont":
        framing = Deontological(k=args.k if args.k is not None else 0)
    else:
        if args.ch is not None:
            if not isinstance(framing, Utilitarian):
                raise CliError("--ch only applies to the utilitarian framing (use --framing util)")
            framing = replace(framing, c_h=args.ch)
        if args.k is not None:
            if not isinstance(framing, Deontological):
                raise CliError("--k only applies to the deontological framing (use --framing deont)")
            framing = replace(framing, k=args.k)
    if args.ch is not None and isinstance(framing, Deontological):
        raise CliError("--ch only applies to the utilitarian framing (use --framing util)")
    if args.k is not None and isinstance(framing, Utilitarian):
        raise CliError("--k only applies to the deontological framing (use --framing deont)")
    if args.ch is not None and args.ch < 0:
        raise CliError("--ch must be non-negative")
    if args.k is not None and args.k < 0:
        raise CliError("--k must be non-negative")

    updates: dict = {"framing": framing}
    if args.meta is not None:
        updates["metacognition_enabled"] = args.meta == "on"
    if args.meta_threshold is not None:
        if args.meta_threshold < 0:
            raise CliError("--meta-threshold must be non-negative")
        updates["meta_threshold"] = args.meta_threshold
    if args.budget is not None:
        if args.budget < 1:
            raise CliError("--budget must be at least 1")
        updates["movement_budget"] = args.budget
    if args.coverage is not None:
        if not 0 < args.coverage <= 1:
            raise CliError("--coverage must be in (0, 1]")
        updates["coverage_fraction"] = args.coverage
    if args.obs_radius is not None:
        if args.obs_radius < 1:
            raise CliError("--obs-radius must be at least 1")
        updates["observation_radius"] = args.obs_radius
    return replace(scenario, **updates)


def _run(scenario: Scenario):
    if scenario.observation_radius is not None:
        return run_partially_observable(scenario)
    _, trace = run_scenario(scenario)
    return trace


def _summary_line(trace) -> str:
    o, t = trace.outcome, trace.totals
    return (
        f"success={str(o.patrol_success).lower()} "
        f"avoided={str(o.people_avoided).lower()} "
        f"movements={t.movements} "
        f"expansions={t.expansions_total} "
        f"replans={t.replans}"
    )


def cmd_plan(args: argparse.Namespace) -> int:
    scenario = _apply_overrides(_load_scenario(args.scenario), args)
    trace = _run(scenario)
    if args.out:
        try:
            Path(args.out).write_text(trace_to_json(trace, serialize_scenario(scenario)))
        except OSError as exc:
            raise CliError(f"cannot write {args.out}: {exc}") from None
    print(_summary_line(trace))
    return 0 if trace.outcome.patrol_success else 2


CONFIG_KEYS = ("ch", "k", "meta", "budget", "coverage", "meta_threshold", "obs_radius")
DEFAULT_CONFIGS = ["deont", "util,ch=2", "util,ch=9", "util,ch=2,meta=on"]


def _scenario_from_config(scenario: Scenario, token: str) -> Scenario:
    """Apply a batch config token like 'util,ch=9,meta=on' to a scenario."""
    parts = token.split(",")
    head = parts[0].strip()
    if head not in ("deont", "util"):
        raise CliError(f"config {token!r}: framing must be 'deont' or 'util'")
    fields: dict[str, str] = {}
    for part in parts[1:]:
        if "=" not in part:
            raise CliError(f"config {token!r}: expected key=value, got {part!r}")
        key, _, value = part.partition("=")
        key = key.strip()
        if key not in CONFIG_KEYS:
            raise CliError(f"config {token!r}: unknown key {key!r}")
        fields[key] = value.strip()

    try:
        if head == "util":
            framing = Utilitarian(c_h=float(fields.get("ch", 1)))
        else:
            if "ch" in fields:
                raise CliError(f"config {token!r}: 'ch' needs the util framing")
            framing = Deontological(k=int(fields.get("k", 0)))
        updates: dict = {"framing": framing}
        if "meta" in fields:
            if fields["meta"] not in ("on", "off"):
                raise CliError(f"config {token!r}: meta must be on or off")
            updates["metacognition_enabled"] = fields["meta"] == "on"
        if "budget" in fields:
            updates["movement_budget"] = int(fields["budget"])
        if "coverage" in fields:
            updates["coverage_fraction"] = float(fields["coverage"])
        if "meta_threshold" in fields:
            updates["meta_threshold"] = float(fields["meta_threshold"])
        if "obs_radius" in fields:
            updates["observation_radius"] = int(fields["obs_radius"])
    except ValueError as exc:
        raise CliError(f"config {token!r}: {exc}") from None
    return replace(scenario, **updates)


def _safe_name(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "-", text)


def cmd_batch(args: argparse.Namespace) -> int:
    configs = args.config or DEFAULT_CONFIGS
    figures_dir = None
    if args.figures:
        figures_dir = Path(args.figures)
        try:
            figures_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise CliError(f"cannot create {args.figures}: {exc}") from None

    rows = []
    for scenario_path in args.scenarios:
        stem = Path(scenario_path).stem
        for token in configs:
            try:
                scenario = _scenario_from_config(_load_scenario(scenario_path), token)
                trace = _run(scenario)
            except CliError as exc:
                # A broken scenario still produces a row so the table stays rectangular.
                print(f"warning: {exc}", file=sys.stderr)
                rows.append([stem, token, 0, "true", "false"])
                continue
            summary = summarize([trace], [token])[0]
            rows.append(
                [
                    stem,
                    token,
                    summary["expansions"],
                    str(summary["people_avoided"]).lower(),
                    str(summary["patrol_success"]).lower(),
                ]
            )
            if figures_dir is not None:
                fig_path = figures_dir / f"{_safe_name(stem)}__{_safe_name(token)}.svg"
                render_svg(scenario.grid, trace.steps, fig_path)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["scenario", "config", "expansions", "people_avoided", "patrol_success"])
    writer.writerows(rows)
    table = buf.getvalue()
    if args.out:
        try:
            Path(args.out).write_text(table)
        except OSError as exc:
            raise CliError(f"cannot write {args.out}: {exc}") from None
    else:
        sys.stdout.write(table)
    return 0


def cmd_render(args: argparse.Namespace) -> int:
    try:
        text = Path(args.trace).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {args.trace}: {exc}") from None
    try:
        trace, embedded = trace_from_json(text)
    except ValueError as exc:
        raise CliError(str(exc)) from None

    if args.scenario:
        scenario = _load_scenario(args.scenario)
    elif embedded is not None:
        try:
            scenario = parse_scenario(embedded)
        except ScenarioError as exc:
            raise CliError(f"embedded scenario is invalid: {exc}") from None
    else:
        raise CliError("trace has no embedded scenario; pass --scenario")

    try:
        if args.render == "svg":
            svg = render_svg(scenario.grid, trace.steps, args.out)
            if svg is not None:
                sys.stdout.write(svg)
        else:
            art = render_ascii(scenario.grid, trace.steps)
            if args.out:
                Path(args.out).write_text(art)
            else:
                sys.stdout.write(art)
    except RenderError as exc:
        raise CliError(str(exc)) from None
    except OSError as exc:
        raise CliError(f"cannot write {args.out}: {exc}") from None
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="patrolsim", description="Norm-aware warehouse patrol simulator")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_plan = sub.add_parser("plan", help="plan and run a single scenario")
    p_plan.add_argument("scenario", help="scenario file")
    _add_shared_options(p_plan)
    p_plan.add_argument("--out", help="write the run trace as JSON to this path")
    p_plan.set_defaults(func=cmd_plan)

    p_batch = sub.add_parser("batch", help="run a config matrix over scenario files")
    p_batch.add_argument("scenarios", nargs="+", help="scenario files")
    p_batch.add_argument(
        "--config",
        action="append",
        help="framing[,key=value...] e.g. util,ch=9 or deont,meta=on,budget=29; repeatable",
    )
    p_batch.add_argument("--out", help="write the CSV table here instead of stdout")
    p_batch.add_argument("--figures", help="directory for per-run SVG route figures")
    p_batch.set_defaults(func=cmd_batch)

    p_render = sub.add_parser("render", help="draw a saved trace")
    p_render.add_argument("trace", help="trace JSON file written by plan --out")
    p_render.add_argument("--render", choices=["ascii", "svg"], default="ascii",
                          help="output style (default ascii)")
    p_render.add_argument("--scenario", help="scenario file to draw on (overrides the embedded one)")
    p_render.add_argument("--out", help="write the rendering to this path")
    p_render.set_defaults(func=cmd_render)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
