"""Command-line entry point.

Subcommands:
  response   per-stage magnitude/phase tables for a schedule
  demo       noisy-sinusoid filtering demonstration
  train      training runs on a desk-scale problem
  sweep      (c, v) grid sweep with heatmap output
  check      step-budget invariance and closed-form/oracle agreement checks

Every subcommand reads one config document, writes CSV/JSON artifacts (and
figures unless --no-figures) into --out, and emits a manifest sufficient
to reproduce each file byte for byte.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .configfile import (
    ConfigError,
    apply_overrides,
    build_check,
    build_optimizer,
    build_problem,
    build_schedule,
    build_signal,
    build_sweep_grid,
    parse_config,
)
from .frequency import (
    FrequencyGrid,
    classify,
    dynamic_response,
    first_mismatch,
    fsgdm_stage_profile,
    magnitude,
    phase,
    transfer_at,
    wrap_phase,
)
from .harness import compare_variants, run_training, sweep
from .reporting import (
    write_demo_csv,
    write_epoch_csv,
    write_json,
    write_response_csv,
    write_run_csv,
    write_sweep_csv,
    write_zone_csv,
)
from .schedules import ScheduleError
from .signal_demo import RNG_ALGORITHM, demo_metrics, filter_signal, generate


def _base_manifest(args, sections) -> dict:
    return {
        "tool": "momfilt",
        "version": __version__,
        "command": args.command,
        "config": sections,
        "overrides": list(args.set or []),
        "rng": RNG_ALGORITHM,
    }


def _load_sections(args) -> dict:
    sections = parse_config(args.config)
    return apply_overrides(sections, args.set)


def cmd_response(args) -> int:
    sections = _load_sections(args)
    if "schedule" not in sections:
        raise ConfigError("response needs a [schedule] section")
    schedule = build_schedule(sections["schedule"])
    n_stages = schedule.plan.num_stages
    if args.stages:
        stages = [int(tok) for tok in args.stages.replace(",", " ").split()]
    else:
        stages = sorted({1, max(1, n_stages // 2), n_stages})
    for k in stages:
        if not 1 <= k <= n_stages:
            raise ConfigError(f"stage {k} outside [1, {n_stages}]")
    grid = FrequencyGrid.default()
    responses = dynamic_response(schedule, grid, stages)
    out = Path(args.out)
    files = [write_response_csv(out / "response.csv", grid, responses)]
    if not args.no_figures:
        from .figures import response_figure

        files.append(response_figure(out / "response.png", grid, responses))
    manifest = _base_manifest(args, sections)
    manifest["stages"] = stages
    manifest["grid_points"] = len(grid)
    manifest["outputs"] = [f.name for f in files]
    write_json(out / "response_manifest.json", manifest)
    for resp in responses:
        klass = classify(resp.u, resp.v)
        print(
            f"stage {resp.stage}: u={resp.u:.6f} v={resp.v:.6f} "
            f"{klass.pass_band}, {klass.regime}"
        )
    return 0


def cmd_demo(args) -> int:
    sections = _load_sections(args)
    seeds = args.seed if args.seed else [None]
    spec = build_signal(sections.get("signal", {}), seed=seeds[0])
    if "schedule" in sections:
        sched_section = dict(sections["schedule"])
        sched_section.setdefault("total_steps", str(spec.length))
        schedule = build_schedule(sched_section)
    else:
        from .signal_demo import default_demo_schedule

        schedule = default_demo_schedule(spec.length)
    clean, noisy = generate(spec)
    filtered = filter_signal(noisy, schedule)
    tail_fraction = float(sections.get("signal", {}).get("tail_fraction", 0.25))
    metrics = demo_metrics(clean, noisy, filtered, tail_fraction)
    out = Path(args.out)
    files = [write_demo_csv(out / "demo_signal.csv", clean, noisy, filtered)]
    write_json(out / "demo_metrics.json", metrics.to_dict())
    if not args.no_figures:
        from .figures import demo_figure

        files.append(demo_figure(out / "demo.png", clean, noisy, filtered))
    manifest = _base_manifest(args, sections)
    manifest["signal"] = {
        "length": spec.length,
        "amplitude": spec.amplitude,
        "omega": spec.signal_freq,
        "noise_std": spec.noise_std,
        "seed": spec.seed,
    }
    manifest["schedule_kind"] = schedule.kind
    manifest["outputs"] = [f.name for f in files] + ["demo_metrics.json"]
    write_json(out / "demo_manifest.json", manifest)
    print(
        f"tail RMSE noisy={metrics.rmse_noisy:.6f} "
        f"filtered={metrics.rmse_filtered:.6f} "
        f"amplitude ratio={metrics.amplitude_ratio:.6f}"
    )
    return 0


def cmd_train(args) -> int:
    sections = _load_sections(args)
    if "problem" not in sections:
        raise ConfigError("train needs a [problem] section")
    problem = build_problem(sections["problem"])
    config = build_optimizer(sections, problem)
    seeds = args.seed if args.seed else [0]
    out = Path(args.out)
    status = 0
    for seed in seeds:
        record = run_training(problem, config, seed)
        files = [write_run_csv(out / f"train_steps_seed{seed}.csv", record)]
        if record.epoch.size:
            files.append(write_epoch_csv(out / f"train_epochs_seed{seed}.csv", record))
        if not args.no_figures:
            from .figures import train_figure

            files.append(train_figure(out / f"train_curves_seed{seed}.png", record))
        manifest = _base_manifest(args, sections)
        manifest["run"] = record.manifest
        manifest["diverged"] = record.diverged
        manifest["outputs"] = [f.name for f in files]
        write_json(out / f"train_manifest_seed{seed}.json", manifest)
        if record.diverged:
            print(
                f"warning: seed {seed} diverged after {record.step.size} steps",
                file=sys.stderr,
            )
        tail = (
            f"final test acc {record.test_acc[-1]:.4f}"
            if record.test_acc.size
            else f"final loss {record.loss[-1]:.6e}"
        )
        print(f"seed {seed}: {record.step.size} steps, {tail}")
    return status


def cmd_sweep(args) -> int:
    sections = _load_sections(args)
    for needed in ("problem", "sweep"):
        if needed not in sections:
            raise ConfigError(f"sweep needs a [{needed}] section")
    problem = build_problem(sections["problem"])
    base_config = build_optimizer(sections, problem)
    c_values, v_values, zone = build_sweep_grid(sections["sweep"])
    seeds = args.seed if args.seed else [0, 1, 2]
    result = sweep(problem, c_values, v_values, seeds, base_config, jobs=args.jobs)
    out = Path(args.out)
    files = [
        write_sweep_csv(out / "sweep.csv", result),
        write_zone_csv(out / "sweep_zone_curve.csv", v_values, zone),
    ]
    if not args.no_figures:
        from .figures import sweep_figure

        files.append(sweep_figure(out / "sweep_heatmap.png", result, zone))
    manifest = _base_manifest(args, sections)
    manifest["seeds"] = seeds
    manifest["zone_constant"] = zone
    manifest["outputs"] = [f.name for f in files]
    write_json(out / "sweep_manifest.json", manifest)
    diverged = sum(cell.diverged_count for cell in result.cells)
    if diverged:
        print(f"warning: {diverged} diverged runs across cells", file=sys.stderr)
    for cell in result.cells:
        print(
            f"c={cell.c:g} v={cell.v:g}: {cell.mean:.4f} +/- {cell.stderr:.4f}"
            + (f" ({cell.diverged_count} diverged)" if cell.diverged_count else "")
        )
    return 0


ORACLE_U = np.arange(-0.99, 0.991, 0.01)
ORACLE_V = (0.1, 0.5, 1.0, 2.0, 3.0)


def closed_form_oracle_errors(grid_points: int = 1000) -> tuple[float, float]:
    """Max |closed-form - complex-arithmetic| over the standard (u, v, w) grid."""
    omegas = np.linspace(0.0, np.pi, grid_points)
    max_mag = 0.0
    max_ph = 0.0
    for u in ORACLE_U:
        for v in ORACLE_V:
            h = transfer_at(u, v, omegas)
            max_mag = max(max_mag, float(np.max(np.abs(magnitude(u, v, omegas) - np.abs(h)))))
            dphi = wrap_phase(phase(u, v, omegas) - np.angle(h))
            max_ph = max(max_ph, float(np.max(np.abs(dphi))))
    return max_mag, max_ph


def cmd_check(args) -> int:
    sections = _load_sections(args)
    if "check" not in sections:
        raise ConfigError("check needs a [check] section")
    c, stages, sigmas, stages_list = build_check(sections["check"])
    profiles = [
        fsgdm_stage_profile(c, n, s) for s, n in zip(sigmas, stages_list)
    ]
    verdict: dict = {"c": c, "num_stages": stages, "total_steps_list": sigmas}
    invariant_ok = True
    details = []
    for i in range(1, len(profiles)):
        # Compare over the common prefix so runs with a mismatched stage
        # count still report the first stage at which they disagree.
        n = min(len(profiles[0]), len(profiles[i]))
        bad = first_mismatch(profiles[i][:n], profiles[0][:n])
        if bad is None and len(profiles[i]) != len(profiles[0]):
            bad = n
        if bad is not None:
            invariant_ok = False
            details.append({"pair": [0, i], "first_mismatch_stage": bad + 1})
    k = np.arange(1, stages + 1, dtype=np.float64)
    closed = (k - 1) / (k - 1 + c * stages)
    closed_ok = True
    for i, prof in enumerate(profiles):
        n = min(len(prof), stages)
        bad = first_mismatch(prof[:n], closed[:n])
        if bad is None and len(prof) != stages:
            bad = n
        if bad is not None:
            closed_ok = False
            details.append({"profile": i, "closed_form_mismatch_stage": bad + 1})
    max_mag, max_ph = closed_form_oracle_errors()
    oracle_ok = max_mag < 1e-12 and max_ph < 1e-12
    verdict.update(
        {
            "invariance_pass": invariant_ok,
            "closed_form_pass": closed_ok,
            "mismatches": details,
            "oracle_max_magnitude_error": max_mag,
            "oracle_max_phase_error": max_ph,
            "oracle_pass": oracle_ok,
            "pass": invariant_ok and closed_ok and oracle_ok,
        }
    )
    out = Path(args.out)
    write_json(out / "check_verdict.json", verdict)
    manifest = _base_manifest(args, sections)
    manifest["outputs"] = ["check_verdict.json"]
    write_json(out / "check_manifest.json", manifest)
    print(
        f"invariance: {'pass' if invariant_ok else 'FAIL'}; "
        f"closed form: {'pass' if closed_ok else 'FAIL'}; "
        f"oracle: {'pass' if oracle_ok else 'FAIL'} "
        f"(max mag err {max_mag:.3e}, max phase err {max_ph:.3e})"
    )
    if details:
        for d in details:
            print(f"mismatch: {d}", file=sys.stderr)
    return 0 if verdict["pass"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="momfilt",
        description="Momentum filters: schedules, frequency responses, "
        "desk-scale experiments.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="config document path")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument(
            "--set",
            action="append",
            metavar="SECTION.KEY=VALUE",
            help="override a config value (repeatable, later wins)",
        )
        p.add_argument(
            "--seed", action="append", type=int, help="seed (repeatable)"
        )
        p.add_argument(
            "--no-figures", action="store_true", help="skip figure rendering"
        )

    p = sub.add_parser("response", help="per-stage frequency response tables")
    common(p)
    p.add_argument("--stages", help="comma-separated stage indices")
    p.set_defaults(func=cmd_response)

    p = sub.add_parser("demo", help="noisy-sinusoid filtering demo")
    common(p)
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("train", help="training run(s) on a desk problem")
    common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("sweep", help="(c, v) grid sweep")
    common(p)
    p.add_argument("--jobs", type=int, default=1, help="parallel sweep workers")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("check", help="invariance and closed-form checks")
    common(p)
    p.set_defaults(func=cmd_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ScheduleError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
