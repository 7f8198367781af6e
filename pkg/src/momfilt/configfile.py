"""Plain-text run configuration: INI sections with flat key = value pairs.

One document configures a whole invocation.  Recognized sections and keys
are fixed; anything else is rejected so typos fail loudly.  Command-line
overrides use dotted ``section.key=value`` form and are applied on top of
the parsed file, later overrides winning.
"""

from __future__ import annotations

import configparser
import math
from pathlib import Path

from .optimizers import OptimizerConfig
from .problems import make_problem
from .schedules import (
    TRANSITION_NAMES,
    CoefficientSchedule,
    StagePlan,
)
from .signal_demo import SignalSpec


class ConfigError(ValueError):
    """The config document or an override is malformed."""


SCHEMA = {
    "schedule": {
        "kind", "mu", "nu", "fixed", "a", "sign", "v_rule", "v",
        "total_steps", "num_stages", "transition_stage",
    },
    "optimizer": {
        "variant", "c", "v", "u", "base_lr", "lr_schedule", "weight_decay",
        "total_steps", "num_stages",
    },
    "problem": {
        "kind", "dimension", "condition_number", "num_samples", "num_features",
        "separation", "hidden_units", "num_classes", "batch_size", "data_seed",
        "epochs", "train_fraction",
    },
    "signal": {"length", "amplitude", "omega", "noise_std", "seed", "tail_fraction"},
    "sweep": {"c_values", "v_values", "zone_constant"},
    "check": {"c", "num_stages", "total_steps_list", "num_stages_list"},
}


def parse_config(path) -> dict[str, dict[str, str]]:
    """Read the document into {section: {key: value}} with schema validation."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # keys are case-sensitive
    text = Path(path).read_text(encoding="utf-8")
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    sections: dict[str, dict[str, str]] = {}
    for name in parser.sections():
        if name not in SCHEMA:
            raise ConfigError(f"unknown section [{name}] in {path}")
        sections[name] = {}
        for key, value in parser.items(name):
            if key not in SCHEMA[name]:
                raise ConfigError(f"unknown key {key!r} in section [{name}]")
            sections[name][key] = value.strip()
    return sections


def apply_overrides(sections: dict, overrides) -> dict:
    """Apply ``section.key=value`` strings in order; later entries win."""
    out = {name: dict(kv) for name, kv in sections.items()}
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form section.key=value")
        target, value = item.split("=", 1)
        if "." not in target:
            raise ConfigError(f"override key {target!r} must be section.key")
        section, key = target.split(".", 1)
        if section not in SCHEMA:
            raise ConfigError(f"unknown section {section!r} in override {item!r}")
        if key not in SCHEMA[section]:
            raise ConfigError(f"unknown key {key!r} in override {item!r}")
        out.setdefault(section, {})[key] = value.strip()
    return out


def _get(section: dict, key: str, cast, default=None, required=False):
    if key not in section:
        if required:
            raise ConfigError(f"missing required key {key!r}")
        return default
    raw = section[key]
    try:
        return cast(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {key!r}: {raw!r} ({exc})") from exc


def _float_list(raw: str) -> list[float]:
    return [float(tok) for tok in raw.replace(",", " ").split()]


def _int_list(raw: str) -> list[int]:
    return [int(tok) for tok in raw.replace(",", " ").split()]


def build_schedule(section: dict) -> CoefficientSchedule:
    """Construct a coefficient schedule from a [schedule] section."""
    kind = _get(section, "kind", str, required=True)
    total = _get(section, "total_steps", int, required=True)
    stages = _get(section, "num_stages", int, default=min(300, total))
    plan = StagePlan(total_steps=total, num_stages=stages)
    if kind in TRANSITION_NAMES:
        return CoefficientSchedule.named_transition(
            kind,
            plan,
            switch_stage=_get(section, "transition_stage", int),
            nu=_get(section, "nu", float),
            mu=_get(section, "mu", float),
        )
    common = {
        "sign": _get(section, "sign", int, default=1),
        "v_rule": _get(section, "v_rule", str, default="constant"),
        "v_value": _get(section, "v", float, default=1.0),
    }
    if common["v_rule"] == "coupled":
        del common["v_value"]
    if kind == "increasing":
        return CoefficientSchedule.increasing(
            mu=_get(section, "mu", float, required=True), plan=plan, **common)
    if kind == "decreasing":
        return CoefficientSchedule.decreasing(
            nu=_get(section, "nu", float, required=True), plan=plan, **common)
    if kind == "fixed":
        return CoefficientSchedule.fixed(
            value=_get(section, "fixed", float, required=True), plan=plan, **common)
    if kind in ("linear", "exponential", "sine", "logarithmic"):
        return CoefficientSchedule(
            kind=kind, plan=plan,
            a_coeff=_get(section, "a", float, required=True), **common)
    raise ConfigError(f"unknown schedule kind {kind!r}")


def build_problem(section: dict):
    kind = _get(section, "kind", str, required=True)
    casts = {
        "dimension": int, "condition_number": float, "num_samples": int,
        "num_features": int, "separation": float, "hidden_units": int,
        "num_classes": int, "batch_size": int, "data_seed": int,
        "train_fraction": float,
    }
    params = {}
    for key, cast in casts.items():
        if key in section:
            params[key] = _get(section, key, cast)
    try:
        return make_problem(kind, **params)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad [problem] section: {exc}") from exc


def build_optimizer(sections: dict, problem=None) -> OptimizerConfig:
    """Optimizer config from [optimizer]; step budget derives from the problem.

    total_steps may be given explicitly or as [problem] epochs x batches per
    epoch; if both are present they must agree.
    """
    section = sections.get("optimizer", {})
    total = _get(section, "total_steps", int)
    epochs = _get(sections.get("problem", {}), "epochs", int)
    if problem is not None and epochs is not None:
        derived = epochs * problem.batches_per_epoch
        if total is not None and total != derived:
            raise ConfigError(
                f"total_steps {total} contradicts epochs*batches = {derived}")
        total = derived
    if total is None:
        raise ConfigError("total_steps (or problem epochs) is required")
    variant = _get(section, "variant", str, default="fsgdm")
    kwargs = dict(
        variant=variant,
        total_steps=total,
        num_stages=_get(section, "num_stages", int, default=min(300, total)),
        c=_get(section, "c", float, default=0.033),
        v=_get(section, "v", float, default=1.0),
        u=_get(section, "u", float, default=0.9),
        base_lr=_get(section, "base_lr", float, default=0.1),
        lr_schedule=_get(section, "lr_schedule", str, default="constant"),
        weight_decay=_get(section, "weight_decay", float, default=0.0),
    )
    if variant == "generalized":
        if "schedule" not in sections:
            raise ConfigError("generalized variant needs a [schedule] section")
        sched_section = dict(sections["schedule"])
        sched_section.setdefault("total_steps", str(total))
        sched_section.setdefault("num_stages", str(kwargs["num_stages"]))
        kwargs["schedule"] = build_schedule(sched_section)
    try:
        return OptimizerConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"bad [optimizer] section: {exc}") from exc


def build_signal(section: dict, seed: int | None = None) -> SignalSpec:
    kwargs = dict(
        length=_get(section, "length", int, default=2000),
        amplitude=_get(section, "amplitude", float, default=1.0),
        signal_freq=_get(section, "omega", float, default=0.04 * math.pi),
        noise_std=_get(section, "noise_std", float, default=0.3),
        seed=_get(section, "seed", int, default=0),
    )
    if seed is not None:
        kwargs["seed"] = seed
    try:
        return SignalSpec(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"bad [signal] section: {exc}") from exc


def build_sweep_grid(section: dict) -> tuple[list[float], list[float], float]:
    c_values = _get(section, "c_values", _float_list, required=True)
    v_values = _get(section, "v_values", _float_list, required=True)
    zone = _get(section, "zone_constant", float, default=30.992)
    return c_values, v_values, zone


def schedule_section(schedule: CoefficientSchedule) -> dict[str, str]:
    """[schedule] key/value pairs that rebuild ``schedule`` via build_schedule."""
    out = {
        "total_steps": str(schedule.plan.total_steps),
        "num_stages": str(schedule.plan.num_stages),
    }
    if schedule.kind == "piecewise-transition":
        tr = schedule.transition
        if tr.preset is None:
            raise ConfigError(
                "only the named transitions (lp2hp, ...) serialize to config text"
            )
        out["kind"] = tr.preset
        out["transition_stage"] = str(tr.switch_stage)
        out["nu"] = repr(tr.first.nu)
        out["mu"] = repr(tr.second.mu)
        return out
    out["kind"] = schedule.kind
    out["sign"] = str(schedule.sign)
    out["v_rule"] = schedule.v_rule
    if schedule.v_rule == "constant":
        out["v"] = repr(schedule.v_value)
    if schedule.mu is not None:
        out["mu"] = repr(schedule.mu)
    if schedule.nu is not None:
        out["nu"] = repr(schedule.nu)
    if schedule.fixed_value is not None:
        out["fixed"] = repr(schedule.fixed_value)
    if schedule.a_coeff is not None:
        out["a"] = repr(schedule.a_coeff)
    return out


def optimizer_sections(config: OptimizerConfig) -> dict[str, dict[str, str]]:
    """Config-document sections that rebuild ``config`` via build_optimizer."""
    out = {
        "optimizer": {
            "variant": config.variant,
            "total_steps": str(config.total_steps),
            "num_stages": str(config.num_stages),
            "c": repr(config.c),
            "v": repr(config.v),
            "u": repr(config.u),
            "base_lr": repr(config.base_lr),
            "lr_schedule": config.lr_schedule,
            "weight_decay": repr(config.weight_decay),
        }
    }
    if config.variant == "generalized":
        out["schedule"] = schedule_section(config.schedule)
    return out


def sections_to_text(sections: dict) -> str:
    """Render sections back into the key = value document format."""
    lines = []
    for name in sections:
        if name not in SCHEMA:
            raise ConfigError(f"unknown section {name!r}")
        lines.append(f"[{name}]")
        for key, value in sections[name].items():
            if key not in SCHEMA[name]:
                raise ConfigError(f"unknown key {key!r} in section [{name}]")
            lines.append(f"{key} = {value}")
        lines.append("")
    return "\n".join(lines)


def build_check(section: dict) -> tuple[float, int, list[int], list[int]]:
    c = _get(section, "c", float, default=0.033)
    stages = _get(section, "num_stages", int, default=300)
    sigmas = _get(section, "total_steps_list", _int_list, required=True)
    stages_list = _get(section, "num_stages_list", _int_list,
                       default=[stages] * len(sigmas))
    if len(stages_list) != len(sigmas):
        raise ConfigError("num_stages_list must match total_steps_list in length")
    return c, stages, sigmas, stages_list
