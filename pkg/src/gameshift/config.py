"""Experiment configs: a small TOML grammar with strict validation.

Top-level keys pick the experiment kind, seed and replica count;
sections describe the network, chain rates, payoffs, reputation,
revision rule and run horizon; an [axes] section carries the
kind-specific sweep axes. Unknown keys are errors, not warnings, so
typos never silently fall back to defaults.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .engine import ExponentialSchedule, FixedSchedule, PowerLawSchedule, Schedule, SimConfig
from .gamespace import TransitionRates
from .topology import NetworkSpec

EXPERIMENT_KINDS = (
    "timeseries",
    "dist",
    "mu_curves",
    "lambda_heatmap",
    "payoff_heatmap",
    "schedule_compare",
    "scale_sweep",
)

DEFAULT_SCHEDULES: tuple[Schedule, ...] = (
    FixedSchedule(0.5),
    FixedSchedule(1.0),
    FixedSchedule(5.0),
    ExponentialSchedule(1.0),
    PowerLawSchedule(2.5, 0.6),
)


class ConfigError(ValueError):
    """Raised for unparseable or invalid experiment configs."""


@dataclass(frozen=True)
class ExperimentSpec:
    """A fully resolved experiment: base run config plus sweep axes."""

    kind: str
    base: SimConfig
    replicas: int = 5
    tail: int = 500
    burn_in: int = 1000
    axes: dict[str, Any] = field(default_factory=dict)


def parse_config(path: str | Path) -> ExperimentSpec:
    """Read and validate a TOML experiment config file."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e.strerror}") from e
    return parse_config_text(text)


def parse_config_text(text: str) -> ExperimentSpec:
    """Validate a TOML experiment config given as a string."""
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"invalid TOML: {e}") from e
    return _build_spec(raw)


_SECTIONS = ("network", "rates", "payoffs", "reputation", "update", "run", "axes")


def _build_spec(raw: dict[str, Any]) -> ExperimentSpec:
    top = dict(raw)
    kind = _pop_str(top, "kind", "timeseries")
    if kind not in EXPERIMENT_KINDS:
        raise ConfigError(f"unknown kind {kind!r}, expected one of {', '.join(EXPERIMENT_KINDS)}")
    seed = _pop_int(top, "seed", 0)
    replicas = _pop_int(top, "replicas", 5)
    if replicas < 1:
        raise ConfigError(f"replicas must be at least 1, got {replicas}")

    sections = {name: top.pop(name, {}) for name in _SECTIONS}
    for key in top:
        raise ConfigError(f"unknown key {key!r} at top level")
    for name, sec in sections.items():
        if not isinstance(sec, dict):
            raise ConfigError(f"[{name}] must be a section, got {type(sec).__name__}")

    if not sections["network"]:
        raise ConfigError("missing required section [network]")
    if not sections["rates"]:
        raise ConfigError("missing required section [rates]")

    network = _parse_network(dict(sections["network"]))
    rates = _parse_rates(dict(sections["rates"]))
    b, r = _parse_payoffs(dict(sections["payoffs"]))
    use_rep, delta, rep_mean, rep_sigma = _parse_reputation(dict(sections["reputation"]))
    kappa, schedule = _parse_update(dict(sections["update"]))
    horizon, tail, burn_in = _parse_run(dict(sections["run"]))

    base = SimConfig(
        network=network,
        rates=rates,
        b=b,
        r=r,
        use_reputation=use_rep,
        delta=delta,
        kappa=kappa,
        rep_mean=rep_mean,
        rep_sigma=rep_sigma,
        schedule=schedule,
        horizon=horizon,
        seed=seed,
    )
    try:
        base.validate()
    except ValueError as e:
        raise ConfigError(str(e)) from e
    if tail > horizon + 1:
        raise ConfigError(f"run.tail={tail} exceeds the {horizon + 1} samples of horizon {horizon}")
    if burn_in > horizon:
        raise ConfigError(f"run.burn_in={burn_in} leaves no samples of horizon {horizon}")

    axes = _parse_axes(kind, dict(sections["axes"]), base)
    return ExperimentSpec(kind=kind, base=base, replicas=replicas, tail=tail,
                          burn_in=burn_in, axes=axes)


def _parse_network(sec: dict[str, Any]) -> NetworkSpec:
    kind = _pop_str(sec, "kind", "lattice", where="network")
    spec = NetworkSpec(
        kind=kind,
        side=_pop_int(sec, "side", 50, where="network"),
        n=_pop_int(sec, "n", 1000, where="network"),
        k=_pop_int(sec, "k", 4, where="network"),
        p=_pop_float(sec, "p", 0.1, where="network"),
        graph_seed=_pop_int(sec, "graph_seed", 0, where="network"),
    )
    _reject_unknown(sec, "network")
    try:
        spec.validate()
    except ValueError as e:
        raise ConfigError(f"network: {e}") from e
    return spec


def _parse_rates(sec: dict[str, Any]) -> TransitionRates:
    lam = _pop_float_list(sec, "lambda", None, where="rates")
    mu = _pop_float_list(sec, "mu", None, where="rates")
    _reject_unknown(sec, "rates")
    if lam is None or mu is None:
        raise ConfigError("rates: both 'lambda' and 'mu' rate lists are required")
    try:
        return TransitionRates(lam=tuple(lam), mu=tuple(mu))
    except ValueError as e:
        raise ConfigError(f"rates: {e}") from e


def _parse_payoffs(sec: dict[str, Any]) -> tuple[float, float]:
    b = _pop_float(sec, "b", 1.5, where="payoffs")
    r = _pop_float(sec, "r", 0.5, where="payoffs")
    _reject_unknown(sec, "payoffs")
    return b, r


def _parse_reputation(sec: dict[str, Any]) -> tuple[bool, float, float, float]:
    enabled = _pop_bool(sec, "enabled", True, where="reputation")
    delta = _pop_float(sec, "delta", 0.04, where="reputation")
    mean = _pop_float(sec, "init_mean", 2.0, where="reputation")
    sigma = _pop_float(sec, "init_sigma", 0.6, where="reputation")
    _reject_unknown(sec, "reputation")
    return enabled, delta, mean, sigma


_SCHEDULE_PARAMS = {"fixed": ("interval",), "exponential": ("mean",), "powerlaw": ("alpha", "xmin")}


def _parse_schedule(kind: str, sec: dict[str, Any], where: str) -> Schedule:
    if kind not in _SCHEDULE_PARAMS:
        raise ConfigError(
            f"{where}: unknown schedule {kind!r}, expected one of {', '.join(_SCHEDULE_PARAMS)}"
        )
    try:
        if kind == "fixed":
            out: Schedule = FixedSchedule(interval=_pop_float(sec, "interval", 1.0, where=where))
        elif kind == "exponential":
            out = ExponentialSchedule(mean=_pop_float(sec, "mean", 1.0, where=where))
        else:
            out = PowerLawSchedule(
                alpha=_pop_float(sec, "alpha", 2.5, where=where),
                xmin=_pop_float(sec, "xmin", 0.6, where=where),
            )
        out.validate()
    except ValueError as e:
        raise ConfigError(f"{where}: {e}") from e
    return out


def _parse_update(sec: dict[str, Any]) -> tuple[float, Schedule]:
    kappa = _pop_float(sec, "kappa", 0.1, where="update")
    kind = _pop_str(sec, "schedule", "fixed", where="update")
    schedule = _parse_schedule(kind, sec, "update")
    _reject_unknown(sec, "update")
    return kappa, schedule


def _parse_run(sec: dict[str, Any]) -> tuple[int, int, int]:
    horizon = _pop_int(sec, "horizon", 10_000, where="run")
    tail = _pop_int(sec, "tail", 500, where="run")
    burn_in = _pop_int(sec, "burn_in", 1000, where="run")
    _reject_unknown(sec, "run")
    if horizon < 1:
        raise ConfigError(f"run.horizon must be at least 1, got {horizon}")
    if tail < 1:
        raise ConfigError(f"run.tail must be at least 1, got {tail}")
    if burn_in < 0:
        raise ConfigError(f"run.burn_in must be non-negative, got {burn_in}")
    return horizon, tail, burn_in


_OVERRIDE_LAMBDA = re.compile(r"^lambda(\d+)$")
_OVERRIDE_MU = re.compile(r"^mu([1-9]\d*)$")


def override_names(rates: TransitionRates) -> tuple[str, ...]:
    """Parameter names sweeps may vary for a given chain."""
    m = len(rates.lam)
    lams = tuple(f"lambda{i}" for i in range(m))
    mus = tuple(f"mu{i}" for i in range(1, m + 1))
    return lams + mus + ("b", "r")


def apply_override(config: SimConfig, name: str, value: float) -> SimConfig:
    """Return a copy of ``config`` with one swept parameter replaced.

    Valid names: lambdaK (chain up-rate K), muK (chain down-rate into
    state K-1, 1-based), b, r.
    """
    if name == "b":
        return replace(config, b=float(value))
    if name == "r":
        return replace(config, r=float(value))
    m = _OVERRIDE_LAMBDA.match(name)
    if m:
        idx = int(m.group(1))
        lam = list(config.rates.lam)
        if idx >= len(lam):
            raise ConfigError(f"{name} is out of range for a chain with {len(lam)} up-rates")
        lam[idx] = float(value)
        return replace(config, rates=TransitionRates(lam=tuple(lam), mu=config.rates.mu))
    m = _OVERRIDE_MU.match(name)
    if m:
        idx = int(m.group(1)) - 1
        mu = list(config.rates.mu)
        if idx >= len(mu):
            raise ConfigError(f"{name} is out of range for a chain with {len(mu)} down-rates")
        mu[idx] = float(value)
        return replace(config, rates=TransitionRates(lam=config.rates.lam, mu=tuple(mu)))
    raise ConfigError(
        f"unknown sweep parameter {name!r}; valid names: {', '.join(override_names(config.rates))}"
    )


def _parse_axes(kind: str, sec: dict[str, Any], base: SimConfig) -> dict[str, Any]:
    axes: dict[str, Any] = {}
    if kind == "timeseries":
        _reject_unknown(sec, "axes")
        return axes

    if kind == "dist":
        param = _pop_str(sec, "param", None, where="axes")
        values = _pop_axis_values(sec, "values", where="axes")
        _reject_unknown(sec, "axes")
        if param is None or values is None:
            raise ConfigError("dist requires axes.param and axes.values")
        apply_override(base, param, values[0])  # validates the name early
        axes["param"] = param
        axes["values"] = values
        return axes

    if kind in ("mu_curves", "lambda_heatmap", "payoff_heatmap"):
        names = {"mu_curves": ("mu1", "mu2"), "lambda_heatmap": ("lambda0", "lambda1"),
                 "payoff_heatmap": ("b", "r")}[kind]
        for name in names:
            values = _pop_axis_values(sec, name, where="axes")
            if values is None:
                raise ConfigError(f"{kind} requires axes.{name}")
            apply_override(base, name, values[0])
            axes[name] = values
        _reject_unknown(sec, "axes")
        return axes

    if kind == "schedule_compare":
        entries = sec.pop("schedules", None)
        _reject_unknown(sec, "axes")
        if entries is None:
            axes["schedules"] = list(DEFAULT_SCHEDULES)
            return axes
        if not isinstance(entries, list) or not entries:
            raise ConfigError("axes.schedules must be a non-empty array of schedule tables")
        parsed = []
        for i, entry in enumerate(entries):
            if not isinstance(entry, dict):
                raise ConfigError(f"axes.schedules[{i}] must be a table")
            entry = dict(entry)
            skind = _pop_str(entry, "kind", None, where=f"axes.schedules[{i}]")
            if skind is None:
                raise ConfigError(f"axes.schedules[{i}] is missing 'kind'")
            parsed.append(_parse_schedule(skind, entry, f"axes.schedules[{i}]"))
            _reject_unknown(entry, f"axes.schedules[{i}]")
        axes["schedules"] = parsed
        return axes

    # scale_sweep
    sizes = sec.pop("sizes", None)
    pairs = sec.pop("pairs", None)
    _reject_unknown(sec, "axes")
    if sizes is None or pairs is None:
        raise ConfigError("scale_sweep requires axes.sizes and axes.pairs")
    if not isinstance(sizes, list) or not sizes or not all(isinstance(s, int) and s > 0 for s in sizes):
        raise ConfigError("axes.sizes must be a non-empty array of positive integers")
    if not isinstance(pairs, list) or not pairs:
        raise ConfigError("axes.pairs must be a non-empty array of override tables")
    clean_pairs: list[dict[str, float]] = []
    for i, pair in enumerate(pairs):
        if not isinstance(pair, dict) or not pair:
            raise ConfigError(f"axes.pairs[{i}] must be a non-empty table of parameter overrides")
        clean: dict[str, float] = {}
        for key, val in pair.items():
            if not isinstance(val, (int, float)) or isinstance(val, bool):
                raise ConfigError(f"axes.pairs[{i}].{key} must be a number")
            apply_override(base, key, float(val))
            clean[key] = float(val)
        clean_pairs.append(clean)
    if base.network.kind == "lattice":
        for s in sizes:
            side = int(round(s ** 0.5))
            if side * side != s:
                raise ConfigError(f"axes.sizes entry {s} is not a perfect square (lattice network)")
    axes["sizes"] = [int(s) for s in sizes]
    axes["pairs"] = clean_pairs
    return axes


def sized_network(network: NetworkSpec, size: int) -> NetworkSpec:
    """The same network family scaled to ``size`` nodes."""
    if network.kind == "lattice":
        side = int(round(size ** 0.5))
        if side * side != size:
            raise ConfigError(f"lattice size {size} is not a perfect square")
        return replace(network, side=side)
    return replace(network, n=size)


def _reject_unknown(sec: dict[str, Any], where: str) -> None:
    for key in sec:
        raise ConfigError(f"unknown key {key!r} in [{where}]")


_MISSING = object()


def _pop_typed(sec, key, where, kinds, label):
    if key not in sec:
        return _MISSING
    val = sec.pop(key)
    if isinstance(val, bool) and bool not in kinds:
        raise ConfigError(f"{_path(where, key)} must be {label}, got a boolean")
    if not isinstance(val, kinds):
        raise ConfigError(f"{_path(where, key)} must be {label}, got {type(val).__name__}")
    return val


def _path(where: str | None, key: str) -> str:
    return f"{where}.{key}" if where else key


def _pop_str(sec, key, default, where=None):
    val = _pop_typed(sec, key, where, (str,), "a string")
    return default if val is _MISSING else val


def _pop_int(sec, key, default, where=None):
    val = _pop_typed(sec, key, where, (int,), "an integer")
    return default if val is _MISSING else int(val)


def _pop_float(sec, key, default, where=None):
    val = _pop_typed(sec, key, where, (int, float), "a number")
    return default if val is _MISSING else float(val)


def _pop_bool(sec, key, default, where=None):
    val = _pop_typed(sec, key, where, (bool,), "a boolean")
    return default if val is _MISSING else bool(val)


def _pop_float_list(sec, key, default, where=None):
    if key not in sec:
        return default
    val = sec.pop(key)
    if not isinstance(val, list) or not val:
        raise ConfigError(f"{_path(where, key)} must be a non-empty array of numbers")
    out = []
    for x in val:
        if not isinstance(x, (int, float)) or isinstance(x, bool):
            raise ConfigError(f"{_path(where, key)} must contain only numbers")
        out.append(float(x))
    return out


def _pop_axis_values(sec, key, where=None):
    """An axis is either an explicit array or a {min, max, steps} table."""
    if key not in sec:
        return None
    val = sec.pop(key)
    if isinstance(val, list):
        sec[key] = val
        return _pop_float_list(sec, key, None, where=where)
    if isinstance(val, dict):
        val = dict(val)
        lo = _pop_float(val, "min", None, where=_path(where, key))
        hi = _pop_float(val, "max", None, where=_path(where, key))
        steps = _pop_int(val, "steps", None, where=_path(where, key))
        _reject_unknown(val, _path(where, key))
        if lo is None or hi is None or steps is None:
            raise ConfigError(f"{_path(where, key)} table needs min, max and steps")
        if steps < 1:
            raise ConfigError(f"{_path(where, key)}.steps must be at least 1, got {steps}")
        if hi < lo:
            raise ConfigError(f"{_path(where, key)} has max < min")
        if steps == 1:
            return [lo]
        step = (hi - lo) / (steps - 1)
        return [lo + i * step for i in range(steps)]
    raise ConfigError(f"{_path(where, key)} must be an array or a {{min, max, steps}} table")
