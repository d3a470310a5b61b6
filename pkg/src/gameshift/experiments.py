"""Experiment harness: sweeps, replica averaging, CSV outputs.

Every experiment writes plain-text CSV plus a manifest.json recording
the resolved configuration and the seed scheme. Output bytes are a pure
function of the config: floats are written with repr (shortest
round-trip form), line endings are always "\\n", and no timestamps or
host details ever enter the files.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import __version__
from .config import ExperimentSpec, apply_override, sized_network
from .engine import (
    ExponentialSchedule,
    FixedSchedule,
    PowerLawSchedule,
    RunMetrics,
    Schedule,
    SimConfig,
    cooperation_frequency,
    mean_state_counts,
    relative_error,
    run,
    state_count_histogram,
)
from .gamespace import expected_counts
from .topology import Graph, NetworkSpec, build_graph


def resolve_workers(explicit: int | None = None) -> int:
    """Worker budget: explicit argument, else GAMESHIFT_WORKERS, else 1."""
    if explicit is not None:
        if explicit < 1:
            raise ValueError(f"worker count must be at least 1, got {explicit}")
        return explicit
    raw = os.environ.get("GAMESHIFT_WORKERS", "").strip()
    if not raw:
        return 1
    try:
        workers = int(raw)
    except ValueError as e:
        raise ValueError(f"GAMESHIFT_WORKERS must be an integer, got {raw!r}") from e
    return max(workers, 1)


@lru_cache(maxsize=None)
def _graph_for(network: NetworkSpec) -> Graph:
    return build_graph(network)


def _run_one(config: SimConfig) -> RunMetrics:
    return run(config, _graph_for(config.network))


def _execute(configs: list[SimConfig], workers: int) -> list[RunMetrics]:
    """Run configs in order; results line up with the input list."""
    if workers <= 1 or len(configs) <= 1:
        return [_run_one(c) for c in configs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_one, configs, chunksize=1))


def _replica_configs(base: SimConfig, replicas: int) -> list[SimConfig]:
    # Replica i reruns the same config with seed base + i.
    return [replace(base, seed=base.seed + i) for i in range(replicas)]


def run_experiment(spec: ExperimentSpec, output_dir: str | Path,
                   workers: int | None = None) -> list[Path]:
    """Run one experiment and write its outputs into ``output_dir``.

    Returns the written file paths, manifest last.
    """
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    n_workers = resolve_workers(workers)
    runner = _KIND_RUNNERS[spec.kind]
    written = runner(spec, out, n_workers)
    written.append(_write_manifest(spec, out, [p.name for p in written]))
    return written


# ---------------------------------------------------------------- kinds


def _kind_timeseries(spec: ExperimentSpec, out: Path, workers: int) -> list[Path]:
    configs = _replica_configs(spec.base, spec.replicas)
    results = _execute(configs, workers)
    n_states = spec.base.rates.n_states
    header = ["t"] + [f"n_G{k}" for k in range(n_states)] + ["f_c"]
    written = []
    for i, metrics in enumerate(results):
        rows = [
            [_int(t)] + [_int(c) for c in counts] + [_float(fc)]
            for t, counts, fc in zip(metrics.sample_times, metrics.state_counts,
                                     metrics.coop_fraction)
        ]
        written.append(_write_csv(out / f"timeseries_rep{i}.csv", header, rows))
    mean_counts = np.mean([m.state_counts for m in results], axis=0)
    mean_fc = np.mean([m.coop_fraction for m in results], axis=0)
    rows = [
        [_int(t)] + [_float(c) for c in counts] + [_float(fc)]
        for t, counts, fc in zip(results[0].sample_times, mean_counts, mean_fc)
    ]
    written.append(_write_csv(out / "timeseries.csv", header, rows))
    return written


def _kind_dist(spec: ExperimentSpec, out: Path, workers: int) -> list[Path]:
    param: str = spec.axes["param"]
    values: list[float] = spec.axes["values"]
    n_agents = spec.base.network.node_count
    configs = []
    for v in values:
        configs.extend(_replica_configs(apply_override(spec.base, param, v), spec.replicas))
    results = _execute(configs, workers)

    rows = []
    hist_rows = []
    for vi, v in enumerate(values):
        cfg = apply_override(spec.base, param, v)
        theory = expected_counts(cfg.rates, n_agents)
        chunk = results[vi * spec.replicas:(vi + 1) * spec.replicas]
        sim = np.mean([mean_state_counts(m, spec.burn_in) for m in chunk], axis=0)
        for k in range(cfg.rates.n_states):
            rows.append([
                param, _float(v), str(k), _float(theory[k]), _float(sim[k]),
                _float(relative_error(float(theory[k]), float(sim[k]))),
            ])
        hist = state_count_histogram(chunk[0], spec.burn_in)
        for k in sorted(hist):
            for count in sorted(hist[k]):
                hist_rows.append([param, _float(v), str(k), str(count), _float(hist[k][count])])

    written = [
        _write_csv(out / "dist.csv",
                   ["param", "value", "state", "theory_count", "sim_count", "rel_err"], rows),
        _write_csv(out / "dist_histogram.csv",
                   ["param", "value", "state", "count", "probability"], hist_rows),
    ]
    return written


def _fc_stats(results: list[RunMetrics], tail: int) -> tuple[float, float]:
    fcs = np.array([cooperation_frequency(m, tail) for m in results])
    return float(fcs.mean()), float(fcs.std())


def _kind_mu_curves(spec: ExperimentSpec, out: Path, workers: int) -> list[Path]:
    points = [(m2, m1) for m2 in spec.axes["mu2"] for m1 in spec.axes["mu1"]]
    configs = []
    for m2, m1 in points:
        cfg = apply_override(apply_override(spec.base, "mu2", m2), "mu1", m1)
        configs.extend(_replica_configs(cfg, spec.replicas))
    results = _execute(configs, workers)
    rows = []
    for i, (m2, m1) in enumerate(points):
        chunk = results[i * spec.replicas:(i + 1) * spec.replicas]
        mean, std = _fc_stats(chunk, spec.tail)
        rows.append([_float(m2), _float(m1), _float(mean), _float(std), str(spec.replicas)])
    return [_write_csv(out / "mu_curves.csv",
                       ["mu2", "mu1", "fc_mean", "fc_std", "replicas"], rows)]


def _kind_lambda_heatmap(spec: ExperimentSpec, out: Path, workers: int) -> list[Path]:
    points = [(l1, l0) for l1 in spec.axes["lambda1"] for l0 in spec.axes["lambda0"]]
    configs = []
    for l1, l0 in points:
        cfg = apply_override(apply_override(spec.base, "lambda1", l1), "lambda0", l0)
        configs.extend(_replica_configs(cfg, spec.replicas))
    results = _execute(configs, workers)
    rows = []
    for i, (l1, l0) in enumerate(points):
        chunk = results[i * spec.replicas:(i + 1) * spec.replicas]
        mean, std = _fc_stats(chunk, spec.tail)
        rows.append([_float(l1), _float(l0), _float(mean), _float(std), str(spec.replicas)])
    return [_write_csv(out / "lambda_heatmap.csv",
                       ["lambda1", "lambda0", "fc_mean", "fc_std", "replicas"], rows)]


def _kind_payoff_heatmap(spec: ExperimentSpec, out: Path, workers: int) -> list[Path]:
    points = [(b, r) for b in spec.axes["b"] for r in spec.axes["r"]]
    written = []
    for enabled, name in ((True, "payoff_heatmap_reputation.csv"),
                          (False, "payoff_heatmap_no_reputation.csv")):
        configs = []
        for b, r in points:
            cfg = apply_override(apply_override(spec.base, "b", b), "r", r)
            cfg = replace(cfg, use_reputation=enabled)
            configs.extend(_replica_configs(cfg, spec.replicas))
        results = _execute(configs, workers)
        rows = []
        for i, (b, r) in enumerate(points):
            chunk = results[i * spec.replicas:(i + 1) * spec.replicas]
            mean, std = _fc_stats(chunk, spec.tail)
            rows.append([_float(b), _float(r), _float(mean), _float(std), str(spec.replicas)])
        written.append(_write_csv(out / name, ["b", "r", "fc_mean", "fc_std", "replicas"], rows))
    return written


def schedule_label(schedule: Schedule) -> str:
    """Short stable label for one revision schedule."""
    if isinstance(schedule, FixedSchedule):
        return f"fixed_{schedule.interval:g}"
    if isinstance(schedule, ExponentialSchedule):
        return f"exponential_{schedule.mean:g}"
    if isinstance(schedule, PowerLawSchedule):
        return f"powerlaw_{schedule.alpha:g}_{schedule.xmin:g}"
    raise TypeError(f"unknown schedule type {type(schedule).__name__}")


def _kind_schedule_compare(spec: ExperimentSpec, out: Path, workers: int) -> list[Path]:
    schedules: list[Schedule] = spec.axes["schedules"]
    rows = []
    for sched in schedules:
        configs = _replica_configs(replace(spec.base, schedule=sched), spec.replicas)
        results = _execute(configs, workers)
        mean_fc = np.mean([m.coop_fraction for m in results], axis=0)
        label = schedule_label(sched)
        for t, fc in zip(results[0].sample_times, mean_fc):
            rows.append([label, _int(t), _float(fc)])
    return [_write_csv(out / "schedule_compare.csv", ["schedule", "t", "fc"], rows)]


def _pair_label(pair: dict[str, float]) -> str:
    return " ".join(f"{k}={v:g}" for k, v in pair.items())


def _kind_scale_sweep(spec: ExperimentSpec, out: Path, workers: int) -> list[Path]:
    sizes: list[int] = spec.axes["sizes"]
    pairs: list[dict[str, float]] = spec.axes["pairs"]
    rows = []
    var_rows = []
    for pair in pairs:
        label = _pair_label(pair)
        means = []
        for size in sizes:
            cfg = spec.base
            for name, value in pair.items():
                cfg = apply_override(cfg, name, value)
            cfg = replace(cfg, network=sized_network(cfg.network, size))
            results = _execute(_replica_configs(cfg, spec.replicas), workers)
            mean, std = _fc_stats(results, spec.tail)
            means.append(mean)
            rows.append([label, str(size), _float(mean), _float(std), str(spec.replicas)])
        var_rows.append([label, str(len(sizes)), _float(np.var(means))])
    return [
        _write_csv(out / "scale_sweep.csv",
                   ["pair", "size", "fc_mean", "fc_std", "replicas"], rows),
        _write_csv(out / "scale_sweep_variance.csv",
                   ["pair", "sizes", "fc_variance"], var_rows),
    ]


_KIND_RUNNERS = {
    "timeseries": _kind_timeseries,
    "dist": _kind_dist,
    "mu_curves": _kind_mu_curves,
    "lambda_heatmap": _kind_lambda_heatmap,
    "payoff_heatmap": _kind_payoff_heatmap,
    "schedule_compare": _kind_schedule_compare,
    "scale_sweep": _kind_scale_sweep,
}


# ------------------------------------------------------------- writers


def _float(x) -> str:
    return repr(float(x))


def _int(x) -> str:
    return str(int(x))


def _write_csv(path: Path, header: list[str], rows: list[list[str]]) -> Path:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    path.write_text("\n".join(lines) + "\n", newline="")
    return path


def _schedule_dict(schedule: Schedule) -> dict:
    if isinstance(schedule, FixedSchedule):
        return {"kind": "fixed", "interval": schedule.interval}
    if isinstance(schedule, ExponentialSchedule):
        return {"kind": "exponential", "mean": schedule.mean}
    return {"kind": "powerlaw", "alpha": schedule.alpha, "xmin": schedule.xmin}


def _config_dict(config: SimConfig) -> dict:
    net = config.network
    network = {"kind": net.kind, "graph_seed": net.graph_seed}
    if net.kind == "lattice":
        network["side"] = net.side
    else:
        network.update(n=net.n, k=net.k, p=net.p)
    return {
        "network": network,
        "rates": {"lambda": list(config.rates.lam), "mu": list(config.rates.mu)},
        "payoffs": {"b": config.b, "r": config.r},
        "reputation": {
            "enabled": config.use_reputation,
            "delta": config.delta,
            "init_mean": config.rep_mean,
            "init_sigma": config.rep_sigma,
        },
        "update": {"kappa": config.kappa, "schedule": _schedule_dict(config.schedule)},
        "run": {"horizon": config.horizon},
        "seed": config.seed,
    }


def _axes_dict(spec: ExperimentSpec) -> dict:
    axes = dict(spec.axes)
    if "schedules" in axes:
        axes["schedules"] = [_schedule_dict(s) for s in axes["schedules"]]
    return axes


def _write_manifest(spec: ExperimentSpec, out: Path, outputs: list[str]) -> Path:
    manifest = {
        "version": __version__,
        "kind": spec.kind,
        "replicas": spec.replicas,
        "tail": spec.tail,
        "burn_in": spec.burn_in,
        "seed_scheme": "replica i runs with seed = base seed + i",
        "base": _config_dict(spec.base),
        "axes": _axes_dict(spec),
        "outputs": outputs,
    }
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", newline="")
    return path


def read_csv(path: str | Path) -> tuple[list[str], list[list[str]]]:
    """Read back a harness CSV as (header, rows of strings)."""
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise ValueError(f"{path} is empty")
    header = lines[0].split(",")
    return header, [line.split(",") for line in lines[1:]]
