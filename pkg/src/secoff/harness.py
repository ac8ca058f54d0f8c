"""Experiment orchestration: seeded runs, artifact writing, horizon sweeps,
and tidy plot-data emission.

Every run writes into its own directory:

    <out>/<scheme>[-N<horizon>]-s<seed>/
        run.ini         scheme / seed / horizon of this run
        config.ini      full effective configuration
        layout.ini      exact scenario geometry
        rewards.csv     learning curve (or evaluation rows for untrained schemes)
        trajectory.csv  final noise-free evaluation episode, one row per slot
        offload.csv     per-(slot, user) decisions of that episode
        checkpoint.bin  trained schemes only

plus a summary.csv at the top level. Identical config and seed reproduce
every file byte for byte.
"""

import configparser
import csv
import shutil
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import metrics
from .baselines import SchemeKind, run_scheme
from .checkpoint import save_checkpoint
from .config import dump_config
from .layout import TWO_CLUSTER, save_layout

__all__ = ["run_train", "run_sweep", "emit_plot_data",
           "PLOT_REWARD_HEADER", "PLOT_TRAJECTORY_HEADER", "PLOT_SUMRATE_HEADER"]

PLOT_REWARD_HEADER = ["scheme", "seed", "horizon", "episode", "discounted_return"]
PLOT_TRAJECTORY_HEADER = ["scheme", "seed", "horizon", "slot", "x", "y", "mode"]
PLOT_SUMRATE_HEADER = ["scheme", "horizon", "mean_secrecy_sum_rate"]


def _write_run_ini(path, scheme, seed, horizon):
    cp = configparser.ConfigParser()
    cp["run"] = {"scheme": scheme, "seed": str(seed), "horizon": str(horizon)}
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        cp.write(fh)


def _read_run_ini(path):
    cp = configparser.ConfigParser()
    cp.read(path, encoding="utf-8")
    sec = cp["run"]
    return sec["scheme"], int(sec["seed"]), int(sec["horizon"])


def _execute_run(run_dir, run_cfg, scheme_name, seed):
    """Run one (scheme, seed) and write its artifacts; cleans up the whole
    run directory if anything fails so no partial outputs survive."""
    run_dir = Path(run_dir)
    run_dir.mkdir(parents=True, exist_ok=True)
    try:
        result = run_scheme(scheme_name, run_cfg.env, run_cfg.agent, seed,
                            run_cfg.eval_episodes)
        _write_run_ini(run_dir / "run.ini", scheme_name, seed, run_cfg.env.t_slots)
        dump_config(replace(run_cfg, scheme=scheme_name, seeds=(seed,),
                            out_dir=str(run_dir)), run_dir / "config.ini")
        save_layout(result.layout, run_dir / "layout.ini")
        if result.episode_logs:
            metrics.write_rewards(run_dir / "rewards.csv", result.episode_logs)
        else:
            metrics.write_eval_rewards(run_dir / "rewards.csv", result.eval_result,
                                       run_cfg.env.t_slots)
        metrics.write_trajectory(run_dir / "trajectory.csv", result.eval_result.trajectory)
        metrics.write_offload(run_dir / "offload.csv", result.eval_result.trajectory)
        if result.train_result is not None:
            save_checkpoint(run_dir / "checkpoint.bin",
                            result.train_result.checkpoint_state())
        return result
    except BaseException:
        shutil.rmtree(run_dir, ignore_errors=True)
        raise


def run_train(run_cfg):
    """Train/evaluate the configured scheme for every seed; returns the list
    of run directories. Writes a per-seed summary.csv at the top level."""
    out = Path(run_cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    run_dirs = []
    for seed in run_cfg.seeds:
        run_dir = out / f"{run_cfg.scheme}-s{seed}"
        result = _execute_run(run_dir, run_cfg, run_cfg.scheme, seed)
        ev = result.eval_result
        rows.append((run_cfg.scheme, run_cfg.env.t_slots, seed,
                     len(ev.episodes), ev.mean_secrecy, ev.std_secrecy))
        run_dirs.append(run_dir)
    metrics.write_summary(out / "summary.csv", rows)
    return run_dirs


def run_sweep(run_cfg, horizons):
    """Run all five schemes at each horizon on the two-cluster geometry and
    aggregate per-(scheme, horizon) means over seeds into summary.csv."""
    if not horizons:
        raise ValueError("need at least one horizon")
    out = Path(run_cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    env_base = run_cfg.env
    if not env_base.layout_file:
        env_base = replace(env_base, layout_kind=TWO_CLUSTER)
    seed_rows = []
    agg_rows = []
    run_dirs = []
    for horizon in horizons:
        env_h = env_base.with_horizon(horizon)
        for scheme in SchemeKind:
            per_seed = []
            for seed in run_cfg.seeds:
                cfg = replace(run_cfg, env=env_h)
                run_dir = out / f"{scheme.value}-N{horizon}-s{seed}"
                result = _execute_run(run_dir, cfg, scheme.value, seed)
                ev = result.eval_result
                seed_rows.append((scheme.value, horizon, seed, len(ev.episodes),
                                  ev.mean_secrecy, ev.std_secrecy))
                per_seed.append(ev.mean_secrecy)
                run_dirs.append(run_dir)
            per_seed = np.array(per_seed)
            agg_rows.append((scheme.value, horizon, len(per_seed),
                             float(per_seed.mean()), float(per_seed.std())))
    metrics.write_summary(out / "seed_summary.csv", seed_rows)
    metrics.write_sweep_summary(out / "summary.csv", agg_rows)
    return run_dirs


def _find_run_dirs(metrics_dir):
    metrics_dir = Path(metrics_dir)
    if not metrics_dir.is_dir():
        raise FileNotFoundError(f"metrics directory {metrics_dir} does not exist")
    dirs = sorted(p.parent for p in metrics_dir.rglob("run.ini"))
    if not dirs:
        raise FileNotFoundError(f"no run directories (run.ini) found under {metrics_dir}")
    return dirs


def emit_plot_data(metrics_dir, out_dir):
    """Write the three tidy plot files from a directory of finished runs:
    reward_vs_episode.csv, trajectory_modes.csv, sumrate_vs_horizon.csv.

    Raises (without writing anything) if a required input is missing.
    """
    metrics_dir = Path(metrics_dir)
    run_dirs = _find_run_dirs(metrics_dir)

    reward_rows = []
    traj_rows = []
    for rd in run_dirs:
        scheme, seed, horizon = _read_run_ini(rd / "run.ini")
        for name in ("rewards.csv", "trajectory.csv"):
            if not (rd / name).exists():
                raise FileNotFoundError(f"missing input file {rd / name}")
        _, eps = metrics.read_csv(rd / "rewards.csv", metrics.REWARDS_HEADER)
        for row in eps:
            reward_rows.append([scheme, seed, horizon, row["episode"],
                                row["discounted_return"]])
        _, slots = metrics.read_csv(rd / "trajectory.csv", metrics.TRAJECTORY_HEADER)
        for row in slots:
            traj_rows.append([scheme, seed, horizon, row["slot"], row["x"],
                              row["y"], row["mode"]])

    summary_path = metrics_dir / "summary.csv"
    if not summary_path.exists():
        raise FileNotFoundError(f"missing input file {summary_path}")
    header, rows = metrics.read_csv(summary_path)
    sumrate_rows = []
    if header == metrics.SWEEP_HEADER:
        for row in rows:
            sumrate_rows.append([row["scheme"], row["horizon"],
                                 row["mean_secrecy_sum_rate"]])
    elif header == metrics.SUMMARY_HEADER:
        groups = {}
        for row in rows:
            key = (row["scheme"], row["horizon"])
            groups.setdefault(key, []).append(float(row["mean_secrecy_sum_rate"]))
        for (scheme, horizon), vals in sorted(groups.items()):
            sumrate_rows.append([scheme, horizon, repr(float(np.mean(vals)))])
    else:
        raise ValueError(f"{summary_path}: unrecognized summary header {header}")

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, header_row, rows_out in (
            ("reward_vs_episode.csv", PLOT_REWARD_HEADER, reward_rows),
            ("trajectory_modes.csv", PLOT_TRAJECTORY_HEADER, traj_rows),
            ("sumrate_vs_horizon.csv", PLOT_SUMRATE_HEADER, sumrate_rows)):
        path = out_dir / name
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header_row)
            w.writerows(rows_out)
        written.append(path)
    return written
