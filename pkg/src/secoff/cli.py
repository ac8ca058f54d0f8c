"""Command-line interface.

Subcommands: train, baseline, evaluate, sweep, plot-data. All defaults come
from the built-in configuration; --config points at an INI file and the
remaining flags override it. Exit status is 0 on success, 1 with a
diagnostic on stderr otherwise.
"""

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import metrics
from .baselines import SchemeKind
from .checkpoint import load_checkpoint
from .config import ConfigError, RunConfig, load_config
from .harness import emit_plot_data, run_sweep, run_train
from .nn import Mlp
from .runner import actor_policy, evaluate_policy

TRAINABLE = ("proposed", "re-ot", "ja-ot")
LINEAR = ("re-lt", "ja-lt")


def _load_run_config(args):
    cfg = load_config(args.config) if args.config else RunConfig()
    if getattr(args, "scheme", None):
        cfg = replace(cfg, scheme=args.scheme)
    if getattr(args, "seed", None):
        try:
            seeds = tuple(int(s) for s in args.seed.split(","))
        except ValueError:
            raise ConfigError(f"--seed: expected comma-separated integers, got {args.seed!r}")
        cfg = replace(cfg, seeds=seeds)
    if getattr(args, "episodes", None):
        cfg = replace(cfg, agent=cfg.agent.with_episodes(args.episodes))
    if getattr(args, "out", None):
        cfg = replace(cfg, out_dir=args.out)
    return cfg


def _cmd_train(args):
    cfg = _load_run_config(args)
    if cfg.scheme not in TRAINABLE:
        raise ConfigError(f"scheme {cfg.scheme!r} does not train; "
                          f"use 'secoff baseline' for {LINEAR}")
    dirs = run_train(cfg)
    for d in dirs:
        print(d)
    return 0


def _cmd_baseline(args):
    cfg = _load_run_config(args)
    if cfg.scheme not in LINEAR:
        raise ConfigError(f"'secoff baseline' runs the linear schemes {LINEAR}; "
                          f"got {cfg.scheme!r}")
    dirs = run_train(cfg)
    for d in dirs:
        print(d)
    return 0


def _cmd_evaluate(args):
    cfg = _load_run_config(args)
    ck = load_checkpoint(args.checkpoint)
    sizes = (ck.obs_dim, *ck.hidden, ck.act_dim)
    actor = Mlp(sizes, out_tanh=True, out_scale=ck.v_max,
                weights=ck.actor[0::2], biases=ck.actor[1::2])
    scheme = SchemeKind.from_name(cfg.scheme)
    env_cfg = cfg.env.with_mode(scheme.forced_mode)
    if ck.layout.n_ues != env_cfg.n_ues:
        raise ConfigError(f"checkpoint layout has {ck.layout.n_ues} users but "
                          f"config expects {env_cfg.n_ues}")
    episodes = args.episodes or cfg.eval_episodes
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seeds[0]).spawn(4)[3])
    result = evaluate_policy(actor_policy(actor), env_cfg, ck.layout,
                             episodes, rng, gamma=cfg.agent.gamma)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    metrics.write_eval_rewards(out / "rewards.csv", result, env_cfg.t_slots)
    metrics.write_trajectory(out / "trajectory.csv", result.trajectory)
    metrics.write_offload(out / "offload.csv", result.trajectory)
    print(f"mean secrecy sum-rate over {episodes} episodes: {result.mean_secrecy!r}")
    return 0


def _cmd_sweep(args):
    cfg = _load_run_config(args)
    try:
        horizons = [int(h) for h in args.horizons.split(",")]
    except ValueError:
        raise ConfigError(f"--horizons: expected comma-separated integers, got {args.horizons!r}")
    dirs = run_sweep(cfg, horizons)
    for d in dirs:
        print(d)
    return 0


def _cmd_plot_data(args):
    written = emit_plot_data(args.metrics_dir, args.out or args.metrics_dir)
    for path in written:
        print(path)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="secoff",
        description="Helper-UAV secure offloading: training, baselines, sweeps "
                    "and plot data.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, schemes):
        p.add_argument("--config", help="INI config file (defaults built in)")
        p.add_argument("--seed", help="comma-separated seeds (overrides config)")
        p.add_argument("--episodes", type=int, help="training episodes (overrides config)")
        p.add_argument("--scheme", choices=schemes, help="scheme to run")
        p.add_argument("--out", help="output directory (overrides config)")

    p_train = sub.add_parser("train", help="train a DDPG-based scheme")
    common(p_train, TRAINABLE)
    p_train.set_defaults(func=_cmd_train)

    p_base = sub.add_parser("baseline", help="run a linear-trajectory scheme")
    common(p_base, LINEAR)
    p_base.set_defaults(func=_cmd_baseline)

    p_eval = sub.add_parser("evaluate", help="roll out a saved actor, noise-free")
    common(p_eval, TRAINABLE + LINEAR)
    p_eval.add_argument("--checkpoint", required=True, help="checkpoint.bin to load")
    p_eval.set_defaults(func=_cmd_evaluate)

    p_sweep = sub.add_parser("sweep", help="all five schemes across horizons "
                                           "on the two-cluster layout")
    common(p_sweep, TRAINABLE + LINEAR)
    p_sweep.add_argument("--horizons", default="10,20",
                         help="comma-separated slot counts (default 10,20)")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_plot = sub.add_parser("plot-data", help="emit tidy plot files from run artifacts")
    p_plot.add_argument("--metrics-dir", required=True, help="directory of finished runs")
    p_plot.add_argument("--out", help="output directory (default: the metrics dir)")
    p_plot.set_defaults(func=_cmd_plot_data)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError, ValueError) as exc:
        print(f"secoff: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
