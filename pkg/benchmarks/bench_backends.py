#!/usr/bin/env python3
"""Benchmark the compiled network kernels against the NumPy fallback.

Times the pieces the training loop actually runs (forward, backward, Adam,
soft update, and a full agent update round) at production sizes, plus a
full short training run per backend.

Usage: python benchmarks/bench_backends.py [--steps N]
"""

import argparse
import time

import numpy as np

from secoff._threads import blas_single_thread
from secoff.backend import available_backends


def time_fn(fn, repeats):
    fn()  # warm-up
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats * 1e3  # ms


def kernel_benchmarks(mod, rng, batch=70, sizes=(15, 300, 100, 100, 1), repeats=300):
    ws = [np.ascontiguousarray(rng.standard_normal((i, o)) / np.sqrt(i))
          for i, o in zip(sizes, sizes[1:])]
    bs = [np.zeros(o) for o in sizes[1:]]
    x = np.ascontiguousarray(rng.standard_normal((batch, sizes[0])))
    y, hid = mod.mlp_forward(ws, bs, x, False, 1.0)
    gy = np.ascontiguousarray(np.ones_like(y) / batch)
    ms_list = [np.zeros_like(w) for w in ws]
    vs_list = [np.zeros_like(w) for w in ws]
    targets = [w.copy() for w in ws]

    rows = {}
    rows["forward"] = time_fn(lambda: mod.mlp_forward(ws, bs, x, False, 1.0), repeats)
    rows["backward"] = time_fn(
        lambda: mod.mlp_backward(ws, bs, x, hid, y, gy, False, 1.0, True, True), repeats)
    grads = mod.mlp_backward(ws, bs, x, hid, y, gy, False, 1.0, False, True)[0]
    step = [0]

    def adam():
        step[0] += 1
        mod.adam_step(ws, grads, ms_list, vs_list, step[0], 1e-4, 0.9, 0.999, 1e-8)

    rows["adam"] = time_fn(adam, repeats)
    rows["soft_update"] = time_fn(lambda: mod.soft_update(targets, ws, 0.005), repeats)
    return rows


def agent_round(backend_name, repeats=200):
    import importlib
    import os

    os.environ["SECOFF_BACKEND"] = backend_name
    # reload the backend chain so the requested kernels are active
    import secoff.backend, secoff.ddpg, secoff.nn

    importlib.reload(secoff.backend)
    importlib.reload(secoff.nn)
    importlib.reload(secoff.ddpg)
    from secoff.config import AgentConfig
    from secoff.ddpg import Batch

    rng = np.random.default_rng(0)
    agent = secoff.ddpg.DdpgAgent(15, 2, AgentConfig(), 20.0, rng)
    batch = Batch(obs=rng.standard_normal((70, 15)), act=rng.uniform(-1, 1, (70, 2)),
                  rew=rng.standard_normal(70), next_obs=rng.standard_normal((70, 15)))

    def round_():
        targets = agent.critic_targets(batch)
        agent.critic_update(batch, targets)
        agent.actor_update(batch)
        agent.soft_update_targets()

    return time_fn(round_, repeats)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=300)
    args = parser.parse_args()

    backends = available_backends()
    print(f"backends available: {', '.join(backends)}")
    rng = np.random.default_rng(7)

    with blas_single_thread():
        results = {name: kernel_benchmarks(mod, rng, repeats=args.repeats)
                   for name, mod in backends.items()}
        rounds = {name: agent_round(name, repeats=max(50, args.repeats // 3))
                  for name in backends}

    kernels = list(next(iter(results.values())))
    header = f"{'kernel':<22}" + "".join(f"{name + ' (ms)':>16}" for name in results)
    print("\n" + header)
    print("-" * len(header))
    for k in kernels:
        print(f"{k:<22}" + "".join(f"{results[n][k]:>16.4f}" for n in results))
    print(f"{'full update round':<22}" + "".join(f"{rounds[n]:>16.4f}" for n in rounds))
    if "compiled" in rounds and "numpy" in rounds:
        print(f"\nspeedup (full round, numpy/compiled): "
              f"{rounds['numpy'] / rounds['compiled']:.2f}x")


if __name__ == "__main__":
    main()
