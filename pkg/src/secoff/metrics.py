"""CSV emission and parsing for run artifacts.

All files are UTF-8, comma-separated, LF-terminated, with a header row and
'.' as the decimal separator. Floats are written with repr so values
round-trip exactly and reruns are byte-identical. Header strings are the
schema (v1); any change must bump the documented schema version.
"""

import csv

__all__ = [
    "REWARDS_HEADER", "TRAJECTORY_HEADER", "OFFLOAD_HEADER",
    "SUMMARY_HEADER", "SWEEP_HEADER",
    "write_rewards", "write_eval_rewards", "write_trajectory",
    "write_offload", "write_summary", "write_sweep_summary", "read_csv",
]

REWARDS_HEADER = ["episode", "discounted_return", "undiscounted_return",
                  "mean_secrecy_rate", "noise_std"]
TRAJECTORY_HEADER = ["slot", "x", "y", "mode", "c_relay", "c_jam", "reward",
                     "n_offload", "v_x", "v_y", "off_map"]
OFFLOAD_HEADER = ["slot", "ue", "z", "s_bits", "f_cycles", "margin",
                  "d_ue_helper", "d_ue_legit"]
SUMMARY_HEADER = ["scheme", "horizon", "seed", "eval_episodes",
                  "mean_secrecy_sum_rate", "std_secrecy_sum_rate"]
SWEEP_HEADER = ["scheme", "horizon", "n_seeds", "mean_secrecy_sum_rate",
                "std_over_seeds"]


def _f(x):
    return repr(float(x))


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def write_rewards(path, episode_logs):
    """Learning-curve rows, one per training episode."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(REWARDS_HEADER)
        for log in episode_logs:
            w.writerow([log.episode, _f(log.discounted_return),
                        _f(log.undiscounted_return), _f(log.mean_secrecy_rate),
                        _f(log.noise_std)])


def write_eval_rewards(path, eval_result, t_slots):
    """Evaluation-only rows in the rewards schema (schemes with no training)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(REWARDS_HEADER)
        for ep in eval_result.episodes:
            w.writerow([ep["episode"], _f(ep["discounted_return"]),
                        _f(ep["undiscounted_return"]),
                        _f(ep["secrecy_sum_rate"] / t_slots), _f(0.0)])


def write_trajectory(path, records):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(TRAJECTORY_HEADER)
        for r in records:
            w.writerow([r.slot, _f(r.x), _f(r.y), r.mode, _f(r.c_relay),
                        _f(r.c_jam), _f(r.reward), r.n_offload, _f(r.v_x),
                        _f(r.v_y), int(r.off_map)])


def write_offload(path, records):
    """Per-(slot, user) detail of the same evaluation episode."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(OFFLOAD_HEADER)
        for r in records:
            for u in range(len(r.z)):
                w.writerow([r.slot, u, int(r.z[u]), _f(r.tasks_s[u]),
                            _f(r.tasks_f[u]), _f(r.margins[u]),
                            _f(r.d_uh[u]), _f(r.d_ul[u])])


def write_summary(path, rows):
    """Per-seed summary rows: (scheme, horizon, seed, n_eval, mean, std)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(SUMMARY_HEADER)
        for scheme, horizon, seed, n_eval, mean, std in rows:
            w.writerow([scheme, horizon, seed, n_eval, _f(mean), _f(std)])


def write_sweep_summary(path, rows):
    """Aggregated rows: (scheme, horizon, n_seeds, mean over seeds, std)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(SWEEP_HEADER)
        for scheme, horizon, n_seeds, mean, std in rows:
            w.writerow([scheme, horizon, n_seeds, _f(mean), _f(std)])


def read_csv(path, expected_header=None):
    """Read a CSV into (header, list of row dicts with string values)."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if expected_header is not None and header != expected_header:
            raise ValueError(f"{path}: unexpected header {header} "
                             f"(schema expects {expected_header})")
        rows = [dict(zip(header, row)) for row in reader]
    return header, rows
