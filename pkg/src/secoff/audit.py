"""Programmatic feasibility audit of run artifacts.

Replays the constraint set against the logged trajectory/offload CSVs of a
run directory: map bounds, coverage of every offloader, the per-user energy
budget on whichever branch was executed, the legitimate UAV's computation
budget (driven by the previous slot's offloads), and the helper's flight
plus transmission budget. Returns a list of violation strings; an empty list
means every logged slot is feasible.
"""

from pathlib import Path

import numpy as np

from . import metrics
from .config import load_config
from .energy import computation_energy, ue_offload_energy
from .layout import load_layout
from .rates import Mode

__all__ = ["audit_run_dir", "audit_many"]

_TOL = 1e-9  # logged values round-trip exactly; tolerance covers recomputation only


def _mode_from_label(label):
    if label == "relay":
        return Mode.RELAY
    if label == "jam":
        return Mode.JAM
    raise ValueError(f"unknown mode label {label!r}")


def audit_run_dir(run_dir):
    """Audit one run directory; returns a list of violation descriptions."""
    run_dir = Path(run_dir)
    cfg = load_config(run_dir / "config.ini").env
    layout = load_layout(run_dir / "layout.ini")
    _, traj = metrics.read_csv(run_dir / "trajectory.csv", metrics.TRAJECTORY_HEADER)
    _, off = metrics.read_csv(run_dir / "offload.csv", metrics.OFFLOAD_HEADER)

    by_slot = {}
    for row in off:
        by_slot.setdefault(int(row["slot"]), []).append(row)

    violations = []
    half = cfg.l_max / 2.0
    prev_cycles = 0.0
    for row in traj:
        slot = int(row["slot"])
        x, y = float(row["x"]), float(row["y"])
        mode = _mode_from_label(row["mode"])
        users = sorted(by_slot.get(slot, []), key=lambda r: int(r["ue"]))
        if len(users) != layout.n_ues:
            violations.append(f"slot {slot}: offload.csv has {len(users)} user rows, "
                              f"expected {layout.n_ues}")
            continue

        # map bounds (positions revert on boundary hits, so this must hold exactly)
        if abs(x) > half + _TOL or abs(y) > half + _TOL:
            violations.append(f"slot {slot}: position ({x}, {y}) outside the map square")

        n_offload = 0
        cycles = 0.0
        for u_row in users:
            u = int(u_row["ue"])
            z = int(u_row["z"])
            s_bits = float(u_row["s_bits"])
            f_cycles = float(u_row["f_cycles"])
            d_uh = float(u_row["d_ue_helper"])
            d_ul = float(u_row["d_ue_legit"])
            # logged distances must match the logged position and geometry
            d_uh_ref = float(np.hypot(*(layout.ues[u] - np.array([x, y]))))
            d_ul_ref = float(np.hypot(*(layout.ues[u] - layout.legit)))
            if abs(d_uh - d_uh_ref) > _TOL or abs(d_ul - d_ul_ref) > _TOL:
                violations.append(f"slot {slot} ue {u}: logged distances disagree "
                                  f"with the layout/position")
            if z:
                n_offload += 1
                cycles += s_bits * f_cycles
                if float(u_row["margin"]) <= cfg.epsilon:
                    violations.append(f"slot {slot} ue {u}: offloads with margin "
                                      f"{u_row['margin']} <= epsilon {cfg.epsilon}")
                if d_ul > cfg.d_max + _TOL:
                    violations.append(f"slot {slot} ue {u}: offloads outside "
                                      f"legitimate coverage ({d_ul} > {cfg.d_max})")
                if mode is Mode.RELAY and d_uh > cfg.d_max + _TOL:
                    violations.append(f"slot {slot} ue {u}: relays outside helper "
                                      f"coverage ({d_uh} > {cfg.d_max})")
                spent = ue_offload_energy(mode, cfg.power, cfg.delta, cfg.n_ues)
            else:
                f_local = s_bits * f_cycles / cfg.delta
                spent = float(computation_energy(f_local, cfg.energy.kappa, cfg.delta))
            if spent > cfg.energy.e_u + _TOL:
                violations.append(f"slot {slot} ue {u}: user energy {spent} "
                                  f"exceeds budget {cfg.energy.e_u}")

        if n_offload != int(row["n_offload"]):
            violations.append(f"slot {slot}: n_offload column {row['n_offload']} "
                              f"disagrees with offload.csv ({n_offload})")

        # legitimate UAV computes last slot's offloads this slot
        e_legit = float(computation_energy(prev_cycles / cfg.delta,
                                           cfg.energy.kappa, cfg.delta))
        if e_legit > cfg.energy.e_l + _TOL:
            violations.append(f"slot {slot}: legitimate compute energy {e_legit} "
                              f"exceeds budget {cfg.energy.e_l}")
        prev_cycles = cycles

        v_x, v_y = float(row["v_x"]), float(row["v_y"])
        e_flight = 0.5 * cfg.energy.mass * cfg.delta * (v_x * v_x + v_y * v_y)
        if mode is Mode.RELAY:
            e_tr = cfg.power.p_r * cfg.delta / (2.0 * cfg.n_ues) * n_offload
        else:
            e_tr = cfg.power.p_j * cfg.delta
        if e_flight + e_tr > cfg.energy.e_h + _TOL:
            violations.append(f"slot {slot}: helper energy {e_flight + e_tr} "
                              f"exceeds budget {cfg.energy.e_h}")

    # the data handed over in the final slot must also be computable next slot
    e_final = float(computation_energy(prev_cycles / cfg.delta,
                                       cfg.energy.kappa, cfg.delta))
    if e_final > cfg.energy.e_l + _TOL:
        violations.append(f"final slot hands over {prev_cycles} cycles, exceeding "
                          f"the legitimate budget next slot")
    return violations


def audit_many(run_dirs):
    """Audit several run directories; returns {run_dir: violations} for any
    directory with at least one violation."""
    bad = {}
    for rd in run_dirs:
        v = audit_run_dir(rd)
        if v:
            bad[str(rd)] = v
    return bad
