"""Computing and energy models plus the per-slot energy feasibility checks.

Tasks are (size in bits, cycles per bit); local execution must finish within
one slot, which fixes the CPU frequency.  Offloaded data received in slot t
is computed by the legitimate UAV in slot t+1.  The helper UAV spends energy
on transmission (relay share or jamming) and on flying.
"""

from dataclasses import dataclass

import numpy as np

from .rates import Mode

__all__ = [
    "TaskSpec",
    "EnergyParams",
    "local_cpu_frequency",
    "legit_cpu_frequency",
    "computation_energy",
    "helper_transmit_energy",
    "helper_flight_energy",
    "check_ue_energy",
    "check_legit_energy",
    "check_helper_energy",
    "ue_offload_energy",
    "max_feasible_speed",
]


@dataclass(frozen=True)
class TaskSpec:
    """One user's computational task: s_bits of data, f_cycles per bit."""

    s_bits: float
    f_cycles: float

    def __post_init__(self):
        if self.s_bits <= 0 or self.f_cycles <= 0:
            raise ValueError("task size and cycles/bit must be positive")

    @property
    def cycles(self):
        return self.s_bits * self.f_cycles


@dataclass(frozen=True)
class EnergyParams:
    """Energy model constants.

    kappa: switched-capacitance coefficient (J s^2 / cycle^3)
    mass: helper UAV mass including payload (kg)
    delta: slot length (s)
    e_u / e_l / e_h: per-slot energy budgets of a user, the legitimate UAV
    and the helper UAV (J)
    """

    kappa: float = 1e-27
    mass: float = 9.65
    delta: float = 1.0
    e_u: float = 0.025
    e_l: float = 24.0
    e_h: float = 3900.0

    def __post_init__(self):
        for name in ("kappa", "mass", "delta", "e_u", "e_l", "e_h"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")


def local_cpu_frequency(task, delta):
    """CPU frequency (Hz) a user needs to finish its task within one slot."""
    if delta <= 0:
        raise ValueError("slot length must be positive")
    return task.cycles / delta


def legit_cpu_frequency(prev_z, prev_tasks, delta):
    """CPU frequency (Hz) the legitimate UAV needs to compute everything it
    received in the previous slot."""
    if len(prev_z) != len(prev_tasks):
        raise ValueError(f"decision vector ({len(prev_z)}) and task list ({len(prev_tasks)}) differ in length")
    total_cycles = sum(task.cycles for z_u, task in zip(prev_z, prev_tasks) if z_u)
    return total_cycles / delta


def computation_energy(f, kappa, delta):
    """Energy (J) of computing at frequency f for one slot: kappa * f^3 * delta."""
    if np.any(np.asarray(f) < 0):
        raise ValueError("CPU frequency must be nonnegative")
    return kappa * np.asarray(f, dtype=float) ** 3 * delta


def helper_transmit_energy(mode, z, power, delta, n_ues):
    """Helper transmit energy (J) for one slot.

    Relay: p_r over the half-slot share of each offloader; jam: p_j for the
    whole slot regardless of the offload pattern.
    """
    if n_ues < 1:
        raise ValueError("need at least one user")
    if mode is Mode.RELAY:
        return power.p_r * delta / (2.0 * n_ues) * int(np.sum(np.asarray(z, dtype=int)))
    return power.p_j * delta


def helper_flight_energy(v, mass, delta):
    """Kinetic flight energy (J) of one slot at horizontal velocity v = (vx, vy)."""
    vx, vy = float(v[0]), float(v[1])
    return 0.5 * mass * delta * (vx * vx + vy * vy)


def ue_offload_energy(mode, power, delta, n_ues):
    """Transmit energy (J) a user spends when offloading in the given mode.

    The slot share delta/n_ues is halved in relay mode (the user only
    transmits during the first hop).
    """
    share = delta / (2.0 * n_ues) if mode is Mode.RELAY else delta / n_ues
    return power.p_u * share


def check_ue_energy(z_u, mode, task, power, params, n_ues):
    """Per-slot energy feasibility of one user under the proposed decision:
    offload transmit energy if z_u else local computation energy."""
    if z_u:
        spent = ue_offload_energy(mode, power, params.delta, n_ues)
    else:
        f = local_cpu_frequency(task, params.delta)
        spent = float(computation_energy(f, params.kappa, params.delta))
    return spent <= params.e_u


def check_legit_energy(prev_z, prev_tasks, params):
    """Per-slot energy feasibility of the legitimate UAV computing the data
    offloaded in the previous slot."""
    f = legit_cpu_frequency(prev_z, prev_tasks, params.delta)
    return float(computation_energy(f, params.kappa, params.delta)) <= params.e_l


def check_helper_energy(mode, z, v, power, params, n_ues):
    """Per-slot energy feasibility of the helper UAV (flight + transmission)."""
    spent = helper_flight_energy(v, params.mass, params.delta)
    spent += helper_transmit_energy(mode, z, power, params.delta, n_ues)
    return spent <= params.e_h


def max_feasible_speed(power, params):
    """Largest speed whose flight energy plus a mode-independent bound on the
    transmit energy stays within the helper budget.

    The transmit bound max(p_j, p_r/2) * delta dominates both modes for any
    offload pattern, so capping the speed here keeps the helper budget
    feasible whatever mode the slot later selects.
    """
    tr_bound = params.delta * max(power.p_j, power.p_r / 2.0)
    budget = params.e_h - tr_bound
    if budget <= 0:
        return 0.0
    return float(np.sqrt(budget / (0.5 * params.mass * params.delta)))
