"""Slot-stepped decision environment for the helper UAV.

Each slot: the agent commands a horizontal velocity; the helper moves (or
reverts if the move would exit the map); one fading realization is drawn per
link; for each candidate mode (jam / relay) the per-user offload rule is
applied and the secrecy sum-rate computed; the mode with the higher sum-rate
is selected (ties go to jam) and the reward is that sum-rate minus a penalty
if the move was reverted.

The per-user offload rule sets z_u = 1 iff
  * the secrecy margin (legitimate minus eavesdropper rate) exceeds epsilon,
  * the user is inside the coverage radius of every UAV it transmits to
    (legitimate always; also the helper in relay mode), and
  * the offload transmit energy fits the user's per-slot budget.
If the resulting offload set would overload the legitimate UAV's computation
budget next slot, offloaders are greedily dropped lowest-margin-first.
"""

from dataclasses import dataclass, field

import numpy as np

from .energy import (
    computation_energy,
    helper_flight_energy,
    helper_transmit_energy,
    max_feasible_speed,
    ue_offload_energy,
)
from .channel import sample_fading_n
from .rates import Mode, UeLinkGains, rate_eavesdropper, rate_legitimate

__all__ = [
    "Action",
    "EnvState",
    "SlotGains",
    "SlotInfo",
    "StepResult",
    "EpisodeOver",
    "SecureOffloadEnv",
    "project_action",
    "apply_action",
    "offloading_decision",
    "evaluate_slot",
    "draw_tasks",
    "max_local_cycles",
]


class EpisodeOver(RuntimeError):
    """Raised when step() is called after the last slot of an episode."""


@dataclass(frozen=True)
class Action:
    """Commanded horizontal velocity in m/s."""

    v_x: float
    v_y: float

    def __post_init__(self):
        if not (np.isfinite(self.v_x) and np.isfinite(self.v_y)):
            raise ValueError("action components must be finite")

    @property
    def speed(self):
        return float(np.hypot(self.v_x, self.v_y))

    def as_array(self):
        return np.array([self.v_x, self.v_y], dtype=float)


@dataclass(frozen=True)
class EnvState:
    """Observation record: helper position, previous slot's mode, horizontal
    distances to every node (users..., legitimate, eavesdropper)."""

    helper_pos: np.ndarray
    prev_mode: Mode
    dists: np.ndarray
    slot_index: int


@dataclass(frozen=True)
class SlotGains:
    """Realized link gains of one slot: per-user arrays plus the two shared
    helper links."""

    g_ul: np.ndarray
    g_uh: np.ndarray
    g_ue: np.ndarray
    g_hl: float
    g_he: float


@dataclass
class ModeEval:
    """Outcome of evaluating one candidate mode."""

    mode: Mode
    z: np.ndarray
    margins: np.ndarray
    sum_rate: float


@dataclass
class SlotInfo:
    """Diagnostics of one executed slot."""

    c_relay: float
    c_jam: float
    chosen_mode: Mode
    z: np.ndarray
    off_map: bool
    energies: dict
    executed_v: np.ndarray
    margins: np.ndarray
    gains: SlotGains
    tasks_s: np.ndarray
    tasks_f: np.ndarray
    d_uh: np.ndarray
    by_mode: dict = field(default_factory=dict)


@dataclass
class StepResult:
    reward: float
    next_state: EnvState
    info: SlotInfo


def project_action(raw, v_max):
    """Scale the velocity down to the speed limit (Euclidean projection)."""
    speed = raw.speed
    if speed <= v_max:
        return raw
    scale = v_max / speed
    return Action(raw.v_x * scale, raw.v_y * scale)


def apply_action(pos, action, delta, l_max):
    """Advance the helper position; revert (and flag) if the candidate lands
    outside the closed map square."""
    candidate = pos + action.as_array() * delta
    half = l_max / 2.0
    if np.any(np.abs(candidate) > half):
        return pos.copy(), True
    return candidate, False


def max_local_cycles(energy):
    """Largest task (in total CPU cycles) a user can compute locally within
    one slot without exceeding its energy budget."""
    return float((energy.e_u * energy.delta ** 2 / energy.kappa) ** (1.0 / 3.0))


def draw_tasks(rng, n, tasks, energy):
    """Draw per-user tasks uniformly from the configured ranges, rejecting
    draws a user could not compute locally within its energy budget.

    Without the rejection a sliver of the largest tasks would make both the
    offload and local branches of the user energy constraint unsatisfiable
    whenever coverage also fails, leaving no feasible decision at all.
    """
    bound = max_local_cycles(energy)
    if tasks.s_min_bits * tasks.f_min > bound:
        raise ValueError(
            "task distribution infeasible: even the smallest task "
            f"({tasks.s_min_bits * tasks.f_min:.3g} cycles) exceeds the local "
            f"energy bound ({bound:.3g} cycles)")
    s = rng.uniform(tasks.s_min_bits, tasks.s_max_bits, n)
    f = rng.uniform(tasks.f_min, tasks.f_max, n)
    bad = s * f > bound
    while np.any(bad):
        k = int(bad.sum())
        s[bad] = rng.uniform(tasks.s_min_bits, tasks.s_max_bits, k)
        f[bad] = rng.uniform(tasks.f_min, tasks.f_max, k)
        bad = s * f > bound
    return s, f


def _mode_margins(mode, gains, power):
    g = UeLinkGains(g_ul=gains.g_ul, g_uh=gains.g_uh, g_ue=gains.g_ue,
                    g_hl=gains.g_hl, g_he=gains.g_he)
    return rate_legitimate(mode, g, power) - rate_eavesdropper(mode, g, power)


def offloading_decision(mode, margins, d_uh, d_ul, cfg):
    """Per-user offload rule for one candidate mode (before the legitimate
    UAV's budget enforcement)."""
    covered = d_ul <= cfg.d_max
    if mode is Mode.RELAY:
        covered = covered & (d_uh <= cfg.d_max)
    energy_ok = ue_offload_energy(mode, cfg.power, cfg.delta, cfg.n_ues) <= cfg.energy.e_u
    return (margins > cfg.epsilon) & covered & energy_ok


def _enforce_legit_budget(z, margins, task_cycles, cfg):
    """Drop offloaders (lowest margin first) until the data they hand over
    fits the legitimate UAV's next-slot computation budget."""
    z = z.copy()
    while True:
        total = float(task_cycles[z].sum())
        e_comp = float(computation_energy(total / cfg.delta, cfg.energy.kappa, cfg.delta))
        if e_comp <= cfg.energy.e_l or not z.any():
            return z
        idx = np.flatnonzero(z)
        z[idx[np.argmin(margins[idx])]] = False


def _evaluate_mode(mode, gains, tasks_cycles, d_uh, d_ul, cfg):
    margins = _mode_margins(mode, gains, cfg.power)
    z = offloading_decision(mode, margins, d_uh, d_ul, cfg)
    z = _enforce_legit_budget(z, margins, tasks_cycles, cfg)
    sum_rate = float(np.maximum(margins, 0.0)[z].sum())
    return ModeEval(mode=mode, z=z, margins=margins, sum_rate=sum_rate)


def evaluate_slot(gains, tasks_s, tasks_f, d_uh, d_ul, cfg):
    """Evaluate both candidate modes for one slot; pure in all arguments.

    Returns {Mode.JAM: ModeEval, Mode.RELAY: ModeEval}.
    """
    cycles = np.asarray(tasks_s) * np.asarray(tasks_f)
    return {
        mode: _evaluate_mode(mode, gains, cycles, d_uh, d_ul, cfg)
        for mode in (Mode.JAM, Mode.RELAY)
    }


def select_mode(by_mode, forced_mode=None):
    """Pick the executed mode: the forced one, else the higher sum-rate with
    ties resolved to jam."""
    if forced_mode is not None:
        return forced_mode
    return Mode.RELAY if by_mode[Mode.RELAY].sum_rate > by_mode[Mode.JAM].sum_rate else Mode.JAM


class SecureOffloadEnv:
    """Mutable single-episode environment over a fixed scenario layout.

    The random stream drives task and fading draws only; the layout is fixed
    for the life of the environment so successive episodes sample the same
    geometry (reset repositions the helper, it does not move the users).
    """

    def __init__(self, cfg, layout, rng):
        if layout.n_ues != cfg.n_ues:
            raise ValueError(f"layout has {layout.n_ues} users, config expects {cfg.n_ues}")
        self.cfg = cfg
        self.layout = layout
        self.rng = rng
        # Static geometry relative to the fixed nodes.
        self._d_ul = np.hypot(*(layout.ues - layout.legit).T)
        self._d_ue = np.hypot(*(layout.ues - layout.eve).T)
        self._v_budget_cap = max_feasible_speed(cfg.power, cfg.energy)
        self._alt_he = layout.h - layout.h_e
        self.state = None
        self._prev_offload_cycles = 0.0

    # -- episode control -------------------------------------------------

    def reset(self):
        """Start a new episode: helper at its initial position, previous
        mode jam, slot counter zeroed."""
        pos = self.layout.helper_init.copy()
        self.state = EnvState(helper_pos=pos, prev_mode=Mode.JAM,
                              dists=self._node_distances(pos), slot_index=0)
        self._prev_offload_cycles = 0.0
        return self.state

    def _node_distances(self, pos):
        d_uh = np.hypot(*(self.layout.ues - pos).T)
        d_hl = float(np.hypot(*(pos - self.layout.legit)))
        d_he = float(np.hypot(*(pos - self.layout.eve)))
        return np.concatenate([d_uh, [d_hl, d_he]])

    def observe(self, state=None):
        """Fixed-length observation: position scaled to the half-map, the
        previous mode as 0/1, and every node distance scaled by the map side."""
        state = self.state if state is None else state
        half = self.cfg.l_max / 2.0
        return np.concatenate([
            state.helper_pos / half,
            [1.0 if state.prev_mode is Mode.RELAY else 0.0],
            state.dists / self.cfg.l_max,
        ])

    @property
    def observation_dim(self):
        return self.cfg.n_ues + 5

    # -- slot dynamics ---------------------------------------------------

    def _slot_gains(self, pos):
        """One fading realization per link, shared by both candidate modes.

        Draw order (fixed for reproducibility): user->legitimate, then
        user->helper, then user->eavesdropper, then helper->legitimate and
        helper->eavesdropper.
        """
        cfg, lay = self.cfg, self.layout
        n = cfg.n_ues
        pf_g2a = sample_fading_n(cfg.channel.k_g2a, 3 * n, self.rng)
        pf_a2a = sample_fading_n(cfg.channel.k_a2a, 2, self.rng)
        d_uh = np.hypot(*(lay.ues - pos).T)
        b0 = cfg.channel.beta0
        g_ul = b0 * pf_g2a[:n] / (lay.h ** 2 + self._d_ul ** 2)
        g_uh = b0 * pf_g2a[n:2 * n] / (lay.h ** 2 + d_uh ** 2)
        g_ue = b0 * pf_g2a[2 * n:] / (lay.h_e ** 2 + self._d_ue ** 2)
        b1 = cfg.channel.beta1
        d_hl = max(float(np.hypot(*(pos - lay.legit))), cfg.channel.d_min)
        d_he = max(float(np.hypot(*(pos - lay.eve))), cfg.channel.d_min)
        g_hl = b1 * float(pf_a2a[0]) / (d_hl ** 2)
        g_he = b1 * float(pf_a2a[1]) / (self._alt_he ** 2 + d_he ** 2)
        return SlotGains(g_ul=g_ul, g_uh=g_uh, g_ue=g_ue, g_hl=g_hl, g_he=g_he), d_uh

    def step(self, raw_action):
        """Execute one slot; see the module docstring for the sequence."""
        cfg = self.cfg
        state = self.state
        if state is None:
            raise EpisodeOver("call reset() before step()")
        if state.slot_index >= cfg.t_slots:
            raise EpisodeOver(f"episode is over after {cfg.t_slots} slots")

        action = project_action(raw_action, cfg.v_max)
        action = project_action(action, self._v_budget_cap)  # helper energy cap
        pos, off_map = apply_action(state.helper_pos, action, cfg.delta, cfg.l_max)

        tasks_s, tasks_f = draw_tasks(self.rng, cfg.n_ues, cfg.tasks, cfg.energy)
        gains, d_uh = self._slot_gains(pos)
        by_mode = evaluate_slot(gains, tasks_s, tasks_f, d_uh, self._d_ul, cfg)
        chosen = select_mode(by_mode, cfg.forced_mode)
        executed = by_mode[chosen]
        reward = executed.sum_rate - cfg.r_om * float(off_map)

        energies = {
            "flight": helper_flight_energy(action.as_array(), cfg.energy.mass, cfg.delta),
            "transmit": helper_transmit_energy(chosen, executed.z, cfg.power,
                                               cfg.delta, cfg.n_ues),
            "legit_compute": float(computation_energy(
                self._prev_offload_cycles / cfg.delta, cfg.energy.kappa, cfg.delta)),
        }
        self._prev_offload_cycles = float((tasks_s * tasks_f)[executed.z].sum())

        next_state = EnvState(helper_pos=pos, prev_mode=chosen,
                              dists=self._node_distances(pos),
                              slot_index=state.slot_index + 1)
        self.state = next_state
        info = SlotInfo(
            c_relay=by_mode[Mode.RELAY].sum_rate,
            c_jam=by_mode[Mode.JAM].sum_rate,
            chosen_mode=chosen, z=executed.z, off_map=off_map,
            energies=energies, executed_v=action.as_array(),
            margins=executed.margins, gains=gains,
            tasks_s=tasks_s, tasks_f=tasks_f, d_uh=d_uh, by_mode=by_mode,
        )
        return StepResult(reward=reward, next_state=next_state, info=info)

    @property
    def done(self):
        return self.state is None or self.state.slot_index >= self.cfg.t_slots
