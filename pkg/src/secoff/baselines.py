"""The four benchmark schemes plus the proposed hybrid pipeline.

Linear-trajectory (LT) schemes fly a straight line at constant velocity,
capped at the speed limit, toward a scheme-specific target: relay-LT heads
for the midpoint between the legitimate UAV and the user centroid, jam-LT
for the eavesdropper's horizontal position. They use no training.

Optimal-trajectory (OT) schemes train the same agent as the proposed scheme
in a mode-forced environment (the reward is the forced mode's secrecy sum
rate). The proposed scheme trains on the hybrid environment with per-slot
mode selection.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .env import Action, project_action
from .rates import Mode
from .runner import actor_policy, evaluate_policy, spawn_streams, train

__all__ = ["SchemeKind", "scheme_target", "linear_trajectory_action",
           "linear_policy", "run_scheme", "SchemeResult"]


class SchemeKind(Enum):
    PROPOSED = "proposed"
    RE_OT = "re-ot"
    JA_OT = "ja-ot"
    RE_LT = "re-lt"
    JA_LT = "ja-lt"

    @classmethod
    def from_name(cls, name):
        for kind in cls:
            if kind.value == name:
                return kind
        raise ValueError(f"unknown scheme {name!r} (expected one of "
                         f"{[k.value for k in cls]})")

    @property
    def forced_mode(self):
        if self in (SchemeKind.RE_OT, SchemeKind.RE_LT):
            return Mode.RELAY
        if self in (SchemeKind.JA_OT, SchemeKind.JA_LT):
            return Mode.JAM
        return None

    @property
    def trains(self):
        return self in (SchemeKind.PROPOSED, SchemeKind.RE_OT, SchemeKind.JA_OT)


def scheme_target(scheme, layout):
    """End point of a linear-trajectory scheme."""
    if scheme is SchemeKind.RE_LT:
        centroid = layout.ues.mean(axis=0)
        return 0.5 * (layout.legit + centroid)
    if scheme is SchemeKind.JA_LT:
        return layout.eve.copy()
    raise ValueError(f"{scheme} is not a linear-trajectory scheme")


def linear_trajectory_action(pos, target, slot_index, t_slots, delta, v_max):
    """Velocity that spreads the remaining distance evenly over the remaining
    slots (arriving exactly at the final slot), capped at the speed limit
    along the same line when the spread would be too fast."""
    remaining_slots = t_slots - slot_index
    if remaining_slots <= 0:
        return Action(0.0, 0.0)
    diff = np.asarray(target, dtype=float) - np.asarray(pos, dtype=float)
    nominal = Action(*(diff / (remaining_slots * delta)))
    return project_action(nominal, v_max)


def linear_policy(scheme, layout, t_slots, delta, v_max):
    """Evaluation policy flying the scheme's straight line."""
    target = scheme_target(scheme, layout)

    def policy(env):
        state = env.state
        return linear_trajectory_action(state.helper_pos, target,
                                        state.slot_index, t_slots, delta, v_max)

    return policy


@dataclass
class SchemeResult:
    """Uniform metrics record shared by all five schemes."""

    scheme: SchemeKind
    layout: object
    eval_result: object
    episode_logs: list = field(default_factory=list)
    train_result: object = None

    @property
    def mean_secrecy(self):
        return self.eval_result.mean_secrecy


def run_scheme(scheme, env_cfg, agent_cfg, seed, eval_episodes):
    """Train (if the scheme trains) and evaluate one scheme.

    All schemes sharing a seed see the same generated layout; evaluation uses
    its own stream, so trained and untrained schemes face identical fading
    and task draws at equal seeds.
    """
    scheme = SchemeKind.from_name(scheme) if isinstance(scheme, str) else scheme
    cfg = env_cfg.with_mode(scheme.forced_mode)
    if scheme.trains:
        result = train(cfg, agent_cfg, seed)
        eval_rng = spawn_streams(seed)["eval"]
        policy = actor_policy(result.agent.actor)
        ev = evaluate_policy(policy, cfg, result.layout, eval_episodes, eval_rng,
                             gamma=agent_cfg.gamma)
        return SchemeResult(scheme=scheme, layout=result.layout, eval_result=ev,
                            episode_logs=result.episode_logs, train_result=result)
    streams = spawn_streams(seed)
    layout = cfg.resolve_layout(streams["layout"])
    policy = linear_policy(scheme, layout, cfg.t_slots, cfg.delta, cfg.v_max)
    ev = evaluate_policy(policy, cfg, layout, eval_episodes, streams["eval"],
                         gamma=agent_cfg.gamma)
    return SchemeResult(scheme=scheme, layout=layout, eval_result=ev)
