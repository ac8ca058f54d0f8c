"""Training and evaluation drivers.

Seeding: one root seed spawns four independent streams (layout generation,
training-environment draws, agent init/noise/sampling, evaluation-environment
draws), so two runs with the same seed and config produce identical layouts,
trajectories and logs, and all schemes sharing a seed see the same geometry.
"""

from dataclasses import dataclass, field

import numpy as np

from ._threads import blas_single_thread
from .checkpoint import CheckpointState, load_checkpoint
from .ddpg import DdpgAgent
from .env import Action, SecureOffloadEnv
from .nn import Mlp
from .rates import Mode

__all__ = [
    "EpisodeLog",
    "EvalResult",
    "TrainResult",
    "spawn_streams",
    "train",
    "evaluate_policy",
    "actor_policy",
]


@dataclass
class EpisodeLog:
    episode: int
    discounted_return: float
    undiscounted_return: float
    mean_secrecy_rate: float
    noise_std: float


@dataclass
class SlotRecord:
    """One executed slot of an evaluation episode (trajectory row plus the
    per-user detail needed by the feasibility audit)."""

    slot: int
    x: float
    y: float
    mode: str
    c_relay: float
    c_jam: float
    reward: float
    n_offload: int
    v_x: float
    v_y: float
    off_map: bool
    z: np.ndarray
    tasks_s: np.ndarray
    tasks_f: np.ndarray
    margins: np.ndarray
    d_uh: np.ndarray
    d_ul: np.ndarray


@dataclass
class EvalResult:
    episodes: list = field(default_factory=list)  # per-episode dicts
    trajectory: list = field(default_factory=list)  # SlotRecords, last episode

    @property
    def secrecy_per_episode(self):
        return np.array([e["secrecy_sum_rate"] for e in self.episodes])

    @property
    def mean_secrecy(self):
        return float(self.secrecy_per_episode.mean())

    @property
    def std_secrecy(self):
        return float(self.secrecy_per_episode.std())


@dataclass
class TrainResult:
    agent: DdpgAgent
    layout: object
    episode_logs: list
    root_seed: int
    env_rng: np.random.Generator
    agent_rng: np.random.Generator

    def checkpoint_state(self):
        a = self.agent
        return CheckpointState(
            root_seed=self.root_seed,
            episodes_done=len(self.episode_logs),
            env_steps=a.env_steps,
            noise_std=a.noise_std,
            v_max=a.v_max,
            layout=self.layout,
            hidden=tuple(a.cfg.hidden),
            obs_dim=a.obs_dim,
            act_dim=a.act_dim,
            actor=a.actor.params,
            critic=a.critic.params,
            actor_target=a.actor_target.params,
            critic_target=a.critic_target.params,
            adam_actor_t=a.adam_actor.t,
            adam_actor_m=a.adam_actor.ms,
            adam_actor_v=a.adam_actor.vs,
            adam_critic_t=a.adam_critic.t,
            adam_critic_m=a.adam_critic.ms,
            adam_critic_v=a.adam_critic.vs,
            buffer_capacity=a.buffer.capacity,
            buffer_size=a.buffer.size,
            buffer_cursor=a.buffer.cursor,
            buffer_obs=a.buffer.obs,
            buffer_act=a.buffer.act,
            buffer_rew=a.buffer.rew,
            buffer_next_obs=a.buffer.next_obs,
            env_rng_state=self.env_rng.bit_generator.state,
            agent_rng_state=self.agent_rng.bit_generator.state,
        )


def spawn_streams(seed):
    """Four independent generators: layout, training env, agent, eval env."""
    children = np.random.SeedSequence(seed).spawn(4)
    names = ("layout", "env", "agent", "eval")
    return {n: np.random.default_rng(c) for n, c in zip(names, children)}


def _mlp_from_params(params, sizes, out_tanh, out_scale):
    weights = params[0::2]
    biases = params[1::2]
    return Mlp(sizes, out_tanh, out_scale, weights=weights, biases=biases)


def _restore_agent(agent, ck):
    sizes_a = (ck.obs_dim, *ck.hidden, ck.act_dim)
    sizes_c = (ck.obs_dim + ck.act_dim, *ck.hidden, 1)
    agent.load_networks(
        _mlp_from_params(ck.actor, sizes_a, True, ck.v_max),
        _mlp_from_params(ck.critic, sizes_c, False, 1.0),
        _mlp_from_params(ck.actor_target, sizes_a, True, ck.v_max),
        _mlp_from_params(ck.critic_target, sizes_c, False, 1.0),
    )
    agent.adam_actor.t = ck.adam_actor_t
    agent.adam_critic.t = ck.adam_critic_t
    for dst, src in ((agent.adam_actor.ms, ck.adam_actor_m),
                     (agent.adam_actor.vs, ck.adam_actor_v),
                     (agent.adam_critic.ms, ck.adam_critic_m),
                     (agent.adam_critic.vs, ck.adam_critic_v)):
        for d, s in zip(dst, src):
            d[...] = s
    buf = agent.buffer
    if buf.capacity != ck.buffer_capacity:
        raise ValueError(f"checkpoint buffer capacity {ck.buffer_capacity} "
                         f"does not match config {buf.capacity}")
    buf.obs[...] = ck.buffer_obs
    buf.act[...] = ck.buffer_act
    buf.rew[...] = ck.buffer_rew
    buf.next_obs[...] = ck.buffer_next_obs
    buf.size = ck.buffer_size
    buf.cursor = ck.buffer_cursor
    agent.noise_std = ck.noise_std
    agent.env_steps = ck.env_steps


def train(env_cfg, agent_cfg, seed, resume_from=None):
    """Run (or continue) a training run; agent_cfg.episodes is the total.

    Per slot: act with exploration noise, step the environment, store the
    executed transition, run one update round once the buffer can fill a
    minibatch, then decay the noise. Returns a TrainResult whose
    checkpoint_state() resumes bit-identically.
    """
    streams = spawn_streams(seed)
    start_episode = 0
    if resume_from is not None:
        ck = resume_from if isinstance(resume_from, CheckpointState) else load_checkpoint(resume_from)
        layout = ck.layout
        start_episode = ck.episodes_done
    else:
        ck = None
        layout = env_cfg.resolve_layout(streams["layout"])

    env = SecureOffloadEnv(env_cfg, layout, streams["env"])
    agent_rng = streams["agent"]
    agent = DdpgAgent(env.observation_dim, 2, agent_cfg, env_cfg.v_max, agent_rng)
    if ck is not None:
        _restore_agent(agent, ck)
        # stream states are restored only now: agent construction above has
        # already consumed init draws from the fresh streams
        streams["env"].bit_generator.state = ck.env_rng_state
        agent_rng.bit_generator.state = ck.agent_rng_state
    elif agent_cfg.warm_start:
        warm = load_checkpoint(agent_cfg.warm_start)
        sizes_a = (warm.obs_dim, *warm.hidden, warm.act_dim)
        sizes_c = (warm.obs_dim + warm.act_dim, *warm.hidden, 1)
        agent.load_networks(_mlp_from_params(warm.actor, sizes_a, True, warm.v_max),
                            _mlp_from_params(warm.critic, sizes_c, False, 1.0))

    logs = []
    gamma = agent_cfg.gamma
    with blas_single_thread():
        for episode in range(start_episode, agent_cfg.episodes):
            env.reset()
            obs = env.observe()
            discounted = 0.0
            undiscounted = 0.0
            secrecy = 0.0
            for t in range(env_cfg.t_slots):
                raw = agent.explore(obs, agent_rng)
                result = env.step(Action(float(raw[0]), float(raw[1])))
                next_obs = env.observe()
                agent.buffer.add(obs, result.info.executed_v / agent.v_max,
                                 result.reward, next_obs)
                agent.learn(agent_rng)
                agent.decay_noise()
                discounted += gamma ** t * result.reward
                undiscounted += result.reward
                secrecy += result.info.c_relay if result.info.chosen_mode is Mode.RELAY else result.info.c_jam
                obs = next_obs
            logs.append(EpisodeLog(episode=episode + 1,
                                   discounted_return=discounted,
                                   undiscounted_return=undiscounted,
                                   mean_secrecy_rate=secrecy / env_cfg.t_slots,
                                   noise_std=agent.noise_std))

    return TrainResult(agent=agent, layout=layout, episode_logs=logs,
                       root_seed=seed, env_rng=streams["env"], agent_rng=agent_rng)


def actor_policy(actor):
    """Wrap a trained actor as an evaluation policy."""

    def policy(env):
        out = actor.forward(env.observe())
        return Action(float(out[0]), float(out[1]))

    return policy


def evaluate_policy(policy, env_cfg, layout, episodes, rng, gamma=0.95):
    """Noise-free rollouts of a policy; policy(env) -> Action.

    Returns per-episode returns and accumulated secrecy sum-rates, plus the
    full slot trace of the final episode.
    """
    env = SecureOffloadEnv(env_cfg, layout, rng)
    out = EvalResult()
    for ep in range(episodes):
        env.reset()
        secrecy = 0.0
        undiscounted = 0.0
        discounted = 0.0
        records = []
        for t in range(env_cfg.t_slots):
            result = env.step(policy(env))
            info = result.info
            chosen_c = info.c_relay if info.chosen_mode is Mode.RELAY else info.c_jam
            secrecy += chosen_c
            undiscounted += result.reward
            discounted += gamma ** t * result.reward
            records.append(SlotRecord(
                slot=t,
                x=float(result.next_state.helper_pos[0]),
                y=float(result.next_state.helper_pos[1]),
                mode=info.chosen_mode.label,
                c_relay=info.c_relay, c_jam=info.c_jam,
                reward=result.reward,
                n_offload=int(info.z.sum()),
                v_x=float(info.executed_v[0]), v_y=float(info.executed_v[1]),
                off_map=info.off_map,
                z=info.z.copy(),
                tasks_s=info.tasks_s.copy(), tasks_f=info.tasks_f.copy(),
                margins=info.margins.copy(),
                d_uh=info.d_uh.copy(),
                d_ul=env._d_ul.copy(),
            ))
        out.episodes.append({
            "episode": ep + 1,
            "secrecy_sum_rate": secrecy,
            "undiscounted_return": undiscounted,
            "discounted_return": discounted,
        })
        if ep == episodes - 1:
            out.trajectory = records
    return out
