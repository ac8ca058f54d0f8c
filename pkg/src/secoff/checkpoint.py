"""Versioned flat-binary checkpoints.

A checkpoint captures everything a training run needs to continue bit for
bit: all four networks, both Adam states, the replay buffer, the exploration
noise level, the scenario layout, and the two random streams. The exact
field order is documented in docs/checkpoint_format.md and must match this
module.
"""

import struct
from dataclasses import dataclass

import numpy as np

from .layout import LAYOUT_KINDS, ScenarioLayout

__all__ = ["CheckpointState", "save_checkpoint", "load_checkpoint", "CHECKPOINT_VERSION"]

MAGIC = b"SOFF"
CHECKPOINT_VERSION = 1

_KIND_CODES = {kind: i for i, kind in enumerate(LAYOUT_KINDS)}
_CODE_KINDS = {i: kind for kind, i in _KIND_CODES.items()}
_CUSTOM_KIND = 255


@dataclass
class CheckpointState:
    """In-memory image of a checkpoint file."""

    root_seed: int
    episodes_done: int
    env_steps: int
    noise_std: float
    v_max: float
    layout: ScenarioLayout
    hidden: tuple
    obs_dim: int
    act_dim: int
    actor: list
    critic: list
    actor_target: list
    critic_target: list
    adam_actor_t: int
    adam_actor_m: list
    adam_actor_v: list
    adam_critic_t: int
    adam_critic_m: list
    adam_critic_v: list
    buffer_capacity: int
    buffer_size: int
    buffer_cursor: int
    buffer_obs: np.ndarray
    buffer_act: np.ndarray
    buffer_rew: np.ndarray
    buffer_next_obs: np.ndarray
    env_rng_state: dict
    agent_rng_state: dict


def _w_u32(fh, v):
    fh.write(struct.pack("<I", int(v)))


def _w_u64(fh, v):
    fh.write(struct.pack("<Q", int(v)))


def _w_i64(fh, v):
    fh.write(struct.pack("<q", int(v)))


def _w_f64(fh, v):
    fh.write(struct.pack("<d", float(v)))


def _w_arr(fh, arr):
    arr = np.ascontiguousarray(arr, dtype="<f8")
    _w_u32(fh, arr.ndim)
    for d in arr.shape:
        _w_u32(fh, d)
    fh.write(arr.tobytes())


def _w_arrs(fh, arrs):
    _w_u32(fh, len(arrs))
    for a in arrs:
        _w_arr(fh, a)


def _w_u128(fh, v):
    _w_u64(fh, v >> 64)
    _w_u64(fh, v & 0xFFFFFFFFFFFFFFFF)


def _w_rng(fh, state):
    if state["bit_generator"] != "PCG64":
        raise ValueError("only PCG64 random streams are checkpointable")
    _w_u128(fh, state["state"]["state"])
    _w_u128(fh, state["state"]["inc"])
    _w_u32(fh, state["has_uint32"])
    _w_u32(fh, state["uinteger"])


class _Reader:
    def __init__(self, fh):
        self.fh = fh

    def _take(self, n):
        data = self.fh.read(n)
        if len(data) != n:
            raise ValueError("checkpoint file truncated")
        return data

    def u32(self):
        return struct.unpack("<I", self._take(4))[0]

    def u64(self):
        return struct.unpack("<Q", self._take(8))[0]

    def i64(self):
        return struct.unpack("<q", self._take(8))[0]

    def f64(self):
        return struct.unpack("<d", self._take(8))[0]

    def u128(self):
        hi = self.u64()
        return (hi << 64) | self.u64()

    def arr(self):
        ndim = self.u32()
        shape = tuple(self.u32() for _ in range(ndim))
        n = int(np.prod(shape)) if shape else 1
        data = np.frombuffer(self._take(8 * n), dtype="<f8").copy()
        return data.reshape(shape)

    def arrs(self):
        return [self.arr() for _ in range(self.u32())]

    def rng(self):
        return {
            "bit_generator": "PCG64",
            "state": {"state": self.u128(), "inc": self.u128()},
            "has_uint32": int(self.u32()),
            "uinteger": int(self.u32()),
        }


def save_checkpoint(path, st):
    """Write a CheckpointState; field order must match load_checkpoint."""
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        _w_u32(fh, CHECKPOINT_VERSION)
        _w_i64(fh, st.root_seed)
        _w_u64(fh, st.episodes_done)
        _w_u64(fh, st.env_steps)
        _w_f64(fh, st.noise_std)
        _w_f64(fh, st.v_max)

        lay = st.layout
        _w_u32(fh, _KIND_CODES.get(lay.kind, _CUSTOM_KIND))
        for v in (lay.h, lay.h_e, lay.l_max, lay.d_max,
                  lay.legit[0], lay.legit[1], lay.eve[0], lay.eve[1],
                  lay.helper_init[0], lay.helper_init[1]):
            _w_f64(fh, v)
        _w_arr(fh, lay.ues)

        _w_u32(fh, st.obs_dim)
        _w_u32(fh, st.act_dim)
        _w_u32(fh, len(st.hidden))
        for wdt in st.hidden:
            _w_u32(fh, wdt)
        for net in (st.actor, st.critic, st.actor_target, st.critic_target):
            _w_arrs(fh, net)

        _w_u64(fh, st.adam_actor_t)
        _w_arrs(fh, st.adam_actor_m)
        _w_arrs(fh, st.adam_actor_v)
        _w_u64(fh, st.adam_critic_t)
        _w_arrs(fh, st.adam_critic_m)
        _w_arrs(fh, st.adam_critic_v)

        _w_u32(fh, st.buffer_capacity)
        _w_u32(fh, st.buffer_size)
        _w_u32(fh, st.buffer_cursor)
        _w_arr(fh, st.buffer_obs)
        _w_arr(fh, st.buffer_act)
        _w_arr(fh, st.buffer_rew)
        _w_arr(fh, st.buffer_next_obs)

        _w_rng(fh, st.env_rng_state)
        _w_rng(fh, st.agent_rng_state)


def load_checkpoint(path):
    with open(path, "rb") as fh:
        if fh.read(4) != MAGIC:
            raise ValueError(f"{path}: not a checkpoint file (bad magic)")
        r = _Reader(fh)
        version = r.u32()
        if version != CHECKPOINT_VERSION:
            raise ValueError(f"{path}: unsupported checkpoint version {version}")
        root_seed = r.i64()
        episodes_done = r.u64()
        env_steps = r.u64()
        noise_std = r.f64()
        v_max = r.f64()

        kind_code = r.u32()
        h, h_e, l_max, d_max, lx, ly, ex, ey, hx, hy = (r.f64() for _ in range(10))
        ues = r.arr()
        layout = ScenarioLayout(
            legit=(lx, ly), eve=(ex, ey), ues=ues, helper_init=(hx, hy),
            h=h, h_e=h_e, l_max=l_max, d_max=d_max,
            kind=_CODE_KINDS.get(kind_code, "custom"))

        obs_dim = r.u32()
        act_dim = r.u32()
        hidden = tuple(r.u32() for _ in range(r.u32()))
        actor, critic, actor_target, critic_target = (r.arrs() for _ in range(4))

        adam_actor_t = r.u64()
        adam_actor_m = r.arrs()
        adam_actor_v = r.arrs()
        adam_critic_t = r.u64()
        adam_critic_m = r.arrs()
        adam_critic_v = r.arrs()

        cap = r.u32()
        size = r.u32()
        cursor = r.u32()
        b_obs = r.arr()
        b_act = r.arr()
        b_rew = r.arr()
        b_next = r.arr()

        env_rng_state = r.rng()
        agent_rng_state = r.rng()

    return CheckpointState(
        root_seed=root_seed, episodes_done=episodes_done, env_steps=env_steps,
        noise_std=noise_std, v_max=v_max, layout=layout, hidden=hidden,
        obs_dim=obs_dim, act_dim=act_dim,
        actor=actor, critic=critic,
        actor_target=actor_target, critic_target=critic_target,
        adam_actor_t=adam_actor_t, adam_actor_m=adam_actor_m, adam_actor_v=adam_actor_v,
        adam_critic_t=adam_critic_t, adam_critic_m=adam_critic_m, adam_critic_v=adam_critic_v,
        buffer_capacity=cap, buffer_size=size, buffer_cursor=cursor,
        buffer_obs=b_obs, buffer_act=b_act, buffer_rew=b_rew, buffer_next_obs=b_next,
        env_rng_state=env_rng_state, agent_rng_state=agent_rng_state,
    )
