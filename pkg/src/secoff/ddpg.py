"""Actor-critic agent: replay buffer, target networks with soft updates, and
the analytic critic/actor gradient steps.

The actor maps the observation to a velocity in m/s (tanh head scaled by the
speed limit). The critic scores (observation, action) pairs; actions enter
the critic scaled back to [-1, 1] so both input blocks share the same range.
Exploration adds Gaussian noise whose standard deviation lives in the
normalized action space and decays multiplicatively once per environment
step.
"""

from dataclasses import dataclass

import numpy as np

from .nn import AdamState, Mlp, TrainingFault, act_with_noise, clip_gradients, soft_update

__all__ = ["ReplayBuffer", "Batch", "DdpgAgent"]


@dataclass
class Batch:
    """Minibatch of transitions; actions are stored normalized."""

    obs: np.ndarray
    act: np.ndarray
    rew: np.ndarray
    next_obs: np.ndarray

    def __len__(self):
        return self.obs.shape[0]


class ReplayBuffer:
    """Bounded FIFO of transitions backed by preallocated arrays."""

    def __init__(self, capacity, obs_dim, act_dim):
        if capacity < 1:
            raise ValueError("capacity must be at least 1")
        self.capacity = int(capacity)
        self.obs = np.zeros((capacity, obs_dim))
        self.act = np.zeros((capacity, act_dim))
        self.rew = np.zeros(capacity)
        self.next_obs = np.zeros((capacity, obs_dim))
        self.size = 0
        self.cursor = 0

    def __len__(self):
        return self.size

    def add(self, obs, act, rew, next_obs):
        i = self.cursor
        self.obs[i] = obs
        self.act[i] = act
        self.rew[i] = rew
        self.next_obs[i] = next_obs
        self.cursor = (i + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def sample(self, batch_size, rng):
        if batch_size > self.size:
            raise ValueError(f"cannot sample {batch_size} from {self.size} stored transitions")
        idx = rng.choice(self.size, size=batch_size, replace=False)
        return Batch(obs=self.obs[idx], act=self.act[idx],
                     rew=self.rew[idx], next_obs=self.next_obs[idx])


class DdpgAgent:
    """Networks, optimizers, buffer and exploration state for one run."""

    def __init__(self, obs_dim, act_dim, cfg, v_max, rng):
        self.obs_dim = int(obs_dim)
        self.act_dim = int(act_dim)
        self.cfg = cfg
        self.v_max = float(v_max)
        sizes_a = (obs_dim, *cfg.hidden, act_dim)
        sizes_c = (obs_dim + act_dim, *cfg.hidden, 1)
        self.actor = Mlp.init(sizes_a, out_tanh=True, out_scale=v_max, rng=rng)
        self.critic = Mlp.init(sizes_c, out_tanh=False, out_scale=1.0, rng=rng)
        self.actor_target = self.actor.copy()
        self.critic_target = self.critic.copy()
        self.adam_actor = AdamState(self.actor.params, cfg.learning_rate)
        self.adam_critic = AdamState(self.critic.params, cfg.learning_rate)
        self.buffer = ReplayBuffer(cfg.buffer_capacity, obs_dim, act_dim)
        self.noise_std = float(np.sqrt(cfg.noise_var))
        self.env_steps = 0

    # -- acting -----------------------------------------------------------

    def act(self, obs):
        """Deterministic policy output in m/s."""
        return self.actor.forward(obs)

    def explore(self, obs, rng):
        """Noisy action: the exploration std lives in normalized units, so it
        is scaled by the velocity limit before being applied."""
        return act_with_noise(self.actor, obs, self.noise_std * self.v_max, rng)

    def decay_noise(self):
        self.noise_std *= self.cfg.noise_decay
        self.env_steps += 1

    # -- learning ----------------------------------------------------------

    def _critic_input(self, obs, act_norm):
        return np.ascontiguousarray(np.concatenate([obs, act_norm], axis=1))

    def critic_targets(self, batch):
        """Bootstrapped targets y = r + gamma * Q'(s', mu'(s')) using only the
        target networks; every transition bootstraps (fixed-horizon episodes
        truncate a continuing task, so there is no terminal state)."""
        next_act = self.actor_target.forward(batch.next_obs) / self.v_max
        q_next = self.critic_target.forward(self._critic_input(batch.next_obs, next_act))
        return batch.rew + self.cfg.gamma * q_next[:, 0]

    def critic_loss_and_grads(self, batch, targets):
        """Mean-squared-error loss against the targets and its analytic
        gradients in the critic's parameter order."""
        qin = self._critic_input(batch.obs, batch.act)
        q, hidden = self.critic.forward_cached(qin)
        resid = q[:, 0] - targets
        loss = float(np.mean(resid * resid))
        grad_y = (2.0 / len(batch)) * resid[:, None]
        grads, _ = self.critic.backward(qin, hidden, q, grad_y)
        return loss, grads

    def critic_update(self, batch, targets):
        """One mean-squared-error Adam step on the critic; returns the loss."""
        if len(targets) != len(batch):
            raise ValueError("target vector does not match the batch size")
        loss, grads = self.critic_loss_and_grads(batch, targets)
        if not np.isfinite(loss):
            raise TrainingFault(f"critic loss is not finite ({loss})")
        grads = clip_gradients(grads, self.cfg.grad_clip)
        self.adam_critic.step(self.critic.params, grads)
        self.critic.assert_finite()
        return loss

    def policy_objective_and_grads(self, batch):
        """The policy objective J = mean Q(s, mu(s)) and the analytic
        gradients of its negation (the quantity the actor descends on)."""
        a, hidden_a = self.actor.forward_cached(batch.obs)
        qin = self._critic_input(batch.obs, a / self.v_max)
        q, hidden_q = self.critic.forward_cached(qin)
        objective = float(np.mean(q[:, 0]))
        grad_y = np.full((len(batch), 1), -1.0 / len(batch))
        _, grad_qin = self.critic.backward(qin, hidden_q, q, grad_y,
                                           need_input_grad=True, need_param_grads=False)
        grad_a = grad_qin[:, self.obs_dim:] / self.v_max
        grads, _ = self.actor.backward(batch.obs, hidden_a, a, grad_a)
        return objective, grads

    def actor_update(self, batch):
        """One deterministic-policy-gradient Adam step on the actor
        (ascent on mean Q(s, mu(s)), run as descent on its negation)."""
        _, grads = self.policy_objective_and_grads(batch)
        if not all(np.all(np.isfinite(g)) for g in grads):
            raise TrainingFault("actor gradient is not finite")
        grads = clip_gradients(grads, self.cfg.grad_clip)
        self.adam_actor.step(self.actor.params, grads)
        self.actor.assert_finite()

    def soft_update_targets(self):
        soft_update(self.actor_target, self.actor, self.cfg.tau)
        soft_update(self.critic_target, self.critic, self.cfg.tau)

    def learn(self, rng):
        """One full update round (critic, actor, targets) from a sampled
        minibatch; no-op until the buffer can fill one batch."""
        if len(self.buffer) < self.cfg.batch_size:
            return None
        batch = self.buffer.sample(self.cfg.batch_size, rng)
        targets = self.critic_targets(batch)
        loss = self.critic_update(batch, targets)
        self.actor_update(batch)
        self.soft_update_targets()
        return loss

    # -- (de)serialization hooks -------------------------------------------

    def load_networks(self, actor, critic, actor_target=None, critic_target=None):
        """Overwrite network parameters (used by warm starts and resume)."""
        for dst, src in ((self.actor, actor), (self.critic, critic)):
            for p, q in zip(dst.params, src.params):
                p[...] = q
        self.actor_target = (actor_target or actor).copy()
        self.critic_target = (critic_target or critic).copy()
