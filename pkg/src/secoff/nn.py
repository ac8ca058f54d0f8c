"""Fixed-topology fully connected networks with analytic backpropagation and
Adam, built on the selected kernel backend.

Hidden layers use tanh. The actor head is tanh scaled to the velocity limit;
the critic head is linear. Weights and biases initialize uniformly in
+-1/sqrt(fan_in), seeded.
"""

import numpy as np

from . import backend

__all__ = ["Mlp", "AdamState", "soft_update", "act_with_noise", "TrainingFault"]

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


class TrainingFault(RuntimeError):
    """A network update produced a non-finite loss, gradient or parameter."""


class Mlp:
    """A fully connected network described by its layer sizes.

    out_tanh selects a tanh output head scaled by out_scale (actor); a
    linear head otherwise (critic).
    """

    def __init__(self, sizes, out_tanh, out_scale=1.0, weights=None, biases=None):
        self.sizes = tuple(int(s) for s in sizes)
        if len(self.sizes) < 2:
            raise ValueError("need at least input and output sizes")
        self.out_tanh = bool(out_tanh)
        self.out_scale = float(out_scale)
        if weights is None:
            self.weights = [np.zeros((i, o)) for i, o in zip(self.sizes, self.sizes[1:])]
            self.biases = [np.zeros(o) for o in self.sizes[1:]]
        else:
            self.weights = [np.ascontiguousarray(w, dtype=float) for w in weights]
            self.biases = [np.ascontiguousarray(b, dtype=float) for b in biases]
        for w, (i, o) in zip(self.weights, zip(self.sizes, self.sizes[1:])):
            if w.shape != (i, o):
                raise ValueError(f"weight shape {w.shape} does not chain {i}->{o}")
        for b, o in zip(self.biases, self.sizes[1:]):
            if b.shape != (o,):
                raise ValueError(f"bias shape {b.shape} does not match width {o}")

    @classmethod
    def init(cls, sizes, out_tanh, out_scale, rng):
        net = cls(sizes, out_tanh, out_scale)
        for w, b in zip(net.weights, net.biases):
            bound = 1.0 / np.sqrt(w.shape[0])
            w[...] = rng.uniform(-bound, bound, w.shape)
            b[...] = rng.uniform(-bound, bound, b.shape)
        return net

    @property
    def params(self):
        """Flat parameter list in the fixed order W0, b0, W1, b1, ..."""
        out = []
        for w, b in zip(self.weights, self.biases):
            out.append(w)
            out.append(b)
        return out

    def copy(self):
        return Mlp(self.sizes, self.out_tanh, self.out_scale,
                   weights=[w.copy() for w in self.weights],
                   biases=[b.copy() for b in self.biases])

    def forward(self, x):
        """Evaluate the network; 1-d input gives 1-d output."""
        arr = np.ascontiguousarray(x, dtype=float)
        single = arr.ndim == 1
        if single:
            arr = arr[None, :]
        if arr.shape[1] != self.sizes[0]:
            raise ValueError(f"input width {arr.shape[1]} does not match {self.sizes[0]}")
        y, _ = backend.mlp_forward(self.weights, self.biases, arr,
                                   self.out_tanh, self.out_scale)
        return y[0] if single else y

    def forward_cached(self, x):
        """Batched forward returning (y, hidden activations) for backward."""
        arr = np.ascontiguousarray(x, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != self.sizes[0]:
            raise ValueError(f"expected (batch, {self.sizes[0]}) input, got {arr.shape}")
        return backend.mlp_forward(self.weights, self.biases, arr,
                                   self.out_tanh, self.out_scale)

    def backward(self, x, hiddens, y, grad_y, need_input_grad=False, need_param_grads=True):
        """Gradients of a scalar loss with upstream dL/dy = grad_y.

        Returns (grad_params, grad_x) with grad_params in the params order.
        """
        gws, gbs, gx = backend.mlp_backward(
            self.weights, self.biases, x, hiddens, y,
            np.ascontiguousarray(grad_y, dtype=float),
            self.out_tanh, self.out_scale,
            need_input_grad=need_input_grad, need_param_grads=need_param_grads)
        if not need_param_grads:
            return None, gx
        grads = []
        for gw, gb in zip(gws, gbs):
            grads.append(gw)
            grads.append(gb)
        return grads, gx

    def assert_finite(self):
        for p in self.params:
            if not np.all(np.isfinite(p)):
                raise TrainingFault("network parameters became non-finite")


class AdamState:
    """First/second moment accumulators and step counter for one network."""

    def __init__(self, params, lr, beta1=ADAM_BETA1, beta2=ADAM_BETA2, eps=ADAM_EPS):
        self.lr = float(lr)
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.ms = [np.zeros_like(p) for p in params]
        self.vs = [np.zeros_like(p) for p in params]

    def step(self, params, grads):
        if len(grads) != len(self.ms):
            raise ValueError("gradient list does not match the Adam state")
        self.t += 1
        backend.adam_step(params, grads, self.ms, self.vs, self.t,
                          self.lr, self.beta1, self.beta2, self.eps)


def soft_update(target, online, tau):
    """target <- tau * online + (1 - tau) * target, parameterwise; returns target."""
    if target.sizes != online.sizes:
        raise ValueError(f"network sizes differ: {target.sizes} vs {online.sizes}")
    backend.soft_update(target.params, online.params, tau)
    return target


def act_with_noise(actor, obs, noise_std, rng):
    """Deterministic policy output plus zero-mean Gaussian exploration noise
    of the given standard deviation per component."""
    if noise_std < 0:
        raise ValueError("noise_std must be nonnegative")
    action = actor.forward(obs)
    if noise_std > 0:
        action = action + noise_std * rng.standard_normal(action.shape)
    return action


def clip_gradients(grads, max_norm):
    """Scale the gradient list down to the given global L2 norm (0 = off)."""
    if max_norm <= 0:
        return grads
    total = np.sqrt(sum(float(np.sum(g * g)) for g in grads))
    if total > max_norm:
        scale = max_norm / total
        grads = [g * scale for g in grads]
    return grads
