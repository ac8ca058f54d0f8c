"""Pure-NumPy implementation of the network kernels.

Fallback for :mod:`secoff.backend` when the compiled extension is not
available; also the reference the compiled kernels are tested against.
All arrays are float64 and C-contiguous; weights are (fan_in, fan_out).
"""

import numpy as np

BACKEND = "numpy"


def mlp_forward(weights, biases, x, out_tanh, out_scale):
    """Feed-forward pass with tanh hidden layers.

    Returns (y, hiddens) where hiddens are the post-tanh activations of each
    hidden layer (needed by the backward pass).
    """
    a = x
    hiddens = []
    last = len(weights) - 1
    for i, (w, b) in enumerate(zip(weights, biases)):
        z = a @ w + b
        if i < last:
            a = np.tanh(z)
            hiddens.append(a)
        elif out_tanh:
            a = out_scale * np.tanh(z)
        else:
            a = z
    return a, hiddens


def mlp_backward(weights, biases, x, hiddens, y, grad_y, out_tanh, out_scale,
                 need_input_grad=False, need_param_grads=True):
    """Backpropagate grad_y (dL/dy) through the network.

    Returns (grad_weights, grad_biases, grad_x); the parameter gradients are
    None when need_param_grads is false, grad_x is None unless requested.
    """
    n = len(weights)
    acts = [x] + hiddens
    if out_tanh:
        # y = s * tanh(z)  =>  dy/dz = s - y^2 / s
        dz = grad_y * (out_scale - y * y / out_scale)
    else:
        dz = grad_y
    gws = [None] * n
    gbs = [None] * n
    gx = None
    for i in range(n - 1, -1, -1):
        if need_param_grads:
            gws[i] = acts[i].T @ dz
            gbs[i] = dz.sum(axis=0)
        if i > 0:
            da = dz @ weights[i].T
            dz = da * (1.0 - acts[i] * acts[i])
        elif need_input_grad:
            gx = dz @ weights[0].T
    return gws, gbs, gx


def adam_step(params, grads, ms, vs, t, lr, beta1, beta2, eps):
    """One bias-corrected Adam update, in place on params/ms/vs."""
    c1 = 1.0 - beta1 ** t
    c2 = 1.0 - beta2 ** t
    for p, g, m, v in zip(params, grads, ms, vs):
        m *= beta1
        m += (1.0 - beta1) * g
        v *= beta2
        v += (1.0 - beta2) * (g * g)
        p -= lr * (m / c1) / (np.sqrt(v / c2) + eps)


def soft_update(targets, onlines, tau):
    """target <- tau * online + (1 - tau) * target, in place."""
    for t_arr, o_arr in zip(targets, onlines):
        t_arr *= 1.0 - tau
        t_arr += tau * o_arr
