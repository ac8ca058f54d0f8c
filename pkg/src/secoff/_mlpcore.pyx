# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled network kernels: BLAS-backed matmuls with fused bias/activation
loops and in-place Adam / soft updates.

Same contracts as :mod:`secoff._mlpnumpy`; selected by :mod:`secoff.backend`
when importable.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt, tanh
from scipy.linalg.cython_blas cimport dgemm

BACKEND = "compiled"


cdef inline void _gemm_rm(char ta, char tb, int m, int n, int k,
                          double alpha, double *a, int lda,
                          double *b, int ldb,
                          double beta, double *c, int ldc) noexcept nogil:
    # Row-major C(m,n) = alpha * op(A) @ op(B) + beta * C, expressed through
    # Fortran dgemm by computing C^T in column-major order.
    dgemm(&tb, &ta, &n, &m, &k, &alpha, b, &ldb, a, &lda, &beta, c, &ldc)


cdef void _affine(double[:, ::1] x, double[:, ::1] w, double[::1] b,
                  double[:, ::1] out) noexcept nogil:
    # out = x @ w + b (bias added after the BLAS call)
    cdef int rows = x.shape[0], inner = x.shape[1], cols = w.shape[1]
    cdef int i, j
    _gemm_rm(b'N', b'N', rows, cols, inner, 1.0,
             &x[0, 0], inner, &w[0, 0], cols, 0.0, &out[0, 0], cols)
    for i in range(rows):
        for j in range(cols):
            out[i, j] += b[j]


def mlp_forward(list weights, list biases, cnp.ndarray x, bint out_tanh, double out_scale):
    cdef int n = len(weights)
    cdef int last = n - 1
    cdef int i, r, c
    cdef double[:, ::1] av, zv
    hiddens = []
    a = x
    for i in range(n):
        z = np.empty((a.shape[0], weights[i].shape[1]))
        _affine(a, weights[i], biases[i], z)
        zv = z
        if i < last:
            for r in range(zv.shape[0]):
                for c in range(zv.shape[1]):
                    zv[r, c] = tanh(zv[r, c])
            hiddens.append(z)
        elif out_tanh:
            for r in range(zv.shape[0]):
                for c in range(zv.shape[1]):
                    zv[r, c] = out_scale * tanh(zv[r, c])
        a = z
    return a, hiddens


def mlp_backward(list weights, list biases, cnp.ndarray x, list hiddens,
                 cnp.ndarray y, cnp.ndarray grad_y, bint out_tanh, double out_scale,
                 bint need_input_grad=False, bint need_param_grads=True):
    cdef int n = len(weights)
    cdef int i, r, c, rows, cols, inner
    cdef double[:, ::1] dzv, av, yv, gyv, dav
    acts = [x] + hiddens

    dz = np.empty_like(grad_y)
    dzv = dz
    gyv = grad_y
    if out_tanh:
        yv = y
        for r in range(dzv.shape[0]):
            for c in range(dzv.shape[1]):
                dzv[r, c] = gyv[r, c] * (out_scale - yv[r, c] * yv[r, c] / out_scale)
    else:
        for r in range(dzv.shape[0]):
            for c in range(dzv.shape[1]):
                dzv[r, c] = gyv[r, c]

    gws = [None] * n
    gbs = [None] * n
    gx = None
    cdef double[:, ::1] wv, gwv, xv2
    cdef double[::1] gbv
    for i in range(n - 1, -1, -1):
        a = acts[i]
        rows = a.shape[0]
        inner = a.shape[1]
        cols = dz.shape[1]
        if need_param_grads:
            gw = np.empty((inner, cols))
            gwv = gw
            av = a
            # gw = a^T @ dz
            _gemm_rm(b'T', b'N', inner, cols, rows, 1.0,
                     &av[0, 0], inner, &dzv[0, 0], cols, 0.0, &gwv[0, 0], cols)
            gb = np.zeros(cols)
            gbv = gb
            for r in range(rows):
                for c in range(cols):
                    gbv[c] += dzv[r, c]
            gws[i] = gw
            gbs[i] = gb
        if i > 0 or need_input_grad:
            da = np.empty((rows, inner))
            dav = da
            wv = weights[i]
            # da = dz @ w^T
            _gemm_rm(b'N', b'T', rows, inner, cols, 1.0,
                     &dzv[0, 0], cols, &wv[0, 0], cols, 0.0, &dav[0, 0], inner)
            if i > 0:
                av = a
                for r in range(rows):
                    for c in range(inner):
                        dav[r, c] *= 1.0 - av[r, c] * av[r, c]
                dz = da
                dzv = dav
            else:
                gx = da
    return gws, gbs, gx


def adam_step(list params, list grads, list ms, list vs, long t,
              double lr, double beta1, double beta2, double eps):
    cdef double c1 = 1.0 - beta1 ** t
    cdef double c2 = 1.0 - beta2 ** t
    cdef double[::1] pv, gv, mv, vv
    cdef Py_ssize_t i, k
    for i in range(len(params)):
        pv = params[i].ravel()
        gv = grads[i].ravel()
        mv = ms[i].ravel()
        vv = vs[i].ravel()
        for k in range(pv.shape[0]):
            mv[k] = beta1 * mv[k] + (1.0 - beta1) * gv[k]
            vv[k] = beta2 * vv[k] + (1.0 - beta2) * gv[k] * gv[k]
            pv[k] -= lr * (mv[k] / c1) / (sqrt(vv[k] / c2) + eps)


def soft_update(list targets, list onlines, double tau):
    cdef double[::1] tv, ov
    cdef Py_ssize_t i, k
    for i in range(len(targets)):
        tv = targets[i].ravel()
        ov = onlines[i].ravel()
        for k in range(tv.shape[0]):
            tv[k] = tau * ov[k] + (1.0 - tau) * tv[k]
