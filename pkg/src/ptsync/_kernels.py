"""Numba-compiled integration cores.

The coupled system is stiff near the prescribed time: the gain eta/C(t)
grows without bound, so the classical RK4 step must shrink like C(t) to
stay inside the stability region. The step law used by both kernels is

    h = min(step_cap, shrink * (T - t), gain_cap * C(t) / rate)

where rate bounds the fastest eigenvalue of the gain-scaled right-hand
side (eta * ||coupling operator||_2 for networks, the decay coefficient
for scalar models). Steps also land exactly on requested sample times.

Status codes returned by the kernels:
    0 ok, 1 blow-up, 2 step underflow, 3 non-finite state.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# Regulator kind codes shared with the Python layer.
REG_POWER = 0
REG_EXP_A = 1
REG_EXP_B = 2

# Scalar model kind codes.
SCALAR_LEMMA2 = 0
SCALAR_POWER = 1
SCALAR_LEMMA3 = 2

OK = 0
BLOWUP = 1
STEP_UNDERFLOW = 2
NONFINITE = 3

_H_FLOOR = 1e-15
_V_FLOOR = 1e-305  # below this a decaying scalar state is numerically zero


@njit(cache=True)
def _creg(rkind, T, ell, a, t):
    if rkind == REG_POWER:
        return (T - t) ** ell
    if rkind == REG_EXP_A:
        e_at = np.exp(a * T)
        return (e_at - np.exp(a * t)) / (e_at - 1.0)
    e = np.exp(a * (T - t))
    return (e - 1.0) / (a * e)


@njit(cache=True)
def _scalar_rhs(kind, delta, d1, d2, p, c, v):
    vp = v if v > 0.0 else 0.0
    if kind == SCALAR_LEMMA2:
        return -delta * v / c
    if kind == SCALAR_POWER:
        return -delta * vp**p / c
    return d1 * vp**p - d2 * v / c


@njit(cache=True)
def scalar_rk4(
    kind, delta, d1, d2, p, v0,
    rkind, T, ell, a,
    sample_ts, step_cap, shrink, gain_cap, rate, blow,
):
    n_s = sample_ts.shape[0]
    out = np.empty(n_s)
    t = 0.0
    v = v0
    for idx in range(n_s):
        ts = sample_ts[idx]
        while t < ts - 1e-14 * T:
            if v == 0.0:
                break
            c = _creg(rkind, T, ell, a, t)
            h = step_cap
            if shrink * (T - t) < h:
                h = shrink * (T - t)
            if gain_cap * c / rate < h:
                h = gain_cap * c / rate
            if h < _H_FLOOR:
                return STEP_UNDERFLOW, idx, out
            if t + h > ts:
                h = ts - t
            k1 = _scalar_rhs(kind, delta, d1, d2, p, c, v)
            ch = _creg(rkind, T, ell, a, t + 0.5 * h)
            k2 = _scalar_rhs(kind, delta, d1, d2, p, ch, v + 0.5 * h * k1)
            k3 = _scalar_rhs(kind, delta, d1, d2, p, ch, v + 0.5 * h * k2)
            ce = _creg(rkind, T, ell, a, t + h)
            k4 = _scalar_rhs(kind, delta, d1, d2, p, ce, v + h * k3)
            v = v + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            t = t + h
            if not np.isfinite(v):
                return NONFINITE, idx, out
            if v > blow:
                return BLOWUP, idx, out
            if v < _V_FLOOR:
                v = 0.0
        t = ts
        out[idx] = v
    return OK, n_s, out


@njit(cache=True)
def _net_rhs(X, x0v, pinned, D, A, blocks, mask, gain, g, dX, dx0):
    N, n = X.shape
    for i in range(N):
        for d in range(n):
            acc = 0.0
            for e in range(n):
                xe = X[i, e]
                he = 0.5 * (abs(xe + 1.0) - abs(xe - 1.0))
                acc += D[d, e] * xe + A[d, e] * he
            dX[i, d] = acc
    for d in range(n):
        for e in range(n):
            if not mask[d, e]:
                continue
            for i in range(N):
                acc = 0.0
                for j in range(N):
                    acc += blocks[d, e, i, j] * X[j, e]
                dX[i, d] += g * acc
    if pinned:
        for d in range(n):
            acc = 0.0
            for e in range(n):
                acc += gain[d, e] * (X[0, e] - x0v[e])
            dX[0, d] -= g * acc
        for d in range(n):
            acc = 0.0
            for e in range(n):
                xe = x0v[e]
                he = 0.5 * (abs(xe + 1.0) - abs(xe - 1.0))
                acc += D[d, e] * xe + A[d, e] * he
            dx0[d] = acc


@njit(cache=True)
def network_rk4(
    X0, x00, pinned, D, A, blocks, mask, gain, eta,
    rkind, T, ell, a,
    sample_ts, step_cap, shrink, gain_cap, rate, blow,
):
    N, n = X0.shape
    n_s = sample_ts.shape[0]
    states = np.zeros((n_s, N, n))
    targets = np.zeros((n_s, n))

    X = X0.copy()
    x0 = x00.copy()
    k1 = np.empty((N, n)); k2 = np.empty((N, n))
    k3 = np.empty((N, n)); k4 = np.empty((N, n))
    b1 = np.empty(n); b2 = np.empty(n); b3 = np.empty(n); b4 = np.empty(n)
    Xs = np.empty((N, n)); x0s = np.empty(n)

    t = 0.0
    for idx in range(n_s):
        ts = sample_ts[idx]
        while t < ts - 1e-14 * T:
            c = _creg(rkind, T, ell, a, t)
            h = step_cap
            if shrink * (T - t) < h:
                h = shrink * (T - t)
            if gain_cap * c / rate < h:
                h = gain_cap * c / rate
            if h < _H_FLOOR:
                return STEP_UNDERFLOW, idx, states, targets
            if t + h > ts:
                h = ts - t

            g = 1.0 / _creg(rkind, T, ell, a, t) * eta
            _net_rhs(X, x0, pinned, D, A, blocks, mask, gain, g, k1, b1)
            gh = eta / _creg(rkind, T, ell, a, t + 0.5 * h)
            for i in range(N):
                for d in range(n):
                    Xs[i, d] = X[i, d] + 0.5 * h * k1[i, d]
            for d in range(n):
                x0s[d] = x0[d] + 0.5 * h * b1[d]
            _net_rhs(Xs, x0s, pinned, D, A, blocks, mask, gain, gh, k2, b2)
            for i in range(N):
                for d in range(n):
                    Xs[i, d] = X[i, d] + 0.5 * h * k2[i, d]
            for d in range(n):
                x0s[d] = x0[d] + 0.5 * h * b2[d]
            _net_rhs(Xs, x0s, pinned, D, A, blocks, mask, gain, gh, k3, b3)
            ge = eta / _creg(rkind, T, ell, a, t + h)
            for i in range(N):
                for d in range(n):
                    Xs[i, d] = X[i, d] + h * k3[i, d]
            for d in range(n):
                x0s[d] = x0[d] + h * b3[d]
            _net_rhs(Xs, x0s, pinned, D, A, blocks, mask, gain, ge, k4, b4)

            bad = False
            big = False
            for i in range(N):
                for d in range(n):
                    X[i, d] += h / 6.0 * (k1[i, d] + 2.0 * k2[i, d] + 2.0 * k3[i, d] + k4[i, d])
                    if not np.isfinite(X[i, d]):
                        bad = True
                    elif abs(X[i, d]) > blow:
                        big = True
            if pinned:
                for d in range(n):
                    x0[d] += h / 6.0 * (b1[d] + 2.0 * b2[d] + 2.0 * b3[d] + b4[d])
                    if not np.isfinite(x0[d]):
                        bad = True
            if bad:
                return NONFINITE, idx, states, targets
            if big:
                return BLOWUP, idx, states, targets
            t = t + h
        t = ts
        states[idx] = X
        targets[idx] = x0
    return OK, n_s, states, targets
