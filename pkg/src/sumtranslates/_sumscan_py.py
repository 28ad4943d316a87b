"""Pure-numpy fallback for the hot scan loops.

Mirrors the compiled extension: same encoding, same grid-then-golden
search with identical candidate selection, so results agree to float
rounding.
"""

from __future__ import annotations

import math

import numpy as np

NEG_INF = float("-inf")
_INVPHI = 0.6180339887498949
_MAX_GOLDEN_ITER = 200


def make_handle(enc):
    return enc


def _field_values(enc, ts: np.ndarray) -> np.ndarray:
    u = ts - enc.foff_outer
    neg_mask = u < 0.0 if enc.fsemiaxis else None
    u = u - enc.foff_inner
    if enc.fcode == 0:
        out = -enc.fscale * np.abs(u)
    elif enc.fcode == 1:
        out = -enc.fscale * u * u
    else:
        out = np.interp(u, enc.ft, enc.fv)
        out = np.where(u < enc.ft[0], enc.fv[0] + enc.fsl * (u - enc.ft[0]), out)
        out = np.where(u > enc.ft[-1], enc.fv[-1] + enc.fsr * (u - enc.ft[-1]), out)
    if neg_mask is not None:
        out = np.where(neg_mask, NEG_INF, out)
    return out


def _kernel_values(enc, j: int, u: np.ndarray) -> np.ndarray:
    kind = enc.kkind[j]
    if kind == 0:
        with np.errstate(divide="ignore"):
            return enc.kw[j] * np.log(np.abs(u))
    if kind == 1:
        with np.errstate(divide="ignore"):
            return enc.kw[j] * np.log(np.abs(u)) + enc.kc[j] * u
    o = 4 * j
    nlo, nhi, plo, phi = enc.koff[o], enc.koff[o + 1], enc.koff[o + 2], enc.koff[o + 3]
    out = np.empty_like(u)
    neg = u < 0.0
    pos = u > 0.0
    zero = ~neg & ~pos
    if neg.any():
        xs, vs = enc.ktab_t[nlo:nhi], enc.ktab_v[nlo:nhi]
        w = np.interp(u[neg], xs, vs)
        w = np.where(u[neg] < xs[0], vs[0] + enc.kel[j] * (u[neg] - xs[0]), w)
        w = np.where(u[neg] > xs[-1], vs[-1] + enc.knis[j] * (u[neg] - xs[-1]), w)
        out[neg] = w
    if pos.any():
        xs, vs = enc.ktab_t[plo:phi], enc.ktab_v[plo:phi]
        w = np.interp(u[pos], xs, vs)
        w = np.where(u[pos] < xs[0], vs[0] + enc.kpis[j] * (u[pos] - xs[0]), w)
        w = np.where(u[pos] > xs[-1], vs[-1] + enc.ker[j] * (u[pos] - xs[-1]), w)
        out[pos] = w
    if zero.any():
        out[zero] = enc.k0l[j]
    return out


def _sum_values(enc, y: np.ndarray, ts: np.ndarray) -> np.ndarray:
    s = _field_values(enc, ts)
    for j in range(len(y)):
        with np.errstate(invalid="ignore"):
            s = s + _kernel_values(enc, j, ts - y[j])
    return s


def _sum_scalar(enc, y: np.ndarray, t: float) -> float:
    return float(_sum_values(enc, y, np.array([t]))[0])


def grid_values(enc, y, ts, out):
    out[:] = _sum_values(enc, y, ts)


def _golden(enc, y, lo, hi, ttol, best_x, best_f):
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc = _sum_scalar(enc, y, c)
    fd = _sum_scalar(enc, y, d)
    if fc > best_f:
        best_f, best_x = fc, c
    if fd > best_f:
        best_f, best_x = fd, d
    it = 0
    while hi - lo > ttol and it < _MAX_GOLDEN_ITER:
        it += 1
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _INVPHI * (hi - lo)
            fc = _sum_scalar(enc, y, c)
            if fc > best_f:
                best_f, best_x = fc, c
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            fd = _sum_scalar(enc, y, d)
            if fd > best_f:
                best_f, best_x = fd, d
    xm = 0.5 * (lo + hi)
    fm = _sum_scalar(enc, y, xm)
    if fm > best_f:
        best_f, best_x = fm, xm
    return best_x, best_f


def interval_peak(enc, y, a, b, ngrid, ttol):
    ngrid = max(int(ngrid), 8)
    ts = np.linspace(a, b, ngrid)
    vals = _sum_values(enc, y, ts)

    finite = np.isfinite(vals)
    if not finite.any():
        return NEG_INF, math.nan

    best_i = int(np.argmax(np.where(finite, vals, NEG_INF)))
    best_f = float(vals[best_i])
    best_x = float(ts[best_i])

    # Local-maximum candidates: at least as large as both neighbours.
    ge_left = np.empty(ngrid, dtype=bool)
    ge_right = np.empty(ngrid, dtype=bool)
    ge_left[0] = True
    ge_left[1:] = vals[1:] >= vals[:-1]
    ge_right[-1] = True
    ge_right[:-1] = vals[:-1] >= vals[1:]
    cand = np.flatnonzero(finite & ge_left & ge_right)
    if cand.size:
        order = np.argsort(-vals[cand], kind="stable")
        for i in cand[order[:3]]:
            lo = ts[i - 1] if i > 0 else a
            hi = ts[i + 1] if i < ngrid - 1 else b
            best_x, best_f = _golden(enc, y, float(lo), float(hi), ttol, best_x, best_f)
    return best_f, best_x
