"""Backend dispatch for the hot scan loops.

The interval supremum search (uniform grid scan plus golden-section
refinement of the translated-kernel sum) dominates solver runtime, so it has
two interchangeable implementations: a Cython extension and a pure-numpy
fallback.  Selection happens at import time; set SUMTRANSLATES_PURE=1 to
force the fallback.  Both consume the same flat-array problem encoding.

Kernel kind codes: 0 log_abs, 1 log_abs_plus_linear, 2 table.
Field codes: 0 neg_abs, 1 neg_square, 2 table.  Discrete fields never reach
a backend; they are handled exactly by the caller.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .fields import Field
from .kernels import Kernel

_FORCE_PURE = os.environ.get("SUMTRANSLATES_PURE", "").strip() not in ("", "0")

_compiled = None
if not _FORCE_PURE:
    try:
        from . import _sumscan as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None

from . import _sumscan_py as _pure

_impl = _compiled if _compiled is not None else _pure
BACKEND = "compiled" if _compiled is not None else "pure"


@dataclass(frozen=True)
class EncodedArrays:
    """Flat-array encoding of (kernels, field) consumed by both backends."""

    kkind: np.ndarray
    kw: np.ndarray
    kc: np.ndarray
    kel: np.ndarray
    ker: np.ndarray
    knis: np.ndarray
    kpis: np.ndarray
    k0l: np.ndarray
    ktab_t: np.ndarray
    ktab_v: np.ndarray
    koff: np.ndarray
    fcode: int
    fscale: float
    foff_outer: float
    foff_inner: float
    fsemiaxis: int
    ft: np.ndarray
    fv: np.ndarray
    fsl: float
    fsr: float


_KKIND_CODES = {"log_abs": 0, "log_abs_plus_linear": 1, "table": 2}
_FCODE = {"neg_abs": 0, "neg_square": 1, "log_weight_table": 2}


def encode(kernels, field: Field) -> EncodedArrays | None:
    """Encode a continuous-field problem, or None when not encodable."""
    kernels = tuple(kernels)
    n = len(kernels)
    kkind = np.zeros(n, dtype=np.int32)
    kw = np.zeros(n)
    kc = np.zeros(n)
    kel = np.zeros(n)
    ker = np.zeros(n)
    knis = np.zeros(n)
    kpis = np.zeros(n)
    k0l = np.zeros(n)
    koff = np.zeros(4 * n, dtype=np.int32)
    tab_t: list[float] = []
    tab_v: list[float] = []

    for j, k in enumerate(kernels):
        code = _KKIND_CODES.get(k.kind)
        if code is None:
            return None
        kkind[j] = code
        kw[j] = k.weight
        kc[j] = k.slope
        if code == 2:
            kel[j], ker[j] = k.end_slopes
            knis[j], kpis[j] = k.inner_slopes
            k0l[j] = k.zero_limit if k.zero_limit is not None else math.nan
            koff[4 * j] = len(tab_t)
            for t, v in k.neg_knots:
                tab_t.append(t)
                tab_v.append(v)
            koff[4 * j + 1] = len(tab_t)
            koff[4 * j + 2] = len(tab_t)
            for t, v in k.pos_knots:
                tab_t.append(t)
                tab_v.append(v)
            koff[4 * j + 3] = len(tab_t)
        else:
            k0l[j] = -math.inf

    foff_outer = field.offset
    foff_inner = 0.0
    fsemiaxis = 0
    f = field
    if f.kind == "restrict_semiaxis":
        fsemiaxis = 1
        foff_inner = f.inner.offset
        f = f.inner
    fcode = _FCODE.get(f.kind)
    if fcode is None:
        return None
    ft = np.zeros(0)
    fv = np.zeros(0)
    fsl = fsr = 0.0
    if fcode == 2:
        ft = np.array([k[0] for k in f.knots], dtype=float)
        fv = np.array([k[1] for k in f.knots], dtype=float)
        fsl, fsr = f._table_end_slopes()

    return EncodedArrays(
        kkind=kkind,
        kw=kw,
        kc=kc,
        kel=kel,
        ker=ker,
        knis=knis,
        kpis=kpis,
        k0l=k0l,
        ktab_t=np.asarray(tab_t, dtype=float),
        ktab_v=np.asarray(tab_v, dtype=float),
        koff=koff,
        fcode=fcode,
        fscale=f.scale,
        foff_outer=foff_outer,
        foff_inner=foff_inner,
        fsemiaxis=fsemiaxis,
        ft=ft,
        fv=fv,
        fsl=fsl,
        fsr=fsr,
    )


def make_handle(enc: EncodedArrays, impl=None):
    """Backend-specific handle for an encoded problem."""
    return (impl or _impl).make_handle(enc)


def grid_values(handle, y: np.ndarray, ts: np.ndarray, impl=None) -> np.ndarray:
    """Sum values at each t in ts for node vector y."""
    mod = impl or _impl
    y = np.ascontiguousarray(y, dtype=float)
    ts = np.ascontiguousarray(ts, dtype=float)
    out = np.empty_like(ts)
    mod.grid_values(handle, y, ts, out)
    return out


def interval_peak(
    handle,
    y: np.ndarray,
    a: float,
    b: float,
    ngrid: int,
    ttol: float,
    impl=None,
) -> tuple[float, float]:
    """Supremum of the sum over [a, b]: uniform scan, then golden refinement.

    Returns (value, location); (-inf, nan) when the sum is -inf on the whole
    interval.
    """
    mod = impl or _impl
    y = np.ascontiguousarray(y, dtype=float)
    return mod.interval_peak(handle, y, float(a), float(b), int(ngrid), float(ttol))


def implementations() -> dict[str, object]:
    """Importable backends keyed by name (for parity tests and benchmarks)."""
    mods = {"pure": _pure}
    if _compiled is not None:
        mods["compiled"] = _compiled
    return mods
