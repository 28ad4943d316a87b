# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
# cython: cdivision=True
# cython: initializedcheck=False
"""Compiled scan core: sum evaluation and interval supremum search.

Mirrors _sumscan_py exactly (same grid, same candidate selection, same
golden-section sequence) so the two backends agree to float rounding.
"""

from libc.math cimport fabs, log
from libc.stdlib cimport free, malloc

cdef double NEG_INF = float("-inf")
cdef double NAN_VAL = float("nan")
cdef double INVPHI = 0.6180339887498949
cdef int MAX_GOLDEN_ITER = 200


cdef class Handle:
    cdef int n
    cdef int[::1] kkind
    cdef double[::1] kw
    cdef double[::1] kc
    cdef double[::1] kel
    cdef double[::1] ker
    cdef double[::1] knis
    cdef double[::1] kpis
    cdef double[::1] k0l
    cdef double[::1] ktab_t
    cdef double[::1] ktab_v
    cdef int[::1] koff
    cdef int fcode
    cdef int fsemiaxis
    cdef int fnk
    cdef double fscale
    cdef double foff_outer
    cdef double foff_inner
    cdef double fsl
    cdef double fsr
    cdef double[::1] ft
    cdef double[::1] fv


def make_handle(enc):
    cdef Handle h = Handle()
    h.n = enc.kkind.shape[0]
    h.kkind = enc.kkind
    h.kw = enc.kw
    h.kc = enc.kc
    h.kel = enc.kel
    h.ker = enc.ker
    h.knis = enc.knis
    h.kpis = enc.kpis
    h.k0l = enc.k0l
    h.ktab_t = enc.ktab_t
    h.ktab_v = enc.ktab_v
    h.koff = enc.koff
    h.fcode = enc.fcode
    h.fsemiaxis = enc.fsemiaxis
    h.fscale = enc.fscale
    h.foff_outer = enc.foff_outer
    h.foff_inner = enc.foff_inner
    h.fsl = enc.fsl
    h.fsr = enc.fsr
    h.ft = enc.ft
    h.fv = enc.fv
    h.fnk = enc.ft.shape[0]
    return h


cdef double _pl_eval(double[::1] xs, double[::1] vs, int lo, int hi,
                     double below_slope, double above_slope, double u) noexcept nogil:
    # Piecewise-linear on knots xs[lo:hi] with linear extensions on both sides.
    cdef int a = lo
    cdef int b = hi - 1
    cdef int m
    if u < xs[a]:
        return vs[a] + below_slope * (u - xs[a])
    if u > xs[b]:
        return vs[b] + above_slope * (u - xs[b])
    while b - a > 1:
        m = (a + b) >> 1
        if xs[m] <= u:
            a = m
        else:
            b = m
    if u == xs[a]:
        return vs[a]
    if u == xs[b]:
        return vs[b]
    return (vs[b] - vs[a]) / (xs[b] - xs[a]) * (u - xs[a]) + vs[a]


cdef double _kernel_eval(Handle h, int j, double u) noexcept nogil:
    cdef int kind = h.kkind[j]
    cdef int o
    if kind == 0:
        if u == 0.0:
            return NEG_INF
        return h.kw[j] * log(fabs(u))
    if kind == 1:
        if u == 0.0:
            return NEG_INF
        return h.kw[j] * log(fabs(u)) + h.kc[j] * u
    if u == 0.0:
        return h.k0l[j]
    o = 4 * j
    if u < 0.0:
        return _pl_eval(h.ktab_t, h.ktab_v, h.koff[o], h.koff[o + 1],
                        h.kel[j], h.knis[j], u)
    return _pl_eval(h.ktab_t, h.ktab_v, h.koff[o + 2], h.koff[o + 3],
                    h.kpis[j], h.ker[j], u)


cdef double _field_eval(Handle h, double t) noexcept nogil:
    cdef double u = t - h.foff_outer
    cdef double out
    cdef bint below = 0
    if h.fsemiaxis and u < 0.0:
        below = 1
    u = u - h.foff_inner
    if h.fcode == 0:
        out = -h.fscale * fabs(u)
    elif h.fcode == 1:
        out = -h.fscale * u * u
    else:
        out = _pl_eval(h.ft, h.fv, 0, h.fnk, h.fsl, h.fsr, u)
    if below:
        return NEG_INF
    return out


cdef double _sum_eval(Handle h, double[::1] y, double t) noexcept nogil:
    cdef double s = _field_eval(h, t)
    cdef int j
    for j in range(h.n):
        s = s + _kernel_eval(h, j, t - y[j])
    return s


def sum_at(Handle h, double[::1] y, double t):
    """Scalar sum value (exposed for tests)."""
    return _sum_eval(h, y, t)


def grid_values(Handle h, double[::1] y, double[::1] ts, double[::1] out):
    cdef Py_ssize_t i
    for i in range(ts.shape[0]):
        out[i] = _sum_eval(h, y, ts[i])


cdef void _golden(Handle h, double[::1] y, double lo, double hi, double ttol,
                  double* best_x, double* best_f) noexcept nogil:
    cdef double c, d, fc, fd, xm, fm
    cdef int it = 0
    c = hi - INVPHI * (hi - lo)
    d = lo + INVPHI * (hi - lo)
    fc = _sum_eval(h, y, c)
    fd = _sum_eval(h, y, d)
    if fc > best_f[0]:
        best_f[0] = fc
        best_x[0] = c
    if fd > best_f[0]:
        best_f[0] = fd
        best_x[0] = d
    while hi - lo > ttol and it < MAX_GOLDEN_ITER:
        it += 1
        if fc >= fd:
            hi = d
            d = c
            fd = fc
            c = hi - INVPHI * (hi - lo)
            fc = _sum_eval(h, y, c)
            if fc > best_f[0]:
                best_f[0] = fc
                best_x[0] = c
        else:
            lo = c
            c = d
            fc = fd
            d = lo + INVPHI * (hi - lo)
            fd = _sum_eval(h, y, d)
            if fd > best_f[0]:
                best_f[0] = fd
                best_x[0] = d
    xm = 0.5 * (lo + hi)
    fm = _sum_eval(h, y, xm)
    if fm > best_f[0]:
        best_f[0] = fm
        best_x[0] = xm


def interval_peak(Handle h, double[::1] y, double a, double b, int ngrid, double ttol):
    cdef int ng = ngrid
    if ng < 8:
        ng = 8
    cdef double* vals = <double*> malloc(ng * sizeof(double))
    if vals == NULL:
        raise MemoryError()
    # Grid points reproduce numpy.linspace rounding: i*(delta/div) + a,
    # with the last point forced to b.
    cdef double delta = b - a
    cdef double step = delta / (ng - 1)
    cdef int i, k, slot
    cdef double t, v
    cdef double best_f = NEG_INF
    cdef double best_x = NAN_VAL
    cdef bint any_finite = 0

    # Top-3 local-maximum candidates by value; strict insertion keeps the
    # earlier index on ties, matching the fallback's stable sort.
    cdef double cf[3]
    cdef int ci[3]
    for k in range(3):
        cf[k] = NEG_INF
        ci[k] = -1

    with nogil:
        for i in range(ng):
            t = i * step + a
            if i == ng - 1:
                t = b
            vals[i] = _sum_eval(h, y, t)

        for i in range(ng):
            v = vals[i]
            if v != v or v == NEG_INF:
                continue
            any_finite = 1
            if v > best_f:
                best_f = v
                best_x = i * step + a if i < ng - 1 else b
            if (i == 0 or v >= vals[i - 1]) and (i == ng - 1 or v >= vals[i + 1]):
                for k in range(3):
                    if v > cf[k]:
                        for slot in range(2, k, -1):
                            cf[slot] = cf[slot - 1]
                            ci[slot] = ci[slot - 1]
                        cf[k] = v
                        ci[k] = i
                        break

    if not any_finite:
        free(vals)
        return NEG_INF, NAN_VAL

    cdef double lo, hi
    with nogil:
        for k in range(3):
            i = ci[k]
            if i < 0:
                continue
            lo = (i - 1) * step + a if i > 0 else a
            hi = (i + 1) * step + a if i + 1 < ng - 1 else b
            _golden(h, y, lo, hi, ttol, &best_x, &best_f)
    free(vals)
    return best_f, best_x
