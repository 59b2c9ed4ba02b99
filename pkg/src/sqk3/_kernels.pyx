# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled chart kernels.

Twin of ``_kernels_py``; the formulas must stay in lockstep.  Only the hot
path lives here: chart metric/frame evaluation, finite-difference
Christoffel symbols, and the fixed-step charged-particle integrator.
"""

from libc.math cimport sin, cos, sinh, cosh, sqrt, fabs

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"

cdef double FD_FIRST = 1e-5


cdef void _metric_c(int r, double alpha, double x1, double g[3][3]) noexcept nogil:
    cdef double a4 = 0.25 * alpha
    cdef double aa4 = 0.25 * alpha * alpha
    cdef double s, c
    g[0][0] = a4
    g[0][1] = 0.0
    g[0][2] = 0.0
    g[1][0] = 0.0
    g[2][0] = 0.0
    if r == 0:
        s = sin(x1)
        c = cos(x1)
        g[1][1] = a4 * s * s + aa4 * c * c
        g[1][2] = aa4 * c
        g[2][1] = aa4 * c
        g[2][2] = aa4
    else:
        s = sinh(x1)
        c = cosh(x1)
        g[1][1] = a4 * s * s - aa4 * c * c
        g[1][2] = -aa4 * c
        g[2][1] = -aa4 * c
        g[2][2] = -aa4


cdef void _frame_c(int r, double alpha, double x1, double x3, double e[3][3]) noexcept nogil:
    cdef double f = 2.0 / sqrt(alpha)
    cdef double s3 = sin(x3)
    cdef double c3 = cos(x3)
    cdef double s1, cot, sh, cth
    e[0][0] = 0.0
    e[0][1] = 0.0
    e[0][2] = 2.0 / alpha
    if r == 0:
        s1 = sin(x1)
        cot = cos(x1) / s1
        e[1][0] = -f * s3
        e[1][1] = f * c3 / s1
        e[1][2] = -f * cot * c3
        e[2][0] = f * c3
        e[2][1] = f * s3 / s1
        e[2][2] = -f * cot * s3
    else:
        sh = sinh(x1)
        cth = cosh(x1) / sh
        e[1][0] = f * c3
        e[1][1] = f * s3 / sh
        e[1][2] = -f * cth * s3
        e[2][0] = -f * s3
        e[2][1] = f * c3 / sh
        e[2][2] = -f * cth * c3


cdef void _inv3_c(double m[3][3], double inv[3][3]) noexcept nogil:
    cdef double a = m[0][0], b = m[0][1], c = m[0][2]
    cdef double d = m[1][0], e = m[1][1], f = m[1][2]
    cdef double g = m[2][0], h = m[2][1], i = m[2][2]
    cdef double co00 = e * i - f * h
    cdef double co01 = f * g - d * i
    cdef double co02 = d * h - e * g
    cdef double det = a * co00 + b * co01 + c * co02
    cdef double w = 1.0 / det
    inv[0][0] = co00 * w
    inv[0][1] = (c * h - b * i) * w
    inv[0][2] = (b * f - c * e) * w
    inv[1][0] = co01 * w
    inv[1][1] = (a * i - c * g) * w
    inv[1][2] = (c * d - a * f) * w
    inv[2][0] = co02 * w
    inv[2][1] = (b * g - a * h) * w
    inv[2][2] = (a * e - b * d) * w


cdef void _christoffels_c(int r, double alpha, double x1, double x2, double x3,
                          double gam[3][3][3]) noexcept nogil:
    cdef double dg[3][3][3]
    cdef double gp[3][3]
    cdef double gm[3][3]
    cdef double g0[3][3]
    cdef double ginv[3][3]
    cdef double x[3]
    cdef double h, inv2h, s
    cdef int k, i, j, m
    x[0] = x1
    x[1] = x2
    x[2] = x3
    for k in range(3):
        h = FD_FIRST * (1.0 if fabs(x[k]) < 1.0 else fabs(x[k]))
        if k == 0:
            _metric_c(r, alpha, x1 + h, gp)
            _metric_c(r, alpha, x1 - h, gm)
        else:
            # the metric depends on x1 only; keep the honest difference
            _metric_c(r, alpha, x1, gp)
            _metric_c(r, alpha, x1, gm)
        inv2h = 0.5 / h
        for i in range(3):
            for j in range(3):
                dg[k][i][j] = (gp[i][j] - gm[i][j]) * inv2h
    _metric_c(r, alpha, x1, g0)
    _inv3_c(g0, ginv)
    for m in range(3):
        for i in range(3):
            for j in range(3):
                s = 0.0
                for k in range(3):
                    s += ginv[m][k] * (dg[i][k][j] + dg[j][k][i] - dg[k][i][j])
                gam[m][i][j] = 0.5 * s


cdef void _rhs_c(int r, double alpha, double *x, double *v, double charge,
                 double f12, double f13, double f23, double *ax) noexcept nogil:
    cdef double gam[3][3][3]
    cdef double e[3][3]
    cdef double et[3][3]
    cdef double inv[3][3]
    cdef double vf[3]
    cdef double w[3]
    cdef double i1, i2, i3, eta1, s
    cdef int m, i, j
    _christoffels_c(r, alpha, x[0], x[1], x[2], gam)
    for m in range(3):
        s = 0.0
        for i in range(3):
            for j in range(3):
                s += gam[m][i][j] * v[i] * v[j]
        ax[m] = -s
    if charge != 0.0:
        _frame_c(r, alpha, x[0], x[2], e)
        for i in range(3):
            for j in range(3):
                et[i][j] = e[j][i]
        _inv3_c(et, inv)
        for i in range(3):
            vf[i] = inv[i][0] * v[0] + inv[i][1] * v[1] + inv[i][2] * v[2]
        i1 = -vf[1] * f12 - vf[2] * f13
        i2 = vf[0] * f12 - vf[2] * f23
        i3 = vf[0] * f13 + vf[1] * f23
        eta1 = 1.0 if r == 0 else -1.0
        w[0] = eta1 * i1
        w[1] = i2
        w[2] = i3
        for m in range(3):
            ax[m] += charge * (w[0] * e[0][m] + w[1] * e[1][m] + w[2] * e[2][m])


def metric(int r, double alpha, double x1):
    """Coordinate components of the chart metric (depends on x1 only)."""
    cdef double g[3][3]
    _metric_c(r, alpha, x1, g)
    out = np.empty((3, 3))
    cdef double[:, ::1] ov = out
    cdef int i, j
    for i in range(3):
        for j in range(3):
            ov[i, j] = g[i][j]
    return out


def frame(int r, double alpha, double x1, double x3):
    """Rows are the frame fields e_1, e_2, e_3 in coordinate components."""
    cdef double e[3][3]
    _frame_c(r, alpha, x1, x3, e)
    out = np.empty((3, 3))
    cdef double[:, ::1] ov = out
    cdef int i, j
    for i in range(3):
        for j in range(3):
            ov[i, j] = e[i][j]
    return out


def christoffels(int r, double alpha, double x1, double x2, double x3):
    """Coordinate Christoffel symbols Gamma^m_ij via central differences."""
    cdef double gam[3][3][3]
    _christoffels_c(r, alpha, x1, x2, x3, gam)
    out = np.empty((3, 3, 3))
    cdef double[:, :, ::1] ov = out
    cdef int m, i, j
    for m in range(3):
        for i in range(3):
            for j in range(3):
                ov[m, i, j] = gam[m][i][j]
    return out


def lorentz_rhs(int r, double alpha, x, v, double charge, double f12,
                double f13, double f23):
    cdef double xc[3]
    cdef double vc[3]
    cdef double ac[3]
    cdef int i
    for i in range(3):
        xc[i] = x[i]
        vc[i] = v[i]
    _rhs_c(r, alpha, xc, vc, charge, f12, f13, f23, ac)
    return np.array([vc[0], vc[1], vc[2]]), np.array([ac[0], ac[1], ac[2]])


def integrate_lorentz(int r, double alpha, x0, v0, double charge, double f12,
                      double f13, double f23, double dt, long nsteps,
                      double x1_lo, double x1_hi):
    """Fixed-step classical RK4 for the charged-particle system."""
    cdef double x[3]
    cdef double v[3]
    cdef double xa[3]
    cdef double va[3]
    cdef double k1v[3]
    cdef double k2v[3]
    cdef double k3v[3]
    cdef double k4v[3]
    cdef double k1x[3]
    cdef double k2x[3]
    cdef double k3x[3]
    cdef double k4x[3]
    cdef double half = 0.5 * dt
    cdef double sixth = dt / 6.0
    cdef long step, count
    cdef int i
    cdef bint exited = False
    xs = np.empty((nsteps + 1, 3))
    vs = np.empty((nsteps + 1, 3))
    cdef double[:, ::1] xv = xs
    cdef double[:, ::1] vv = vs
    for i in range(3):
        x[i] = x0[i]
        v[i] = v0[i]
        xv[0, i] = x[i]
        vv[0, i] = v[i]
    count = 1
    with nogil:
        for step in range(nsteps):
            _rhs_c(r, alpha, x, v, charge, f12, f13, f23, k1v)
            for i in range(3):
                k1x[i] = v[i]
                xa[i] = x[i] + half * k1x[i]
                va[i] = v[i] + half * k1v[i]
            _rhs_c(r, alpha, xa, va, charge, f12, f13, f23, k2v)
            for i in range(3):
                k2x[i] = va[i]
                xa[i] = x[i] + half * k2x[i]
                va[i] = v[i] + half * k2v[i]
            _rhs_c(r, alpha, xa, va, charge, f12, f13, f23, k3v)
            for i in range(3):
                k3x[i] = va[i]
                xa[i] = x[i] + dt * k3x[i]
                va[i] = v[i] + dt * k3v[i]
            _rhs_c(r, alpha, xa, va, charge, f12, f13, f23, k4v)
            for i in range(3):
                k4x[i] = va[i]
            for i in range(3):
                x[i] = x[i] + sixth * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i])
                v[i] = v[i] + sixth * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i])
            if not (x1_lo < x[0] < x1_hi):
                exited = True
                break
            for i in range(3):
                xv[count, i] = x[i]
                vv[count, i] = v[i]
            count += 1
    return xs[:count], vs[:count], exited
