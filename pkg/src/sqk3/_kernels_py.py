"""Pure-Python chart kernels.

Twin of the optional compiled extension ``sqk3._kernels``.  The formulas
here and in ``_kernels.pyx`` must stay in lockstep; ``tests/test_backend``
cross-checks them whenever the extension is built.  Everything works on
plain floats so the integrator loop does not round-trip through numpy.
"""

import math

import numpy as np

BACKEND = "python"

FD_FIRST = 1e-5


def _metric(r, alpha, x1):
    a4 = 0.25 * alpha
    aa4 = 0.25 * alpha * alpha
    if r == 0:
        s, c = math.sin(x1), math.cos(x1)
        return (
            (a4, 0.0, 0.0),
            (0.0, a4 * s * s + aa4 * c * c, aa4 * c),
            (0.0, aa4 * c, aa4),
        )
    s, c = math.sinh(x1), math.cosh(x1)
    return (
        (a4, 0.0, 0.0),
        (0.0, a4 * s * s - aa4 * c * c, -aa4 * c),
        (0.0, -aa4 * c, -aa4),
    )


def _frame(r, alpha, x1, x3):
    f = 2.0 / math.sqrt(alpha)
    s3, c3 = math.sin(x3), math.cos(x3)
    e1 = (0.0, 0.0, 2.0 / alpha)
    if r == 0:
        s1 = math.sin(x1)
        cot = math.cos(x1) / s1
        e2 = (-f * s3, f * c3 / s1, -f * cot * c3)
        e3 = (f * c3, f * s3 / s1, -f * cot * s3)
    else:
        sh = math.sinh(x1)
        cth = math.cosh(x1) / sh
        e2 = (f * c3, f * s3 / sh, -f * cth * s3)
        e3 = (-f * s3, f * c3 / sh, -f * cth * c3)
    return (e1, e2, e3)


def _inv3(m):
    a, b, c = m[0]
    d, e, f = m[1]
    g, h, i = m[2]
    co00 = e * i - f * h
    co01 = f * g - d * i
    co02 = d * h - e * g
    det = a * co00 + b * co01 + c * co02
    inv = 1.0 / det
    return (
        (co00 * inv, (c * h - b * i) * inv, (b * f - c * e) * inv),
        (co01 * inv, (a * i - c * g) * inv, (c * d - a * f) * inv),
        (co02 * inv, (b * g - a * h) * inv, (a * e - b * d) * inv),
    )


def _christoffels(r, alpha, x1, x2, x3):
    # dg[k][i][j] = d g_ij / d x_k by central differences; the metric only
    # depends on x1, so the k=1,2 slices vanish identically.
    x = (x1, x2, x3)
    dg = []
    for k in range(3):
        h = FD_FIRST * max(1.0, abs(x[k]))
        xp = [x1, x2, x3]
        xm = [x1, x2, x3]
        xp[k] += h
        xm[k] -= h
        gp = _metric(r, alpha, xp[0])
        gm = _metric(r, alpha, xm[0])
        inv2h = 0.5 / h
        dg.append(
            tuple(
                tuple((gp[i][j] - gm[i][j]) * inv2h for j in range(3))
                for i in range(3)
            )
        )
    ginv = _inv3(_metric(r, alpha, x1))
    gam = [[[0.0] * 3 for _ in range(3)] for _ in range(3)]
    for m in range(3):
        gm_row = ginv[m]
        for i in range(3):
            for j in range(3):
                s = 0.0
                for k in range(3):
                    s += gm_row[k] * (dg[i][k][j] + dg[j][k][i] - dg[k][i][j])
                gam[m][i][j] = 0.5 * s
    return gam


def _lorentz_rhs(r, alpha, x, v, charge, f12, f13, f23):
    gam = _christoffels(r, alpha, x[0], x[1], x[2])
    acc = [0.0, 0.0, 0.0]
    for m in range(3):
        s = 0.0
        gm = gam[m]
        for i in range(3):
            gmi = gm[i]
            vi = v[i]
            for j in range(3):
                s += gmi[j] * vi * v[j]
        acc[m] = -s
    if charge != 0.0:
        e = _frame(r, alpha, x[0], x[2])
        # frame components of v: solve sum_k vf_k e_k^mu = v^mu
        et = ((e[0][0], e[1][0], e[2][0]),
              (e[0][1], e[1][1], e[2][1]),
              (e[0][2], e[1][2], e[2][2]))
        inv = _inv3(et)
        vf = tuple(
            inv[k][0] * v[0] + inv[k][1] * v[1] + inv[k][2] * v[2]
            for k in range(3)
        )
        # (iota_v F)_k with F antisymmetric, then raise with eta
        i1 = -vf[1] * f12 - vf[2] * f13
        i2 = vf[0] * f12 - vf[2] * f23
        i3 = vf[0] * f13 + vf[1] * f23
        eta1 = 1.0 if r == 0 else -1.0
        w1, w2, w3 = eta1 * i1, i2, i3
        for mu in range(3):
            acc[mu] += charge * (w1 * e[0][mu] + w2 * e[1][mu] + w3 * e[2][mu])
    return v, tuple(acc)


def lorentz_rhs(r, alpha, x, v, charge, f12, f13, f23):
    dx, dv = _lorentz_rhs(r, alpha, tuple(x), tuple(v), charge, f12, f13, f23)
    return np.array(dx), np.array(dv)


def integrate_lorentz(r, alpha, x0, v0, charge, f12, f13, f23, dt, nsteps,
                      x1_lo, x1_hi):
    """Fixed-step classical RK4 for the charged-particle system.

    Returns (positions, velocities, exited); integration stops early with
    exited=True as soon as a step would leave (x1_lo, x1_hi).
    """
    x = (float(x0[0]), float(x0[1]), float(x0[2]))
    v = (float(v0[0]), float(v0[1]), float(v0[2]))
    xs = [x]
    vs = [v]
    exited = False
    half = 0.5 * dt
    sixth = dt / 6.0
    for _ in range(nsteps):
        k1x, k1v = _lorentz_rhs(r, alpha, x, v, charge, f12, f13, f23)
        ax = tuple(x[i] + half * k1x[i] for i in range(3))
        av = tuple(v[i] + half * k1v[i] for i in range(3))
        k2x, k2v = _lorentz_rhs(r, alpha, ax, av, charge, f12, f13, f23)
        bx = tuple(x[i] + half * k2x[i] for i in range(3))
        bv = tuple(v[i] + half * k2v[i] for i in range(3))
        k3x, k3v = _lorentz_rhs(r, alpha, bx, bv, charge, f12, f13, f23)
        cx = tuple(x[i] + dt * k3x[i] for i in range(3))
        cv = tuple(v[i] + dt * k3v[i] for i in range(3))
        k4x, k4v = _lorentz_rhs(r, alpha, cx, cv, charge, f12, f13, f23)
        x = tuple(
            x[i] + sixth * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i])
            for i in range(3)
        )
        v = tuple(
            v[i] + sixth * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i])
            for i in range(3)
        )
        if not (x1_lo < x[0] < x1_hi):
            exited = True
            break
        xs.append(x)
        vs.append(v)
    return np.array(xs), np.array(vs), exited


def metric(r, alpha, x1):
    """Coordinate components of the chart metric (depends on x1 only)."""
    return np.array(_metric(r, alpha, x1))


def frame(r, alpha, x1, x3):
    """Rows are the frame fields e_1, e_2, e_3 in coordinate components."""
    return np.array(_frame(r, alpha, x1, x3))


def christoffels(r, alpha, x1, x2, x3):
    """Coordinate Christoffel symbols Gamma^m_ij via central differences."""
    return np.array(_christoffels(r, alpha, x1, x2, x3))
