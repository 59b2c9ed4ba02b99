"""Quasi-Killing spinor families on Sasakian space-forms.

A type-(a, b) spinor satisfies nabla_X psi = a i^r X.psi + b i^r eta(X) xi.psi.
Three families exist: S0 for every H, and S+/S- whenever 3 + (-1)^r H > 0,
with

    S0  : a = (-1)^r / 2,            b = (H - (-1)^r) / 4
    S+- : a = ((-1)^r +- s) / 2,     b = ((-1)^(r-1) 2 -+ s) / 2,
          s = sqrt(3 + (-1)^r H)  (nonnegative principal root).

The module carries the spin connection of the frame, exact solution fields in
the explicit charts, the Reeb map psi -> xi.psi, integrability oracles, and
the (lambda, Lambda) parameters tying each family to the Einstein-Dirac
system.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import geometry
from .geometry import (
    EPS,
    ChartValidityError,
    FD_STEP_FIRST,
    FD_STEP_SECOND,
    SpaceForm,
    frame_at,
    structure_constants,
    validate_point,
)
from .spinors import gammas

FAMILIES = ("S0", "S+", "S-")

_I = 1j


@dataclass(frozen=True)
class SqKType:
    a: float
    b: float
    family: str = "custom"


def _root(sf: SpaceForm) -> float:
    val = 3.0 + sf.eps * sf.H
    if val <= 0.0:
        raise ChartValidityError(
            f"family S+/S- needs 3 + (-1)^r H > 0, got {val} (r={sf.r}, H={sf.H})"
        )
    return math.sqrt(val)


def sqk_type(sf: SpaceForm, family: str) -> SqKType:
    if family == "S0":
        return SqKType(0.5 * sf.eps, 0.25 * (sf.H - sf.eps), "S0")
    if family == "S+":
        s = _root(sf)
        return SqKType(0.5 * (sf.eps + s), 0.5 * (-2.0 * sf.eps - s), "S+")
    if family == "S-":
        s = _root(sf)
        return SqKType(0.5 * (sf.eps - s), 0.5 * (-2.0 * sf.eps + s), "S-")
    raise ValueError(f"unknown family {family!r}")


def families(sf: SpaceForm) -> list:
    """All quasi-Killing types on sf: S0 always, S+- when the root exists."""
    out = [sqk_type(sf, "S0")]
    if 3.0 + sf.eps * sf.H > 0.0:
        out.append(sqk_type(sf, "S+"))
        out.append(sqk_type(sf, "S-"))
    return out


def spin_connection(sf: SpaceForm) -> np.ndarray:
    """Matrices w^S(e_j), shape (3, 2, 2).

    Literal form ((-i)^r/2) gamma_j + i^r (H + (-1)^(r-1))/4 delta_{1j} gamma_1,
    which collapses to i^r (c_j / 2) gamma_j with the connection coefficients.
    """
    g = gammas(sf.r)
    base = 0.5 * (-_I) ** sf.r
    extra = (_I**sf.r) * 0.25 * (sf.H - sf.eps)
    out = np.array([base * g[j] for j in range(3)])
    out[0] = out[0] + extra * g[0]
    return out


def sqk_connection_matrices(sf: SpaceForm, t: SqKType) -> np.ndarray:
    """A_j = w^S(e_j) - i^r (a gamma_j + b delta_{1j} gamma_1); the quasi-
    Killing equation reads e_j(psi) + A_j psi = 0."""
    g = gammas(sf.r)
    ir = _I**sf.r
    a_mats = spin_connection(sf).astype(complex)
    for j in range(3):
        a_mats[j] = a_mats[j] - ir * t.a * g[j]
    a_mats[0] = a_mats[0] - ir * t.b * g[0]
    return a_mats


class SpinorField:
    """A spinor field on a space-form: evaluator plus family metadata."""

    def __init__(self, sf: SpaceForm, fn: Callable[[np.ndarray], np.ndarray],
                 family: str = "custom", stype: Optional[SqKType] = None,
                 constants=None):
        self.sf = sf
        self._fn = fn
        self.family = family
        self.stype = stype
        self.constants = constants

    def value(self, p) -> np.ndarray:
        return self._fn(geometry.as_point(p))

    def scaled(self, factor: complex) -> "SpinorField":
        fn = self._fn
        consts = None
        if self.constants is not None:
            consts = (factor * self.constants[0], factor * self.constants[1])
        return SpinorField(self.sf, lambda x: factor * fn(x), self.family,
                           self.stype, consts)


def _riemann_minus_matrix(x: np.ndarray) -> np.ndarray:
    h3 = 0.5 * x[2]
    h1 = 0.5 * x[0]
    h2 = 0.5 * x[1]
    ep3, em3 = np.exp(_I * h3), np.exp(-_I * h3)
    c, s = math.cos(h1), math.sin(h1)
    m_fiber = np.array([[ep3, em3], [-ep3, em3]])
    m_polar = np.array([[c, -_I * s], [-_I * s, c]])
    m_azim = np.array([[np.exp(_I * h2), 0.0], [0.0, np.exp(-_I * h2)]])
    return m_fiber @ m_polar @ m_azim


def _lorentz_plus_matrix(x: np.ndarray) -> np.ndarray:
    h3 = 0.5 * x[2]
    h1 = 0.5 * x[0]
    h2 = 0.5 * x[1]
    ep3, em3 = np.exp(_I * h3), np.exp(-_I * h3)
    c, s = math.cosh(h1), math.sinh(h1)
    m_fiber = np.array([[ep3, em3], [ep3, -em3]])
    m_radial = np.array([[c, -_I * s], [_I * s, c]])
    m_azim = np.array([[np.exp(_I * h2), 0.0], [0.0, np.exp(-_I * h2)]])
    return m_fiber @ m_radial @ m_azim


def explicit_solution(sf: SpaceForm, family: str, C1: complex,
                      C2: complex) -> SpinorField:
    """Exact quasi-Killing field of the requested family.

    S0 fields have constant components (C1, C2) with respect to the frame and
    exist for every space-form.  S+/S- fields are chart solutions: the base
    solution is S- for r=0 and S+ for r=1, and the partner family is obtained
    by the Reeb map xi . psi.
    """
    c = np.array([C1, C2], dtype=complex)
    t = sqk_type(sf, family)
    if family == "S0":
        return SpinorField(sf, lambda x: c.copy(), "S0", t, (C1, C2))
    sf.require_chart()
    if sf.r == 0:
        base_family, mat = "S-", _riemann_minus_matrix
    else:
        base_family, mat = "S+", _lorentz_plus_matrix
    base = SpinorField(sf, lambda x: mat(x) @ c, base_family,
                       sqk_type(sf, base_family), (C1, C2))
    if family == base_family:
        return base
    return xi_map(base)


def xi_map_type(t: SqKType, r: int) -> SqKType:
    """Type map of psi -> xi . psi: (a, b) -> ((-1)^r - a, (-1)^(r-1) + 2a + b)."""
    eps = 1.0 - 2.0 * r
    fam = {"S0": "S0", "S+": "S-", "S-": "S+"}.get(t.family, "custom")
    return SqKType(eps - t.a, -eps + 2.0 * t.a + t.b, fam)


def xi_map(field: SpinorField) -> SpinorField:
    g1 = gammas(field.sf.r)[0]
    fn = field._fn
    stype = xi_map_type(field.stype, field.sf.r) if field.stype else None
    fam = {"S0": "S0", "S+": "S-", "S-": "S+"}.get(field.family, "custom")
    return SpinorField(field.sf, lambda x: g1 @ fn(x), fam, stype,
                       field.constants)


def field_frame_derivative(field: SpinorField, j: int, p) -> np.ndarray:
    """e_j(psi) by central differences in chart coordinates."""
    sf = field.sf
    x = validate_point(sf, p, margin=2 * FD_STEP_FIRST)
    e = frame_at(sf, x)[j]
    h = FD_STEP_FIRST * np.maximum(1.0, np.abs(x))
    out = np.zeros(2, dtype=complex)
    for mu in range(3):
        if e[mu] == 0.0:
            continue
        xp = x.copy()
        xm = x.copy()
        xp[mu] += h[mu]
        xm[mu] -= h[mu]
        out = out + e[mu] * (field.value(xp) - field.value(xm)) / (2.0 * h[mu])
    return out


def covariant_derivative(field: SpinorField, j: int, p,
                         gauge_b: float = 0.0) -> np.ndarray:
    """nabla_{e_j} psi = e_j(psi) + w^S(e_j) psi, plus i B eta(e_j) psi when a
    gauge coefficient is supplied (spin-c coupling, charge 1)."""
    psi = field.value(p)
    out = field_frame_derivative(field, j, p) + spin_connection(field.sf)[j] @ psi
    if gauge_b != 0.0 and j == 0:
        out = out + _I * gauge_b * psi
    return out


def sqk_rhs(sf: SpaceForm, t: SqKType, j: int, psi) -> np.ndarray:
    """i^r a gamma_j psi + i^r b delta_{1j} gamma_1 psi."""
    g = gammas(sf.r)
    ir = _I**sf.r
    out = ir * t.a * (g[j] @ psi)
    if j == 0:
        out = out + ir * t.b * (g[0] @ psi)
    return out


def sqk_residual(field: SpinorField, t: SqKType, p) -> float:
    """Relative defect of the quasi-Killing equation at p, maxed over the
    three frame directions."""
    psi = field.value(p)
    norm = np.linalg.norm(psi)
    if norm == 0.0:
        raise ValueError("quasi-Killing residual needs a nonzero spinor")
    worst = 0.0
    for j in range(3):
        res = covariant_derivative(field, j, p) - sqk_rhs(field.sf, t, j, psi)
        worst = max(worst, np.linalg.norm(res) / norm)
    return worst


# deterministic matrices for the curvature oracle's test extension
_EXT_MATS = np.array(
    [
        [[0.23, 0.11 + 0.07j], [0.05j, -0.19]],
        [[-0.13, 0.21], [0.08 - 0.12j, 0.17]],
        [[0.09 + 0.04j, -0.14], [0.22, 0.06j]],
    ]
)


def sqk_curvature_action(sf: SpaceForm, t: SqKType, psi0, i: int, j: int, p,
                         h_outer: float = FD_STEP_SECOND) -> np.ndarray:
    """Curvature of the quasi-Killing connection applied to psi0 at p.

    Computed as a finite-difference commutator of covariant derivatives minus
    the derivative along the bracket, on a smooth test extension of psi0.
    Vanishes (up to FD error) exactly when (a, b) is one of families(sf).
    """
    x0 = validate_point(sf, p, margin=4 * h_outer)
    psi0 = np.asarray(psi0, dtype=complex)
    a_mats = sqk_connection_matrices(sf, t)

    def test_field(y):
        ext = np.eye(2, dtype=complex)
        for k in range(3):
            ext = ext + math.sin(y[k] - x0[k]) * _EXT_MATS[k]
        return ext @ psi0

    def d_cov(k, fld, y):
        e = frame_at(sf, y)[k]
        h = FD_STEP_FIRST * np.maximum(1.0, np.abs(y))
        out = a_mats[k] @ fld(y)
        for mu in range(3):
            if e[mu] == 0.0:
                continue
            yp = y.copy()
            ym = y.copy()
            yp[mu] += h[mu]
            ym[mu] -= h[mu]
            out = out + e[mu] * (fld(yp) - fld(ym)) / (2.0 * h[mu])
        return out

    def inner_j(y):
        return d_cov(j, test_field, y)

    def inner_i(y):
        return d_cov(i, test_field, y)

    def d_outer(k, fld, y):
        e = frame_at(sf, y)[k]
        out = a_mats[k] @ fld(y)
        for mu in range(3):
            if e[mu] == 0.0:
                continue
            yp = y.copy()
            ym = y.copy()
            yp[mu] += h_outer
            ym[mu] -= h_outer
            out = out + e[mu] * (fld(yp) - fld(ym)) / (2.0 * h_outer)
        return out

    comm = d_outer(i, inner_j, x0) - d_outer(j, inner_i, x0)
    f = structure_constants(sf)
    for k in range(3):
        if f[i, j, k] != 0.0:
            comm = comm - f[i, j, k] * d_cov(k, test_field, x0)
    return comm


def curvature_coefficients(sf: SpaceForm, t: SqKType):
    """Literal coefficient pair (b1, b2) of the printed curvature form.

    Vanishes on every family for r=0; for r=1 the literal expression mixes
    real and imaginary parts and is reported without being asserted (the
    finite-difference curvature oracle is the ground truth).
    """
    ir = _I**sf.r
    mir = (-_I) ** sf.r
    b1 = ir * sf.H / 2.0 - 2.0 * ir * t.a**2 - 2.0 * t.b
    b2 = -2.0 * mir * t.a**2 - 2.0 * mir * t.a * t.b + sf.eps * t.b + ir / 2.0
    return b1, b2


def scalar_from_type(t: SqKType, r: int) -> float:
    """Scalar curvature forced by a type-(a, b) spinor in three dimensions:
    S = (-1)^r (24 a^2 + 16 a b)."""
    eps = 1.0 - 2.0 * r
    return eps * (24.0 * t.a**2 + 16.0 * t.a * t.b)


# ---------------------------------------------------------------------------
# Weak-Killing parameters: the bridge to the Einstein-Dirac system
# ---------------------------------------------------------------------------


def wk_parameters(family: str, sf: SpaceForm):
    """Dirac eigenvalue lambda and cosmological constant Lambda per family."""
    eps = sf.eps
    if family == "S0":
        lam = 0.25 * (-eps * sf.H - 5.0)
        return lam, -eps
    s = _root(sf)
    if family == "S+":
        return -eps * s - 0.5, -s + sf.H + 2.0 * eps
    if family == "S-":
        return eps * s - 0.5, s + sf.H + 2.0 * eps
    raise ValueError(f"unknown family {family!r}")


def wk_denominator(sf: SpaceForm, Lam: float) -> float:
    return sf.H - 3.0 * Lam + 2.0 * sf.eps


def wk_ab_from_parameters(sf: SpaceForm, lam: float, Lam: float):
    """Invert (lambda, Lambda) back to the type (a, b)."""
    den = wk_denominator(sf, Lam)
    if abs(den) < 1e-14:
        raise ZeroDivisionError("degenerate weak-Killing inversion: H - 3 Lambda + 2 (-1)^r = 0")
    a = sf.eps * lam * (Lam - sf.eps) / den
    b = -sf.eps * lam * (sf.H - sf.eps) / den
    return a, b


def wk_beta(sf: SpaceForm, lam: float, Lam: float) -> np.ndarray:
    """Frame components of the symmetric tensor beta with
    nabla_X psi = i^(3r) beta(X) . psi for the weak-Killing field.

    beta = 2 lambda / (S - 6 Lambda) * (Ric - (S/2) g + Lambda g).
    """
    s_curv = geometry.scalar_curvature(sf)
    den = s_curv - 6.0 * Lam
    if abs(den) < 1e-14:
        raise ZeroDivisionError("weak-Killing hypothesis violated: S - 6 Lambda = 0")
    core = geometry.ricci(sf) - 0.5 * s_curv * sf.eta + Lam * sf.eta
    return (2.0 * lam / den) * core


def wk_residual(field: SpinorField, lam: float, Lam: float, p) -> float:
    """Defect of the weak-Killing equation at p (alpha term absent because
    the scalar curvature, hence <psi, psi>, is constant)."""
    sf = field.sf
    psi = field.value(p)
    norm = np.linalg.norm(psi)
    if norm == 0.0:
        raise ValueError("weak-Killing residual needs a nonzero spinor")
    beta = wk_beta(sf, lam, Lam)
    beta_up = beta * sf.eta_diag[None, :]  # beta(e_j) = sum_k beta_up[j,k] e_k
    g = gammas(sf.r)
    pref = _I ** (3 * sf.r)
    worst = 0.0
    for j in range(3):
        rhs = pref * sum(beta_up[j, k] * (g[k] @ psi) for k in range(3))
        res = covariant_derivative(field, j, p) - rhs
        worst = max(worst, np.linalg.norm(res) / norm)
    return worst


# ---------------------------------------------------------------------------
# Dirac-current identities
# ---------------------------------------------------------------------------


def current_derivative_residuals(field: SpinorField, t: SqKType, p):
    """Finite-difference check of both derivative formulas for the current.

    Returns (res_partial, res_nabla): worst absolute defect of
      e_j(J_i)            = sum_k (2a eps_jik + 2b d_j1 eps_1ik - c_j eps_jik) J^k
      g(nabla_{e_j}J,e_i) = sum_k (2a eps_jik + 2b d_j1 eps_1ik) J^k
    """
    from .spinors import dirac_current

    sf = field.sf
    x = validate_point(sf, p, margin=2 * FD_STEP_FIRST)
    c = geometry.connection_coeffs(sf)
    eta = sf.eta_diag

    def j_up(y):
        return dirac_current(field.value(y), r=sf.r)

    j0 = j_up(x)
    res_partial = 0.0
    res_nabla = 0.0
    for j in range(3):
        dj = geometry.directional_derivative(sf, lambda y: eta * j_up(y), j, x)
        for i in range(3):
            geom = sum(
                (2.0 * t.a * EPS[j, i, k]
                 + 2.0 * t.b * (1.0 if j == 0 else 0.0) * EPS[0, i, k]) * j0[k]
                for k in range(3)
            )
            conn = sum(-c[j] * EPS[j, i, k] * j0[k] for k in range(3))
            res_partial = max(res_partial, abs(dj[i] - (geom + conn)))
            # g(nabla_j J, e_i) = e_j(J_i) - g(J, nabla_j e_i)
            nablaji = geometry.nabla_frame_coeffs(sf)[j, i]
            gj_nabla = dj[i] - float(np.dot(eta * j0, nablaji))
            res_nabla = max(res_nabla, abs(gj_nabla - geom))
    return res_partial, res_nabla


def killing_deformation(field: SpinorField, p) -> np.ndarray:
    """Symmetrized covariant derivative K_ij = g(nabla_i J, e_j) + (i<->j);
    J is a Killing field iff this vanishes."""
    from .spinors import dirac_current

    sf = field.sf
    x = validate_point(sf, p, margin=2 * FD_STEP_FIRST)
    eta = sf.eta_diag

    def j_low(y):
        return eta * dirac_current(field.value(y), r=sf.r)

    j0_low = j_low(x)
    nabla = geometry.nabla_frame_coeffs(sf)
    grad = np.zeros((3, 3))
    for j in range(3):
        dj = geometry.directional_derivative(sf, j_low, j, x)
        for i in range(3):
            grad[j, i] = dj[i] - float(np.dot(j0_low, nabla[j, i]))
    return grad + grad.T
