"""Stress tensors, Dirac/Maxwell/Einstein residuals, solution construction,
closedness and energy-condition tables.

Conventions: electric charge is fixed to 1; the gauge potential is i B eta,
so F = dA has frame components 2B w^2 ^ w^3.  The Einstein equation is used
in its three-dimensional form Ric = T - tr(T) g + 2 Lambda g.
"""

import math
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from . import geometry, sqk
from .geometry import SpaceForm
from .spinors import bilinear, bilinear_two_form, dirac_current, gammas
from .sqk import SpinorField, SqKType, covariant_derivative, sqk_type

_I = 1j


@dataclass(frozen=True)
class GaugeField:
    """Potential i B eta, charge fixed to 1."""

    B: float
    q: float = 1.0

    def two_form(self) -> np.ndarray:
        f = np.zeros((3, 3))
        f[1, 2] = 2.0 * self.B
        f[2, 1] = -2.0 * self.B
        return f


def t_spin(field: SpinorField, gauge: Optional[GaugeField], sf: SpaceForm,
           p) -> np.ndarray:
    """Spinor stress tensor from the definition, frame components.

    T(e_i, e_j) = (1/4) Re <psi, i^r (gamma_i D_j psi + gamma_j D_i psi)>
    with D the spin-c covariant derivative.
    """
    b_coef = gauge.B if gauge is not None else 0.0
    psi = field.value(p)
    g = gammas(sf.r)
    pref = _I**sf.r
    deriv = [covariant_derivative(field, j, p, gauge_b=b_coef) for j in range(3)]
    t = np.zeros((3, 3))
    for i in range(3):
        for j in range(i, 3):
            val = 0.25 * (
                bilinear(psi, pref * (g[i] @ deriv[j] + g[j] @ deriv[i]), sf.r)
            ).real
            t[i, j] = val
            t[j, i] = val
    return t


def t_spin_closed_form(sf: SpaceForm, t: SqKType, q_norm: float,
                       B: float = 0.0, branch: int = +1) -> np.ndarray:
    """Closed form for eigen-spinor fields:
    -((-1)^r a / 2) q g - ((b +- B)/2) q eta x eta."""
    out = -0.5 * sf.eps * t.a * q_norm * sf.eta
    out[0, 0] += -0.5 * (t.b + branch * B) * q_norm
    return out


def t_em(f_frame: np.ndarray, sf: SpaceForm) -> np.ndarray:
    """Electromagnetic stress tensor of a frame-component 2-form.

    Uses the squared norm ||F||^2 = F_ij F^ij with the full double sum,
    which is the normalization under which F = 2B w^2^w^3 yields
    T = 2 B^2 g + (-1)^(r-1) 4 B^2 eta x eta.
    """
    eta = sf.eta_diag
    f = np.asarray(f_frame, dtype=float)
    f_up = f * eta[None, :]
    norm2 = float(np.sum(f * f * eta[:, None] * eta[None, :]))
    t = np.array([[float(np.dot(f_up[i], eta * f_up[j])) for j in range(3)]
                  for i in range(3)])
    return t - 0.25 * norm2 * sf.eta


def einstein_residual(sf: SpaceForm, t_total: np.ndarray, Lam: float) -> float:
    """Max frame-componentwise defect of Ric = T - tr(T) g + 2 Lambda g."""
    tr = float(np.sum(sf.eta_diag * np.diag(t_total)))
    lhs = geometry.ricci(sf)
    rhs = t_total - tr * sf.eta + 2.0 * Lam * sf.eta
    return float(np.max(np.abs(lhs - rhs)))


def dirac_apply(field: SpinorField, gauge: Optional[GaugeField], sf: SpaceForm,
                p) -> np.ndarray:
    """Spin-c Dirac operator D psi = i^r sum_i gamma^i D_i psi at p."""
    b_coef = gauge.B if gauge is not None else 0.0
    g = gammas(sf.r)
    eta = sf.eta_diag
    out = np.zeros(2, dtype=complex)
    for i in range(3):
        out = out + eta[i] * (g[i] @ covariant_derivative(field, i, p,
                                                          gauge_b=b_coef))
    return (_I**sf.r) * out


def dirac_eigen_residual(field: SpinorField, gauge: Optional[GaugeField],
                         sf: SpaceForm, lam: float, points) -> float:
    worst = 0.0
    for p in np.atleast_2d(points):
        psi = field.value(p)
        res = dirac_apply(field, gauge, sf, p) - lam * psi
        worst = max(worst, np.linalg.norm(res) / np.linalg.norm(psi))
    return worst


def maxwell_residual(sf: SpaceForm, f_field, j_field, c: float, p) -> float:
    """Defect of *d*F = (-1)^(r-1) c flat(J) at p, max over components."""
    lhs = geometry.star_d_star(sf, f_field, p)
    j_low = sf.eta_diag * np.asarray(j_field(geometry.as_point(p)))
    rhs = (-sf.eps) * c * j_low
    return float(np.max(np.abs(lhs - rhs)))


def measure_maxwell_constant(sf: SpaceForm, f_field, j_field, p) -> complex:
    """Least-squares c with *d*F = (-1)^(r-1) c flat(J) at p."""
    lhs = geometry.star_d_star(sf, f_field, p)
    j_low = sf.eta_diag * np.asarray(j_field(geometry.as_point(p)))
    denom = float(np.sum(np.abs(j_low) ** 2))
    if denom == 0.0:
        raise ValueError("current vanishes at the sample point")
    return complex(np.vdot(j_low, lhs)) / denom * (-sf.eps)


def df_coefficient(t1: SqKType, t2: SqKType) -> float:
    """Scalar -3 a1 + 3 a2 - b1 + b2 governing
    dF = 2 i (coefficient) <psi1, psi2> w^1^w^2^w^3."""
    return -3.0 * t1.a + 3.0 * t2.a - t1.b + t2.b


def df_numeric(sf: SpaceForm, field1: SpinorField, field2: SpinorField,
               p) -> complex:
    """Frame coefficient of dF_{psi1,psi2} by finite differences."""

    def f_frame(x):
        return bilinear_two_form(field1.value(x), field2.value(x), sf.r)

    return geometry.ext_d(sf, f_frame, 2, p)


_PAIR_FAMILIES = ("S0", "S+", "S-")


def _pair_valid(sf: SpaceForm, fam: str) -> bool:
    return fam == "S0" or 3.0 + sf.eps * sf.H > 0.0


def table2_scan(r: int, grid) -> dict:
    """Closedness of the two-spinor Maxwell form over a curvature grid.

    For each ordered family pair, reports the grid values of H at which the
    closedness coefficient vanishes (within 1e-12), the sign-change brackets,
    and whether the pair is closed at every valid grid point.
    """
    grid = np.asarray(grid, dtype=float)
    out = {}
    for fam1 in _PAIR_FAMILIES:
        for fam2 in _PAIR_FAMILIES:
            coef = []
            valid = []
            for h in grid:
                sf = SpaceForm(r, float(h))
                if _pair_valid(sf, fam1) and _pair_valid(sf, fam2):
                    valid.append(h)
                    coef.append(df_coefficient(sqk_type(sf, fam1),
                                               sqk_type(sf, fam2)))
            coef = np.asarray(coef)
            valid = np.asarray(valid)
            zeros = [float(h) for h, k in zip(valid, coef) if abs(k) < 1e-12]
            brackets = []
            for a, b, ka, kb in zip(valid[:-1], valid[1:], coef[:-1], coef[1:]):
                if ka * kb < 0.0:
                    brackets.append((float(a), float(b)))
            out[(fam1, fam2)] = {
                "closed_H": zeros,
                "brackets": brackets,
                "all_closed": bool(len(valid) > 0 and len(zeros) == len(valid)),
                "n_valid": int(len(valid)),
            }
    return out


def expected_table2(fam1: str, fam2: str, r: int) -> str:
    """Reference closedness pattern: 'all', 'none', or an isolated H value."""
    pair = frozenset((fam1, fam2))
    if fam1 == fam2:
        return "all"
    if pair == frozenset(("S0", "S+")):
        return "H=13" if r == 0 else "none"
    if pair == frozenset(("S0", "S-")):
        return "H=-13" if r == 1 else "none"
    return "none"


def maxwell_source_cases(sf: SpaceForm, case: str, n_points: int = 20,
                         seed: int = geometry.DEFAULT_SEED):
    """Build the spinor pair of a source case and measure its constant c.

    Cases: 'i' eigen proportional pair in S0 (any H); 'ii' Killing pair,
    needs H = (-1)^r; 'iii' S0 x S+ at H = 13, r = 0; 'iv' S0 x S- at
    H = -13, r = 1; 'v' S0 pair with <psi1, gamma_1 psi2> = 0.
    Returns (measured c over sample points, expected c).
    """
    sf.require_chart()
    if case == "i":
        f1 = sqk.explicit_solution(sf, "S0", 1.0 / math.sqrt(2), 1.0 / math.sqrt(2))
        f2 = f1.scaled(1.3 + 0.4j)
        expected = 4.0
    elif case == "ii":
        if abs(sf.H - sf.eps) > 1e-12:
            raise ValueError("case ii needs H = (-1)^r (Killing spinors)")
        f1 = sqk.explicit_solution(sf, "S0", 1.0, 0.3 + 0.2j)
        f2 = sqk.explicit_solution(sf, "S0", 0.5 - 0.1j, 1.0)
        expected = 4.0
    elif case == "iii":
        if sf.r != 0 or abs(sf.H - 13.0) > 1e-12:
            raise ValueError("case iii needs r = 0, H = 13")
        f1 = sqk.explicit_solution(sf, "S0", 0.8, 0.3 + 0.5j)
        f2 = sqk.explicit_solution(sf, "S+", 1.0, 0.4 - 0.2j)
        expected = 12.0
    elif case == "iv":
        if sf.r != 1 or abs(sf.H + 13.0) > 1e-12:
            raise ValueError("case iv needs r = 1, H = -13")
        f1 = sqk.explicit_solution(sf, "S0", 0.8, 0.3 + 0.5j)
        f2 = sqk.explicit_solution(sf, "S-", 1.0, 0.4 - 0.2j)
        expected = 12.0
    elif case == "v":
        if sf.r == 0:
            f1 = sqk.explicit_solution(sf, "S0", 1.0, 0.0)
            f2 = sqk.explicit_solution(sf, "S0", 1.0, 0.0)
        else:
            f1 = sqk.explicit_solution(sf, "S0", 1.0, 0.0)
            f2 = sqk.explicit_solution(sf, "S0", 0.0, 1.0)
        ortho = bilinear(f1.value((1.0, 0.0, 0.0)),
                         gammas(sf.r)[0] @ f2.value((1.0, 0.0, 0.0)), sf.r)
        if abs(ortho) > 1e-12:
            raise ValueError("case v pair fails <psi1, gamma_1 psi2> = 0")
        expected = 3.0 + sf.eps * sf.H
    else:
        raise ValueError(f"unknown case {case!r}")

    def f_field(x):
        return bilinear_two_form(f1.value(x), f2.value(x), sf.r)

    def j_field(x):
        return dirac_current(f1.value(x), f2.value(x), r=sf.r)

    measured = []
    for p in geometry.random_points(sf, n_points, seed=seed):
        measured.append(measure_maxwell_constant(sf, f_field, j_field, p))
    return np.array(measured), expected


# ---------------------------------------------------------------------------
# Einstein-Dirac solutions
# ---------------------------------------------------------------------------


@dataclass
class EDSolution:
    field: SpinorField
    lam: float
    Lam: float
    target_norm: float
    constants: tuple


def _base_constants(sf: SpaceForm, family: str, want_positive: bool):
    """Generic constants whose invariant norm has the requested sign."""
    if sf.r == 0:
        return (1.0, 0.35 + 0.6j)
    if family == "S0":
        # <psi,psi> = 2 Re(conj(C1) C2)
        return (1.0, 0.8 + 0.3j) if want_positive else (1.0, -0.8 + 0.3j)
    # S+/S-: <psi,psi> = 2 (|C1|^2 - |C2|^2)
    return (1.0, 0.3 + 0.2j) if want_positive else (0.3 + 0.2j, 1.0)


def ed_solution(family: str, sf: SpaceForm) -> EDSolution:
    """Normalized Einstein-Dirac solution for the given family.

    Scales a generic explicit field so that <psi, psi> = -(S - 6 Lambda) /
    lambda; in the Riemannian case (family S+) the construction requires
    -3 < H < 1 for the sign to work out.
    """
    lam, Lam = sqk.wk_parameters(family, sf)
    s_curv = geometry.scalar_curvature(sf)
    if abs(lam) < 1e-12:
        raise ValueError("degenerate family: lambda = 0")
    if abs(s_curv - 6.0 * Lam) < 1e-12:
        raise ValueError("weak-Killing hypothesis fails: S - 6 Lambda = 0")
    target = -(s_curv - 6.0 * Lam) / lam
    if sf.r == 0 and family == "S+" and not (-3.0 < sf.H < 1.0):
        raise ValueError("Riemannian S+ construction needs -3 < H < 1")
    if sf.r == 0 and target <= 0.0:
        raise ValueError("sign mismatch: Riemannian norm is positive")
    c1, c2 = _base_constants(sf, family, target > 0.0)
    base = sqk.explicit_solution(sf, family, c1, c2)
    q0 = bilinear(base.value((1.0, 0.0, 0.0)),
                  base.value((1.0, 0.0, 0.0)), sf.r).real
    if q0 * target <= 0.0:
        raise ValueError("sign mismatch between target and base norm")
    scale = math.sqrt(target / q0)
    return EDSolution(base.scaled(scale), lam, Lam, target, (c1, c2))


# ---------------------------------------------------------------------------
# Dirac-Maxwell and Einstein-Dirac-Maxwell solutions
# ---------------------------------------------------------------------------


@dataclass
class EDMSolution:
    sf: SpaceForm
    field: SpinorField
    gauge: GaugeField
    Lam: float
    lam: float
    q_norm: float
    branch: int
    chart_based: bool


def edm_curvature(q_norm: float, r: int) -> float:
    eps = 1.0 - 2.0 * r
    den = q_norm - eps * 8.0
    if abs(den) < 1e-14:
        raise ZeroDivisionError("denominator <psi,psi> - (-1)^r 8 vanishes")
    return (-eps * q_norm**2 + eps * q_norm - 8.0) / den


def edm_cosmological(q_norm: float, r: int) -> float:
    eps = 1.0 - 2.0 * r
    return q_norm**2 / 8.0 - q_norm / 4.0 + eps


def edm_solution(q_norm: float, r: int, branch: int = 0) -> EDMSolution:
    """Einstein-Dirac-Maxwell solution with invariant norm q_norm.

    branch is the eigen-spinor sign (+1 or -1) in xi.psi = +-(-i)^(r-1) psi;
    0 picks the sign compatible with q_norm.  Riemannian fields force
    q_norm > 0; Lorentzian fields force sign(q_norm) = branch.
    """
    eps = 1.0 - 2.0 * r
    if q_norm == 0.0:
        raise ValueError("q_norm must be nonzero")
    if r == 0 and q_norm <= 0.0:
        raise ValueError("Riemannian invariant norm is positive")
    if branch == 0:
        branch = +1 if (r == 0 or q_norm > 0.0) else -1
    if r == 1 and branch * q_norm < 0.0:
        raise ValueError("Lorentzian eigen branch +- forces sign(q_norm) = +-")
    h_val = edm_curvature(q_norm, r)
    lam_cc = edm_cosmological(q_norm, r)
    sf = SpaceForm(r, h_val)
    t = sqk_type(sf, "S0")
    b_gauge = branch * (-eps) * q_norm / 4.0
    scale = math.sqrt(abs(q_norm) / 2.0)
    field = sqk.explicit_solution(sf, "S0", scale, branch * scale)
    lam = -eps * (3.0 * t.a + t.b + branch * b_gauge)
    return EDMSolution(sf, field, GaugeField(b_gauge), lam_cc, lam, q_norm,
                       branch, sf.chart_valid)


def edm_verify(sol: EDMSolution, n_points: int = 10,
               seed: int = geometry.DEFAULT_SEED) -> dict:
    """Residuals of the three field equations for a constructed solution.

    Chart-valid solutions are checked with finite differences; otherwise the
    closed-form tensors are used and the report is marked algebra-only.
    """
    sf = sol.sf
    t = sqk_type(sf, "S0")
    out = {"mode": "chart" if sol.chart_based else "algebra-only"}
    t_em_tensor = t_em(sol.gauge.two_form(), sf)
    t_spin_closed = t_spin_closed_form(sf, t, sol.q_norm, sol.gauge.B,
                                       sol.branch)
    out["einstein"] = einstein_residual(sf, t_em_tensor + t_spin_closed,
                                        sol.Lam)
    # Maxwell reads *d*F = flat(J) for charge 1; *d*F = 4B w^1 and
    # flat(J)_1 = eta_11 J^1 with J^1 = -branch q
    j1_up = -sol.branch * sol.q_norm
    maxwell_alg = abs(4.0 * sol.gauge.B - sf.eps * j1_up)
    out["maxwell_algebraic"] = maxwell_alg
    if sol.chart_based:
        pts = geometry.random_points(sf, n_points, seed=seed)
        out["dirac"] = dirac_eigen_residual(sol.field, sol.gauge, sf, sol.lam,
                                            pts)
        worst_spin = 0.0
        for p in pts:
            diff = t_spin(sol.field, sol.gauge, sf, p) - t_spin_closed
            worst_spin = max(worst_spin, float(np.max(np.abs(diff))))
        out["t_spin_closed_vs_fd"] = worst_spin

        def f_field(_x):
            return sol.gauge.two_form()

        # the DM/EDM Maxwell equation in three dimensions: *d*F = flat(J)
        worst_max = 0.0
        for p in pts[: min(5, len(pts))]:
            lhs = geometry.star_d_star(sf, f_field, p)
            j_low = sf.eta_diag * dirac_current(sol.field.value(p), r=sf.r)
            worst_max = max(worst_max, float(np.max(np.abs(lhs - j_low))))
        out["maxwell"] = worst_max
    else:
        # algebraic Dirac eigenvalue identity for eigen fields
        lam_alg = -sf.eps * (3.0 * t.a + t.b + sol.branch * sol.gauge.B)
        out["dirac"] = abs(lam_alg - sol.lam)
        out["maxwell"] = maxwell_alg
    return out


def edm_classify(q_norm: float) -> str:
    """Lorentzian model-space type by invariant norm, thresholds -4 and 8."""
    if q_norm in (-4.0, 8.0):
        return "Nil-type"
    if -4.0 < q_norm < 8.0:
        return "SL2-type"
    return "S3-type"


# ---------------------------------------------------------------------------
# Energy conditions (Lorentzian Einstein-Dirac solutions)
# ---------------------------------------------------------------------------


@dataclass
class EnergyConditionReport:
    H: float
    Lam: float
    nec: bool
    wec: bool
    dec: bool
    sec: bool
    margins: dict = dc_field(default_factory=dict)
    witnesses: dict = dc_field(default_factory=dict)


def energy_conditions(H: float, Lam: float, samples: int = 0,
                      seed: int = geometry.DEFAULT_SEED) -> EnergyConditionReport:
    """Closed-form predicates for T = (1 + Lambda) g + (1 + H) eta x eta.

    On X = t e1 + x e2 + y e3: T(X,X) = (H - Lambda) t^2 + (1 + Lambda) rho^2.
    The dominant condition additionally requires the flux vector to be
    future-pointing, which excludes the degenerate point H = Lambda = -1
    where it vanishes identically.  With samples > 0 the report carries the
    worst sampled margin and its witness vector per condition.
    """
    hl = H - Lam
    ol = 1.0 + Lam
    nec = H >= -1.0
    wec = hl >= 0.0 and (ol >= 0.0 or hl >= -ol)
    dec = hl >= abs(ol) and hl > 0.0
    s2 = H - 1.0 - 2.0 * Lam
    sec = ol >= 0.0 and (s2 >= 0.0 or 2.0 * ol >= abs(s2))
    rep = EnergyConditionReport(H, Lam, nec, wec, dec, sec)
    if samples > 0:
        sampled = sample_energy_conditions(H, Lam, n=samples, seed=seed)
        for cond, data in sampled.items():
            rep.margins[cond] = data["min_value"]
            rep.witnesses[cond] = data["witness"]
    return rep


def sample_energy_conditions(H: float, Lam: float, n: int = 1000,
                             seed: int = geometry.DEFAULT_SEED,
                             margin: float = 1e-10) -> dict:
    """Random causal vectors versus the closed-form predicates.

    Returns, per condition, the worst sampled margin and whether any sample
    contradicts a predicate that claims the condition holds.
    """
    rng = np.random.default_rng(seed)
    rep = energy_conditions(H, Lam)
    tt = rng.uniform(0.5, 2.0, n) * rng.choice([-1.0, 1.0], n)
    ang = rng.uniform(0.0, 2.0 * np.pi, n)
    out = {}

    def record(name, ok, values, vectors):
        idx = int(np.argmin(values))
        out[name] = {
            "predicate": ok,
            "min_value": float(values[idx]),
            "witness": tuple(float(v) for v in vectors[idx]),
            "contradiction": bool(ok and values[idx] < -margin),
        }

    # null vectors for NEC
    rho = np.abs(tt)
    q_null = (H - Lam) * tt**2 + (1.0 + Lam) * rho**2
    vecs = np.column_stack([tt, rho * np.cos(ang), rho * np.sin(ang)])
    record("nec", rep.nec, q_null, vecs)
    # timelike vectors for WEC and SEC
    rho = np.abs(tt) * rng.uniform(0.0, 0.999, n)
    q_time = (H - Lam) * tt**2 + (1.0 + Lam) * rho**2
    vecs = np.column_stack([tt, rho * np.cos(ang), rho * np.sin(ang)])
    record("wec", rep.wec, q_time, vecs)
    q_sec = 2.0 * (1.0 + Lam) * tt**2 + (H - 1.0 - 2.0 * Lam) * rho**2
    record("sec", rep.sec, q_sec, vecs)
    # future causal vectors for DEC: v = -sharp T(X, .) future causal
    t_pos = np.abs(tt)
    rho = t_pos * rng.uniform(0.0, 1.0, n)
    v_time = (H - Lam) * t_pos
    v_norm2 = -((H - Lam) ** 2) * t_pos**2 + (1.0 + Lam) ** 2 * rho**2
    dec_margin = np.minimum(v_time, -v_norm2)
    vecs = np.column_stack([t_pos, rho * np.cos(ang), rho * np.sin(ang)])
    record("dec", rep.dec, dec_margin, vecs)
    return out


_ED_TYPES = ("i", "ii", "iii")


def ed_type_cosmological(kind: str, H: float) -> float:
    """Lambda(H) for the three Lorentzian Einstein-Dirac families."""
    if kind == "i":
        return 1.0
    s = math.sqrt(3.0 - H)
    if kind == "ii":
        return -s + H - 2.0
    if kind == "iii":
        return s + H - 2.0
    raise ValueError(f"unknown type {kind!r}")


def table3_scan(grid=None) -> dict:
    """Energy-condition booleans and boundary brackets over an H grid.

    Types ii and iii only exist for H < 3; the validity edge is reported as
    a boundary when the condition still holds in the last valid cell.
    """
    if grid is None:
        grid = np.arange(-100, 101) * 0.05
    grid = np.asarray(grid, dtype=float)
    out = {}
    for kind in _ED_TYPES:
        valid = grid if kind == "i" else grid[grid < 3.0]
        cells = {}
        for cond in ("nec", "wec", "dec", "sec"):
            cells[cond] = np.zeros(len(valid), dtype=bool)
        for idx, h in enumerate(valid):
            rep = energy_conditions(float(h), ed_type_cosmological(kind, float(h)))
            cells["nec"][idx] = rep.nec
            cells["wec"][idx] = rep.wec
            cells["dec"][idx] = rep.dec
            cells["sec"][idx] = rep.sec
        bounds = {}
        for cond, arr in cells.items():
            marks = []
            for k in range(len(arr) - 1):
                if arr[k] != arr[k + 1]:
                    marks.append((float(valid[k]), float(valid[k + 1])))
            if kind != "i" and len(arr) and arr[-1]:
                marks.append((float(valid[-1]), 3.0))
            bounds[cond] = marks
        out[kind] = {
            "grid": valid,
            "cells": cells,
            "boundaries": bounds,
            "empty": {cond: bool(not cells[cond].any()) for cond in cells},
        }
    return out
