"""Charts, Sasakian frames, curvature, and finite-difference exterior calculus.

Two explicit charts are implemented: the squashed three-sphere (Riemannian,
sectional parameter H > -3) and its Lorentzian counterpart on the universal
cover of SL(2,R) (H < 3).  The global frame {e1, e2, e3} is orthonormal for
the frame metric eta = diag((-1)^r, 1, 1), with e1 the Reeb field.

Frame-algebraic quantities (brackets, connection, Ricci) are closed-form and
valid for every (r, H); chart-based operations require chart validity,
3 + (-1)^r H > 0, and raise ChartValidityError outside that range.

Orientation convention, used consistently by the Hodge star: the frame is
positively oriented, eps_{123} = +1, volume form w1^w2^w3.
"""

from dataclasses import dataclass

import numpy as np

from . import backend

FD_STEP_FIRST = 1e-5
FD_STEP_SECOND = 1e-4
DEFAULT_SEED = 42
CHART_MARGIN = 0.2
X1_MAX_LORENTZ = 5.0


class ChartValidityError(ValueError):
    """The space-form has no explicit chart for the requested operation."""


class ChartDomainError(ValueError):
    """Point outside the chart domain or too close to a singularity."""


@dataclass(frozen=True)
class SpaceForm:
    """Signature flag r (0 Riemannian, 1 Lorentzian) and curvature H."""

    r: int
    H: float

    def __post_init__(self):
        if self.r not in (0, 1):
            raise ValueError(f"signature flag r must be 0 or 1, got {self.r}")

    @property
    def eps(self) -> float:
        """(-1)^r."""
        return 1.0 - 2.0 * self.r

    @property
    def chart_valid(self) -> bool:
        return 3.0 + self.eps * self.H > 0.0

    @property
    def alpha(self) -> float:
        """Chart parameter 4 / (3 + (-1)^r H)."""
        self.require_chart()
        return 4.0 / (3.0 + self.eps * self.H)

    @property
    def eta(self) -> np.ndarray:
        return np.diag([self.eps, 1.0, 1.0])

    @property
    def eta_diag(self) -> np.ndarray:
        return np.array([self.eps, 1.0, 1.0])

    def require_chart(self):
        if not self.chart_valid:
            raise ChartValidityError(
                f"no chart for r={self.r}, H={self.H}: need 3 + (-1)^r H > 0"
            )

    def x1_domain(self, margin: float = 0.0):
        if self.r == 0:
            return margin, np.pi - margin
        return margin, np.inf


def as_point(p) -> np.ndarray:
    a = np.asarray(p, dtype=float)
    if a.shape != (3,):
        raise ValueError(f"chart point must have 3 coordinates, got {a.shape}")
    return a


def validate_point(sf: SpaceForm, p, margin: float = 0.0) -> np.ndarray:
    x = as_point(p)
    lo, hi = sf.x1_domain(margin)
    if not (lo < x[0] < hi):
        raise ChartDomainError(
            f"x1={x[0]} outside chart domain ({lo}, {hi}) for r={sf.r}"
        )
    return x


# Levi-Civita symbol, eps_{123} = +1
EPS = np.zeros((3, 3, 3))
for _i, _j, _k in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]:
    EPS[_i, _j, _k] = 1.0
    EPS[_i, _k, _j] = -1.0


def eps_upper(sf: SpaceForm) -> np.ndarray:
    """eps_{ij}^k with the last index raised by the frame metric."""
    return EPS * sf.eta_diag[None, None, :]


def frame_at(sf: SpaceForm, p) -> np.ndarray:
    """Rows are e_1, e_2, e_3 in coordinate components at p."""
    x = validate_point(sf, p)
    return backend.frame(sf.r, sf.alpha, x[0], x[2])


def metric_at(sf: SpaceForm, p) -> np.ndarray:
    x = validate_point(sf, p)
    return backend.metric(sf.r, sf.alpha, x[0])


def coframe_at(sf: SpaceForm, p) -> np.ndarray:
    """Rows are the dual coframe w^1, w^2, w^3 in coordinate components."""
    return np.linalg.inv(frame_at(sf, p).T)


def frame_to_chart(sf: SpaceForm, p, v_frame) -> np.ndarray:
    """Vector with frame components v^i to chart components."""
    return frame_at(sf, p).T @ np.asarray(v_frame)


def chart_to_frame(sf: SpaceForm, p, v_chart) -> np.ndarray:
    return coframe_at(sf, p) @ np.asarray(v_chart)


def structure_constants(sf: SpaceForm) -> np.ndarray:
    """f[i,j,k] with [e_i, e_j] = sum_k f[i,j,k] e_k."""
    half = 0.5 * (sf.H + sf.eps * 3.0)
    f = np.zeros((3, 3, 3))
    f[0, 1, 2] = -half
    f[1, 0, 2] = half
    f[0, 2, 1] = half
    f[2, 0, 1] = -half
    f[1, 2, 0] = -2.0
    f[2, 1, 0] = 2.0
    return f


def connection_coeffs(sf: SpaceForm) -> np.ndarray:
    """(c1, c2, c3) of the Levi-Civita connection in the Sasakian frame."""
    c1 = 0.5 * (sf.H + sf.eps)
    return np.array([c1, sf.eps, sf.eps])


def nabla_frame_coeffs(sf: SpaceForm) -> np.ndarray:
    """N[i,j,k] with nabla_{e_i} e_j = sum_k N[i,j,k] e_k."""
    c = connection_coeffs(sf)
    return -c[:, None, None] * eps_upper(sf)


def ricci(sf: SpaceForm) -> np.ndarray:
    """Frame components of the Ricci tensor."""
    ric = (sf.H + sf.eps) * sf.eta
    ric[0, 0] += 1.0 - sf.eps * sf.H
    return ric


def scalar_curvature(sf: SpaceForm) -> float:
    return 2.0 * sf.H + 4.0 * sf.eps


def christoffels_fd(sf: SpaceForm, p) -> np.ndarray:
    """Coordinate Christoffel symbols G[m, i, j] by central differences."""
    x = validate_point(sf, p, margin=2 * FD_STEP_FIRST)
    return backend.christoffels(sf.r, sf.alpha, x[0], x[1], x[2])


def _fd_steps(x: np.ndarray, scale: float) -> np.ndarray:
    return scale * np.maximum(1.0, np.abs(x))


def directional_derivative(sf: SpaceForm, fn, j: int, p):
    """e_j applied componentwise to a chart field fn(x)."""
    x = validate_point(sf, p, margin=2 * FD_STEP_FIRST)
    e = frame_at(sf, p)[j]
    h = _fd_steps(x, FD_STEP_FIRST)
    out = None
    for mu in range(3):
        if e[mu] == 0.0:
            continue
        xp = x.copy()
        xm = x.copy()
        xp[mu] += h[mu]
        xm[mu] -= h[mu]
        term = e[mu] * (np.asarray(fn(xp)) - np.asarray(fn(xm))) / (2.0 * h[mu])
        out = term if out is None else out + term
    if out is None:
        out = np.zeros_like(np.asarray(fn(x)))
    return out


def lie_bracket_fd(sf: SpaceForm, i: int, j: int, p) -> np.ndarray:
    """[e_i, e_j] at p by finite differences, in frame components."""
    x = validate_point(sf, p, margin=2 * FD_STEP_FIRST)

    def ei(y):
        return frame_at(sf, y)[i]

    def ej(y):
        return frame_at(sf, y)[j]

    br = directional_derivative(sf, ej, i, x) - directional_derivative(sf, ei, j, x)
    return chart_to_frame(sf, x, br)


def covariant_frame_fd(sf: SpaceForm, i: int, j: int, p) -> np.ndarray:
    """nabla_{e_i} e_j at p by finite differences, in frame components."""
    x = validate_point(sf, p, margin=2 * FD_STEP_FIRST)

    def ej(y):
        return frame_at(sf, y)[j]

    partial = directional_derivative(sf, ej, i, x)
    gam = christoffels_fd(sf, x)
    ei_c = frame_at(sf, x)[i]
    ej_c = frame_at(sf, x)[j]
    correction = np.einsum("mnr,n,r->m", gam, ei_c, ej_c)
    return chart_to_frame(sf, x, partial + correction)


def riemann_fd(sf: SpaceForm, p) -> np.ndarray:
    """Coordinate curvature R[m, n, a, b] = R^m_{n a b} by nested differences."""
    x = validate_point(sf, p, margin=3 * FD_STEP_SECOND)
    h = _fd_steps(x, FD_STEP_SECOND)
    dG = []
    for mu in range(3):
        xp = x.copy()
        xm = x.copy()
        xp[mu] += h[mu]
        xm[mu] -= h[mu]
        dG.append(
            (christoffels_fd(sf, xp) - christoffels_fd(sf, xm)) / (2.0 * h[mu])
        )
    dG = np.array(dG)
    G = christoffels_fd(sf, x)
    riem = np.zeros((3, 3, 3, 3))
    for m in range(3):
        for n in range(3):
            for a in range(3):
                for b in range(3):
                    riem[m, n, a, b] = (
                        dG[a][m, b, n]
                        - dG[b][m, a, n]
                        + G[m, a, :] @ G[:, b, n]
                        - G[m, b, :] @ G[:, a, n]
                    )
    return riem


def ricci_fd_frame(sf: SpaceForm, p) -> np.ndarray:
    """FD Ricci tensor converted to frame components."""
    riem = riemann_fd(sf, p)
    ric_coord = np.einsum("mnma->na", riem)
    e = frame_at(sf, p)
    return e @ ric_coord @ e.T


# ---------------------------------------------------------------------------
# Exterior calculus on frame-component form fields
# ---------------------------------------------------------------------------
#
# A degree-k form field is a callable x -> frame components:
#   k=0 scalar, k=1 shape (3,), k=2 shape (3,3) antisymmetric with
#   F[i,j] = F(e_i, e_j), k=3 scalar coefficient of w1^w2^w3.


def _frame_form_to_coord(sf: SpaceForm, comp, degree: int, x):
    if degree == 0:
        return comp
    om = coframe_at(sf, x)
    if degree == 1:
        return np.asarray(comp) @ om
    if degree == 2:
        return om.T @ np.asarray(comp) @ om
    raise ValueError(f"unsupported degree {degree}")


def _coord_form_to_frame(sf: SpaceForm, comp, degree: int, x):
    e = frame_at(sf, x)
    if degree == 1:
        return e @ np.asarray(comp)
    if degree == 2:
        return e @ np.asarray(comp) @ e.T
    if degree == 3:
        return comp * np.linalg.det(e)
    raise ValueError(f"unsupported degree {degree}")


def ext_d(sf: SpaceForm, field, degree: int, p):
    """Exterior derivative of a frame-component form field, at p, in frame
    components of degree+1.  Central differences in chart coordinates."""
    x = validate_point(sf, p, margin=2 * FD_STEP_FIRST)
    h = _fd_steps(x, FD_STEP_FIRST)

    def coord_field(y):
        return _frame_form_to_coord(sf, field(y), degree, y)

    d = []
    for mu in range(3):
        xp = x.copy()
        xm = x.copy()
        xp[mu] += h[mu]
        xm[mu] -= h[mu]
        d.append(
            (np.asarray(coord_field(xp)) - np.asarray(coord_field(xm)))
            / (2.0 * h[mu])
        )
    if degree == 0:
        out = np.array(d)
        return _coord_form_to_frame(sf, out, 1, x)
    if degree == 1:
        out = np.array([[d[m][n] - d[n][m] for n in range(3)] for m in range(3)])
        return _coord_form_to_frame(sf, out, 2, x)
    if degree == 2:
        w123 = d[0][1, 2] - d[1][0, 2] + d[2][0, 1]
        return _coord_form_to_frame(sf, w123, 3, x)
    raise ValueError(f"unsupported degree {degree}")


def hodge(sf: SpaceForm, comp, degree: int):
    """Algebraic Hodge star on frame components, orientation eps_{123}=+1."""
    eta = sf.eta_diag
    if degree == 0:
        return float(comp)
    if degree == 1:
        u_up = np.asarray(comp) * eta
        return np.einsum("i,ijk->jk", u_up, EPS)
    if degree == 2:
        f_up = eta[:, None] * eta[None, :] * np.asarray(comp)
        return 0.5 * np.einsum("ij,ijk->k", f_up, EPS)
    if degree == 3:
        return sf.eps * comp
    raise ValueError(f"unsupported degree {degree}")


def star_d_star(sf: SpaceForm, two_form_field, p) -> np.ndarray:
    """*d* of a frame-component 2-form field, a frame 1-form at p."""

    def one_form(y):
        return hodge(sf, two_form_field(y), 2)

    d_two = ext_d(sf, one_form, 1, p)
    return hodge(sf, d_two, 2)


def contact_form_field(sf: SpaceForm):
    """The contact 1-form eta = w^1 as a frame-component field."""

    def field(_x):
        return np.array([1.0, 0.0, 0.0])

    return field


def random_points(sf: SpaceForm, n: int, seed: int = DEFAULT_SEED,
                  margin: float = CHART_MARGIN) -> np.ndarray:
    """Seeded sample of chart points away from coordinate singularities."""
    rng = np.random.default_rng(seed)
    if sf.r == 0:
        x1 = rng.uniform(margin, np.pi - margin, n)
    else:
        x1 = rng.uniform(margin, X1_MAX_LORENTZ, n)
    x2 = rng.uniform(0.0, 2.0 * np.pi, n)
    x3 = rng.uniform(0.0, 2.0 * np.pi, n)
    return np.column_stack([x1, x2, x3])
