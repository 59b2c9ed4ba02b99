"""Gamma matrices, Clifford action, the Spin-invariant bilinear form,
Dirac currents, and spinor-bilinear two-forms.

Spinors are length-2 complex arrays.  The signature enters through
gamma_1 = (-i)^(r-1) sigma_1; gamma_2 = i sigma_2 and gamma_3 = i sigma_3
for both signatures.  Index raising uses the frame metric diag((-1)^r,1,1)
and eps_{123} = +1 throughout.
"""

import numpy as np

from .geometry import EPS, SpaceForm

SIGMA = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

_I = 1j


def gammas(r: int) -> np.ndarray:
    """The three gamma matrices for signature flag r, shape (3, 2, 2)."""
    g1 = (-_I) ** (r - 1) * SIGMA[0]
    return np.array([g1, _I * SIGMA[1], _I * SIGMA[2]])


def clifford(x_frame, psi, r: int) -> np.ndarray:
    """Clifford action X . psi = sum_i X^i gamma_i psi (frame components)."""
    g = gammas(r)
    x = np.asarray(x_frame)
    return (x[0] * g[0] + x[1] * g[1] + x[2] * g[2]) @ np.asarray(psi)


def bilinear(psi1, psi2, r: int) -> complex:
    """Spin-invariant form psi1^dagger (gamma_1)^r psi2."""
    p1 = np.asarray(psi1, dtype=complex)
    p2 = np.asarray(psi2, dtype=complex)
    if r == 0:
        return complex(np.vdot(p1, p2))
    return complex(np.vdot(p1, gammas(1)[0] @ p2))


def _eta_diag(r: int) -> np.ndarray:
    return np.array([1.0 - 2.0 * r, 1.0, 1.0])


def dirac_current(psi1, psi2=None, r: int = 0):
    """Frame components J^i = (-i)^(r-1) <psi1, gamma^i psi2>.

    With a single spinor argument returns the (real) Dirac current of psi;
    with two distinct spinors returns the complex mixed current.
    """
    self_current = psi2 is None
    if self_current:
        psi2 = psi1
    g = gammas(r)
    eta = _eta_diag(r)
    pref = (-_I) ** (r - 1)
    j = np.array(
        [pref * eta[i] * bilinear(psi1, g[i] @ np.asarray(psi2), r) for i in range(3)]
    )
    if self_current:
        return j.real
    return j


def commutators(r: int) -> np.ndarray:
    """[gamma_i, gamma_j], shape (3, 3, 2, 2)."""
    g = gammas(r)
    return np.array([[g[i] @ g[j] - g[j] @ g[i] for j in range(3)] for i in range(3)])


def bilinear_two_form(psi1, psi2, r: int) -> np.ndarray:
    """Frame components F[i,j] = i <psi1, [gamma_i, gamma_j] psi2>."""
    comm = commutators(r)
    return np.array(
        [
            [_I * bilinear(psi1, comm[i, j] @ np.asarray(psi2), r) for j in range(3)]
            for i in range(3)
        ]
    )


def bilinear_two_form_reduced(psi1, psi2, r: int) -> np.ndarray:
    """Reduction F[i,j] = 2 (-i)^(r+1) eps_{ij}^k <psi1, gamma_k psi2>."""
    g = gammas(r)
    eta = _eta_diag(r)
    scal = np.array([bilinear(psi1, g[k] @ np.asarray(psi2), r) for k in range(3)])
    eps_up = EPS * eta[None, None, :]
    return 2.0 * (-_I) ** (r + 1) * np.einsum("ijk,k->ij", eps_up, scal)


def contact_maxwell(B: float = 1.0) -> np.ndarray:
    """Frame components of F = 2B w^2 ^ w^3 (F = B d eta)."""
    f = np.zeros((3, 3))
    f[1, 2] = 2.0 * B
    f[2, 1] = -2.0 * B
    return f


def flat(sf: SpaceForm, v_frame) -> np.ndarray:
    """Lower the index of a frame vector with the frame metric."""
    return sf.eta_diag * np.asarray(v_frame)


def sharp(sf: SpaceForm, u_frame) -> np.ndarray:
    """Raise the index of a frame 1-form with the frame metric."""
    return sf.eta_diag * np.asarray(u_frame)
