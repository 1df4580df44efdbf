"""Real 3-vector algebra, su(2) generators and exact 2x2 unitaries.

Everything downstream works with a coefficient 3-vector v and the generator
triple J = (j1, j2, j3) obeying [j_m, j_k] = i eps_{mkl} j_l.  The shipped
representation is J = sigma/2 (largest eigenvalue c = 1/2), which satisfies
the product identity

    (a.J)(b.J) = (a.b)/4 * I + (i/2) (a x b).J

for arbitrary real 3-vectors a, b.  That identity is what makes the 2x2
matrix exponential and all closed forms below exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateVectorError, SeriesDepthError, UnphysicalStateError
from .tolerances import DEFAULT, Tolerances

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

IDENTITY_2 = np.eye(2, dtype=complex)


def as_vec3(v) -> np.ndarray:
    """Coerce to a float 3-vector."""
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,):
        raise DegenerateVectorError(f"expected a 3-vector, got shape {arr.shape}")
    return arr


def norm(v) -> float:
    return float(np.linalg.norm(as_vec3(v)))


def cross(a, b) -> np.ndarray:
    """Right-handed cross product a x b."""
    return np.cross(as_vec3(a), as_vec3(b))


def nested_cross(z, w, n: int, cap: int = 64) -> np.ndarray:
    """Apply ``z x .`` to ``w`` a total of ``n`` times.

    ``n = 0`` returns ``w`` unchanged.  Raises ``SeriesDepthError`` when
    ``n`` exceeds ``cap``; the nesting depth is capped because callers use
    this inside truncated series.
    """
    if n < 0:
        raise ValueError("nesting count must be nonnegative")
    if n > cap:
        raise SeriesDepthError(f"nesting depth {n} exceeds cap {cap}")
    z = as_vec3(z)
    out = as_vec3(w).copy()
    for _ in range(n):
        out = np.cross(z, out)
    return out


def angle_between(a, b) -> float:
    """Angle between two nonzero vectors, in [0, pi].

    The normalized dot product is clamped to [-1, 1] before the arccos so
    exactly (anti)colinear inputs cannot produce NaN.
    """
    a = as_vec3(a)
    b = as_vec3(b)
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise DegenerateVectorError("angle_between requires nonzero vectors")
    c = float(np.dot(a, b) / (na * nb))
    return float(np.arccos(np.clip(c, -1.0, 1.0)))


@dataclass(frozen=True, eq=False)
class SU2Basis:
    """A concrete su(2) generator triple with largest eigenvalue ``c``.

    The default basis is sigma/2.  Alternative (unitarily conjugated)
    representations can be injected for testing; ``validate`` checks the
    commutation relations and the eigenvalue spectrum.
    """

    j1: np.ndarray
    j2: np.ndarray
    j3: np.ndarray
    c: float = 0.5

    def generators(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.j1, self.j2, self.j3)

    def validate(self, comm_tol: float = 1e-14, eig_tol: float = 1e-12) -> None:
        gens = self.generators()
        eps = np.zeros((3, 3, 3))
        eps[0, 1, 2] = eps[1, 2, 0] = eps[2, 0, 1] = 1.0
        eps[0, 2, 1] = eps[2, 1, 0] = eps[1, 0, 2] = -1.0
        for m in range(3):
            for k in range(3):
                comm = gens[m] @ gens[k] - gens[k] @ gens[m]
                expect = 1j * sum(eps[m, k, l] * gens[l] for l in range(3))
                if np.abs(comm - expect).max() > comm_tol:
                    raise ValueError(f"commutator [j{m + 1}, j{k + 1}] violates su(2)")
            eig = np.sort(np.linalg.eigvalsh(gens[m]))
            if np.abs(eig - np.array([-self.c, self.c])).max() > eig_tol:
                raise ValueError(f"j{m + 1} eigenvalues are not +-{self.c}")


PAULI_BASIS = SU2Basis(PAULI_X / 2, PAULI_Y / 2, PAULI_Z / 2, c=0.5)


def su2_element(v, basis: SU2Basis = PAULI_BASIS) -> np.ndarray:
    """The Hermitian traceless matrix v.J = v1 j1 + v2 j2 + v3 j3."""
    v = as_vec3(v)
    return v[0] * basis.j1 + v[1] * basis.j2 + v[2] * basis.j3


def su2_exp(v, tau: float, basis: SU2Basis = PAULI_BASIS) -> np.ndarray:
    """Exact unitary exp(-i tau v.J) via the half-angle closed form.

    Since (vhat.J)^2 = I/4, the exponential collapses to

        cos(tau |v| / 2) I  -  2 i sin(tau |v| / 2) (vhat.J)

    which is unitary to machine precision for any tau.
    """
    v = as_vec3(v)
    nv = np.linalg.norm(v)
    if nv == 0.0:
        return IDENTITY_2.copy()
    half = 0.5 * tau * nv
    return np.cos(half) * IDENTITY_2 - 2j * np.sin(half) * su2_element(v / nv, basis)


def density(r, basis: SU2Basis = PAULI_BASIS, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Qubit density matrix I/2 + r.J for a Bloch vector r, |r| <= 1."""
    r = as_vec3(r)
    if np.linalg.norm(r) > 1.0 + tol.bloch_norm_slack:
        raise UnphysicalStateError(f"Bloch vector norm {np.linalg.norm(r)} exceeds 1")
    return IDENTITY_2 / 2 + su2_element(r, basis)


def purity(r) -> float:
    """Tr[rho^2] of the Bloch state: (1 + |r|^2) / 2."""
    return (1.0 + norm(r) ** 2) / 2.0
