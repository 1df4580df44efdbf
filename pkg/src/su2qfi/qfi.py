"""Quantum Fisher information from generator decompositions.

For a pure qubit probe with Bloch vector r and generator H = |Y| e.J, the
per-parameter information is |Y|^2 (1 - (e.r)^2) and the full matrix entry is
|Y_a||Y_b| (e_a.e_b - (e_a.r)(e_b.r)).  The per-parameter maximum |Y|^2 is
bounded by T^2 |dX|^2 and reaches that ceiling exactly in the controlled
|X + X_c| -> 0 limit.  Attainability of all maxima at once is governed by the
weak commutation residuals Tr[[H_a, H_b] rho]; a maximally entangled probe
plus an idle ancilla makes every residual vanish and the ceiling
unconditional.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra
from .algebra import PAULI_BASIS, SU2Basis, as_vec3
from .errors import DimensionalityError, NormalizationError, UnphysicalStateError
from .generators import GeneratorDecomposition, ZERO_FIELD, closed_form_generator
from .scheme import SchemeConfig
from .tolerances import DEFAULT, Tolerances

PURE_QUBIT = "pure_qubit"
ENTANGLED_WITH_ANCILLA = "entangled_with_ancilla"

# canonical maximally entangled two-qubit probe (|00> + |11>) / sqrt(2)
BELL_PHI_PLUS = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2.0)


def _check_bloch(r, tol: Tolerances) -> np.ndarray:
    r = as_vec3(r)
    if np.linalg.norm(r) > 1.0 + tol.bloch_norm_slack:
        raise UnphysicalStateError(f"Bloch vector norm {np.linalg.norm(r)} exceeds 1")
    return r


def qfi_pure(gen: GeneratorDecomposition, r, tol: Tolerances = DEFAULT) -> float:
    """QFI of one parameter for a pure qubit probe: |Y|^2 (1 - (e.r)^2)."""
    r = _check_bloch(r, tol)
    proj = float(np.dot(gen.direction, r))
    return gen.magnitude**2 * (1.0 - proj**2)


def qfim_pure(gens, r, tol: Tolerances = DEFAULT) -> np.ndarray:
    """QFI matrix for a pure qubit probe.

    Entry (a, b) is |Y_a||Y_b| (e_a.e_b - (e_a.r)(e_b.r)); the diagonal
    reduces to ``qfi_pure``.
    """
    r = _check_bloch(r, tol)
    vecs = [g.coefficient_vector() for g in gens]
    d = len(vecs)
    out = np.zeros((d, d))
    projs = [float(np.dot(v, r)) for v in vecs]
    for a in range(d):
        for b in range(a, d):
            val = float(np.dot(vecs[a], vecs[b])) - projs[a] * projs[b]
            out[a, b] = out[b, a] = val
    return out


def qfi_max_from_angle(x_norm: float, dx_norm: float, alpha: float, total_time: float) -> float:
    """Maximal QFI given |X|, |dX|, their angle and the total time.

    Evaluated as T^2 |dX|^2 [cos^2(a) + sin^2(a) sinc^2(T|X|/2)], which is
    exact for |X| > 0 and continuous at |X| = 0 where it reaches the ceiling
    T^2 |dX|^2.
    """
    z_half = total_time * x_norm / 2.0
    sinc = np.sinc(z_half / np.pi)  # sin(z_half)/z_half, exactly 1 at 0
    return float(
        total_time**2 * dx_norm**2 * (np.cos(alpha) ** 2 + np.sin(alpha) ** 2 * sinc**2)
    )


def qfi_max(x_coeff, d_coeff, total_time: float, tol: Tolerances = DEFAULT) -> float:
    """Maximal QFI of a parameter without control.

    Returns T^2 |dX|^2 cos^2(a) + (4 |dX|^2 sin^2(a) / |X|^2) sin^2(T|X|/2);
    the |X| -> 0 limit T^2 |dX|^2 is handled exactly.
    """
    if total_time < 0:
        raise ValueError("total_time must be nonnegative")
    x_coeff = as_vec3(x_coeff)
    d_coeff = as_vec3(d_coeff)
    nx = float(np.linalg.norm(x_coeff))
    nd = float(np.linalg.norm(d_coeff))
    if nd == 0.0:
        return 0.0
    if nx < tol.degenerate:
        return total_time**2 * nd**2
    alpha = algebra.angle_between(x_coeff, d_coeff)
    return qfi_max_from_angle(nx, nd, alpha, total_time)


def qfi_max_controlled(s_coeff, d_coeff, total_time: float, tol: Tolerances = DEFAULT) -> float:
    """Maximal QFI with the control folded in: same form with S = X + X_c.

    As |S| -> 0 this attains the ceiling T^2 |dX|^2 for every geometry.
    """
    return qfi_max(s_coeff, d_coeff, total_time, tol)


def weak_comm_residual(
    gen_a: GeneratorDecomposition, gen_b: GeneratorDecomposition, r, tol: Tolerances = DEFAULT
) -> complex:
    """Tr[[H_a, H_b] rho] for a qubit probe: (i/2) |Y_a||Y_b| (e_a x e_b).r.

    Purely imaginary; zero exactly when the cross of the generator axes is
    orthogonal to the Bloch vector.
    """
    r = _check_bloch(r, tol)
    va = gen_a.coefficient_vector()
    vb = gen_b.coefficient_vector()
    return 0.5j * float(np.dot(np.cross(va, vb), r))


def entangled_qfi(gen: GeneratorDecomposition) -> float:
    """QFI with a maximally entangled probe and idle ancilla: |Y|^2, always.

    The reduced probe state is I/2, so the direction e drops out entirely and
    the maximum is attained unconditionally.
    """
    return gen.magnitude**2


def entangled_weak_comm(
    gen_a: GeneratorDecomposition,
    gen_b: GeneratorDecomposition,
    probe: np.ndarray,
    basis: SU2Basis = PAULI_BASIS,
    norm_tol: float = 1e-9,
) -> complex:
    """Weak-commutation trace on an explicit two-qubit probe.

    The generators act as H (x) I on the 4-dimensional probe.  For any probe
    whose reduced state is I/2 (maximal entanglement) the result is zero for
    every generator pair; product probes generically give a nonzero value.
    """
    probe = np.asarray(probe, dtype=complex).reshape(-1)
    if probe.shape != (4,):
        raise DimensionalityError("probe must be a 4-dimensional state vector")
    if abs(np.linalg.norm(probe) - 1.0) > norm_tol:
        raise NormalizationError(f"probe norm {np.linalg.norm(probe)} is not 1")
    eye = np.eye(2, dtype=complex)
    ha = np.kron(gen_a.to_matrix(basis), eye)
    hb = np.kron(gen_b.to_matrix(basis), eye)
    rho = np.outer(probe, probe.conj())
    return complex(np.trace((ha @ hb - hb @ ha) @ rho))


@dataclass(frozen=True, eq=False)
class QfimReport:
    """Everything one run of the estimation analysis produces.

    ``weak_comm_residuals`` holds the magnitudes |Tr[[H_a, H_b] rho]|;
    ``precision_bounds`` is the single-shot standard-deviation floor per
    parameter (infinite where the information vanishes); ``attainable``
    states whether all per-parameter maxima and all residual conditions are
    met simultaneously.
    """

    qfim: np.ndarray
    qfi_max: np.ndarray
    weak_comm_residuals: np.ndarray
    precision_bounds: np.ndarray
    attainable: bool
    probe_kind: str
    parameter_names: tuple = ()

    def to_dict(self) -> dict:
        return {
            "qfim": [[float(v) for v in row] for row in self.qfim],
            "qfi_max": [float(v) for v in self.qfi_max],
            "weak_comm_residuals": [[float(v) for v in row] for row in self.weak_comm_residuals],
            "precision_bounds": [float(v) for v in self.precision_bounds],
            "attainable": bool(self.attainable),
            "probe_kind": self.probe_kind,
            "parameter_names": list(self.parameter_names),
        }


def _null_generator() -> GeneratorDecomposition:
    return GeneratorDecomposition(0.0, np.zeros(3), ZERO_FIELD)


def scheme_generators(
    scheme: SchemeConfig, x, tol: Tolerances = DEFAULT
) -> list[GeneratorDecomposition]:
    """Closed-form generator of every parameter at the point ``x``.

    The control enters through S = X + X_c.  Parameters whose partial
    vanishes at ``x`` (for example the azimuth at a pole) get a null
    generator: zero magnitude, zero information.
    """
    s_coeff = scheme.effective_coefficients(x)
    partials = scheme.partials_at(x)
    gens = []
    for d_coeff in partials:
        if np.linalg.norm(d_coeff) == 0.0:
            gens.append(_null_generator())
        else:
            gens.append(closed_form_generator(s_coeff, d_coeff, scheme.total_time, tol))
    return gens


def _precision_bounds(qfim: np.ndarray, tol: Tolerances) -> np.ndarray:
    d = qfim.shape[0]
    diag = np.diag(qfim).copy()
    off = qfim - np.diag(diag)
    scale = max(1.0, float(np.abs(diag).max())) if d else 1.0
    if d == 1 or np.abs(off).max() <= tol.attainability * scale:
        with np.errstate(divide="ignore"):
            return np.where(diag > 0.0, 1.0 / np.sqrt(np.maximum(diag, 0.0)), np.inf)
    inv = np.linalg.pinv(qfim)
    inv_diag = np.diag(inv)
    with np.errstate(divide="ignore"):
        return np.where(inv_diag > 0.0, np.sqrt(inv_diag), np.inf)


def build_report(
    scheme: SchemeConfig,
    x,
    probe_kind: str,
    r=None,
    tol: Tolerances = DEFAULT,
    parameter_names: tuple = (),
) -> QfimReport:
    """Assemble the QFIM, maxima, residuals, bounds and attainability verdict.

    A pure qubit probe needs a unit Bloch vector ``r``; its verdict requires
    every residual below tolerance and every diagonal entry at its maximum.
    The entangled probe needs no ``r``: its reduced state is I/2, every
    residual vanishes and the verdict is attainable by construction.

    The closed forms evaluated here assume merged-exponential composition;
    for a product-mode scheme they describe the small-t limit, and the
    finite-difference oracles quantify the gap.
    """
    if scheme.n_params > 3:
        raise DimensionalityError(
            f"{scheme.n_params} parameters requested; an su(2) coefficient vector encodes at most 3"
        )
    gens = scheme_generators(scheme, x, tol)
    s_coeff = scheme.effective_coefficients(x)
    partials = scheme.partials_at(x)
    total_time = scheme.total_time
    maxima = np.array(
        [qfi_max_controlled(s_coeff, d, total_time, tol) for d in partials]
    )
    d = scheme.n_params

    if probe_kind == PURE_QUBIT:
        if r is None:
            raise UnphysicalStateError("a pure qubit probe requires a Bloch vector r")
        r = _check_bloch(r, tol)
        if abs(np.linalg.norm(r) - 1.0) > tol.purity:
            raise UnphysicalStateError(
                "pure-probe analysis requires |r| = 1; the variance formula is "
                "not the QFI for mixed probes"
            )
        qfim = qfim_pure(gens, r, tol)
        residuals = np.zeros((d, d))
        for a in range(d):
            for b in range(d):
                if a != b:
                    residuals[a, b] = abs(weak_comm_residual(gens[a], gens[b], r, tol))
    elif probe_kind == ENTANGLED_WITH_ANCILLA:
        qfim = qfim_pure(gens, np.zeros(3), tol)
        residuals = np.zeros((d, d))
        for a in range(d):
            for b in range(d):
                if a != b:
                    residuals[a, b] = abs(
                        entangled_weak_comm(gens[a], gens[b], BELL_PHI_PLUS)
                    )
    else:
        raise ValueError(f"unknown probe kind {probe_kind!r}")

    diag = np.diag(qfim)
    attainable = bool(
        residuals.max(initial=0.0) <= tol.attainability
        and np.all(diag >= maxima - tol.attainability)
    )
    bounds = _precision_bounds(qfim, tol)
    return QfimReport(
        qfim=qfim,
        qfi_max=maxima,
        weak_comm_residuals=residuals,
        precision_bounds=bounds,
        attainable=attainable,
        probe_kind=probe_kind,
        parameter_names=tuple(parameter_names),
    )
