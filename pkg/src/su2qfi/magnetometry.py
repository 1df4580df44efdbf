"""Spin-1/2 magnetometry: estimating a static field's magnitude and direction.

The Hamiltonian is H = B n0.sigma = 2B n0.J with the field axis
n0 = (sin(theta) cos(phi), sin(theta) sin(phi), cos(theta)).  The coefficient
vector and its partials are

    X = 2B n0,   dX/dB = 2 n0,   dX/dtheta = 2B n0',   dX/dphi = 2B n0'',

where n0' is the colatitude tangent and n0'' = sin(theta) m the azimuth
tangent.  B is the colinear parameter (angle 0 between X and its partial):
control cannot improve it.  theta and phi sit at angle pi/2: with the
negating control their information grows like T^2 instead of oscillating.

All closed forms in this module are specializations of the generic
generator/QFI machinery and are cross-checked against it in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra
from .errors import UnphysicalStateError
from .generators import COLINEAR, REGULAR, ZERO_FIELD, GeneratorDecomposition
from .oracles import qfim_trace_oracle
from .scheme import MERGED, SchemeConfig
from .tolerances import DEFAULT, Tolerances

PARAMETER_NAMES = ("B", "theta", "phi")


@dataclass(frozen=True)
class FieldPoint:
    """Magnitude and direction of the static field."""

    B: float
    theta: float
    phi: float

    def __post_init__(self):
        if not self.B > 0:
            raise UnphysicalStateError("field magnitude B must be positive")
        if not 0.0 <= self.theta <= np.pi:
            raise UnphysicalStateError("theta must lie in [0, pi]")
        if not 0.0 <= self.phi < 2.0 * np.pi:
            raise UnphysicalStateError("phi must lie in [0, 2*pi)")

    def as_array(self) -> np.ndarray:
        return np.array([self.B, self.theta, self.phi])


def field_axes(p: FieldPoint) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(n0, n0', n0'') - the field axis and its two angular tangents.

    n0 and n0' are unit vectors; |n0''| = sin(theta), vanishing at the poles
    where the azimuth is unidentifiable.
    """
    st, ct = np.sin(p.theta), np.cos(p.theta)
    sp, cp = np.sin(p.phi), np.cos(p.phi)
    n0 = np.array([st * cp, st * sp, ct])
    n0_theta = np.array([ct * cp, ct * sp, -st])
    n0_phi = np.array([-st * sp, st * cp, 0.0])
    return n0, n0_theta, n0_phi


def _azimuth_unit(p: FieldPoint) -> np.ndarray:
    """Unit azimuth tangent m = n0''/sin(theta), finite at the poles."""
    return np.array([-np.sin(p.phi), np.cos(p.phi), 0.0])


def field_coefficients(p: FieldPoint) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(X, dX/dB, dX/dtheta, dX/dphi) at the field point."""
    n0, n0_theta, n0_phi = field_axes(p)
    return 2.0 * p.B * n0, 2.0 * n0, 2.0 * p.B * n0_theta, 2.0 * p.B * n0_phi


def _coefficients(x: np.ndarray) -> np.ndarray:
    b, theta, phi = x
    st, ct = np.sin(theta), np.cos(theta)
    return 2.0 * b * np.array([st * np.cos(phi), st * np.sin(phi), ct])


def _partials(x: np.ndarray) -> np.ndarray:
    b, theta, phi = x
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    n0 = np.array([st * cp, st * sp, ct])
    n0_theta = np.array([ct * cp, ct * sp, -st])
    n0_phi = np.array([-st * sp, st * cp, 0.0])
    return np.vstack([2.0 * n0, 2.0 * b * n0_theta, 2.0 * b * n0_phi])


def magnetometry_scheme(
    p: FieldPoint,
    segment_time: float = 1.0,
    segment_count: int = 1,
    control: str | np.ndarray = "none",
    x_tilde=None,
    mode: str = MERGED,
) -> SchemeConfig:
    """Sequential scheme for the (B, theta, phi) estimation problem.

    ``control`` is ``"none"``, ``"optimal"`` (negate the coefficients at
    ``x_tilde``, default the field point itself), or an explicit 3-vector.
    """
    if isinstance(control, str):
        if control == "none":
            control_vec = np.zeros(3)
        elif control == "optimal":
            est = p.as_array() if x_tilde is None else np.asarray(x_tilde, dtype=float)
            control_vec = -_coefficients(est)
        else:
            raise ValueError(f"unknown control kind {control!r}")
    else:
        control_vec = np.asarray(control, dtype=float)
    return SchemeConfig(
        coefficients=_coefficients,
        partials=_partials,
        n_params=3,
        control=control_vec,
        segment_time=segment_time,
        segment_count=segment_count,
        mode=mode,
        validation_points=(p.as_array(),),
    )


def _decompose(vec: np.ndarray, fallback: np.ndarray, flag: str) -> GeneratorDecomposition:
    mag = float(np.linalg.norm(vec))
    direction = vec / mag if mag > 0.0 else fallback
    return GeneratorDecomposition(mag, direction, flag)


def generators_no_control(
    p: FieldPoint, total_time: float
) -> tuple[GeneratorDecomposition, GeneratorDecomposition, GeneratorDecomposition]:
    """Closed-form generators for B, theta, phi with no control applied.

    Magnitudes are (2T, 2|sin(BT)|, 2|sin(BT)| sin(theta)); the angular
    directions rotate with BT in the plane spanned by the two tangents.
    """
    n0, n0_theta, _ = field_axes(p)
    m = _azimuth_unit(p)
    bt = p.B * total_time
    cbt, sbt = np.cos(bt), np.sin(bt)
    st = np.sin(p.theta)
    vec_b = -2.0 * total_time * n0
    vec_theta = 2.0 * sbt * (-cbt * n0_theta + sbt * m)
    vec_phi = 2.0 * st * sbt * (-cbt * m - sbt * n0_theta)
    gen_b = _decompose(vec_b, -n0, COLINEAR)
    gen_theta = _decompose(vec_theta, -np.sign(cbt) * n0_theta if cbt != 0 else -n0_theta, REGULAR)
    gen_phi = _decompose(vec_phi, -np.sign(cbt) * m if cbt != 0 else -m, REGULAR)
    return gen_b, gen_theta, gen_phi


def generators_controlled(
    p: FieldPoint, total_time: float
) -> tuple[GeneratorDecomposition, GeneratorDecomposition, GeneratorDecomposition]:
    """Generators under the optimal negating control: -T dX for each parameter."""
    n0, n0_theta, n0_phi = field_axes(p)
    m = _azimuth_unit(p)
    gen_b = _decompose(-2.0 * total_time * n0, -n0, ZERO_FIELD)
    gen_theta = _decompose(-2.0 * total_time * p.B * n0_theta, -n0_theta, ZERO_FIELD)
    gen_phi = _decompose(-2.0 * total_time * p.B * n0_phi, -m, ZERO_FIELD)
    return gen_b, gen_theta, gen_phi


def qfim_no_control(p: FieldPoint, total_time: float) -> np.ndarray:
    """Optimal QFIM without control: diag(4T^2, 4 sin^2(BT), 4 sin^2(BT) sin^2(theta)).

    The angular entries oscillate with BT and stay bounded no matter how long
    the evolution runs.
    """
    bt = p.B * total_time
    osc = 4.0 * np.sin(bt) ** 2
    return np.diag([4.0 * total_time**2, osc, osc * np.sin(p.theta) ** 2])


def qfim_controlled(p: FieldPoint, total_time: float) -> np.ndarray:
    """Optimal QFIM with negating control: diag(4T^2, 4(BT)^2, 4(BT)^2 sin^2(theta)).

    The B entry is unchanged by the control; the angular entries trade their
    oscillation for quadratic growth in T.
    """
    bt2 = 4.0 * (p.B * total_time) ** 2
    return np.diag([4.0 * total_time**2, bt2, bt2 * np.sin(p.theta) ** 2])


@dataclass(frozen=True)
class PairResiduals:
    """Weak-commutation traces for the three parameter pairs."""

    b_theta: complex
    b_phi: complex
    theta_phi: complex

    def as_tuple(self) -> tuple[complex, complex, complex]:
        return (self.b_theta, self.b_phi, self.theta_phi)


def weak_comm_example(
    p: FieldPoint, total_time: float, r, controlled: bool = False, tol: Tolerances = DEFAULT
) -> PairResiduals:
    """Closed-form weak-commutation residuals for the three pairs.

    Without control the residuals project r onto the rotating generator axes;
    with control they project r onto the fixed frame (n0, n0', m).  Both sets
    vanish only where r is orthogonal to the respective axis, which cannot
    hold for all three at once with a unit r.
    """
    r = algebra.as_vec3(r)
    if np.linalg.norm(r) > 1.0 + tol.bloch_norm_slack:
        raise UnphysicalStateError("Bloch vector norm exceeds 1")
    n0, n0_theta, _ = field_axes(p)
    m = _azimuth_unit(p)
    st = np.sin(p.theta)
    if controlled:
        b = p.B
        t2 = total_time**2
        return PairResiduals(
            b_theta=2j * t2 * b * float(np.dot(m, r)),
            b_phi=-2j * t2 * b * st * float(np.dot(n0_theta, r)),
            theta_phi=2j * t2 * b**2 * st * float(np.dot(n0, r)),
        )
    bt = p.B * total_time
    cbt, sbt = np.cos(bt), np.sin(bt)
    e_b = -n0
    e_theta = -cbt * n0_theta + sbt * m
    e_phi = -cbt * m - sbt * n0_theta
    t = total_time
    return PairResiduals(
        b_theta=-2j * t * sbt * float(np.dot(e_phi, r)),
        b_phi=2j * t * st * sbt * float(np.dot(e_theta, r)),
        theta_phi=-2j * st * sbt**2 * float(np.dot(e_b, r)),
    )


@dataclass(frozen=True)
class CurveRow:
    """One point of a precision-versus-time curve."""

    n_segments: int
    total_time: float
    delta_b: float
    delta_theta: float
    delta_phi: float
    attainable: bool


def _deviation(info: float) -> float:
    return 1.0 / np.sqrt(info) if info > 0.0 else np.inf


def precision_curves(
    p: FieldPoint,
    segment_time: float,
    n_max: int,
    controlled: bool,
    probe: str = "entangled",
) -> list[CurveRow]:
    """Best single-shot standard deviations against segment count.

    Deviations are 1/sqrt of the optimal QFIM diagonal; entries with zero
    information (oscillation nulls, azimuth at a pole) are reported as
    infinite rather than raising.  Rows from the entangled probe are
    simultaneously attainable; pure-qubit rows are not.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if probe not in ("pure", "entangled"):
        raise ValueError(f"unknown probe kind {probe!r}")
    attainable = probe == "entangled"
    rows = []
    for n in range(1, n_max + 1):
        total_time = n * segment_time
        qfim = qfim_controlled(p, total_time) if controlled else qfim_no_control(p, total_time)
        diag = np.diag(qfim)
        rows.append(
            CurveRow(
                n_segments=n,
                total_time=total_time,
                delta_b=_deviation(diag[0]),
                delta_theta=_deviation(diag[1]),
                delta_phi=_deviation(diag[2]),
                attainable=attainable,
            )
        )
    return rows


def orthogonality_frame(
    p: FieldPoint, total_time: float, controlled: bool
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three axes a Bloch vector must be orthogonal to for zero covariances."""
    if controlled:
        n0, n0_theta, _ = field_axes(p)
        return n0, n0_theta, _azimuth_unit(p)
    gens = generators_no_control(p, total_time)
    return tuple(g.direction for g in gens)


def off_diagonal_check(
    p: FieldPoint,
    total_time: float,
    r,
    controlled: bool = False,
    project: bool = False,
    tol: Tolerances = DEFAULT,
) -> PairResiduals:
    """Off-diagonal QFIM entries 4 Cov(H_a, H_b), by the matrix-trace oracle.

    All three vanish when r is orthogonal to the frame returned by
    ``orthogonality_frame`` (with a unit r that forces r = 0); for other r
    the generically nonzero values are returned for inspection.  With
    ``project=True`` the frame components of r are removed first, which
    enforces the orthogonality assumption directly.
    """
    r = algebra.as_vec3(r)
    if np.linalg.norm(r) > 1.0 + tol.bloch_norm_slack:
        raise UnphysicalStateError("Bloch vector norm exceeds 1")
    if project:
        for axis in orthogonality_frame(p, total_time, controlled):
            nrm = np.linalg.norm(axis)
            if nrm > 0.0:
                unit = axis / nrm
                r = r - np.dot(unit, r) * unit
    gens = (
        generators_controlled(p, total_time) if controlled else generators_no_control(p, total_time)
    )
    mats = [g.to_matrix() for g in gens]
    rho = algebra.density(r)
    full = qfim_trace_oracle(mats, rho)
    return PairResiduals(
        b_theta=float(full[0, 1]), b_phi=float(full[0, 2]), theta_phi=float(full[1, 2])
    )
