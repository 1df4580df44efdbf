"""Sequential estimation schemes and their control design.

A scheme is N repetitions of a parameter-encoding unitary exp(-i t X(x).J)
followed by a fixed control unitary exp(-i t X_c.J).  Two compositions are
supported: the merged single exponential exp(-i N t (X + X_c).J), which all
closed forms assume, and the literal segment product, kept around to measure
the small-t approximation error between the two.

The control vector X_c is a frozen constant under differentiation: it is
built from a prior estimate of the parameters, never from the true point.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from . import algebra
from .algebra import SU2Basis, PAULI_BASIS, as_vec3
from .errors import DegenerateVectorError

MERGED = "merged"
PRODUCT = "product"

_ZERO3 = np.zeros(3)


@dataclass(frozen=True, eq=False)
class SchemeConfig:
    """Full description of a sequential estimation scheme.

    ``coefficients`` maps a parameter point (shape ``(d,)``) to the
    coefficient 3-vector X(x); ``partials`` returns the ``(d, 3)`` array of
    analytic partial derivatives of X.  When ``validation_points`` is
    nonempty the supplied partials are checked against central finite
    differences of ``coefficients`` at construction.
    """

    coefficients: Callable[[np.ndarray], np.ndarray]
    partials: Callable[[np.ndarray], np.ndarray]
    n_params: int
    control: np.ndarray = field(default_factory=lambda: _ZERO3.copy())
    segment_time: float = 1.0
    segment_count: int = 1
    mode: str = MERGED
    validation_points: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "control", as_vec3(self.control))
        if self.n_params < 1:
            raise ValueError("a scheme needs at least one parameter")
        if self.segment_time <= 0:
            raise ValueError("segment_time must be positive")
        if self.segment_count < 1:
            raise ValueError("segment_count must be a positive integer")
        if self.mode not in (MERGED, PRODUCT):
            raise ValueError(f"unknown composition mode {self.mode!r}")
        for point in self.validation_points:
            self._check_partials_at(np.atleast_1d(np.asarray(point, dtype=float)))

    def _check_partials_at(self, x: np.ndarray, h: float = 1e-6, rtol: float = 1e-6):
        exact = np.asarray(self.partials(x), dtype=float).reshape(self.n_params, 3)
        for ell in range(self.n_params):
            xp = x.copy()
            xm = x.copy()
            xp[ell] += h
            xm[ell] -= h
            fd = (as_vec3(self.coefficients(xp)) - as_vec3(self.coefficients(xm))) / (2 * h)
            scale = max(1.0, float(np.linalg.norm(exact[ell])))
            if np.linalg.norm(fd - exact[ell]) > rtol * scale:
                raise ValueError(
                    f"analytic partial {ell} disagrees with finite differences at {x}"
                )

    @property
    def total_time(self) -> float:
        return self.segment_count * self.segment_time

    def coefficients_at(self, x) -> np.ndarray:
        return as_vec3(self.coefficients(np.atleast_1d(np.asarray(x, dtype=float))))

    def partials_at(self, x) -> np.ndarray:
        out = np.asarray(self.partials(np.atleast_1d(np.asarray(x, dtype=float))), dtype=float)
        return out.reshape(self.n_params, 3)

    def effective_coefficients(self, x) -> np.ndarray:
        """S(x) = X(x) + X_c, the per-segment generator coefficients."""
        return self.coefficients_at(x) + self.control


def build_total_unitary(scheme: SchemeConfig, x, basis: SU2Basis = PAULI_BASIS) -> np.ndarray:
    """Total unitary of the scheme at parameter point ``x``.

    Merged mode returns exp(-i N t (X + X_c).J); product mode multiplies the
    N control/encoding segment pairs explicitly (control acts after the
    encoding within each segment).
    """
    coeff = scheme.coefficients_at(x)
    if scheme.mode == MERGED:
        return algebra.su2_exp(coeff + scheme.control, scheme.total_time, basis)
    segment = algebra.su2_exp(scheme.control, scheme.segment_time, basis) @ algebra.su2_exp(
        coeff, scheme.segment_time, basis
    )
    return np.linalg.matrix_power(segment, scheme.segment_count)


@dataclass(frozen=True, eq=False)
class ControlDesign:
    """A chosen control vector together with how it was derived."""

    control_vector: np.ndarray
    estimate_point: np.ndarray | None
    kind: str  # "none" | "optimal_negation" | "custom"


def design_control(scheme: SchemeConfig, x_tilde) -> ControlDesign:
    """Optimal control for the scheme: negate the coefficients at the estimate.

    Holding X_c = -X(x_tilde) cancels the per-segment generator at the
    estimated point, which pushes every parameter's maximal information to
    its quadratic-in-time ceiling.
    """
    x_tilde = np.atleast_1d(np.asarray(x_tilde, dtype=float))
    return ControlDesign(
        control_vector=-scheme.coefficients_at(x_tilde),
        estimate_point=x_tilde,
        kind="optimal_negation",
    )


def apply_control(scheme: SchemeConfig, design: ControlDesign) -> SchemeConfig:
    return replace(scheme, control=design.control_vector)


def characterize(x_coeff, d_coeffs: Sequence) -> list[float]:
    """Effectiveness angle of each parameter: angle(X, dX_ell).

    pi/2 means the control benefit is maximal, 0 or pi means the control
    cannot improve that parameter at all.
    """
    x_coeff = as_vec3(x_coeff)
    if np.linalg.norm(x_coeff) == 0.0:
        raise DegenerateVectorError("characterize requires a nonzero coefficient vector")
    return [algebra.angle_between(x_coeff, d) for d in d_coeffs]


@dataclass(frozen=True)
class EffectivenessRecord:
    """Per-parameter control effectiveness, classified by the angle alpha."""

    alpha: float
    beta: float
    uncontrolled_max: float
    controlled_max: float
    gap: float
    benefit: str  # "max_benefit" | "partial_benefit" | "no_benefit"


_ANGLE_CLASS_TOL = 1e-9


def classify_benefit(alpha: float) -> str:
    if min(abs(alpha), abs(np.pi - alpha)) <= _ANGLE_CLASS_TOL:
        return "no_benefit"
    if abs(alpha - np.pi / 2) <= _ANGLE_CLASS_TOL:
        return "max_benefit"
    return "partial_benefit"


def effectiveness_profile(scheme: SchemeConfig, x) -> list[EffectivenessRecord]:
    """Classify every parameter of the scheme at the point ``x``."""
    from .qfi import qfi_max, qfi_max_controlled  # deferred: qfi imports this module

    x_coeff = scheme.coefficients_at(x)
    s_coeff = scheme.effective_coefficients(x)
    d_coeffs = scheme.partials_at(x)
    total_time = scheme.total_time
    records = []
    for d in d_coeffs:
        alpha = algebra.angle_between(x_coeff, d)
        # at |S| = 0 the angle to S is undefined and immaterial: the
        # controlled maximum hits the ceiling for every geometry
        beta = (
            algebra.angle_between(s_coeff, d)
            if np.linalg.norm(s_coeff) > 0
            else alpha
        )
        unc = qfi_max(x_coeff, d, total_time)
        con = qfi_max_controlled(s_coeff, d, total_time)
        records.append(
            EffectivenessRecord(
                alpha=alpha,
                beta=beta,
                uncontrolled_max=unc,
                controlled_max=con,
                gap=con - unc,
                benefit=classify_benefit(alpha),
            )
        )
    return records


@dataclass(frozen=True)
class GapRow:
    """One point of the control-benefit landscape."""

    n_segments: int
    alpha: float
    uncontrolled_max: float
    controlled_limit: float
    gap: float


def gap_profile(
    n_values: Sequence[int] = (3, 5, 10),
    alpha_grid: Sequence[float] | None = None,
    t: float = 1.0,
    x_norm: float = 2.0,
    dx_norm: float = 1.0,
) -> list[GapRow]:
    """Tabulate uncontrolled maxima against the controlled ceiling.

    Rows are ordered segment-count-major, then by ascending alpha.  The
    defaults match the landscape used throughout the tests: t = 1, |X| = 2,
    |dX| = 1, N in {3, 5, 10}.
    """
    from .qfi import qfi_max_from_angle

    if alpha_grid is None:
        alpha_grid = np.linspace(0.0, np.pi, 65)
    if len(n_values) == 0 or len(alpha_grid) == 0:
        raise ValueError("gap_profile requires nonempty grids")
    rows = []
    for n in n_values:
        total_time = n * t
        ceiling = total_time**2 * dx_norm**2
        for alpha in alpha_grid:
            unc = qfi_max_from_angle(x_norm, dx_norm, float(alpha), total_time)
            rows.append(
                GapRow(
                    n_segments=int(n),
                    alpha=float(alpha),
                    uncontrolled_max=unc,
                    controlled_limit=ceiling,
                    gap=ceiling - unc,
                )
            )
    return rows
