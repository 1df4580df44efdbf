"""Randomized oracle cross-check suites behind the ``verify`` command.

Each suite samples random instances with a seeded generator, runs one of the
closed forms against its independent matrix oracle, and reports the worst
deviation seen together with the tolerance it must stay under.  A fixed seed
makes the whole summary byte-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra
from .errors import SeriesDepthError
from .generators import (
    GeneratorDecomposition,
    closed_form_generator,
    numeric_generator,
    series_generator,
)
from .magnetometry import FieldPoint, magnetometry_scheme
from .oracles import (
    entangled_qfi_oracle,
    qfim_trace_oracle,
    sld_oracle,
    variance_qfi_oracle,
    weak_comm_trace_oracle,
)
from .qfi import (
    BELL_PHI_PLUS,
    entangled_qfi,
    entangled_weak_comm,
    qfi_pure,
    qfim_pure,
    weak_comm_residual,
)
from .scheme import MERGED, PRODUCT, SchemeConfig, build_total_unitary


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_deviation: float
    tolerance: float
    worst_input: str

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


class _Worst:
    """Track the largest deviation and the input that produced it."""

    def __init__(self):
        self.value = 0.0
        self.label = "none"

    def update(self, value: float, label: str):
        if value > self.value:
            self.value = float(value)
            self.label = label


def _fmt_vec(v) -> str:
    return "(" + ", ".join(f"{float(c):.6g}" for c in np.asarray(v).ravel()) + ")"


def _random_unit(rng) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def _linear_scheme(
    x0: np.ndarray, grads: np.ndarray, total_time: float, control: np.ndarray | None = None
) -> SchemeConfig:
    """Affine coefficient map X(x) = x0 + sum_l x_l g_l as a single merged segment."""
    grads = np.atleast_2d(np.asarray(grads, dtype=float))
    return SchemeConfig(
        coefficients=lambda xp: x0 + grads.T @ xp,
        partials=lambda xp: grads,
        n_params=grads.shape[0],
        control=np.zeros(3) if control is None else control,
        segment_time=total_time,
        segment_count=1,
    )


def generator_three_way(seed: int, samples: int) -> list[CheckResult]:
    """Closed form vs nested-cross series vs finite-difference oracle.

    The series refuses samples whose T|X| needs more terms than its cap; on
    those the closed form and the numeric oracle still check each other.
    """
    rng = np.random.default_rng([seed, 1])
    closed_series = _Worst()
    closed_numeric = _Worst()
    series_numeric = _Worst()
    for _ in range(samples):
        x = rng.uniform(0.1, 5.0) * _random_unit(rng)
        d = rng.uniform(0.1, 5.0) * _random_unit(rng)
        total_time = rng.uniform(0.0, 5.0)
        while total_time == 0.0:  # the scheme needs t > 0; T = 0 is covered by unit tests
            total_time = rng.uniform(0.0, 5.0)
        label = f"X={_fmt_vec(x)} dX={_fmt_vec(d)} T={total_time:.6g}"
        closed = closed_form_generator(x, d, total_time).to_matrix()
        scheme = _linear_scheme(x, d.reshape(1, 3), total_time)
        numeric = numeric_generator(scheme, [0.0], 0, h=1e-6)
        closed_numeric.update(np.abs(closed - numeric).max(), label)
        try:
            series = series_generator(x, d, total_time, tol=1e-14)
        except SeriesDepthError:
            continue
        closed_series.update(np.abs(closed - series).max(), label)
        series_numeric.update(np.abs(series - numeric).max(), label)
    return [
        CheckResult("generator/closed-vs-series", closed_series.value, 1e-12, closed_series.label),
        CheckResult(
            "generator/closed-vs-numeric", closed_numeric.value, 1e-6, closed_numeric.label
        ),
        CheckResult(
            "generator/series-vs-numeric", series_numeric.value, 1e-6, series_numeric.label
        ),
    ]


def _random_decomposition(rng, min_mag: float = 0.0) -> GeneratorDecomposition:
    return GeneratorDecomposition(rng.uniform(min_mag, 5.0), _random_unit(rng))


def qfim_oracle_equivalence(seed: int, samples: int) -> list[CheckResult]:
    """Closed-form information quantities vs the matrix-trace oracles."""
    rng = np.random.default_rng([seed, 2])
    qfi_dev = _Worst()
    qfim_dev = _Worst()
    wc_dev = _Worst()
    for _ in range(samples):
        gens = [_random_decomposition(rng) for _ in range(3)]
        r = _random_unit(rng)
        rho = algebra.density(r)
        mats = [g.to_matrix() for g in gens]
        label = f"|Y|={_fmt_vec([g.magnitude for g in gens])} r={_fmt_vec(r)}"
        qfi_dev.update(abs(qfi_pure(gens[0], r) - variance_qfi_oracle(mats[0], rho)), label)
        qfim_dev.update(np.abs(qfim_pure(gens, r) - qfim_trace_oracle(mats, rho)).max(), label)
        for a in range(3):
            for b in range(a + 1, 3):
                closed = weak_comm_residual(gens[a], gens[b], r)
                oracle = weak_comm_trace_oracle(mats[a], mats[b], rho)
                wc_dev.update(abs(closed - oracle), label)
    return [
        CheckResult("qfim/qfi-vs-variance-oracle", qfi_dev.value, 1e-12, qfi_dev.label),
        CheckResult("qfim/qfim-vs-trace-oracle", qfim_dev.value, 1e-11, qfim_dev.label),
        CheckResult("qfim/weak-comm-vs-trace-oracle", wc_dev.value, 1e-12, wc_dev.label),
    ]


def entangled_probe_suite(seed: int, samples: int) -> list[CheckResult]:
    """Entangled-probe information and unconditional weak commutation."""
    rng = np.random.default_rng([seed, 3])
    qfi_dev = _Worst()
    wc_dev = _Worst()
    for _ in range(samples):
        gen_a = _random_decomposition(rng)
        gen_b = _random_decomposition(rng)
        label = f"|Ya|={gen_a.magnitude:.6g} |Yb|={gen_b.magnitude:.6g}"
        qfi_dev.update(abs(entangled_qfi(gen_a) - entangled_qfi_oracle(gen_a)), label)
        wc_dev.update(abs(entangled_weak_comm(gen_a, gen_b, BELL_PHI_PLUS)), label)
    return [
        CheckResult("entangled/qfi-vs-4x4-oracle", qfi_dev.value, 1e-11, qfi_dev.label),
        CheckResult("entangled/weak-comm-zero", wc_dev.value, 1e-12, wc_dev.label),
    ]


def sld_identity_suite(seed: int, samples: int) -> list[CheckResult]:
    """SLD-vs-generator weak-commutation identity on random schemes and probes."""
    rng = np.random.default_rng([seed, 4])
    dev = _Worst()
    for _ in range(samples):
        d = int(rng.integers(1, 4))
        x0 = rng.uniform(-2.0, 2.0, 3)
        grads = rng.uniform(-2.0, 2.0, (d, 3))
        x = rng.uniform(-1.0, 1.0, d)
        control = rng.uniform(-2.0, 2.0, 3) if rng.random() < 0.5 else np.zeros(3)
        total_time = rng.uniform(0.1, 5.0)
        scheme = _linear_scheme(x0, grads, total_time, control=control)
        if rng.random() < 0.5:
            r = rng.uniform(0.0, 1.0) * _random_unit(rng)
            probe = algebra.density(r)
        else:
            psi = rng.normal(size=4) + 1j * rng.normal(size=4)
            psi /= np.linalg.norm(psi)
            probe = np.outer(psi, psi.conj())
        label = f"d={d} T={total_time:.6g} dim={probe.shape[0]}"
        result = sld_oracle(scheme, x, probe, h=1e-6)
        dev.update(result.residuals.max(), label)
    return [CheckResult("sld/commutation-identity", dev.value, 1e-6, dev.label)]


def trotter_gap_suite(seed: int, samples: int) -> list[CheckResult]:
    """Linear-in-t scaling of the segment-product vs merged unitary distance.

    Deterministic configuration: negating control designed at the nominal
    field point, evaluated 0.1 radians away in colatitude, T = 5 fixed while
    t halves from 0.5 to 0.0625.  The distance must shrink by a factor close
    to 2 per halving; the reported deviation is the worst |ratio - 2|.
    """
    del seed, samples  # deterministic suite, kept uniform with the others
    point = FieldPoint(B=3.0, theta=np.pi / 6, phi=0.0)
    x = point.as_array() + np.array([0.0, 0.1, 0.0])
    total_time = 5.0
    distances = []
    for t in (0.5, 0.25, 0.125, 0.0625):
        n = int(round(total_time / t))
        merged = magnetometry_scheme(point, t, n, control="optimal", mode=MERGED)
        product = magnetometry_scheme(point, t, n, control="optimal", mode=PRODUCT)
        gap = np.linalg.norm(
            build_total_unitary(product, x) - build_total_unitary(merged, x), 2
        )
        distances.append(gap)
    worst = _Worst()
    for i in range(len(distances) - 1):
        ratio = distances[i] / distances[i + 1]
        worst.update(abs(ratio - 2.0), f"t={0.5 / 2**i:.6g} ratio={ratio:.6g}")
    return [CheckResult("trotter/gap-halving-ratio", worst.value, 0.2, worst.label)]


ALL_SUITES = (
    generator_three_way,
    qfim_oracle_equivalence,
    entangled_probe_suite,
    sld_identity_suite,
    trotter_gap_suite,
)


def run_all(seed: int, samples: int, tolerance_scale: float = 1.0) -> list[CheckResult]:
    """Run every suite; tolerances are multiplied by ``tolerance_scale``.

    A scale of zero turns every nonzero deviation into a failure, which is
    how the harness checks its own ability to fail.
    """
    if samples < 1:
        raise ValueError("sample count must be at least 1")
    results = []
    for suite in ALL_SUITES:
        for check in suite(seed, samples):
            results.append(
                CheckResult(
                    check.name,
                    check.max_deviation,
                    check.tolerance * tolerance_scale,
                    check.worst_input,
                )
            )
    return results


def summarize(results: list[CheckResult], seed: int) -> str:
    """Fixed-format summary, byte-stable for a fixed seed."""
    lines = [f"verify seed={seed}"]
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        lines.append(
            f"{status} {res.name}: max deviation {res.max_deviation:.17g} "
            f"tolerance {res.tolerance:.17g}"
        )
        if not res.passed:
            lines.append(f"     worst input: {res.worst_input}")
    n_fail = sum(1 for r in results if not r.passed)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"
