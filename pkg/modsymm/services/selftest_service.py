"""
Built-in acceptance checks: analytic oracles on the circle plus the
convergence, noise and far-field patterns on the ellipse and the blob.
"""

import itertools
from typing import Callable, Dict, List

import numpy as np
from scipy import integrate

from modsymm.bie.densities import get_density
from modsymm.bie.kernel import Convention, KernelParts, build_kernel_parts, g1_log_kernel
from modsymm.bie.potential import ExteriorField, err_grid, evaluate, far_field
from modsymm.bie.quadrature import apply_S0, assemble, forward_map, kress_matrix, kress_weight
from modsymm.bie.solvers import build_problem, reference_degree, solve
from modsymm.bie.trig import NodalValues, TrigPoly, l2_norm, lagrange_basis
from modsymm.config import settings
from modsymm.core.exceptions import SolverFailure
from modsymm.core.logging import logger
from modsymm.geometry.base import BoundaryCurve
from modsymm.geometry.builtin import Circle
from modsymm.geometry.registry import make_builtin
from modsymm.schemas.experiment_schema import SelfTestResult
from modsymm.schemas.solve_schema import MethodKind

# Circle on which the logarithmic capacity term vanishes
UNIT_CAPACITY_RADIUS = float(np.exp(-0.5))
CONSTANT_IMAGE = 2.0 * np.exp(0.5)
CONVERGENT_METHODS = (MethodKind.LS, MethodKind.BG, MethodKind.GC)
# r(12)/r(4) bounds; the blob decays at about 0.45 per degree, bounded by
# the 2n-point trapezoid on the smooth part of its kernel
GEOMETRIC_RATIO_LIMITS: Dict[str, float] = {"ellipse": 1e-3, "expblob": 5e-3}
# r_DLS / r_LS at n = 20 above which DLS counts as degraded
DLS_DEGRADATION_FACTOR = 10.0
# Absolute slack for monotonicity once errors reach rounding level
MONOTONE_SLACK = 1e-12


def _non_increasing(values: List[float], slack: float = MONOTONE_SLACK) -> bool:
    return all(b <= a + slack for a, b in zip(values, values[1:]))


def _circle_parts(n: int = 16) -> KernelParts:
    return build_kernel_parts(Circle(UNIT_CAPACITY_RADIUS), Convention.DOUBLED, n)


def _solve_density(
    curve: BoundaryCurve, method: MethodKind, n: int, delta: float = 0.0
):
    parts = build_kernel_parts(curve, Convention.DOUBLED, n)
    problem = build_problem(parts, n, exact_density=get_density("exp-sin"), delta=delta)
    return parts, solve(problem, method, n)


def check_circle_eigenvalues() -> SelfTestResult:
    n = 16
    parts = _circle_parts(n)
    t = np.linspace(0.0, 2.0 * np.pi, 4 * n, endpoint=False)
    worst = 0.0
    for k in range(1, n):
        for basis in (np.cos, np.sin):
            image = apply_S0(parts, NodalValues.from_function(lambda s: basis(k * s), n))
            worst = max(worst, float(np.max(np.abs(image(t) - basis(k * t) / k))))
    constant = apply_S0(parts, NodalValues.from_function(lambda s: np.ones_like(s), n))
    worst = max(worst, float(np.max(np.abs(constant(t) - CONSTANT_IMAGE))))
    return SelfTestResult(
        check="circle-eigenvalues", passed=worst <= 1e-10, value=worst, limit=1e-10
    )


def kress_oracle(n: int, j: int, t: float) -> float:
    """-(1/2pi) int L_j(s) ln(4 sin^2((t - s)/2)) ds, split at the singularity."""

    def integrand(s):
        return lagrange_basis(n, j, s) * g1_log_kernel(t, s)

    total = sum(
        integrate.quad(integrand, a, b, limit=200)[0]
        for a, b in ((t, t + np.pi), (t + np.pi, t + 2.0 * np.pi))
    )
    return -total / (2.0 * np.pi)


def check_kress_weights() -> SelfTestResult:
    rng = np.random.default_rng(0)
    t = rng.uniform(0.0, 2.0 * np.pi, 32)
    column_sum = max(
        float(np.max(np.abs(kress_matrix(n, t).sum(axis=1)))) for n in (2, 8, 16)
    )
    oracle = abs(kress_weight(2, 0, 0.0) - kress_oracle(2, 0, 0.0))
    passed = column_sum <= 1e-12 and oracle <= 1e-8
    return SelfTestResult(
        check="kress-weights",
        passed=passed,
        value=max(column_sum, oracle),
        limit=1e-8,
        detail=f"sum={column_sum:.3e} oracle={oracle:.3e}",
    )


def check_noise_amplification() -> SelfTestResult:
    curve = make_builtin("ellipse", (1.0, 2.0))
    n = 12
    parts = build_kernel_parts(curve, Convention.DOUBLED, n)
    operator = assemble(parts, n)
    clean = build_problem(parts, n, exact_density=get_density("exp-sin")).clean_rhs
    ratios = []
    for method, delta in itertools.product(CONVERGENT_METHODS, (1e-3, 1e-2, 1e-1)):
        problem = build_problem(
            parts, n, exact_density=get_density("exp-sin"), delta=delta, clean_rhs=clean
        )
        ratios.append(solve(problem, method, n, operator=operator).r / delta)
    ratios = np.array(ratios)
    in_band = bool(np.all((ratios >= 5.9) & (ratios <= 6.1)))
    spread = float(ratios.max() / ratios.min() - 1.0)
    return SelfTestResult(
        check="noise-amplification",
        passed=in_band and spread <= 0.02,
        value=float(np.mean(ratios)),
        limit=6.1,
        detail=f"min={ratios.min():.6f} max={ratios.max():.6f}",
    )


def check_geometric_convergence() -> SelfTestResult:
    degrees = (4, 6, 8, 10, 12)
    ratios: Dict[str, float] = {}
    monotone = True
    for name, limit in GEOMETRIC_RATIO_LIMITS.items():
        curve = make_builtin(name)
        for method in CONVERGENT_METHODS:
            errors = [_solve_density(curve, method, n)[1].r for n in degrees]
            ratios[name] = max(ratios.get(name, 0.0), errors[-1] / errors[0])
            monotone = monotone and _non_increasing(errors)
    # report the curve closest to its own limit
    tightest = max(ratios, key=lambda name: ratios[name] / GEOMETRIC_RATIO_LIMITS[name])
    per_curve = ", ".join(f"{name}={ratio:.2e}" for name, ratio in ratios.items())
    return SelfTestResult(
        check="geometric-convergence",
        passed=monotone
        and all(ratios[name] <= GEOMETRIC_RATIO_LIMITS[name] for name in ratios),
        value=ratios[tightest],
        limit=GEOMETRIC_RATIO_LIMITS[tightest],
        detail=f"monotone={monotone} r(12)/r(4): {per_curve}",
    )


def check_method_agreement() -> SelfTestResult:
    worst = 0.0
    for name in ("ellipse", "expblob"):
        curve = make_builtin(name)
        densities = [_solve_density(curve, m, 10)[1].density for m in CONVERGENT_METHODS]
        for p, q in itertools.combinations(densities, 2):
            worst = max(worst, l2_norm(p - q))
    return SelfTestResult(
        check="method-agreement", passed=worst <= 1e-4, value=worst, limit=1e-4
    )


def check_convention_invariance() -> SelfTestResult:
    curve = make_builtin("ellipse", (1.0, 2.0))
    n = 12
    doubled = build_kernel_parts(curve, Convention.DOUBLED, n)
    classic = build_kernel_parts(curve, Convention.CLASSIC, n)
    data = forward_map(doubled, get_density("exp-sin"), reference_degree(n))
    reports = [
        solve(build_problem(parts, n, clean_rhs=data), MethodKind.GC, n)
        for parts in (doubled, classic)
    ]
    density_gap = l2_norm(reports[1].density - 2.0 * reports[0].density) / l2_norm(
        reports[1].density
    )
    angles = np.linspace(0.0, 2.0 * np.pi, 8, endpoint=False)
    points = np.stack([3.0 * np.cos(angles), 4.0 * np.sin(angles)], axis=-1)
    u_doubled = evaluate(ExteriorField(doubled, reports[0].density), points)
    u_classic = evaluate(ExteriorField(classic, reports[1].density), points)
    field_gap = float(np.max(np.abs(u_doubled - u_classic)))
    return SelfTestResult(
        check="convention-invariance",
        passed=density_gap <= 1e-10 and field_gap <= 1e-10,
        value=max(density_gap, field_gap),
        limit=1e-10,
        detail=f"density={density_gap:.3e} field={field_gap:.3e}",
    )


def check_far_field() -> SelfTestResult:
    curve = make_builtin("ellipse", (1.0, 2.0))
    parts, report = _solve_density(curve, MethodKind.LS, 12)
    field = ExteriorField(parts, report.density)
    radii = np.array([1e2, 1e4, 1e6, 1e8, 1e10])
    gaps = list(np.abs(evaluate(field, np.outer(radii, (1.0, 0.0))) - far_field(field)))
    monotone = _non_increasing(gaps, slack=1e-15)
    return SelfTestResult(
        check="far-field",
        passed=monotone and gaps[-1] <= 1e-6,
        value=float(gaps[-1]),
        limit=1e-6,
        detail=f"monotone={monotone}",
    )


def check_near_boundary_error() -> SelfTestResult:
    curve = make_builtin("ellipse", (1.0, 2.0))
    parts, reference = _solve_density(
        curve, MethodKind.LS, settings.ERRGRID_REFERENCE_DEGREE
    )
    reference_field = ExteriorField(parts, reference.density)
    errors = []
    for n in (2, 4, 6, 8):
        approx = _solve_density(curve, MethodKind.LS, n)[1].density
        errors.append(err_grid(reference_field, ExteriorField(parts, approx)))
    monotone = _non_increasing(errors)
    return SelfTestResult(
        check="near-boundary-error",
        passed=monotone and errors[-1] <= 1e-3,
        value=errors[-1],
        limit=1e-3,
        detail=f"monotone={monotone}",
    )


def check_dls_diagnostics() -> List[SelfTestResult]:
    """Reports r and conditioning of all four methods; never fails on a bad solve."""
    curve = make_builtin("ellipse", (1.0, 2.0))
    results, errors = [], {}
    for n in (10, 20):
        for method in MethodKind:
            try:
                report = _solve_density(curve, method, n)[1]
                errors[(method, n)] = report.r
                results.append(
                    SelfTestResult(
                        check=f"diagnostics-{method.value}-n{n}",
                        passed=True,
                        value=report.r,
                        detail=f"condition={report.condition:.6e}",
                    )
                )
            except SolverFailure as e:
                errors[(method, n)] = float("inf")
                results.append(
                    SelfTestResult(
                        check=f"diagnostics-{method.value}-n{n}",
                        passed=True,
                        detail=f"solver failure, condition={e.condition:.6e}",
                    )
                )
    degraded = errors[(MethodKind.DLS, 20)] > DLS_DEGRADATION_FACTOR * errors[(MethodKind.LS, 20)]
    results.append(
        SelfTestResult(
            check="dls-degradation",
            passed=True,
            detail="DLS degradation observed" if degraded else "DLS degradation not observed",
        )
    )
    return results


def check_constant_circle_field() -> SelfTestResult:
    parts = _circle_parts(8)
    field = ExteriorField(parts, TrigPoly.constant(1.0, 8))
    angles = np.linspace(0.0, 2.0 * np.pi, 7, endpoint=False)
    points = np.vstack(
        [np.stack([2.0 * np.cos(angles), 2.0 * np.sin(angles)], axis=-1), [[1e6, 0.0]]]
    )
    worst = float(np.max(np.abs(evaluate(field, points) - CONSTANT_IMAGE)))
    return SelfTestResult(
        check="constant-circle-field", passed=worst <= 1e-10, value=worst, limit=1e-10
    )


CHECKS: List[Callable[[], SelfTestResult | List[SelfTestResult]]] = [
    check_circle_eigenvalues,
    check_kress_weights,
    check_noise_amplification,
    check_geometric_convergence,
    check_method_agreement,
    check_convention_invariance,
    check_far_field,
    check_near_boundary_error,
    check_dls_diagnostics,
    check_constant_circle_field,
]


def run_selftest() -> List[SelfTestResult]:
    results: List[SelfTestResult] = []
    for check in CHECKS:
        name = check.__name__.removeprefix("check_").replace("_", "-")
        try:
            outcome = check()
        except Exception as e:
            logger.exception(f"Self-test '{name}' raised.")
            outcome = SelfTestResult(check=name, passed=False, detail=str(e))
        outcome = outcome if isinstance(outcome, list) else [outcome]
        logger.info(
            {"event": "selftest", "check": name, "passed": all(r.passed for r in outcome)}
        )
        results.extend(outcome)
    return results
