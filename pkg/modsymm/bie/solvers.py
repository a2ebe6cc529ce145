"""
Least squares, dual least squares, Bubnov-Galerkin and collocation solves of
the discrete modified Symm equation.

Every method works from the same assembled nodal matrix A of S_0^(n).
With C the nodal-to-coefficient map and W the diagonal Gram weights of the
coefficient basis, (CA)^T W (CA) is the Gram matrix of {S_0^(n) L_j} and
C^T W C is the Gram matrix of {L_j}, so all L^2 inner products are exact.
"""

import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.linalg as la
from numpy.typing import NDArray

from modsymm.bie.densities import Density
from modsymm.bie.kernel import KernelParts
from modsymm.bie.quadrature import DiscreteOperator, assemble, forward_map
from modsymm.bie.trig import (
    NodalValues,
    TrigPoly,
    analysis_matrix,
    gram_weights,
    interpolate,
    l2_norm,
    nodes,
    synthesis_matrix,
)
from modsymm.config import settings
from modsymm.core.exceptions import InputError, PreconditionError, SolverFailure
from modsymm.core.logging import logger
from modsymm.schemas.solve_schema import MethodKind, SolveReport
from modsymm.utils.time import measure

# Frequency and scale of the unit-norm perturbation sin 6t / sqrt(pi)
NOISE_FREQUENCY = 6
NOISE_SCALE = 1.0 / np.sqrt(np.pi)


@dataclass(frozen=True, eq=False)
class Problem:
    """
    Boundary data for one solve.

    ``rhs`` is the perturbed data g^delta; ``clean_rhs`` the exact data g it
    was made from.
    """

    kernel: KernelParts
    rhs: TrigPoly
    clean_rhs: TrigPoly
    noise_level: float = 0.0
    exact_density: Optional[Density] = None


def reference_degree(n: int, rhs_degree: int = 0) -> int:
    """Degree of the forward map producing data for a degree-n solve."""
    if rhs_degree < 0:
        raise InputError(f"rhs_degree must be >= 0, got {rhs_degree}.")
    if rhs_degree:
        return rhs_degree
    return max(settings.RHS_DEGREE_FACTOR * n, settings.RHS_MIN_DEGREE)


def make_noisy_rhs(g: TrigPoly, delta: float) -> TrigPoly:
    """g^delta = g + delta sin 6t / sqrt(pi), so ||g^delta - g|| = delta."""
    if delta < 0:
        raise InputError(f"Noise level must be >= 0, got {delta}.")
    if delta == 0:
        return g
    padded = g.with_degree(max(g.n, NOISE_FREQUENCY + 1))
    return padded + TrigPoly.sin(NOISE_FREQUENCY, padded.n, delta * NOISE_SCALE)


def build_problem(
    parts: KernelParts,
    n: int,
    exact_density: Optional[Density] = None,
    delta: float = 0.0,
    rhs_degree: int = 0,
    clean_rhs: Optional[TrigPoly] = None,
) -> Problem:
    """
    Manufacture g from the exact density (or take it as given) and perturb it.

    Passing ``clean_rhs`` reuses data already computed for the same n.
    """
    if clean_rhs is None:
        if exact_density is None:
            raise InputError("A problem needs either an exact density or boundary data.")
        clean_rhs = forward_map(parts, exact_density, reference_degree(n, rhs_degree))
    return Problem(
        kernel=parts,
        rhs=make_noisy_rhs(clean_rhs, delta),
        clean_rhs=clean_rhs,
        noise_level=delta,
        exact_density=exact_density,
    )


def error_metric(
    density: TrigPoly, exact: Callable, points: Optional[int] = None
) -> float:
    """L^2(0, 2*pi) distance by the trapezoidal rule on 8n points."""
    points = settings.ERROR_METRIC_FACTOR * density.n if points is None else points
    t = 2.0 * np.pi * np.arange(points) / points
    diff = density(t) - np.asarray(exact(t), dtype=float)
    return float(np.sqrt(2.0 * np.pi / points * np.sum(diff**2)))


def _lu_solve(system: NDArray, rhs: NDArray) -> NDArray:
    """Dense LU solve that refuses numerically singular systems."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", la.LinAlgWarning)
        lu, piv = la.lu_factor(system)
    pivots = np.abs(np.diag(lu))
    singular = pivots.min() <= settings.PIVOT_TOLERANCE * pivots.max()
    if singular or not np.all(np.isfinite(pivots)):
        condition = float(np.linalg.cond(system))
        raise SolverFailure(
            f"Linear system is numerically singular (min |pivot| {pivots.min():.3e}, "
            f"max {pivots.max():.3e}).",
            condition,
        )
    return la.lu_solve((lu, piv), rhs)


def _solve_nodal(
    method: MethodKind, operator: DiscreteOperator, rhs: TrigPoly
) -> tuple[NDArray, float]:
    """Nodal values of Psi_n and the condition number of the system solved."""
    n = operator.n
    analysis = analysis_matrix(n)
    weights = gram_weights(n)
    # Pi_n g: the data sits on the same interpolated footing as the columns of A
    samples = rhs(nodes(n))
    data = analysis @ samples

    if method is MethodKind.GC:
        system = operator.matrix
        values = _lu_solve(system, samples)
    elif method is MethodKind.LS:
        image = analysis @ operator.matrix
        system = image.T @ (weights[:, None] * image)
        values = _lu_solve(system, image.T @ (weights * data))
    elif method is MethodKind.BG:
        image = analysis @ operator.matrix
        system = analysis.T @ (weights[:, None] * image)
        values = _lu_solve(system, analysis.T @ (weights * data))
    elif method is MethodKind.DLS:
        # Psi_n = S* z with (S* z, S* psi) = (g, psi): T T^T z = g in orthonormal coordinates
        root = np.sqrt(weights)
        orthonormal = operator.orthonormal_matrix()
        system = orthonormal @ orthonormal.T
        z = _lu_solve(system, root * data)
        values = synthesis_matrix(n) @ ((orthonormal.T @ z) / root)
    else:
        raise InputError(f"Unsupported method {method!r}.")
    return values, float(np.linalg.cond(system))


def solve(
    problem: Problem,
    method: MethodKind,
    n: int,
    operator: Optional[DiscreteOperator] = None,
) -> SolveReport:
    """
    Solve S_0^(n) Psi_n = g^delta by ``method`` in X_n.

    A pre-assembled ``operator`` of degree n may be shared across calls.
    """
    if n < 2:
        raise PreconditionError(f"Solves need n >= 2, got {n}.")
    with measure() as watch:
        if operator is None:
            operator = assemble(problem.kernel, n)
        elif operator.n != n:
            raise PreconditionError(
                f"Operator of degree {operator.n} cannot serve a degree-{n} solve."
            )
        values, condition = _solve_nodal(method, operator, problem.rhs)

    nodal = NodalValues(n, values)
    density = interpolate(nodal)
    residual = l2_norm(operator.apply(nodal) - problem.rhs)
    r = (
        error_metric(density, problem.exact_density)
        if problem.exact_density is not None
        else None
    )
    report = SolveReport(
        method=method,
        n=n,
        density=density,
        residual=residual,
        condition=condition,
        elapsed=watch.elapsed,
        r=r,
    )
    logger.debug(
        {
            "event": "solve",
            "curve": problem.kernel.curve.label,
            "method": method.value,
            "n": n,
            "delta": problem.noise_level,
            "r": r,
            "residual": residual,
            "condition": condition,
            "elapsed_s": watch.elapsed,
        }
    )
    return report
