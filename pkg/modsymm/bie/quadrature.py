"""
Discretization of the modified Symm operator on the grid of degree n.

The logarithmic part is integrated exactly against the trigonometric
Lagrange basis (weights R_j), the smooth remainder by the trapezoidal rule,
and the s-independent term g3 by the trapezoidal mean of the density.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from modsymm.bie.kernel import Convention, KernelParts, doubled_smooth_kernel
from modsymm.bie.trig import (
    NodalValues,
    TrigPoly,
    analysis_matrix,
    gram_weights,
    interpolate,
    nodes,
    synthesis_matrix,
)
from modsymm.core.exceptions import InputError, PreconditionError
from modsymm.geometry.base import BoundaryCurve


def kress_matrix(n: int, targets: ArrayLike) -> NDArray[np.float64]:
    """
    R_j(t) for every target t (rows) and node t_j (columns).

    R_j(t) = (1/n) [ (1/2n) cos n(t - t_j) + sum_{m=1}^{n-1} cos m(t - t_j) / m ]
    """
    d = np.subtract.outer(np.atleast_1d(np.asarray(targets, dtype=float)), nodes(n))
    total = np.cos(n * d) / (2 * n)
    for m in range(1, n):
        total += np.cos(m * d) / m
    return total / n


def kress_weight(n: int, j: int, t: ArrayLike) -> NDArray[np.float64] | float:
    """
    Weight R_j(t) of the rule for -(1/2pi) int_0^{2pi} ln(4 sin^2((t-s)/2)) f(s) ds.

    The rule is exact for f in X_n.
    """
    if not 0 <= j <= 2 * n - 1:
        raise InputError(f"Node index {j} is outside 0..{2 * n - 1}.")
    weights = kress_matrix(n, t)[:, j]
    return float(weights[0]) if np.ndim(t) == 0 else weights.reshape(np.shape(t))


def sk_matrix(
    curve: BoundaryCurve, convention: Convention, n: int, targets: ArrayLike
) -> NDArray[np.float64]:
    """
    Rows map nodal values on the degree-n grid to (S_K^(n) Psi)(target).

    Under the doubled scaling S_K = -(1/pi) int ln|gamma(t) - gamma(s)| Psi(s) ds.
    """
    targets = np.atleast_1d(np.asarray(targets, dtype=float))
    smooth = doubled_smooth_kernel(curve, targets[:, None], nodes(n)[None, :])
    return convention.relative * (kress_matrix(n, targets) + (np.pi / n) * smooth)


def _check_degree(v: NodalValues, n: int | None = None):
    if v.n < 1 or (n is not None and v.n != n):
        raise PreconditionError(
            f"Nodal values of degree {v.n} do not match the requested degree {n}."
        )


def apply_SK(parts: KernelParts, v: NodalValues, t: ArrayLike):
    """(S_K^(n) Psi)(t) = sum_j Psi(t_j) [R_j(t) + (pi/n) k(t, t_j)]."""
    _check_degree(v)
    value = sk_matrix(parts.curve, parts.convention, v.n, t) @ v.values
    return float(value[0]) if np.ndim(t) == 0 else value.reshape(np.shape(t))


def apply_STK(parts: KernelParts, v: NodalValues) -> TrigPoly:
    """
    S_TK^(n) Psi as an element of X_n.

    The R_j part already lies in X_n, so interpolating the nodal values of
    the whole operator only affects the smooth part.
    """
    _check_degree(v)
    t = nodes(v.n)
    samples = sk_matrix(parts.curve, parts.convention, v.n, t) @ v.values
    return interpolate(NodalValues(v.n, samples))


def apply_S0(parts: KernelParts, v: NodalValues) -> TrigPoly:
    """S_0^(n) Psi = S_TK^(n) Psi + g3 * (2*pi*a_0(Pi_n v))."""
    _check_degree(v)
    total = (np.pi / v.n) * float(np.sum(v.values))
    return apply_STK(parts, v) + parts.g3_at(v.n) * total


def forward_map(
    parts: KernelParts, density: Callable[[NDArray], ArrayLike], degree: int
) -> TrigPoly:
    """Manufactured right-hand side: S_0 at ``degree`` applied to samples of Psi."""
    return apply_S0(parts, NodalValues.from_function(density, degree))


@dataclass(frozen=True, eq=False)
class DiscreteOperator:
    """
    Dense nodal matrix of S_0^(n): column j holds the nodal values of
    S_0^(n) L_j at t_0..t_{2n-1}.
    """

    n: int
    matrix: NDArray[np.float64]
    convention: Convention
    kernel: KernelParts

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=float)
        if matrix.shape != (2 * self.n, 2 * self.n):
            raise InputError(
                f"Operator of degree {self.n} needs a {2 * self.n}x{2 * self.n} matrix, "
                f"got {matrix.shape}."
            )
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    def apply(self, v: NodalValues) -> TrigPoly:
        _check_degree(v, self.n)
        return interpolate(NodalValues(self.n, self.matrix @ v.values))

    def coefficient_matrix(self) -> NDArray[np.float64]:
        """The operator acting on coefficient vectors [a_0..a_n, b_1..b_{n-1}]."""
        return analysis_matrix(self.n) @ self.matrix @ synthesis_matrix(self.n)

    def orthonormal_matrix(self) -> NDArray[np.float64]:
        """
        The operator in the L^2-orthonormal basis of X_n. Its transpose is the
        discrete L^2 adjoint.
        """
        root = np.sqrt(gram_weights(self.n))
        return root[:, None] * self.coefficient_matrix() / root[None, :]


def assemble(parts: KernelParts, n: int) -> DiscreteOperator:
    if n < 1:
        raise InputError(f"Operator degree must be >= 1, got {n}.")
    t = nodes(n)
    g3 = parts.g3_at(n).nodal_values().values
    matrix = sk_matrix(parts.curve, parts.convention, n, t) + np.outer(
        g3, np.full(2 * n, np.pi / n)
    )
    return DiscreteOperator(n=n, matrix=matrix, convention=parts.convention, kernel=parts)
