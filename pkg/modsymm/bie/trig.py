"""
Real trigonometric polynomials on the equispaced grid t_k = k*pi/n.

The space X_n = span{cos jt (0 <= j <= n), sin jt (1 <= j <= n-1)} has
dimension 2n and matches the 2n nodal values exactly, so a polynomial is
stored once by its coefficients and converted to nodal values on demand.
Coefficient vectors are laid out as [a_0, ..., a_n, b_1, ..., b_{n-1}].
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from modsymm.core.exceptions import InputError, PreconditionError


def _frozen(values: ArrayLike) -> NDArray[np.float64]:
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


def nodes(n: int) -> NDArray[np.float64]:
    """Collocation nodes t_k = k*pi/n, k = 0..2n-1."""
    if n < 1:
        raise InputError(f"Grid degree must be >= 1, got {n}.")
    return np.arange(2 * n) * np.pi / n


@dataclass(frozen=True, eq=False)
class TrigPoly:
    """
    p(t) = sum_{j=0}^{n} a_j cos jt + sum_{j=1}^{n-1} b_j sin jt.

    ``a`` holds a_0..a_n and ``b`` holds b_1..b_{n-1}.
    """

    n: int
    a: NDArray[np.float64]
    b: NDArray[np.float64]

    def __post_init__(self):
        if self.n < 1:
            raise InputError(f"TrigPoly degree must be >= 1, got {self.n}.")
        a, b = _frozen(self.a), _frozen(self.b)
        if a.shape != (self.n + 1,) or b.shape != (self.n - 1,):
            raise InputError(
                f"Degree {self.n} needs {self.n + 1} cosine and {self.n - 1} sine "
                f"coefficients, got {a.shape} and {b.shape}."
            )
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def zeros(cls, n: int) -> "TrigPoly":
        return cls(n, np.zeros(n + 1), np.zeros(n - 1))

    @classmethod
    def constant(cls, value: float, n: int) -> "TrigPoly":
        a = np.zeros(n + 1)
        a[0] = value
        return cls(n, a, np.zeros(n - 1))

    @classmethod
    def cos(cls, k: int, n: int, scale: float = 1.0) -> "TrigPoly":
        if not 0 <= k <= n:
            raise InputError(f"cos {k}t is not in X_{n}.")
        a = np.zeros(n + 1)
        a[k] = scale
        return cls(n, a, np.zeros(n - 1))

    @classmethod
    def sin(cls, k: int, n: int, scale: float = 1.0) -> "TrigPoly":
        if not 1 <= k <= n - 1:
            raise InputError(f"sin {k}t is not in X_{n}.")
        b = np.zeros(n - 1)
        b[k - 1] = scale
        return cls(n, np.zeros(n + 1), b)

    @classmethod
    def from_coefficients(cls, coefficients: ArrayLike, n: int) -> "TrigPoly":
        coefficients = np.asarray(coefficients, dtype=float)
        if coefficients.shape != (2 * n,):
            raise InputError(
                f"Expected {2 * n} coefficients for degree {n}, got {coefficients.shape}."
            )
        return cls(n, coefficients[: n + 1], coefficients[n + 1 :])

    @property
    def coefficients(self) -> NDArray[np.float64]:
        return np.concatenate([self.a, self.b])

    def __call__(self, t: ArrayLike) -> NDArray[np.float64] | float:
        t = np.asarray(t, dtype=float)
        value = np.cos(np.multiply.outer(t, np.arange(self.n + 1))) @ self.a
        if self.n > 1:
            value = value + np.sin(np.multiply.outer(t, np.arange(1, self.n))) @ self.b
        return float(value) if value.ndim == 0 else value

    def nodal_values(self) -> "NodalValues":
        return NodalValues(self.n, self(nodes(self.n)))

    def with_degree(self, m: int) -> "TrigPoly":
        """
        Re-express in X_m: zero padding when m >= n, orthogonal projection
        (dropping every component outside X_m, including sin mt) when m < n.
        """
        if m == self.n:
            return self
        a = np.zeros(m + 1)
        b = np.zeros(m - 1)
        ka, kb = min(m, self.n) + 1, min(m, self.n) - 1
        a[:ka] = self.a[:ka]
        b[:kb] = self.b[:kb]
        return TrigPoly(m, a, b)

    def _aligned(self, other: "TrigPoly") -> tuple["TrigPoly", "TrigPoly"]:
        m = max(self.n, other.n)
        return self.with_degree(m), other.with_degree(m)

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        p, q = self._aligned(other)
        return TrigPoly(p.n, p.a + q.a, p.b + q.b)

    def __sub__(self, other: "TrigPoly") -> "TrigPoly":
        p, q = self._aligned(other)
        return TrigPoly(p.n, p.a - q.a, p.b - q.b)

    def __mul__(self, scalar: float) -> "TrigPoly":
        return TrigPoly(self.n, self.a * scalar, self.b * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "TrigPoly":
        return self * -1.0

    def __repr__(self) -> str:
        return f"TrigPoly(n={self.n}, a={self.a!r}, b={self.b!r})"


@dataclass(frozen=True, eq=False)
class NodalValues:
    """Samples value[j] = f(t_j) on the 2n-point grid of degree n."""

    n: int
    values: NDArray[np.float64]

    def __post_init__(self):
        values = _frozen(self.values)
        if self.n < 1 or values.shape != (2 * self.n,):
            raise InputError(
                f"Degree {self.n} needs exactly {2 * self.n} nodal values, "
                f"got shape {values.shape}."
            )
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, f: Callable[[NDArray], ArrayLike], n: int) -> "NodalValues":
        return cls(n, np.broadcast_to(np.asarray(f(nodes(n)), dtype=float), (2 * n,)))

    def __add__(self, other: "NodalValues") -> "NodalValues":
        return NodalValues(self.n, self.values + other.values)

    def __mul__(self, scalar: float) -> "NodalValues":
        return NodalValues(self.n, self.values * scalar)

    __rmul__ = __mul__


def lagrange_basis(n: int, j: int, t: ArrayLike) -> NDArray[np.float64] | float:
    """
    Trigonometric Lagrange basis L_j of X_n: L_j(t_k) = 1 if k == j else 0.

    L_j(t) = (1/2n) (1 + 2 sum_{k=1}^{n-1} cos k(t - t_j) + cos n(t - t_j)).
    """
    if not 0 <= j <= 2 * n - 1:
        raise InputError(f"Node index {j} is outside 0..{2 * n - 1}.")
    d = np.asarray(t, dtype=float) - j * np.pi / n
    k = np.arange(1, n)
    value = (
        1.0 + 2.0 * np.cos(np.multiply.outer(d, k)).sum(axis=-1) + np.cos(n * d)
    ) / (2 * n)
    return float(value) if np.ndim(value) == 0 else value


def interpolate(v: NodalValues) -> TrigPoly:
    """Trigonometric interpolation Pi_n: the unique element of X_n matching v."""
    n, size = v.n, 2 * v.n
    spectrum = np.fft.rfft(v.values)
    a = 2.0 * spectrum.real / size
    a[0] /= 2.0
    a[n] /= 2.0
    b = -2.0 * spectrum.imag[1:n] / size
    return TrigPoly(n, a, b)


def project(samples: ArrayLike, n: int) -> TrigPoly:
    """
    Orthogonal L^2 projection onto X_n from equispaced samples on [0, 2*pi).

    Fourier coefficients come from the trapezoidal rule, which is exact for
    the retained frequencies as long as the grid has at least 4n points.
    """
    samples = np.asarray(samples, dtype=float)
    size = samples.shape[0]
    if size < 4 * n:
        raise PreconditionError(
            f"Projection onto X_{n} needs at least {4 * n} samples, got {size}."
        )
    spectrum = np.fft.rfft(samples)
    a = 2.0 * spectrum.real[: n + 1] / size
    a[0] /= 2.0
    b = -2.0 * spectrum.imag[1:n] / size
    return TrigPoly(n, a, b)


@lru_cache(maxsize=64)
def _analysis_matrix(n: int) -> NDArray[np.float64]:
    identity = np.eye(2 * n)
    columns = [interpolate(NodalValues(n, identity[:, j])).coefficients for j in range(2 * n)]
    return _frozen(np.stack(columns, axis=1))


def analysis_matrix(n: int) -> NDArray[np.float64]:
    """Matrix mapping 2n nodal values to the coefficients of their interpolant."""
    return _analysis_matrix(n)


@lru_cache(maxsize=64)
def _synthesis_matrix(n: int) -> NDArray[np.float64]:
    t = nodes(n)
    cosines = np.cos(np.multiply.outer(t, np.arange(n + 1)))
    sines = np.sin(np.multiply.outer(t, np.arange(1, n)))
    return _frozen(np.concatenate([cosines, sines], axis=1))


def synthesis_matrix(n: int) -> NDArray[np.float64]:
    """Matrix mapping coefficients to nodal values; inverse of analysis_matrix."""
    return _synthesis_matrix(n)


def gram_weights(n: int) -> NDArray[np.float64]:
    """L^2(0, 2*pi) norms squared of the coefficient basis: 2*pi for 1, pi otherwise."""
    weights = np.full(2 * n, np.pi)
    weights[0] = 2.0 * np.pi
    return weights


def inner_product(p: TrigPoly, q: TrigPoly) -> float:
    """Exact L^2(0, 2*pi) inner product from coefficients."""
    p, q = p._aligned(q)
    return float(np.sum(gram_weights(p.n) * p.coefficients * q.coefficients))


def l2_norm(p: TrigPoly) -> float:
    return float(np.sqrt(max(inner_product(p, p), 0.0)))


def mean_integral(p: TrigPoly) -> float:
    """Integral of p over one period, 2*pi*a_0."""
    return float(2.0 * np.pi * p.a[0])


def sobolev_norm(p: TrigPoly, r: float) -> float:
    """
    Periodic H^r norm with ||p||^2 = sum_k (1 + k^2)^r |c_k|^2 over the
    complex coefficients of p = sum_k c_k e^{ikt}.

    With this normalization sobolev_norm(p, 0) == l2_norm(p) / sqrt(2*pi).
    """
    k = np.arange(1, p.n + 1)
    sines = np.concatenate([p.b, [0.0]])
    weights = (1.0 + k.astype(float) ** 2) ** r
    total = p.a[0] ** 2 + 0.5 * np.sum(weights * (p.a[1:] ** 2 + sines**2))
    return float(np.sqrt(total))
