"""Dense multivariate polynomials over a fixed monomial basis.

A polynomial in n variables of total degree <= D is stored as a dense
coefficient vector of length N = binom(n+D, D) against the graded
lexicographic basis (highest total degree first, ties broken by descending
lexicographic comparison of exponent vectors, constant monomial last).
Fixing the order makes coefficient vectors, eigenvectors, and serialized
models reproducible across runs.

All types are immutable after construction and all operations are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

__all__ = [
    "MonomialBasis",
    "Poly",
    "enumerate_monomials",
    "gradient_polys",
    "multiply",
    "sum_of_squares",
]

# Rows processed per block when evaluating on large clouds, to bound the
# size of the broadcast (m, N, n) intermediate.
_EVAL_CHUNK = 4096

UNIT_NORM_TOL = 1e-12


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    # Exponent vectors summing to `total`, in descending lexicographic order.
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class MonomialBasis:
    """All monomials in ``n`` variables of total degree <= ``degree``.

    The basis length is binom(n + degree, degree) and the ordering is
    graded lexicographic descending, so the constant monomial sits last.
    """

    n: int
    degree: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"need at least one variable, got n={self.n}")
        if self.degree < 0:
            raise ValueError(f"degree bound must be >= 0, got {self.degree}")

    @cached_property
    def exponents(self) -> tuple[tuple[int, ...], ...]:
        """Ordered multi-indices alpha with |alpha| <= degree."""
        out = []
        for d in range(self.degree, -1, -1):
            out.extend(_compositions(d, self.n))
        return tuple(out)

    @cached_property
    def exponent_array(self) -> np.ndarray:
        """Exponents as a read-only (N, n) integer array."""
        arr = np.array(self.exponents, dtype=np.int64)
        arr.setflags(write=False)
        return arr

    @cached_property
    def _index(self) -> dict[tuple[int, ...], int]:
        return {alpha: k for k, alpha in enumerate(self.exponents)}

    def index(self, alpha: Sequence[int]) -> int:
        """Position of the multi-index ``alpha`` in the basis order."""
        return self._index[tuple(alpha)]

    def __len__(self) -> int:
        return math.comb(self.n + self.degree, self.degree)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.exponents)


def enumerate_monomials(n: int, degree: int) -> MonomialBasis:
    """Monomial basis for n >= 1 variables up to the given degree bound."""
    return MonomialBasis(n=n, degree=degree)


@dataclass(frozen=True, eq=False)
class Poly:
    """Real polynomial: a coefficient vector against a MonomialBasis."""

    basis: MonomialBasis
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.array(self.coeffs, dtype=float)
        if c.shape != (len(self.basis),):
            raise ValueError(
                f"coefficient vector has shape {c.shape}, basis needs ({len(self.basis)},)"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_terms(
        cls, n: int, degree: int, terms: Mapping[Sequence[int], float]
    ) -> "Poly":
        """Build a Poly from a {multi-index: coefficient} mapping."""
        basis = enumerate_monomials(n, degree)
        c = np.zeros(len(basis))
        for alpha, value in terms.items():
            c[basis.index(alpha)] += value
        return cls(basis, c)

    @property
    def n(self) -> int:
        return self.basis.n

    @property
    def norm(self) -> float:
        """Euclidean norm of the coefficient vector."""
        return float(np.linalg.norm(self.coeffs))

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm - 1.0) <= UNIT_NORM_TOL

    def normalized(self) -> "Poly":
        nrm = self.norm
        if nrm == 0.0:
            raise ValueError("cannot normalize the zero polynomial")
        return Poly(self.basis, self.coeffs / nrm)

    def _as_points(self, points) -> tuple[np.ndarray, bool]:
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        if single:
            pts = pts[None, :]
        if pts.ndim != 2 or pts.shape[1] != self.basis.n:
            raise ValueError(
                f"points have dimension {pts.shape[-1] if pts.ndim else '?'}, "
                f"polynomial has {self.basis.n} variables"
            )
        return pts, single

    def evaluate(self, points):
        """Evaluate at one point (n,) or a stack of points (m, n).

        Returns a float for a single point, an (m,) array otherwise.
        Computed as sum_k c_k * x^alpha_k by direct exponentiation.
        """
        pts, single = self._as_points(points)
        exps = self.basis.exponent_array
        out = np.empty(pts.shape[0])
        for start in range(0, pts.shape[0], _EVAL_CHUNK):
            block = pts[start : start + _EVAL_CHUNK]
            monos = np.prod(block[:, None, :] ** exps[None, :, :], axis=2)
            out[start : start + _EVAL_CHUNK] = monos @ self.coeffs
        return float(out[0]) if single else out

    __call__ = evaluate

    def gradient(self, points):
        """Partial derivatives at one point (-> (n,)) or a stack (-> (m, n))."""
        pts, single = self._as_points(points)
        cols = [g.evaluate(pts) for g in gradient_polys(self)]
        out = np.stack(cols, axis=1)
        return out[0] if single else out


def gradient_polys(f: Poly) -> tuple[Poly, ...]:
    """The n partial derivatives of f, expressed in the same basis."""
    basis = f.basis
    grads = []
    for j in range(basis.n):
        c = np.zeros(len(basis))
        for k, alpha in enumerate(basis.exponents):
            if alpha[j] == 0:
                continue
            shifted = alpha[:j] + (alpha[j] - 1,) + alpha[j + 1 :]
            c[basis.index(shifted)] += alpha[j] * f.coeffs[k]
        grads.append(Poly(basis, c))
    return tuple(grads)


def _term_dict(f: Poly) -> dict[tuple[int, ...], float]:
    return {
        alpha: float(c)
        for alpha, c in zip(f.basis.exponents, f.coeffs)
        if c != 0.0
    }


def multiply(f: Poly, g: Poly) -> Poly:
    """Product of two polynomials by exact exponent-vector convolution."""
    if f.basis.n != g.basis.n:
        raise ValueError("polynomials have different variable counts")
    acc: dict[tuple[int, ...], float] = {}
    for alpha, ca in _term_dict(f).items():
        for beta, cb in _term_dict(g).items():
            gamma = tuple(a + b for a, b in zip(alpha, beta))
            acc[gamma] = acc.get(gamma, 0.0) + ca * cb
    return Poly.from_terms(f.basis.n, f.basis.degree + g.basis.degree, acc)


def sum_of_squares(fs: Iterable[Poly]) -> Poly:
    """Sum of squares f_1^2 + ... + f_k^2 as a single degree-2D polynomial.

    The inputs must share a variable count; the result is expressed over
    the basis of degree 2 * max(deg bound). Its zero set is the common
    zero set of the inputs.
    """
    fs = list(fs)
    if not fs:
        raise ValueError("need at least one polynomial")
    n = fs[0].basis.n
    if any(f.basis.n != n for f in fs):
        raise ValueError("polynomials have different variable counts")
    out_degree = 2 * max(f.basis.degree for f in fs)
    acc: dict[tuple[int, ...], float] = {}
    for f in fs:
        terms = _term_dict(f)
        for alpha, ca in terms.items():
            for beta, cb in terms.items():
                gamma = tuple(a + b for a, b in zip(alpha, beta))
                acc[gamma] = acc.get(gamma, 0.0) + ca * cb
    return Poly.from_terms(n, out_degree, acc)
