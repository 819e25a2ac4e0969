"""Dense symmetric linear algebra primitives.

Everything downstream works with two immutable value types:

* :class:`SymmetricOperator` -- a real symmetric matrix whose eigendecomposition
  is computed once, at construction.
* :class:`OrthonormalBasis` -- column-orthonormal matrix representing a
  subspace; spectral projectors are always carried as bases so that ranks stay
  exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import get_tolerances, scaled
from .errors import DimensionMismatch, NonFinite, RankDeficient


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


def _check_finite(a: np.ndarray, what: str = "matrix") -> None:
    if not np.all(np.isfinite(a)):
        raise NonFinite(f"{what} contains NaN or Inf entries")


class SymmetricOperator:
    """Real symmetric matrix with cached eigendecomposition.

    The input is symmetrized as ``(A + A.T) / 2``, which is exactly symmetric in
    floating point. Eigenvalues are ascending with multiplicity.
    """

    __slots__ = ("entries", "values", "vectors")

    def __init__(self, entries):
        a = np.asarray(entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
        _check_finite(a)
        a = 0.5 * (a + a.T)
        if a.shape[0] == 0:
            values, vectors = np.zeros(0), np.zeros((0, 0))
        else:
            values, vectors = np.linalg.eigh(a)
        object.__setattr__(self, "entries", _frozen(a))
        object.__setattr__(self, "values", _frozen(values))
        object.__setattr__(self, "vectors", _frozen(vectors))

    def __setattr__(self, name, value):
        raise AttributeError("SymmetricOperator is immutable")

    def __repr__(self):
        return f"SymmetricOperator(dim={self.dim}, spectrum=[{self.min_eig:.6g}, {self.max_eig:.6g}])"

    @classmethod
    def diag(cls, values) -> "SymmetricOperator":
        return cls(np.diag(np.asarray(values, dtype=float)))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def norm(self) -> float:
        if self.dim == 0:
            return 0.0
        return float(max(abs(self.values[0]), abs(self.values[-1])))

    @property
    def min_eig(self) -> float:
        return float(self.values[0]) if self.dim else float("nan")

    @property
    def max_eig(self) -> float:
        return float(self.values[-1]) if self.dim else float("nan")

    @property
    def min_abs_eig(self) -> float:
        return float(np.min(np.abs(self.values))) if self.dim else float("inf")

    @property
    def tol(self) -> float:
        return scaled(self.norm)

    def is_invertible(self, rtol: float | None = None) -> bool:
        if rtol is None:
            rtol = get_tolerances().invertibility
        return self.min_abs_eig > rtol * self.norm

    @property
    def cond(self) -> float:
        m = self.min_abs_eig
        return self.norm / m if m > 0 else float("inf")

    def apply(self, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """Functional calculus: ``Q f(Lambda) Q^T`` as a dense matrix."""
        q = self.vectors
        return (q * f(self.values)) @ q.T

    def inverse(self) -> np.ndarray:
        """``H^{-1}`` through the eigendecomposition (no invertibility check)."""
        return self.apply(lambda v: 1.0 / v)

    def absolute(self) -> np.ndarray:
        return self.apply(np.abs)

    def eig_residual(self) -> tuple[float, float]:
        """(||A Q - Q diag||, ||Q^T Q - I||)."""
        q = self.vectors
        r1 = operator_norm(self.entries @ q - q * self.values)
        r2 = operator_norm(q.T @ q - np.eye(self.dim))
        return r1, r2

    def __neg__(self) -> "SymmetricOperator":
        return SymmetricOperator(-self.entries)


class OrthonormalBasis:
    """Column-orthonormal ``n x k`` matrix; ``k`` may be zero."""

    __slots__ = ("cols",)

    def __init__(self, cols, check: bool = True):
        q = np.asarray(cols, dtype=float)
        if q.ndim == 1:
            q = q[:, None]
        if q.ndim != 2:
            raise DimensionMismatch(f"basis must be 2-d, got shape {q.shape}")
        _check_finite(q, "basis")
        if check and q.shape[1]:
            err = operator_norm(q.T @ q - np.eye(q.shape[1]))
            if err > 1e-8:
                raise RankDeficient(f"columns are not orthonormal (||Q^T Q - I|| = {err:.3g})")
        object.__setattr__(self, "cols", _frozen(q))

    def __setattr__(self, name, value):
        raise AttributeError("OrthonormalBasis is immutable")

    def __repr__(self):
        return f"OrthonormalBasis(ambient_dim={self.ambient_dim}, k={self.k})"

    @classmethod
    def standard(cls, n: int, indices) -> "OrthonormalBasis":
        return cls(np.eye(n)[:, list(indices)])

    @property
    def ambient_dim(self) -> int:
        return self.cols.shape[0]

    @property
    def k(self) -> int:
        return self.cols.shape[1]

    @property
    def projector(self) -> np.ndarray:
        return self.cols @ self.cols.T

    def complement(self) -> "OrthonormalBasis":
        """Orthonormal basis of the orthogonal complement."""
        n, k = self.cols.shape
        if k == 0:
            return OrthonormalBasis(np.eye(n))
        u, _, _ = np.linalg.svd(self.cols, full_matrices=True)
        return OrthonormalBasis(u[:, k:], check=False)


def operator_norm(b) -> float:
    """Largest singular value (0 for empty matrices)."""
    b = np.asarray(b, dtype=float)
    _check_finite(b)
    if b.size == 0:
        return 0.0
    if b.ndim == 1:
        return float(np.linalg.norm(b))
    return float(np.linalg.norm(b, 2))


def sym_eig(a: SymmetricOperator) -> tuple[np.ndarray, OrthonormalBasis]:
    return a.values, OrthonormalBasis(a.vectors, check=False)


def orthonormalize(cols, tol: float = 1e-10) -> OrthonormalBasis:
    """Orthonormal basis of the column space of ``cols``.

    Uses a QR factorization with the signs fixed so that ``R`` has a positive
    diagonal; an already orthonormal input is returned unchanged up to rounding.
    Raises :class:`RankDeficient` if a singular value falls below
    ``tol * sigma_max``.
    """
    a = np.asarray(cols, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    _check_finite(a)
    n, k = a.shape
    if k > n:
        raise RankDeficient(f"{k} columns cannot be independent in dimension {n}")
    if k == 0:
        return OrthonormalBasis(np.zeros((n, 0)), check=False)
    sv = np.linalg.svd(a, compute_uv=False)
    if sv[0] == 0.0 or sv[-1] <= tol * sv[0]:
        raise RankDeficient(f"numerical rank below {k} (sigma_min/sigma_max = {sv[-1] / sv[0] if sv[0] else 0:.3g})")
    q, r = np.linalg.qr(a)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return OrthonormalBasis(q * signs, check=False)


def spectral_projector(a: SymmetricOperator, interval: tuple[float, float]) -> OrthonormalBasis:
    """Eigenvectors of ``a`` with eigenvalue in the open ``interval``."""
    lo, hi = interval
    mask = (a.values > lo) & (a.values < hi)
    return OrthonormalBasis(a.vectors[:, mask], check=False)


@dataclass(frozen=True)
class SpectralCut:
    threshold: float
    values: tuple[float, ...]

    @property
    def count(self) -> int:
        return len(self.values)


def variational_values(a: SymmetricOperator, gamma: float) -> SpectralCut:
    """Ascending eigenvalues strictly above ``gamma`` (with multiplicity).

    For a matrix these are the variational values of the part of ``a``
    above ``gamma``.
    """
    vals = a.values[a.values > gamma]
    return SpectralCut(float(gamma), tuple(float(v) for v in vals))


def compress_matrix(a: np.ndarray, q: np.ndarray) -> np.ndarray:
    m = q.T @ a @ q
    return 0.5 * (m + m.T)
