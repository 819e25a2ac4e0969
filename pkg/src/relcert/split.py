"""Compression of H to a subspace U and the objects derived from the pair (H, U).

For invertible symmetric H and a subspace U with orthonormal basis Q:

* ``M = Q^T H Q`` is the compression,
* ``V = H U`` and ``W = H^{-1} U`` are the image subspaces,
* ``P = H P_U H^{-1}`` is the oblique projector onto V along W^perp,
* ``H = H_diag + H_off`` splits H into the blocks that keep U and U^perp
  invariant and the cross blocks,
* ``eta = ||P_U - P||`` measures how far U is from being invariant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import get_tolerances
from .errors import DimensionMismatch, SingularOperator
from .linalg import (
    OrthonormalBasis,
    SymmetricOperator,
    compress_matrix,
    operator_norm,
    orthonormalize,
)


def _check_dims(h: SymmetricOperator, u: OrthonormalBasis) -> None:
    if h.dim != u.ambient_dim:
        raise DimensionMismatch(f"H is {h.dim}x{h.dim} but U lives in dimension {u.ambient_dim}")


def _check_invertible(h: SymmetricOperator) -> None:
    if not h.is_invertible():
        raise SingularOperator(
            f"H is numerically singular: min |eigenvalue| = {h.min_abs_eig:.3g}, "
            f"threshold {get_tolerances().invertibility:.1g} * ||H|| = {get_tolerances().invertibility * h.norm:.3g}"
        )


def compress(h: SymmetricOperator, u: OrthonormalBasis) -> SymmetricOperator:
    _check_dims(h, u)
    return SymmetricOperator(compress_matrix(h.entries, u.cols))


def image_subspaces(h: SymmetricOperator, u: OrthonormalBasis) -> tuple[OrthonormalBasis, OrthonormalBasis]:
    """Orthonormal bases of ``V = H U`` and ``W = H^{-1} U``."""
    _check_dims(h, u)
    _check_invertible(h)
    v = orthonormalize(h.entries @ u.cols)
    w = orthonormalize(h.inverse() @ u.cols)
    return v, w


@dataclass(frozen=True)
class ObliqueProjector:
    matrix: np.ndarray
    range_basis: OrthonormalBasis
    kernel_basis: OrthonormalBasis

    def residuals(self) -> dict[str, float]:
        """Idempotency and range/kernel residuals, all in operator norm."""
        p = self.matrix
        v = self.range_basis.cols
        kc = self.kernel_basis.cols
        return {
            "idempotency": operator_norm(p @ p - p),
            "range": operator_norm(p @ v - v),
            "kernel": operator_norm(p @ kc),
            # Ran P is contained in V
            "range_containment": operator_norm(p - v @ (v.T @ p)),
        }


def oblique_projection(h: SymmetricOperator, u: OrthonormalBasis) -> ObliqueProjector:
    v, w = image_subspaces(h, u)
    p = h.entries @ u.projector @ h.inverse()
    return ObliqueProjector(p, v, w.complement())


@dataclass(frozen=True)
class OperatorSplit:
    h_diag: SymmetricOperator
    h_off: SymmetricOperator
    eta: float
    p_u: np.ndarray


def diag_off_split(h: SymmetricOperator, u: OrthonormalBasis, p: ObliqueProjector | None = None) -> OperatorSplit:
    """Block-diagonal/off-diagonal split of H with respect to U + U^perp, and eta."""
    _check_dims(h, u)
    _check_invertible(h)
    if p is None:
        p = oblique_projection(h, u)
    pu = u.projector
    pc = np.eye(h.dim) - pu
    a = h.entries
    d = pu @ a @ pu + pc @ a @ pc
    d = 0.5 * (d + d.T)
    # H - H_diag is exactly symmetric because both terms are
    off = a - d
    eta = operator_norm(pu - p.matrix)
    return OperatorSplit(SymmetricOperator(d), SymmetricOperator(off), eta, pu)


@dataclass(frozen=True)
class CompressionSetup:
    H: SymmetricOperator
    U: OrthonormalBasis
    M: SymmetricOperator
    V: OrthonormalBasis
    W: OrthonormalBasis
    P: ObliqueProjector
    U_perp: OrthonormalBasis
    M_perp: SymmetricOperator

    @property
    def tol(self) -> float:
        return self.H.tol


def setup(h: SymmetricOperator, u: OrthonormalBasis) -> CompressionSetup:
    """Everything derived from (H, U) that the certificates need."""
    p = oblique_projection(h, u)
    uc = u.complement()
    return CompressionSetup(
        H=h,
        U=u,
        M=compress(h, u),
        V=p.range_basis,
        W=p.kernel_basis.complement(),
        P=p,
        U_perp=uc,
        M_perp=compress(h, uc),
    )


def verify_factorization(h: SymmetricOperator, u: OrthonormalBasis) -> dict[str, float]:
    """Residuals of two identities that hold exactly for every (H, U).

    ``factorization``: ``H_off H^{-1} = (P_U - P_U^perp)(P_U - P)``.
    ``norm_identity``: ``| ||P_U - P|| - ||P_U (I - P) + P_U^perp P|| |``.

    Both are absolute and should be at rounding level times ``cond(H)``.
    """
    p = oblique_projection(h, u)
    split = diag_off_split(h, u, p)
    pu = split.p_u
    n = h.dim
    eye = np.eye(n)
    pc = eye - pu
    pm = p.matrix
    lhs = split.h_off.entries @ h.inverse()
    rhs = (pu - pc) @ (pu - pm)
    alt = pu @ (eye - pm) + pc @ pm
    return {
        "factorization": operator_norm(lhs - rhs),
        "norm_identity": abs(split.eta - operator_norm(alt)),
    }


def invariance_defect(h: SymmetricOperator, u: OrthonormalBasis) -> float:
    """``||P_U^perp H P_U||``: zero iff U is invariant for H."""
    uc = u.complement()
    return operator_norm(uc.cols.T @ h.entries @ u.cols)
