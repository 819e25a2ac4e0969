"""Maximal angles between subspaces and the geometric bound on eta.

Angles are carried as sines and tangents (operator norms); the radian value is
only a convenience, since arcsin loses precision near 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotGraphRepresentable
from .linalg import OrthonormalBasis, operator_norm, orthonormalize
from .split import CompressionSetup, ObliqueProjector, OperatorSplit


def max_angle(m: OrthonormalBasis, n: OrthonormalBasis) -> tuple[float, float]:
    """(sin, theta) of the maximal angle, sin = ||P_M - P_N||."""
    if m.ambient_dim != n.ambient_dim:
        raise DimensionMismatch(f"ambient dimensions differ: {m.ambient_dim} vs {n.ambient_dim}")
    s = min(1.0, operator_norm(m.projector - n.projector))
    return s, math.asin(s)


def inv_sqrt_psd(g: np.ndarray) -> np.ndarray:
    """``g^{-1/2}`` for a symmetric positive definite ``g``."""
    g = 0.5 * (g + g.T)
    vals, vecs = np.linalg.eigh(g)
    return (vecs / np.sqrt(vals)) @ vecs.T


@dataclass(frozen=True)
class GraphRotation:
    """V written as the graph of X over W, in the frame (basis of W, basis of W^perp).

    ``X`` is ``(n-k) x k`` (W to W^perp); ``Umat`` is the ambient ``n x n``
    orthogonal block rotation carrying W onto V.
    """

    X: np.ndarray
    Umat: np.ndarray
    frame: np.ndarray
    k: int

    @property
    def tan(self) -> float:
        return operator_norm(self.X)

    def to_frame(self, a: np.ndarray) -> np.ndarray:
        return self.frame.T @ a @ self.frame

    def from_frame(self, a: np.ndarray) -> np.ndarray:
        return self.frame @ a @ self.frame.T

    def residuals(self, v: OrthonormalBasis, w: OrthonormalBasis) -> dict[str, float]:
        n = self.frame.shape[0]
        graph = orthonormalize(self.frame @ np.vstack([np.eye(self.k), self.X]))
        um = self.Umat
        return {
            "orthogonality": operator_norm(um.T @ um - np.eye(n)),
            "rotation": operator_norm(um @ w.projector @ um.T - v.projector),
            "graph": operator_norm(graph.projector - v.projector),
        }


def rotation_blocks(x: np.ndarray) -> np.ndarray:
    """Block rotation built from X in the W + W^perp frame."""
    nc, k = x.shape
    a = inv_sqrt_psd(np.eye(k) + x.T @ x)
    b = inv_sqrt_psd(np.eye(nc) + x @ x.T)
    return np.block([[a, -x.T @ b], [x @ a, b]])


def graph_tangent(v: OrthonormalBasis, w: OrthonormalBasis, p: ObliqueProjector, tol: float = 1e-10) -> GraphRotation:
    if v.ambient_dim != w.ambient_dim or v.k != w.k:
        raise DimensionMismatch(f"V ({v.ambient_dim}x{v.k}) and W ({w.ambient_dim}x{w.k}) are incompatible")
    s, _ = max_angle(v, w)
    if s >= 1.0 - tol:
        raise NotGraphRepresentable(f"||P_V - P_W|| = {s:.6g} is not below 1")
    wb = w.cols
    wc = w.complement().cols
    x = wc.T @ p.matrix @ wb
    frame = np.hstack([wb, wc])
    umat = frame @ rotation_blocks(x) @ frame.T
    return GraphRotation(X=x, Umat=umat, frame=frame, k=w.k)


def annular_residuals(v: OrthonormalBasis, w: OrthonormalBasis, p: ObliqueProjector, g: GraphRotation) -> tuple[float, float]:
    """Residuals of the block representations of P_W - P and P_V - P.

    In the W + W^perp frame, ``P_W - P = [[0, 0], [-X, 0]]`` and
    ``P_V - P = R [[0, X^T], [0, 0]] R^T`` with R the block rotation.
    """
    k = g.k
    n = g.frame.shape[0]
    x = g.X
    lower = np.zeros((n, n))
    lower[k:, :k] = -x
    upper = np.zeros((n, n))
    upper[:k, k:] = x.T
    rot = rotation_blocks(x)
    r1 = operator_norm(g.to_frame(w.projector - p.matrix) - lower)
    r2 = operator_norm(g.to_frame(v.projector - p.matrix) - rot @ upper @ rot.T)
    return r1, r2


@dataclass(frozen=True)
class AngleReport:
    sin_uv: float
    sin_uw: float
    sin_vw: float
    tan_vw: float
    bound: float
    eta: float
    graph_norm: float

    @property
    def slack(self) -> float:
        return self.bound - self.eta

    def to_dict(self) -> dict:
        return {"sin_uv": self.sin_uv, "sin_uw": self.sin_uw, "tan_vw": self.tan_vw, "bound": self.bound}


def angle_bound(setup: CompressionSetup, split: OperatorSplit) -> AngleReport:
    """eta together with ``min(sin(U,V), sin(U,W)) + tan(V,W)``, which bounds it."""
    sin_uv, _ = max_angle(setup.U, setup.V)
    sin_uw, _ = max_angle(setup.U, setup.W)
    sin_vw, _ = max_angle(setup.V, setup.W)
    g = graph_tangent(setup.V, setup.W, setup.P)
    tan_vw = sin_vw / math.sqrt(1.0 - sin_vw * sin_vw)
    return AngleReport(
        sin_uv=sin_uv,
        sin_uw=sin_uw,
        sin_vw=sin_vw,
        tan_vw=tan_vw,
        bound=min(sin_uv, sin_uw) + tan_vw,
        eta=split.eta,
        graph_norm=g.tan,
    )
