"""Eigenvalues in a spectral gap under relatively bounded perturbations.

A symmetric V is dominated by ``A_1 = a + b|A|`` (``b < 1``) when
``||V x|| <= ||A_1 x||``. If no eigenvalue of A lies in ``(alpha, beta)`` and
``beta - alpha > 2a + b(|alpha| + |beta|)`` then B = A + V has no eigenvalue in
``(f_+(alpha), f_-(beta))``, with ``f_pm(t) = t pm (a + b|t|)``, the two parts
above the gap have equal dimension, and the variational values differ by at
most ``a + b|lambda|``.

The gap-condition/minimax helpers check the variational characterization of
eigenvalues above a gap directly on matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import scaled
from .errors import (
    DegenerateBound,
    DimensionMismatch,
    HypothesisViolated,
    IndexOutOfRange,
    InternalContradiction,
    WindowNotInResolvent,
)
from .linalg import (
    OrthonormalBasis,
    SymmetricOperator,
    compress_matrix,
    operator_norm,
    orthonormalize,
    variational_values,
)


@dataclass(frozen=True)
class RelativeBoundParams:
    a: float
    b: float

    def __post_init__(self):
        if not 0.0 <= self.b < 1.0:
            raise HypothesisViolated(f"b must lie in [0, 1), got {self.b!r}")

    def f_plus(self, t: float) -> float:
        # t + b|t| -> -inf as t -> -inf because b < 1
        if math.isinf(t):
            return t
        return t + (self.a + self.b * abs(t))

    def f_minus(self, t: float) -> float:
        if math.isinf(t):
            return t
        return t - (self.a + self.b * abs(t))

    def a1(self, a: SymmetricOperator) -> np.ndarray:
        """``a I + b |A|``."""
        return a.apply(lambda v: self.a + self.b * np.abs(v))


def _as_matrix(v, n: int) -> np.ndarray:
    m = v.entries if isinstance(v, SymmetricOperator) else np.asarray(v, dtype=float)
    if m.shape != (n, n):
        raise DimensionMismatch(f"perturbation has shape {m.shape}, expected {(n, n)}")
    return m


def relbound_check(a: SymmetricOperator, v, p: RelativeBoundParams) -> bool:
    """Whether ``||V x|| <= ||(a + b|A|) x||`` for all x, i.e. ``||V A_1^{-1}|| <= 1``."""
    vm = _as_matrix(v, a.dim)
    diag = p.a + p.b * np.abs(a.values)
    tol = scaled(a.norm)
    if a.dim and diag.min() <= tol:
        raise DegenerateBound(f"a + b|A| is singular or indefinite (min eigenvalue {diag.min():.3g})")
    a1_inv = a.apply(lambda vals: 1.0 / (p.a + p.b * np.abs(vals)))
    return operator_norm(vm @ a1_inv) <= 1.0 + tol


@dataclass(frozen=True)
class GapWindow:
    alpha: float
    beta: float
    mapped_low: float
    mapped_high: float

    @property
    def split_point(self) -> float:
        """A point well inside the mapped window, used to split spectra."""
        return _midpoint(self.mapped_low, self.mapped_high)


def _midpoint(lo: float, hi: float) -> float:
    if math.isinf(lo) and math.isinf(hi):
        return 0.0
    if math.isinf(lo):
        return hi - max(1.0, abs(hi))
    if math.isinf(hi):
        return lo + max(1.0, abs(lo))
    return 0.5 * (lo + hi)


def guaranteed_interval(alpha: float, beta: float, p: RelativeBoundParams) -> GapWindow:
    """The window ``(f_+(alpha), f_-(beta))`` that stays free of spectrum."""
    if not alpha < beta:
        raise HypothesisViolated(f"need alpha < beta, got ({alpha}, {beta})")
    width = beta - alpha
    if math.isinf(width):
        ok = True
    else:
        need = 2 * p.a + p.b * (abs(alpha) + abs(beta))
        ok = width > need
    if not ok:
        raise HypothesisViolated(
            f"beta - alpha = {width:.6g} must exceed 2a + b(|alpha| + |beta|) = {need:.6g}"
        )
    return GapWindow(alpha, beta, p.f_plus(alpha), p.f_minus(beta))


@dataclass(frozen=True)
class PerturbedPair:
    lambda_a: float
    lambda_b: float
    allowed: float
    ok: bool


def perturbed_compare(a: SymmetricOperator, v, p: RelativeBoundParams, window: GapWindow) -> list[PerturbedPair]:
    """Compare variational values of A above alpha with those of B = A + V above f_+(alpha).

    Raises :class:`InternalContradiction` if B has spectrum inside the mapped
    window or the two counts differ; neither can happen under the hypotheses.
    """
    vm = _as_matrix(v, a.dim)
    inside = a.values[(a.values > window.alpha) & (a.values < window.beta)]
    if inside.size:
        raise WindowNotInResolvent(f"A has eigenvalues {inside.tolist()} in ({window.alpha}, {window.beta})")
    guaranteed_interval(window.alpha, window.beta, p)
    b = SymmetricOperator(a.entries + vm)
    tol = scaled(max(a.norm, b.norm))

    leak = b.values[(b.values > window.mapped_low + tol) & (b.values < window.mapped_high - tol)]
    if leak.size:
        raise InternalContradiction(f"B has eigenvalues {leak.tolist()} inside the guaranteed window")
    # The open windows contain no spectrum, so splitting at interior points
    # equals splitting at alpha and f_+(alpha) but is immune to rounding.
    above_a = variational_values(a, _midpoint(window.alpha, window.beta)).values
    above_b = variational_values(b, window.split_point).values
    if len(above_a) != len(above_b):
        raise InternalContradiction(f"counts above the gap differ: A has {len(above_a)}, B has {len(above_b)}")
    out = []
    for la, lb in zip(above_a, above_b):
        allowed = p.a + p.b * abs(la)
        out.append(PerturbedPair(la, lb, allowed, abs(la - lb) <= allowed + tol))
    return out


def form_sandwich_check(a: SymmetricOperator, v, p: RelativeBoundParams, samples: int = 100, seed: int = 0) -> float:
    """Worst signed violation of ``A - A_1 <= A + V <= A + A_1``.

    Checks sampled unit vectors and, as matrix inequalities, the smallest
    eigenvalues of ``A_1 + V`` and ``A_1 - V``. Non-positive means no
    violation.
    """
    vm = _as_matrix(v, a.dim)
    a1 = p.a1(a)
    bm = a.entries + vm
    worst = -math.inf
    if a.dim:
        rng = np.random.default_rng(seed)
        x = rng.standard_normal((a.dim, samples))
        x /= np.linalg.norm(x, axis=0)
        q = lambda m: np.einsum("ij,ij->j", x, m @ x)
        qb = q(bm)
        lower = q(a.entries - a1) - qb
        upper = qb - q(a.entries + a1)
        if samples:
            worst = float(max(lower.max(), upper.max()))
        lo_plus = np.linalg.eigvalsh(0.5 * (a1 + vm + (a1 + vm).T))[0]
        lo_minus = np.linalg.eigvalsh(0.5 * (a1 - vm + (a1 - vm).T))[0]
        worst = max(worst, -float(lo_plus), -float(lo_minus))
    return worst


@dataclass(frozen=True)
class GapConditionReport:
    nu: float
    nu_prime: float

    @property
    def holds(self) -> bool:
        return self.nu < self.nu_prime


def _check_pair(t: SymmetricOperator, lam: OrthonormalBasis) -> None:
    if t.dim != lam.ambient_dim:
        raise DimensionMismatch(f"T is {t.dim}x{t.dim} but Lambda lives in dimension {lam.ambient_dim}")


def gap_condition(t: SymmetricOperator, lam: OrthonormalBasis) -> GapConditionReport:
    """sup of the Rayleigh quotient on Ran(I - Lambda) versus inf on Ran Lambda."""
    _check_pair(t, lam)
    comp = lam.complement()
    nu = -math.inf
    if comp.k:
        nu = float(np.linalg.eigvalsh(compress_matrix(t.entries, comp.cols))[-1])
    nu_prime = math.inf
    if lam.k:
        nu_prime = float(np.linalg.eigvalsh(compress_matrix(t.entries, lam.cols))[0])
    return GapConditionReport(nu, nu_prime)


@dataclass(frozen=True)
class MinimaxResult:
    estimate: float
    floor_ok: bool
    target: float
    # None unless T commutes with Lambda; then the residual of the witness equality
    witness_error: float | None = None


def _sup_rayleigh(t: np.ndarray, basis: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(compress_matrix(t, basis))[-1])


def minimax_sample(
    t: SymmetricOperator,
    lam: OrthonormalBasis,
    j: int,
    samples: int,
    seed: int,
    tol: float | None = None,
) -> MinimaxResult:
    """Sample the inf-sup characterization of the j-th variational value above nu.

    Each sample is a random j-dimensional subspace of Ran Lambda; its value is
    the largest Rayleigh quotient over that subspace plus Ran(I - Lambda).
    Every sample must lie above the true value (``floor_ok``); the minimum
    over samples is the estimate.
    """
    _check_pair(t, lam)
    rep = gap_condition(t, lam)
    if not rep.holds:
        raise HypothesisViolated(f"gap condition fails: nu = {rep.nu:.6g} >= nu' = {rep.nu_prime:.6g}")
    if not 1 <= j <= lam.k:
        raise IndexOutOfRange(f"j = {j} outside 1..{lam.k}")
    if tol is None:
        tol = scaled(t.norm)
    above = variational_values(t, _midpoint(rep.nu, rep.nu_prime)).values
    if len(above) != lam.k:
        raise InternalContradiction(f"{len(above)} eigenvalues above the gap but dim Ran Lambda = {lam.k}")
    target = above[j - 1]
    comp = lam.complement().cols
    rng = np.random.default_rng(seed)
    sups = []
    for _ in range(samples):
        coeffs = orthonormalize(rng.standard_normal((lam.k, j))).cols
        sups.append(_sup_rayleigh(t.entries, np.hstack([lam.cols @ coeffs, comp])))
    estimate = min(sups) if sups else math.inf
    floor_ok = all(s >= target - tol for s in sups)

    witness_error = None
    commutator = operator_norm(comp.T @ t.entries @ lam.cols)
    if commutator <= tol:
        m = compress_matrix(t.entries, lam.cols)
        _, vecs = np.linalg.eigh(m)
        witness = lam.cols @ vecs[:, :j]
        sup = _sup_rayleigh(t.entries, np.hstack([witness, comp]))
        witness_error = abs(sup - target)
        estimate = min(estimate, sup)
        floor_ok = floor_ok and sup >= target - tol
    return MinimaxResult(estimate, floor_ok, target, witness_error)
