"""Relative eigenvalue certificates for the compression M of H to U.

If ``eta = ||P_U - P|| < 1`` then every eigenvalue ``mu_k`` of M in
``(0, (1 - eta) d)`` is matched to a positive eigenvalue ``lambda_{j_k}`` of H
below ``d`` with ``|lambda_{j_k} - mu_k| <= eta * lambda_{j_k}``, the indices
``j_k`` strictly increasing. The matching comes from viewing
``H_diag = H - H_off`` as a perturbation of H with relative bound ``eta |H|``:
``j_k`` is the rank of ``mu_k`` in the spectrum of ``H_diag`` above the gap,
and ``lambda_{j_k}`` the eigenvalue of H above the gap with that rank.

Finite matrices have no essential spectrum, so the level ``d`` is declared by
the caller (:class:`EssentialModel`); the default ``d = inf`` matches every
positive eigenvalue of M.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .config import get_tolerances, scaled
from .errors import (
    GapConditionFailed,
    HypothesisViolated,
    InternalContradiction,
    WindowNotInResolvent,
)
from .linalg import OrthonormalBasis, SymmetricOperator, variational_values
from .split import CompressionSetup, OperatorSplit, diag_off_split, setup as build_setup


class Verdict(str, Enum):
    CERTIFIED = "Certified"
    NOT_CERTIFIABLE = "NotCertifiable"
    PARTIAL = "Partial"


@dataclass(frozen=True)
class EssentialModel:
    """Declared bottom ``d`` of the (emulated) positive essential spectrum."""

    d: float = math.inf
    description: str = ""

    def __post_init__(self):
        if math.isnan(self.d):
            raise HypothesisViolated("essential threshold d is NaN")


@dataclass(frozen=True)
class Match:
    k: int
    mu: float
    j: int
    lam: float
    rel_err: float

    def to_dict(self) -> dict:
        return {"k": self.k, "mu": self.mu, "j": self.j, "lambda": self.lam, "rel_err": self.rel_err}


@dataclass(frozen=True)
class Unmatched:
    k: int
    mu: float
    # "above_threshold": mu >= (1 - eta) d, no guarantee exists
    # "boundary": within tolerance of a window end, excluded conservatively
    reason: str


@dataclass(frozen=True)
class Certificate:
    eta: float
    d: float
    alpha: float
    beta: float
    matches: tuple[Match, ...]
    secondary_bound: float
    verdict: Verdict
    unmatched: tuple[Unmatched, ...] = ()
    # variational values of H above the gap that the j indices refer to
    lambdas: tuple[float, ...] = field(default=(), repr=False)

    @property
    def certified(self) -> bool:
        return self.verdict is Verdict.CERTIFIED


def _gap_around_zero(h: SymmetricOperator) -> tuple[float, float]:
    neg = h.values[h.values < 0]
    pos = h.values[h.values > 0]
    alpha = float(neg[-1]) if neg.size else -math.inf
    beta = float(pos[0]) if pos.size else math.inf
    return alpha, beta


def _inner_point(lo: float, hi: float) -> float:
    if math.isinf(lo) and math.isinf(hi):
        return 0.0
    if math.isinf(lo):
        return hi - max(1.0, abs(hi))
    if math.isinf(hi):
        return lo + max(1.0, abs(lo))
    return 0.5 * (lo + hi)


def _shrink(t: float, eta: float, direction: int) -> float:
    """``t + eta|t|`` (direction +1) or ``t - eta|t|`` (direction -1), infinities kept."""
    if math.isinf(t):
        return t
    return t + direction * eta * abs(t)


def hdiag_spectrum(s: CompressionSetup) -> tuple[np.ndarray, np.ndarray]:
    """Spectrum of H_diag as the union of the spectra of M and of the compression to U^perp.

    Returns ``(values, from_m)``, sorted ascending, ties ordered with M's
    eigenvalues first. U reduces H_diag, so this is its exact spectral
    labelling; no floating point matching of values is needed.
    """
    vals = np.concatenate([s.M.values, s.M_perp.values])
    tags = np.concatenate([np.zeros(s.M.dim, dtype=int), np.ones(s.M_perp.dim, dtype=int)])
    order = np.lexsort((tags, vals))
    return vals[order], tags[order] == 0


def match_indices(
    s: CompressionSetup,
    split: OperatorSplit,
    ess: EssentialModel,
    alpha: float,
    beta: float | None = None,
) -> list[tuple[int, int]]:
    """Pairs ``(k, j_k)`` for eigenvalues of M in ``(0, (1 - eta) d)``, both 1-based.

    ``j_k`` is the rank of ``mu_k`` among eigenvalues of H_diag above
    ``(1 - eta) alpha``. ``beta`` defaults to the smallest positive eigenvalue
    of H; the split between "below" and "above" is taken inside the window
    ``((1 - eta) alpha, (1 - eta) beta)``, which holds no spectrum of H_diag.
    """
    eta = split.eta
    if eta >= 1.0 - get_tolerances().margin:
        raise HypothesisViolated(f"eta = {eta:.6g} is not below 1")
    if beta is None:
        beta = _gap_around_zero(s.H)[1]
    return _rank_matches(s, eta, alpha, beta, 0.0, _shrink(ess.d, eta, -1), tol=0.0)[0]


def _rank_matches(s, eta, alpha, beta, mu_low, mu_high, tol):
    """Core index construction shared by the zero-gap and general-gap paths."""
    vals, from_m = hdiag_spectrum(s)
    split_at = _inner_point(_shrink(alpha, eta, +1), _shrink(beta, eta, -1))
    above = vals > split_at
    # position of each M eigenvalue within the sorted H_diag spectrum
    m_positions = np.flatnonzero(from_m)
    first_above = int(np.argmax(above)) if above.any() else len(vals)
    pairs, unmatched = [], []
    for k, pos in enumerate(m_positions, start=1):
        mu = float(vals[pos])
        if mu <= mu_low or not above[pos]:
            continue
        if mu - mu_low <= tol or (not math.isinf(mu_high) and abs(mu - mu_high) <= tol):
            unmatched.append(Unmatched(k, mu, "boundary"))
            continue
        if mu >= mu_high:
            unmatched.append(Unmatched(k, mu, "above_threshold"))
            continue
        pairs.append((k, int(pos) - first_above + 1))
    return pairs, unmatched, vals, split_at


def oracle_match(mus, lambdas, eta: float, slack: float = 0.0) -> tuple[bool, tuple[int, ...]]:
    """Decide whether strictly increasing ``j_k`` exist with ``|lambda_j - mu_k| <= eta lambda_j``.

    For positive values the condition is ``mu/(1+eta) <= lambda <= mu/(1-eta)``,
    an interval whose endpoints increase with mu. Taking for each k the
    smallest admissible unused j is therefore optimal. ``slack`` widens every
    interval by that relative amount. Returns ``(feasible, witness)`` with
    1-based indices.
    """
    lambdas = list(lambdas)
    witness = []
    j = 0
    for mu in mus:
        lo = mu / (1.0 + eta) * (1.0 - slack)
        hi = mu / (1.0 - eta) * (1.0 + slack) if eta < 1.0 else math.inf
        while j < len(lambdas) and lambdas[j] < lo:
            j += 1
        if j == len(lambdas) or lambdas[j] > hi:
            return False, tuple(witness)
        witness.append(j + 1)
        j += 1
    return True, tuple(witness)


def witness_admissible(cert: Certificate, slack: float = 0.0) -> bool:
    """Check the certificate's own witness interval-wise against ``cert.lambdas``."""
    prev = 0
    for m in cert.matches:
        if m.j <= prev or m.j > len(cert.lambdas):
            return False
        lam = cert.lambdas[m.j - 1]
        if lam != m.lam:
            return False
        if abs(lam - m.mu) > cert.eta * abs(lam) * (1.0 + slack) + slack * abs(lam):
            return False
        prev = m.j
    return True


def _not_certifiable(eta, d, alpha, beta) -> Certificate:
    sec = eta / (1.0 - eta) if eta < 1.0 else math.inf
    return Certificate(eta, d, alpha, beta, (), sec, Verdict.NOT_CERTIFIABLE)


def _build(s, split, d, alpha, beta, mu_low, mu_high, tol) -> Certificate:
    h = s.H
    eta = split.eta
    sec = eta / (1.0 - eta)
    partial = Certificate(eta, d, alpha, beta, (), sec, Verdict.CERTIFIED)

    if s.M.dim and s.M.min_abs_eig <= tol:
        raise InternalContradiction(
            f"eta = {eta:.6g} < 1 but M is numerically singular (min |mu| = {s.M.min_abs_eig:.3g})", partial
        )
    pairs, unmatched, hd_vals, split_at = _rank_matches(s, eta, alpha, beta, mu_low, mu_high, tol)

    hd_direct = np.linalg.eigvalsh(split.h_diag.entries)
    if np.max(np.abs(hd_direct - hd_vals), initial=0.0) > tol * max(1.0, s.H.cond):
        raise InternalContradiction("spectrum of H_diag disagrees with the spectra of its U and U^perp blocks", partial)
    low_map, high_map = _shrink(alpha, eta, +1), _shrink(beta, eta, -1)
    leak = hd_vals[(hd_vals > low_map + tol) & (hd_vals < high_map - tol)]
    if leak.size:
        raise InternalContradiction(f"H_diag has eigenvalues {leak.tolist()} inside the guaranteed window", partial)

    lambdas = variational_values(h, _inner_point(alpha, beta)).values
    n_above = int(np.count_nonzero(hd_vals > split_at))
    if n_above != len(lambdas):
        raise InternalContradiction(f"H has {len(lambdas)} eigenvalues above the gap but H_diag has {n_above}", partial)

    matches = []
    for k, j in pairs:
        mu = float(s.M.values[k - 1])
        lam = lambdas[j - 1]
        diff = abs(lam - mu)
        if diff > eta * abs(lam) + tol:
            raise InternalContradiction(
                f"match (k={k}, j={j}): |{lam!r} - {mu!r}| exceeds eta * |lambda| = {eta * abs(lam)!r}", partial
            )
        if diff > sec * abs(mu) + tol:
            raise InternalContradiction(f"match (k={k}, j={j}) violates the eta/(1-eta) bound", partial)
        if lam >= d and not math.isinf(d):
            raise InternalContradiction(f"matched lambda_{j} = {lam!r} is not below d = {d!r}", partial)
        matches.append(Match(k, mu, j, lam, diff / abs(lam)))
    js = [m.j for m in matches]
    if any(b <= a for a, b in zip(js, js[1:])):
        raise InternalContradiction(f"indices {js} are not strictly increasing", partial)

    verdict = Verdict.PARTIAL if any(u.reason == "boundary" for u in unmatched) else Verdict.CERTIFIED
    return Certificate(eta, d, alpha, beta, tuple(matches), sec, verdict, tuple(unmatched), lambdas)


def _resolve_tol(h: SymmetricOperator, tol: float | None) -> float:
    return scaled(h.norm, tol)


def certify(
    h: SymmetricOperator,
    u: OrthonormalBasis,
    ess: EssentialModel | None = None,
    tol: float | None = None,
    s: CompressionSetup | None = None,
) -> Certificate:
    """Certificate for the positive eigenvalues of the compression of ``h`` to ``u``.

    ``tol`` is relative (scaled by ``max(1, ||H||)``); it defaults to the
    global ``rtol``. Raises :class:`SingularOperator` if H is not invertible
    and :class:`InternalContradiction` if a proven consequence fails.
    """
    ess = ess or EssentialModel()
    if not ess.d > 0:
        raise HypothesisViolated(f"essential threshold must be positive, got {ess.d!r}")
    s = s or build_setup(h, u)
    split = diag_off_split(h, u, s.P)
    alpha, beta = _gap_around_zero(h)
    if split.eta >= 1.0 - get_tolerances().margin:
        return _not_certifiable(split.eta, ess.d, alpha, beta)
    abs_tol = _resolve_tol(h, tol)
    return _build(s, split, ess.d, alpha, beta, 0.0, _shrink(ess.d, split.eta, -1), abs_tol)


def _mirror(cert: Certificate) -> Certificate:
    return replace(
        cert,
        d=-cert.d,
        alpha=-cert.beta,
        beta=-cert.alpha,
        matches=tuple(replace(m, mu=-m.mu, lam=-m.lam) for m in cert.matches),
        unmatched=tuple(replace(x, mu=-x.mu) for x in cert.unmatched),
        lambdas=tuple(-v for v in cert.lambdas),
    )


def certify_negative(
    h: SymmetricOperator,
    u: OrthonormalBasis,
    ess_neg: EssentialModel | None = None,
    tol: float | None = None,
) -> Certificate:
    """Certificate for negative eigenvalues, obtained by certifying ``-H``.

    ``ess_neg.d`` is the magnitude of the declared negative essential level.
    Indices ``k`` and ``j`` count from the eigenvalue closest to zero
    outwards; reported eigenvalues carry their original (negative) sign.
    """
    return _mirror(certify(-h, u, ess_neg, tol))


def certify_gap(
    h: SymmetricOperator,
    u: OrthonormalBasis,
    alpha_t: float,
    beta_t: float,
    ess: EssentialModel | None = None,
    tol: float | None = None,
    s: CompressionSetup | None = None,
) -> Certificate:
    """Certificate for eigenvalues above a gap ``(alpha_t, beta_t)`` not necessarily containing 0.

    Requires ``eta < (beta_t - alpha_t) / (|alpha_t| + |beta_t|)``. Eigenvalues
    of M in ``(alpha_t + eta|alpha_t|, d - eta|d|)`` are matched to eigenvalues
    of H above ``alpha_t`` with ``|lambda - mu| <= eta |lambda|``.
    """
    ess = ess or EssentialModel()
    if not (math.isfinite(alpha_t) and math.isfinite(beta_t) and alpha_t < beta_t):
        raise HypothesisViolated(f"gap must be a finite interval with alpha < beta, got ({alpha_t}, {beta_t})")
    if not ess.d >= beta_t:
        raise HypothesisViolated(f"essential threshold d = {ess.d!r} lies below the gap end {beta_t!r}")
    s = s or build_setup(h, u)
    inside = h.values[(h.values > alpha_t) & (h.values < beta_t)]
    if inside.size:
        raise WindowNotInResolvent(f"H has eigenvalues {inside.tolist()} in ({alpha_t}, {beta_t})")
    split = diag_off_split(h, u, s.P)
    limit = (beta_t - alpha_t) / (abs(alpha_t) + abs(beta_t))
    if not split.eta < limit:
        raise GapConditionFailed(f"eta = {split.eta:.6g} must be below (beta - alpha)/(|alpha| + |beta|) = {limit:.6g}")
    abs_tol = _resolve_tol(h, tol)
    return _build(
        s, split, ess.d, alpha_t, beta_t,
        _shrink(alpha_t, split.eta, +1), _shrink(ess.d, split.eta, -1), abs_tol,
    )
