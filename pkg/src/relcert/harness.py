"""Instance generation and the batch runner.

Randomness comes from numpy's Philox counter-based generator, seeded with the
instance's 64-bit seed. Draw order is fixed: the ``n x n`` Gaussian matrix for
the eigenvector basis first, then whatever the subspace mode needs. Only
determinism within this implementation is promised, not bitwise agreement
with other implementations.
"""

from __future__ import annotations

import dataclasses
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .angles import angle_bound, annular_residuals, graph_tangent
from .certify import Certificate, EssentialModel, certify, oracle_match, witness_admissible
from .errors import InternalContradiction, InvalidSpec, RelcertError
from .gap import RelativeBoundParams
from .linalg import OrthonormalBasis, SymmetricOperator, operator_norm, orthonormalize
from .report import Report, certificate_to_dict, decode_float, encode_float
from .split import diag_off_split, setup, verify_factorization

MODES = ("eigvec", "tilted", "random", "flip")

# per-instance thresholds for the invariant checks
IDENTITY_TOL = 1e-9
BOUND_TOL = 1e-9


@dataclass(frozen=True)
class InstanceSpec:
    """Recipe for a test instance ``(H, U)``.

    ``select`` holds 0-based positions in ``spectrum``: the eigenvectors
    spanning U for ``eigvec`` and ``tilted``, consecutive pairs ``(i, j)``
    giving columns ``(q_i + q_j)/sqrt(2)`` for ``flip``. ``k`` is the
    dimension for ``random``.
    """

    n: int
    spectrum: tuple[float, ...]
    subspace_mode: str = "eigvec"
    select: tuple[int, ...] = ()
    epsilon: float = 0.0
    k: int = 1
    seed: int = 0
    ess_threshold: float = math.inf
    gap: float = 1e-8

    def __post_init__(self):
        object.__setattr__(self, "spectrum", tuple(float(x) for x in self.spectrum))
        object.__setattr__(self, "select", tuple(int(i) for i in self.select))
        if self.n < 1 or len(self.spectrum) != self.n:
            raise InvalidSpec(f"spectrum has {len(self.spectrum)} values for n = {self.n}")
        if not all(math.isfinite(x) for x in self.spectrum):
            raise InvalidSpec("spectrum must be finite")
        if min(abs(x) for x in self.spectrum) < self.gap:
            raise InvalidSpec(f"spectrum must stay at least {self.gap} away from 0")
        if self.subspace_mode not in MODES:
            raise InvalidSpec(f"unknown subspace mode {self.subspace_mode!r}; choose from {MODES}")
        if not self.epsilon >= 0:
            raise InvalidSpec(f"tilt angle must be non-negative, got {self.epsilon}")
        if not 0 <= self.seed < 2**64:
            raise InvalidSpec("seed must be a 64-bit unsigned integer")
        if any(not 0 <= i < self.n for i in self.select) or len(set(self.select)) != len(self.select):
            raise InvalidSpec(f"select {self.select} must be distinct indices in 0..{self.n - 1}")
        if self.subspace_mode == "flip" and len(self.select) % 2:
            raise InvalidSpec("flip mode needs an even number of indices")
        if self.subspace_mode == "random" and not 0 <= self.k <= self.n:
            raise InvalidSpec(f"k = {self.k} outside 0..{self.n}")

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["spectrum"] = list(self.spectrum)
        d["select"] = list(self.select)
        d["ess_threshold"] = encode_float(self.ess_threshold)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "InstanceSpec":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise InvalidSpec(f"unknown instance fields {sorted(unknown)}")
        d = dict(d)
        if "ess_threshold" in d:
            d["ess_threshold"] = decode_float(d["ess_threshold"])
        try:
            return cls(**d)
        except TypeError as exc:
            raise InvalidSpec(str(exc)) from None


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    return orthonormalize(rng.standard_normal((n, n))).cols


def tilt(base: np.ndarray, epsilon: float, rng: np.random.Generator) -> np.ndarray:
    """Rotate each basis column by ``epsilon`` toward its own random direction in the complement.

    The directions are orthonormal, so the rotated columns stay orthonormal
    and every principal angle to the original span equals ``epsilon``. When
    the complement is too small, only the first ``n - k`` columns move.
    """
    n, k = base.shape
    comp = OrthonormalBasis(base).complement().cols
    m = min(k, n - k)
    out = base.copy()
    if m == 0:
        return out
    dirs = comp @ orthonormalize(rng.standard_normal((n - k, m))).cols
    out[:, :m] = math.cos(epsilon) * base[:, :m] + math.sin(epsilon) * dirs
    return out


def gen_instance(spec: InstanceSpec) -> tuple[SymmetricOperator, OrthonormalBasis]:
    rng = rng_for(spec.seed)
    q = random_orthogonal(spec.n, rng)
    # H = Q^T diag(spectrum) Q, eigenvector i is row i of Q
    e = q.T
    h = SymmetricOperator((e * np.asarray(spec.spectrum)) @ e.T)
    mode = spec.subspace_mode
    if mode == "eigvec":
        cols = e[:, list(spec.select)]
    elif mode == "tilted":
        cols = tilt(e[:, list(spec.select)], spec.epsilon, rng)
    elif mode == "random":
        cols = rng.standard_normal((spec.n, spec.k))
    else:
        pairs = zip(spec.select[::2], spec.select[1::2])
        cols = np.column_stack([(e[:, i] + e[:, j]) / math.sqrt(2) for i, j in pairs]) if spec.select else np.zeros((spec.n, 0))
    return h, orthonormalize(cols)


def evaluate(
    h: SymmetricOperator,
    u: OrthonormalBasis,
    ess: EssentialModel | None = None,
    tol: float | None = None,
) -> tuple[Certificate | None, Report]:
    """Certificate plus every geometric and algebraic check for one pair (H, U).

    Never raises for library errors; they are recorded in the report.
    """
    t0 = time.perf_counter()
    report = Report(instance={}, status="Error")
    cert = None
    try:
        s = setup(h, u)
        split = diag_off_split(h, u, s.P)
        try:
            cert = certify(h, u, ess, tol, s)
        except InternalContradiction as exc:
            report.status = "InternalContradiction"
            report.error = str(exc)
            cert = exc.certificate
        else:
            report.status = cert.verdict.value
        if cert is not None:
            report.certificate = certificate_to_dict(cert)

        residuals = dict(verify_factorization(h, u))
        residuals.update(s.P.residuals())
        residuals["hdiag_on_u"] = operator_norm(s.U.cols.T @ split.h_diag.entries @ s.U.cols - s.M.entries)
        residuals["hoff_norm_vs_eta"] = abs(operator_norm(split.h_off.entries @ h.inverse()) - split.eta)
        inv = {}
        try:
            angle = angle_bound(s, split)
            g = graph_tangent(s.V, s.W, s.P)
            r1, r2 = annular_residuals(s.V, s.W, s.P, g)
            residuals.update({"annular_w": r1, "annular_v": r2})
            residuals.update({f"graph_{k}": v for k, v in g.residuals(s.V, s.W).items()})
            residuals["pv_minus_p_vs_x"] = abs(operator_norm(s.V.projector - s.P.matrix) - g.tan)
            residuals["pw_minus_p_vs_x"] = abs(operator_norm(s.W.projector - s.P.matrix) - g.tan)
            report.angle = {
                **angle.to_dict(), "sin_vw": angle.sin_vw, "eta": angle.eta, "graph_norm": angle.graph_norm,
            }
            inv["angle_bound"] = angle.eta <= angle.bound + BOUND_TOL
        except RelcertError as exc:
            report.error = (report.error + "; " if report.error else "") + f"angle: {exc}"
            inv["angle_bound"] = False
        inv["identities"] = all(v <= IDENTITY_TOL for v in residuals.values())
        if cert is not None and cert.matches:
            mus = [m.mu for m in cert.matches]
            feasible, _ = oracle_match(mus, cert.lambdas, cert.eta, slack=1e-12)
            inv["oracle_feasible"] = feasible
            inv["witness_admissible"] = witness_admissible(cert, slack=1e-12)
        report.residuals = residuals
        report.invariants = inv
    except RelcertError as exc:
        report.status = "Error"
        report.error = f"{type(exc).__name__}: {exc}"
    report.timing = time.perf_counter() - t0
    return cert, report


def run_instance(spec: InstanceSpec, tol: float | None = None) -> Report:
    try:
        h, u = gen_instance(spec)
    except RelcertError as exc:
        return Report(instance=spec.to_dict(), status="Error", error=f"{type(exc).__name__}: {exc}")
    _, report = evaluate(h, u, EssentialModel(spec.ess_threshold), tol)
    report.instance = spec.to_dict()
    return report


@dataclass
class BatchSummary:
    total: int = 0
    counts: dict = field(default_factory=dict)
    failed_invariants: int = 0

    @property
    def contradictions(self) -> int:
        return self.counts.get("InternalContradiction", 0)

    @property
    def ok(self) -> bool:
        return self.contradictions == 0 and self.failed_invariants == 0

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "counts": dict(sorted(self.counts.items())),
            "failed_invariants": self.failed_invariants,
            "contradictions": self.contradictions,
            "ok": self.ok,
        }


def run_batch(specs, tol: float | None = None, workers: int = 1) -> tuple[list[Report], BatchSummary]:
    """Evaluate every spec; report order follows spec order."""
    specs = list(specs)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(lambda sp: run_instance(sp, tol), specs))
    else:
        reports = [run_instance(sp, tol) for sp in specs]
    summary = BatchSummary(total=len(reports))
    for r in reports:
        summary.counts[r.status] = summary.counts.get(r.status, 0) + 1
        if not all(r.invariants.values()):
            summary.failed_invariants += 1
    return reports, summary


def random_tilted_specs(
    count: int,
    seed: int = 0,
    n_range: tuple[int, int] = (4, 40),
    eps_range: tuple[float, float] = (1e-3, 5e-2),
) -> list[InstanceSpec]:
    """Indefinite spectra with |eigenvalues| in [0.5, 10] and tilted eigenvector spans."""
    rng = rng_for(seed)
    specs = []
    for i in range(count):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        n_neg = int(rng.integers(1, n))
        mags = rng.uniform(0.5, 10.0, size=n)
        spectrum = np.concatenate([-mags[:n_neg], mags[n_neg:]])
        k = int(rng.integers(1, n))
        select = rng.choice(n, size=k, replace=False)
        specs.append(
            InstanceSpec(
                n=n,
                spectrum=tuple(spectrum.tolist()),
                subspace_mode="tilted",
                select=tuple(sorted(int(x) for x in select)),
                epsilon=float(rng.uniform(*eps_range)),
                seed=int(rng.integers(0, 2**63)),
            )
        )
    return specs


def flip_specs(count: int, seed: int = 0) -> list[InstanceSpec]:
    """Instances with eta = 1: U mixes eigenvectors of lambda and -lambda equally."""
    rng = rng_for(seed)
    specs = []
    for _ in range(count):
        pairs = int(rng.integers(1, 4))
        lam = rng.uniform(0.5, 5.0, size=pairs)
        extra = rng.uniform(0.5, 5.0, size=2) * np.array([1.0, -1.0])
        spectrum = np.concatenate([lam, -lam, extra])
        select = []
        for i in range(pairs):
            select += [i, pairs + i]
        specs.append(
            InstanceSpec(
                n=len(spectrum),
                spectrum=tuple(spectrum.tolist()),
                subspace_mode="flip",
                select=tuple(select),
                seed=int(rng.integers(0, 2**63)),
            )
        )
    return specs


def perturbation_instance(rng: np.random.Generator, n: int):
    """Random (A, V, b, alpha, beta) with ||V x|| <= b ||A x|| and (alpha, beta) a gap of A around 0."""
    q = random_orthogonal(n, rng)
    n_neg = int(rng.integers(1, n))
    mags = rng.uniform(0.5, 10.0, size=n)
    vals = np.concatenate([-mags[:n_neg], mags[n_neg:]])
    a = SymmetricOperator((q * vals) @ q.T)
    b = float(rng.uniform(0.0, 0.9))
    s = rng.standard_normal((n, n))
    s = 0.5 * (s + s.T)
    # scale so that ||V |A|^{-1}|| = b * u with u in (0, 1]
    ratio = np.linalg.norm(s @ a.apply(lambda w: 1.0 / np.abs(w)), 2)
    v = s * (b * float(rng.uniform(0.2, 1.0)) / ratio)
    alpha = float(a.values[a.values < 0][-1])
    beta = float(a.values[a.values > 0][0])
    return a, v, RelativeBoundParams(0.0, b), alpha, beta
