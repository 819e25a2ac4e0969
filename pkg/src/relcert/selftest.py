"""Fast in-process invariant suite behind ``relcert selftest``."""

from __future__ import annotations

import math
import time

import numpy as np

from .certify import certify
from .gap import (
    form_sandwich_check,
    guaranteed_interval,
    minimax_sample,
    perturbed_compare,
)
from .harness import (
    flip_specs,
    perturbation_instance,
    random_orthogonal,
    random_tilted_specs,
    rng_for,
    run_batch,
)
from .linalg import OrthonormalBasis, SymmetricOperator, spectral_projector


def _closed_form() -> tuple[bool, str]:
    t = 0.2
    h = SymmetricOperator.diag([1.0, 3.0])
    u = OrthonormalBasis([[math.cos(t)], [math.sin(t)]])
    cert = certify(h, u)
    eta = math.sin(2 * t)
    mu = 1 + 2 * math.sin(t) ** 2
    m = cert.matches[0] if cert.matches else None
    ok = (
        cert.certified
        and abs(cert.eta - eta) < 1e-12
        and m is not None
        and abs(m.mu - mu) < 1e-12
        and m.j == 1
    )
    return ok, f"eta={cert.eta:.6f}"


def _tilted(count: int) -> tuple[bool, str]:
    _, summary = run_batch(random_tilted_specs(count, seed=7, n_range=(4, 16)))
    ok = summary.ok and summary.counts.get("Certified", 0) == count
    return ok, str(summary.counts)


def _flip(count: int) -> tuple[bool, str]:
    _, summary = run_batch(flip_specs(count, seed=3))
    ok = summary.contradictions == 0 and summary.counts.get("NotCertifiable", 0) == count
    return ok, str(summary.counts)


def _perturbation(count: int) -> tuple[bool, str]:
    rng = rng_for(11)
    worst = -math.inf
    for _ in range(count):
        a, v, p, alpha, beta = perturbation_instance(rng, int(rng.integers(2, 12)))
        pairs = perturbed_compare(a, v, p, guaranteed_interval(alpha, beta, p))
        if not all(x.ok for x in pairs):
            return False, "bound violated"
        worst = max(worst, form_sandwich_check(a, v, p, samples=20, seed=0))
    return worst <= 1e-10, f"worst sandwich violation {worst:.2e}"


def _minimax(count: int) -> tuple[bool, str]:
    rng = rng_for(5)
    for i in range(count):
        n = int(rng.integers(3, 8))
        q = random_orthogonal(n, rng)
        vals = np.sort(rng.uniform(-5, 5, size=n))
        vals[vals == 0] = 1.0
        t = SymmetricOperator((q * vals) @ q.T)
        lam = spectral_projector(t, (0.0, math.inf))
        if lam.k == 0:
            continue
        res = minimax_sample(t, lam, 1, samples=20, seed=i)
        if not (res.floor_ok and res.witness_error is not None and res.witness_error <= 1e-10):
            return False, f"instance {i}"
    return True, f"{count} instances"


CHECKS = {
    "closed-form 2x2": lambda: _closed_form(),
    "tilted certificates": lambda: _tilted(100),
    "eta = 1 boundary": lambda: _flip(5),
    "gap perturbation": lambda: _perturbation(50),
    "minimax witness": lambda: _minimax(20),
}


def run(stream=None) -> bool:
    all_ok = True
    for name, check in CHECKS.items():
        t0 = time.perf_counter()
        try:
            ok, detail = check()
        except Exception as exc:  # selftest reports, never crashes
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        all_ok &= ok
        if stream is not None:
            print(f"{'PASS' if ok else 'FAIL'}  {name:<22} {time.perf_counter() - t0:6.2f}s  {detail}", file=stream)
    return all_ok

