"""Run the seeded random tilted suite and summarize how tight the certificates are.

For each instance records eta, the largest relative error among matches
(how much of the eta budget is used) and the slack of the angle bound.

    python scripts/random_suite.py --count 1000 --seed 2024 --out suite.json
"""

import argparse
import time

import numpy as np

from relcert.harness import random_tilted_specs, run_batch
from relcert.report import dumps


def quantiles(x):
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        return {}
    qs = (0.0, 0.25, 0.5, 0.75, 1.0)
    return {f"q{int(q * 100)}": float(np.quantile(x, q)) for q in qs}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--n-max", type=int, default=40)
    ap.add_argument("--eps-max", type=float, default=5e-2)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", help="write per-instance rows as JSON")
    args = ap.parse_args(argv)

    specs = random_tilted_specs(args.count, args.seed, n_range=(4, args.n_max), eps_range=(1e-3, args.eps_max))
    t0 = time.perf_counter()
    reports, summary = run_batch(specs, workers=args.workers)
    elapsed = time.perf_counter() - t0

    rows = []
    for r in reports:
        cert = r.certificate or {}
        eta = cert.get("eta")
        rel = [m["rel_err"] for m in cert.get("matches", [])]
        rows.append({
            "n": r.instance["n"],
            "epsilon": r.instance["epsilon"],
            "eta": eta,
            "max_rel_err": max(rel) if rel else 0.0,
            "budget_used": max(rel) / eta if rel and eta else 0.0,
            "angle_slack": r.angle["bound"] - r.angle["eta"] if r.angle else None,
            "status": r.status,
        })

    print(f"{summary.total} instances in {elapsed:.1f}s: {summary.counts}")
    for key in ("eta", "max_rel_err", "budget_used", "angle_slack"):
        vals = [row[key] for row in rows if row[key] is not None]
        q = quantiles(vals)
        print(f"  {key:<12} " + "  ".join(f"{k}={v:.3e}" for k, v in q.items()))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dumps({"summary": summary.to_dict(), "rows": rows}))
    return 0 if summary.ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
