"""Sweep the tilt angle of a fixed subspace and tabulate eta, the angle bound and the match errors.

    python scripts/eta_vs_epsilon.py --seed 1 --points 12
"""

import argparse
import dataclasses
import math

import numpy as np

from relcert.harness import InstanceSpec, evaluate, gen_instance


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--points", type=int, default=12)
    ap.add_argument("--eps-min", type=float, default=1e-4)
    ap.add_argument("--eps-max", type=float, default=0.5)
    args = ap.parse_args(argv)

    base = InstanceSpec(
        n=8,
        spectrum=(-6.0, -2.0, -0.7, 0.5, 1.0, 3.0, 5.0, 9.0),
        subspace_mode="tilted",
        select=(3, 5, 6),
        seed=args.seed,
    )
    print(f"{'epsilon':>10} {'eta':>11} {'bound':>11} {'eta/eps':>9} {'max rel':>11} {'verdict':>15}")
    for eps in np.geomspace(args.eps_min, args.eps_max, args.points):
        h, u = gen_instance(dataclasses.replace(base, epsilon=float(eps)))
        cert, rep = evaluate(h, u)
        rel = max((m.rel_err for m in cert.matches), default=0.0) if cert else math.nan
        eta = cert.eta if cert else math.nan
        bound = rep.angle["bound"] if rep.angle else math.nan
        print(f"{eps:10.3e} {eta:11.4e} {bound:11.4e} {eta / eps:9.3f} {rel:11.4e} {rep.status:>15}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
