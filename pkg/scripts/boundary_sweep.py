"""Rotate a line from an eigenvector of +1 toward the diagonal flip and watch eta reach 1.

H = diag(-1, 1, r) and U = span{cos(s) e_2 + sin(s) e_1}. At s = pi/4 the
compression is singular, eta = 1 and the certificate is withdrawn.

    python scripts/boundary_sweep.py --points 9
"""

import argparse
import math

import numpy as np

from relcert import OrthonormalBasis, SymmetricOperator, certify
from relcert.split import setup


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=9)
    ap.add_argument("--r", type=float, default=4.0)
    args = ap.parse_args(argv)

    h = SymmetricOperator.diag([-1.0, 1.0, args.r])
    print(f"{'s/(pi/4)':>9} {'eta':>11} {'mu':>12} {'matched':>8} {'verdict':>15}")
    for frac in np.linspace(0.0, 1.0, args.points):
        s = frac * math.pi / 4
        u = OrthonormalBasis([[math.sin(s)], [math.cos(s)], [0.0]])
        cert = certify(h, u)
        mu = float(setup(h, u).M.values[0])
        print(f"{frac:9.3f} {cert.eta:11.4e} {mu:12.4e} {len(cert.matches):8d} {cert.verdict.value:>15}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
