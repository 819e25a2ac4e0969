"""Independent oracles: closed forms evaluated in extended precision, brute-force search.

Nothing here imports relcert.
"""

import itertools

from mpmath import mp, mpf, cos, sin, sqrt

mp.dps = 40


def tilted_2x2(t="0.2", r=3):
    """H = diag(1, r), U = span{(cos t, sin t)}.

    Every quantity follows from 2x2 arithmetic: P_U - P is antidiagonal with
    entries cs(1 - 1/r) and cs(1 - r); the maximal angle between two lines is
    |sin| of the angle between their direction vectors.
    """
    t = mpf(t)
    r = mpf(r)
    c, s = cos(t), sin(t)
    v = (c, r * s)
    w = (c, s / r)

    def sin_between(a, b):
        cross = abs(a[0] * b[1] - a[1] * b[0])
        return cross / (sqrt(a[0] ** 2 + a[1] ** 2) * sqrt(b[0] ** 2 + b[1] ** 2))

    def tan_between(a, b):
        cross = abs(a[0] * b[1] - a[1] * b[0])
        dot = a[0] * b[0] + a[1] * b[1]
        return cross / dot

    u = (c, s)
    eta = max(abs(c * s * (1 - 1 / r)), abs(c * s * (1 - r)))
    sin_uv = sin_between(u, v)
    sin_uw = sin_between(u, w)
    tan_vw = tan_between(v, w)
    mu = c**2 + r * s**2
    mu_perp = s**2 + r * c**2
    return {
        "eta": float(eta),
        "mu": float(mu),
        "mu_perp": float(mu_perp),
        "rel_err": float(abs(mu - 1) / 1),
        "rel_err_perp": float(abs(r - mu_perp) / r),
        "sin_uv": float(sin_uv),
        "sin_uw": float(sin_uw),
        "tan_vw": float(tan_vw),
        "bound": float(min(sin_uv, sin_uw) + tan_vw),
        "P": [[float(c * c), float(c * s / r)], [float(r * c * s), float(s * s)]],
        "V_raw": (float(v[0]), float(v[1])),
        "W_raw": (float(w[0]), float(w[1])),
    }


# frozen from tilted_2x2() at mp.dps = 40
T02 = {
    "eta": 0.38941834230865049,
    "mu": 1.0789390059971149,
    "mu_perp": 2.9210609940028851,
    "rel_err": 0.078939005997114917,
    "rel_err_perp": 0.026313001999038306,
    "sin_uv": 0.33949135543970179,
    "sin_uw": 0.13214489667062355,
    "tan_vw": 0.51922445641153399,
    "bound": 0.65136935308215754,
}

# frozen from tilted_2x2("0.05", 10)
T005_R10 = {
    "eta": 0.44925037491072667,
    "mu": 1.0224812562488841,
    "mu_perp": 9.9775187437511157,
    "rel_err_perp": 0.0022481256248884055,
}


def brute_force_match(mus, lambdas, eta):
    """Exhaustive search for strictly increasing j with |lambda_j - mu_k| <= eta lambda_j."""
    for combo in itertools.combinations(range(len(lambdas)), len(mus)):
        if all(abs(lambdas[j] - mu) <= eta * lambdas[j] for mu, j in zip(mus, combo)):
            return True
    return False


def sym_eig_2x2(a, b, d):
    """Eigenvalues of [[a, b], [b, d]] in closed form."""
    a, b, d = mpf(a), mpf(b), mpf(d)
    m = (a + d) / 2
    r = sqrt(((a - d) / 2) ** 2 + b**2)
    return float(m - r), float(m + r)
