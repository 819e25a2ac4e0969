"""JSON serialization of certificates and reports.

Floats are written with ``repr`` (shortest round-trip form, at most 17
significant digits). Infinities and NaN become the strings ``"inf"``,
``"-inf"`` and ``"nan"`` so the output stays strict JSON.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .angles import AngleReport
from .certify import Certificate, Match, Unmatched, Verdict

_SPECIAL = {"inf": math.inf, "-inf": -math.inf, "nan": math.nan}


def encode_float(x: float):
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def decode_float(x) -> float:
    if isinstance(x, str):
        try:
            return _SPECIAL[x]
        except KeyError:
            raise ValueError(f"not a float literal: {x!r}") from None
    return float(x)


def jsonable(obj):
    """Recursively replace non-finite floats by their string form."""
    if isinstance(obj, float):
        return encode_float(obj)
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, allow_nan=False) + "\n"


def certificate_json(cert: Certificate, angle: AngleReport | None) -> dict:
    """The stable CLI schema: eta, d, matches, secondary_bound, verdict, angle."""
    return {
        "eta": cert.eta,
        "d": cert.d,
        "matches": [m.to_dict() for m in cert.matches],
        "secondary_bound": cert.secondary_bound,
        "verdict": cert.verdict.value,
        "angle": angle.to_dict() if angle is not None else None,
    }


def certificate_to_dict(cert: Certificate) -> dict:
    """Full certificate, including the fields outside the CLI schema."""
    return {
        "eta": cert.eta,
        "d": cert.d,
        "alpha": cert.alpha,
        "beta": cert.beta,
        "matches": [m.to_dict() for m in cert.matches],
        "secondary_bound": cert.secondary_bound,
        "verdict": cert.verdict.value,
        "unmatched": [{"k": u.k, "mu": u.mu, "reason": u.reason} for u in cert.unmatched],
        "lambdas": list(cert.lambdas),
    }


def certificate_from_dict(d: dict) -> Certificate:
    f = decode_float
    return Certificate(
        eta=f(d["eta"]),
        d=f(d["d"]),
        alpha=f(d.get("alpha", "-inf")),
        beta=f(d.get("beta", "inf")),
        matches=tuple(Match(int(m["k"]), f(m["mu"]), int(m["j"]), f(m["lambda"]), f(m["rel_err"])) for m in d["matches"]),
        secondary_bound=f(d["secondary_bound"]),
        verdict=Verdict(d["verdict"]),
        unmatched=tuple(Unmatched(int(u["k"]), f(u["mu"]), u["reason"]) for u in d.get("unmatched", ())),
        lambdas=tuple(f(v) for v in d.get("lambdas", ())),
    )


def _decode_tree(obj):
    if isinstance(obj, str) and obj in _SPECIAL:
        return _SPECIAL[obj]
    if isinstance(obj, dict):
        return {k: _decode_tree(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_decode_tree(v) for v in obj]
    return obj


@dataclass
class Report:
    """Outcome of evaluating one instance."""

    instance: dict
    status: str
    certificate: dict | None = None
    angle: dict | None = None
    residuals: dict = field(default_factory=dict)
    invariants: dict = field(default_factory=dict)
    timing: float = 0.0
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.status != "InternalContradiction" and all(self.invariants.values())

    def to_dict(self) -> dict:
        return {
            "instance": self.instance,
            "status": self.status,
            "certificate": self.certificate,
            "angle": self.angle,
            "residuals": self.residuals,
            "invariants": self.invariants,
            "timing": self.timing,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        d = _decode_tree(d)
        return cls(**d)

    def to_json(self) -> str:
        return dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))
