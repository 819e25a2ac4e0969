"""Global numerical tolerances."""

from __future__ import annotations

import contextlib
import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # relative tolerance; absolute scale is rtol * max(1, ||A||)
    rtol: float = 1e-10
    # H counts as invertible when min |eigenvalue| > invertibility * ||H||
    invertibility: float = 1e-10
    # certification requires eta < 1 - margin
    margin: float = 1e-8


_current = Tolerances()


def get_tolerances() -> Tolerances:
    return _current


def set_tolerances(**changes) -> Tolerances:
    """Replace global tolerances; returns the previous value."""
    global _current
    previous = _current
    _current = dataclasses.replace(_current, **changes)
    return previous


@contextlib.contextmanager
def tolerances(**changes):
    previous = set_tolerances(**changes)
    try:
        yield _current
    finally:
        set_tolerances(**dataclasses.asdict(previous))


def scaled(norm: float, rtol: float | None = None) -> float:
    if rtol is None:
        rtol = _current.rtol
    return rtol * max(1.0, norm)
