"""Minimal Matrix Market reader/writer for dense real matrices.

Supports ``array`` and ``coordinate`` formats with ``real``/``integer``/
``double`` fields and ``general``/``symmetric`` symmetry. Parse errors raise
:class:`InputError` carrying the path and 1-based line number.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import InputError, RankDeficient
from .linalg import OrthonormalBasis, SymmetricOperator, orthonormalize

BANNER = "%%MatrixMarket"
_FIELDS = {"real", "integer", "double"}
_SYMMETRIES = {"general", "symmetric"}


def _data_lines(path):
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            yield lineno, raw.strip()


def read_matrix(path) -> tuple[np.ndarray, str]:
    """Return ``(matrix, symmetry)``."""
    path = os.fspath(path)
    try:
        lines = _data_lines(path)
        lineno, header = next(lines, (1, ""))
    except OSError as exc:
        raise InputError(f"cannot read file ({exc.strerror})", path) from exc
    parts = header.split()
    if len(parts) != 5 or parts[0] != BANNER or parts[1].lower() != "matrix":
        raise InputError(f"expected '{BANNER} matrix <format> <field> <symmetry>' banner", path, lineno)
    fmt, fld, sym = (p.lower() for p in parts[2:])
    if fmt not in ("array", "coordinate"):
        raise InputError(f"unsupported format {fmt!r}", path, lineno)
    if fld not in _FIELDS:
        raise InputError(f"unsupported field {fld!r}", path, lineno)
    if sym not in _SYMMETRIES:
        raise InputError(f"unsupported symmetry {sym!r}", path, lineno)

    body = ((n, s) for n, s in lines if s and not s.startswith("%"))
    size = next(body, None)
    if size is None:
        raise InputError("missing size line", path, lineno + 1)
    lineno, text = size
    want = 2 if fmt == "array" else 3
    try:
        dims = [int(t) for t in text.split()]
    except ValueError:
        dims = []
    if len(dims) != want or any(d < 0 for d in dims):
        raise InputError(f"malformed size line {text!r}", path, lineno)
    rows, cols = dims[0], dims[1]
    if sym == "symmetric" and rows != cols:
        raise InputError(f"symmetric matrix must be square, got {rows}x{cols}", path, lineno)

    out = np.zeros((rows, cols))

    def number(tok, ln):
        try:
            return float(tok)
        except ValueError:
            raise InputError(f"not a number: {tok!r}", path, ln) from None

    if fmt == "array":
        if sym == "symmetric":
            slots = [(i, j) for j in range(cols) for i in range(j, rows)]
        else:
            slots = [(i, j) for j in range(cols) for i in range(rows)]
        idx = 0
        for ln, text in body:
            for tok in text.split():
                if idx >= len(slots):
                    raise InputError(f"more than {len(slots)} entries", path, ln)
                i, j = slots[idx]
                out[i, j] = number(tok, ln)
                idx += 1
        if idx < len(slots):
            raise InputError(f"expected {len(slots)} entries, found {idx}", path, lineno)
    else:
        nnz = dims[2]
        seen = 0
        for ln, text in body:
            toks = text.split()
            if len(toks) != 3:
                raise InputError(f"expected 'row col value', got {text!r}", path, ln)
            try:
                i, j = int(toks[0]) - 1, int(toks[1]) - 1
            except ValueError:
                raise InputError(f"bad indices in {text!r}", path, ln) from None
            if not (0 <= i < rows and 0 <= j < cols):
                raise InputError(f"index ({i + 1}, {j + 1}) out of range for {rows}x{cols}", path, ln)
            if sym == "symmetric" and j > i:
                raise InputError("symmetric coordinate entries must lie in the lower triangle", path, ln)
            out[i, j] = number(toks[2], ln)
            seen += 1
            if seen > nnz:
                raise InputError(f"more than the declared {nnz} entries", path, ln)
        if seen < nnz:
            raise InputError(f"declared {nnz} entries, found {seen}", path, lineno)
    if sym == "symmetric":
        out = np.tril(out) + np.tril(out, -1).T
    if not np.all(np.isfinite(out)):
        raise InputError("matrix contains NaN or Inf", path)
    return out, sym


def write_matrix(path, a, symmetric: bool = False, comment: str | None = None) -> None:
    """Write ``a`` in array format with 17 significant digits."""
    a = np.asarray(a, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    rows, cols = a.shape
    sym = "symmetric" if symmetric else "general"
    lines = [f"{BANNER} matrix array real {sym}"]
    if comment:
        lines.extend(f"% {c}" for c in comment.splitlines())
    lines.append(f"{rows} {cols}")
    for j in range(cols):
        start = j if symmetric else 0
        lines.extend(f"{a[i, j]:.17g}" for i in range(start, rows))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_operator(path) -> SymmetricOperator:
    a, sym = read_matrix(path)
    if a.shape[0] != a.shape[1]:
        raise InputError(f"H must be square, got {a.shape[0]}x{a.shape[1]}", os.fspath(path))
    if sym == "general":
        scale = max(1.0, float(np.max(np.abs(a), initial=0.0)))
        if np.max(np.abs(a - a.T), initial=0.0) > 1e-12 * scale:
            raise InputError("H is not symmetric", os.fspath(path))
    return SymmetricOperator(a)


def load_basis(path) -> OrthonormalBasis:
    """Read subspace columns; they are orthonormalized if they are not already."""
    q, _ = read_matrix(path)
    try:
        return OrthonormalBasis(q)
    except RankDeficient:
        pass
    try:
        return orthonormalize(q)
    except RankDeficient as exc:
        raise InputError(f"subspace columns are linearly dependent ({exc})", os.fspath(path)) from exc


def save_operator(path, h: SymmetricOperator, comment: str | None = None) -> None:
    write_matrix(path, h.entries, symmetric=True, comment=comment)


def save_basis(path, u: OrthonormalBasis, comment: str | None = None) -> None:
    write_matrix(path, u.cols, symmetric=False, comment=comment)
