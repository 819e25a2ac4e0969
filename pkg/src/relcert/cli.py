"""Command line front end.

Exit codes: 0 certified (or success), 2 not certifiable, 3 input error,
4 internal contradiction, 1 any other failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import selftest
from .angles import angle_bound
from .certify import Certificate, EssentialModel, Verdict, certify, certify_gap, certify_negative
from .errors import GapConditionFailed, InputError, InternalContradiction, RelcertError
from .harness import InstanceSpec, gen_instance, run_batch
from .mmio import load_basis, load_operator, save_basis, save_operator
from .report import certificate_json, dumps
from .split import diag_off_split, setup

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_NOT_CERTIFIABLE = 2
EXIT_INPUT = 3
EXIT_CONTRADICTION = 4


def _float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _table(cert: Certificate, stream) -> None:
    print(f"eta = {cert.eta:.6g}   d = {cert.d:g}   verdict = {cert.verdict.value}", file=stream)
    if cert.matches:
        print(f"{'k':>4} {'mu':>16} {'j':>4} {'lambda':>16} {'rel_err':>12}", file=stream)
        for m in cert.matches:
            print(f"{m.k:>4} {m.mu:>16.10g} {m.j:>4} {m.lam:>16.10g} {m.rel_err:>12.4e}", file=stream)
    for u in cert.unmatched:
        print(f"  unmatched k={u.k} mu={u.mu:.10g} ({u.reason})", file=stream)


def cmd_certify(args) -> int:
    h = load_operator(args.h_file)
    u = load_basis(args.u_file)
    if h.dim != u.ambient_dim:
        raise InputError(f"U has {u.ambient_dim} rows but H is {h.dim}x{h.dim}", args.u_file)
    ess = EssentialModel(args.ess_threshold)
    if args.negative:
        cert = certify_negative(h, u, ess, args.tol)
    elif args.gap is not None:
        cert = certify_gap(h, u, args.gap[0], args.gap[1], ess, args.tol)
    else:
        cert = certify(h, u, ess, args.tol)
    s = setup(h, u)
    angle = angle_bound(s, diag_off_split(h, u, s.P))
    _emit(dumps(certificate_json(cert, angle)), args.json)
    _table(cert, sys.stderr)
    return EXIT_NOT_CERTIFIABLE if cert.verdict is Verdict.NOT_CERTIFIABLE else EXIT_OK


def cmd_gen(args) -> int:
    spec = InstanceSpec(
        n=len(args.spectrum),
        spectrum=tuple(args.spectrum),
        subspace_mode=args.mode,
        select=tuple(args.select),
        epsilon=args.epsilon,
        k=args.k,
        seed=args.seed,
        ess_threshold=args.ess_threshold,
        gap=args.gap,
    )
    h, u = gen_instance(spec)
    note = "generated by relcert gen: " + json.dumps(spec.to_dict())
    save_operator(args.out_h, h, note)
    save_basis(args.out_u, u, note)
    print(f"wrote {args.out_h} ({h.dim}x{h.dim}) and {args.out_u} ({u.ambient_dim}x{u.k})", file=sys.stderr)
    return EXIT_OK


def _load_specs(path: str) -> list[InstanceSpec]:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read file ({exc.strerror})", path) from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg}", path, exc.lineno) from exc
    items = raw.get("instances") if isinstance(raw, dict) else raw
    if not isinstance(items, list):
        raise InputError("expected a list of instances or an object with an 'instances' list", path)
    specs = []
    for i, item in enumerate(items):
        try:
            specs.append(InstanceSpec.from_dict(item))
        except (RelcertError, TypeError, AttributeError) as exc:
            raise InputError(f"instance {i}: {exc}", path) from exc
    return specs


def cmd_batch(args) -> int:
    specs = _load_specs(args.spec_file)
    reports, summary = run_batch(specs, args.tol, workers=args.workers)
    _emit(dumps({"summary": summary.to_dict(), "reports": [r.to_dict() for r in reports]}), args.json)
    print(json.dumps(summary.to_dict()), file=sys.stderr)
    if summary.contradictions:
        return EXIT_CONTRADICTION
    return EXIT_OK if summary.ok else EXIT_FAIL


def cmd_selftest(args) -> int:
    return EXIT_OK if selftest.run(sys.stderr) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="relcert", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", help="certify eigenvalues of the compression of H to U")
    p.add_argument("h_file")
    p.add_argument("u_file")
    p.add_argument("--ess-threshold", type=_float, default=math.inf, metavar="D")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--negative", action="store_true", help="certify negative eigenvalues instead")
    mode.add_argument("--gap", nargs=2, type=_float, metavar=("ALPHA", "BETA"))
    p.add_argument("--tol", type=_float, default=None, help="relative tolerance (default 1e-10)")
    p.add_argument("--json", metavar="OUT", default=None, help="write the JSON report here instead of stdout")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("gen", help="generate an instance and write H and U as Matrix Market files")
    p.add_argument("--spectrum", type=_float, nargs="+", required=True)
    p.add_argument("--mode", choices=["eigvec", "tilted", "random", "flip"], default="eigvec")
    p.add_argument("--select", type=int, nargs="*", default=[], help="0-based eigenvalue positions")
    p.add_argument("--epsilon", type=_float, default=0.0)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ess-threshold", type=_float, default=math.inf)
    p.add_argument("--gap", type=_float, default=1e-8, help="minimum distance of the spectrum from 0")
    p.add_argument("--out-h", default="H.mtx")
    p.add_argument("--out-u", default="U.mtx")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("batch", help="run a JSON list of instance specs")
    p.add_argument("spec_file")
    p.add_argument("--tol", type=_float, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", metavar="OUT", default=None)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("selftest", help="run the built-in invariant suite")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except InternalContradiction as exc:
        print(f"internal contradiction: {exc}", file=sys.stderr)
        return EXIT_CONTRADICTION
    except GapConditionFailed as exc:
        print(f"not certifiable: {exc}", file=sys.stderr)
        return EXIT_NOT_CERTIFIABLE
    except (RelcertError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
