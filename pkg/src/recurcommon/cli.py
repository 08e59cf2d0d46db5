"""Command-line interface: analyze, certify, family, search, self, verify.

Exit codes: 0 success, 1 hypothesis rejection, 2 input error, 3 undecided.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .baker import (
    MODES,
    BoundCertificate,
    CertifyConfig,
    DependenceUnknown,
    HypothesisFailed,
    ModeRefused,
    certify,
)
from .families import ConditionFailed, FamilyParams, build
from .numerics import IntPoly, PrecisionExceeded, ball_to_json, precision_ceiling
from .recurrence import (
    NotBackwardExtendable,
    RecurrenceSpec,
    binet_data,
    char_poly,
    dominant_coefficient_nonzero,
)
from .roots import Dominance, dominance_profile
from .search import (
    SearchLimitExceeded,
    audit_ledger,
    enumerate_common_values,
    self_intersections,
    value_groups,
    verify_no_violation,
)

EXIT_OK, EXIT_REJECTED, EXIT_INPUT, EXIT_UNDECIDED = 0, 1, 2, 3


class InputError(Exception):
    pass


def _load_json(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _load_spec(path: str) -> RecurrenceSpec:
    data = _load_json(path)
    try:
        return RecurrenceSpec.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: invalid recurrence spec ({exc})") from exc


def _emit(data: dict, out: str | None) -> None:
    text = json.dumps(data, sort_keys=True, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_analyze(args) -> int:
    spec = _load_spec(args.spec)
    bits = args.precision_bits
    prof = dominance_profile(char_poly(spec), bits)
    report = {
        "spec": spec.to_dict(),
        "char_poly": str(char_poly(spec)),
        "classification": prof.tag.value,
        "reason": prof.reason,
        "dominant_indices": list(prof.dominant),
        "dominant_multiplicity": prof.dominant_multiplicity,
        "roots": [{"re": ball_to_json(r.real, bits), "im": ball_to_json(r.imag, bits),
                   "multiplicity": m} for r, m in prof.rootset.roots],
        "magnitude_classes": [list(c) for c in prof.magnitude_classes],
    }
    if prof.tag is not Dominance.OTHER:
        binet = binet_data(spec, prof, bits)
        report["decay_exponent"] = ball_to_json(prof.decay, bits)
        report["binet"] = {
            "dominant_coefficient_abs": [ball_to_json(x, bits) for x in binet.dominant_abs],
            "dominant_coefficient_nonzero": dominant_coefficient_nonzero(spec, binet),
            "height_bounds": {k: ball_to_json(v, bits) for k, v in binet.heights.items()},
            "tail_degree": binet.tail_degree,
        }
    _emit(report, args.out)
    return EXIT_OK


def _config(args) -> CertifyConfig:
    return CertifyConfig(precision=args.precision_bits, max_denominator=args.max_denominator,
                         mode=args.mode)


def cmd_certify(args) -> int:
    spec_a, spec_b = _load_spec(args.spec_a), _load_spec(args.spec_b)
    try:
        cert = certify(spec_a, spec_b, _config(args))
    except HypothesisFailed as exc:
        _emit({"status": "rejected", "hypothesis": exc.which, "detail": exc.detail,
               "checklist": exc.checklist}, args.out)
        print(f"rejected: {exc.which}: {exc.detail}", file=sys.stderr)
        return EXIT_REJECTED
    except ModeRefused as exc:
        _emit({"status": "rejected", "hypothesis": "mode", "detail": str(exc)}, args.out)
        print(f"rejected: paper_faithful mode refused: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    except DependenceUnknown as exc:
        _emit({"status": "undecided", "detail": "dependence not found up to bound",
               "max_denominator": exc.max_denominator, "transcript": list(exc.transcript)}, args.out)
        print(f"undecided: dependence not found up to bound {exc.max_denominator}", file=sys.stderr)
        return EXIT_UNDECIDED
    text = cert.to_json()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _poly_arg(text: str | None) -> IntPoly:
    if not text:
        return IntPoly([1])
    try:
        return IntPoly([int(c) for c in text.split(",")])
    except ValueError as exc:
        raise InputError(f"polynomial coefficients must be comma-separated integers: {text}") from exc


def _ints_arg(text: str | None):
    return None if not text else tuple(int(c) for c in text.split(","))


def cmd_family(args) -> int:
    case = {"case-i": "CaseI", "case-ii": "CaseII", "bravo": "Bravo"}[args.case]
    initial_a = _ints_arg(args.initial_a)
    if case == "Bravo":
        initial_a = (args.f0, args.f1, args.f2)
    params = FamilyParams(case, args.a, args.b, args.p, args.q, _poly_arg(args.P1),
                          _poly_arg(args.P2), initial_a, _ints_arg(args.initial_b), args.sign)
    try:
        spec_a, spec_b = build(params)
    except ConditionFailed as exc:
        _emit({"status": "rejected", "clause": exc.clause, "detail": exc.detail,
               "params": params.to_dict()}, None)
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    if args.out:
        stem = Path(args.out)
        for tag, spec in (("A", spec_a), ("B", spec_b)):
            path = stem.with_name(f"{stem.name}_{tag}.json")
            path.write_text(json.dumps(spec.to_dict(), sort_keys=True, indent=2) + "\n")
            print(path)
    else:
        _emit({"params": params.to_dict(), "A": spec_a.to_dict(), "B": spec_b.to_dict()}, None)
    return EXIT_OK


def cmd_search(args) -> int:
    spec_a, spec_b = _load_spec(args.spec_a), _load_spec(args.spec_b)
    hits = enumerate_common_values(spec_a, spec_b, args.rangeA, args.rangeB,
                                   include_negative=args.negative, threads=args.threads)
    _emit({"range": {"A": args.rangeA, "B": args.rangeB, "negative": args.negative},
           "hits": [h.to_dict() for h in hits], "count": len(hits)}, args.out)
    return EXIT_OK


def cmd_self(args) -> int:
    spec = _load_spec(args.spec)
    groups = value_groups(spec, args.N)
    _emit({"N": args.N,
           "value_groups": [{"value": str(v), "indices": idx} for v, idx in groups.items()],
           "pairs": [[n, m, str(v)] for n, m, v in self_intersections(spec, args.N)]}, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    cert = BoundCertificate.from_dict(_load_json(args.certificate))
    report = verify_no_violation(None, cert, args.rangeA, args.rangeB).to_dict()
    if args.audit:
        report["ledger_audit"] = audit_ledger(cert, args.audit)
    _emit(report, args.out)
    return EXIT_UNDECIDED if report["undecided"] else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision-bits", type=int, default=256)
    common.add_argument("--max-denominator", type=int, default=64)
    common.add_argument("--mode", choices=MODES, default="tightened")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--out", help="write JSON here instead of stdout")

    parser = argparse.ArgumentParser(prog="recur-common", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="classify one recurrence")
    p.add_argument("spec")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("certify", parents=[common], help="certify a pair of recurrences")
    p.add_argument("spec_a")
    p.add_argument("spec_b")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("family", parents=[common], help="build a pair from a family")
    p.add_argument("case", choices=("case-i", "case-ii", "bravo"))
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--P1", help="ascending coefficients, e.g. -1,1 for X - 1")
    p.add_argument("--P2")
    p.add_argument("--sign", type=int, default=1)
    p.add_argument("--initial-a")
    p.add_argument("--initial-b")
    p.add_argument("--f0", type=int, default=0)
    p.add_argument("--f1", type=int, default=1)
    p.add_argument("--f2", type=int, default=1)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("search", parents=[common], help="common values a_n = b_m")
    p.add_argument("spec_a")
    p.add_argument("spec_b")
    p.add_argument("--rangeA", type=int, required=True)
    p.add_argument("--rangeB", type=int, required=True)
    p.add_argument("--negative", action="store_true", help="also search negative indices")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("self", parents=[common], help="f_n = f_m with n != m in [-N, N]")
    p.add_argument("spec")
    p.add_argument("--N", type=int, required=True)
    p.set_defaults(func=cmd_self)

    p = sub.add_parser("verify", parents=[common], help="sweep the main inequality")
    p.add_argument("certificate")
    p.add_argument("--rangeA", type=int, required=True)
    p.add_argument("--rangeB", type=int, required=True)
    p.add_argument("--audit", type=int, default=0, help="also audit the ledger up to this index")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("rangeA", "rangeB", "N"):
        if getattr(args, name, 0) is not None and getattr(args, name, 0) < 0:
            print(f"error: --{name} must be non-negative", file=sys.stderr)
            return EXIT_INPUT
    if args.precision_bits < 64 or args.max_denominator < 1 or args.threads < 1:
        print("error: need --precision-bits >= 64, --max-denominator >= 1, --threads >= 1",
              file=sys.stderr)
        return EXIT_INPUT
    if args.precision_bits > precision_ceiling():
        print(f"error: --precision-bits exceeds the ceiling {precision_ceiling()}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NotBackwardExtendable, SearchLimitExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PrecisionExceeded as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED


if __name__ == "__main__":
    sys.exit(main())
