"""Command line front end: ``mbkit verify|homology|morsify|catalog|flow``.

Exit codes: 0 when every check passes, 1 when some verification fails,
2 on unreadable or invalid input.  A batch exits with its worst code.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from . import catalog
from .counting import VerificationReport, verify_corollary, verify_main
from .descriptor import canonical_json, load_descriptor
from .errors import InputError
from .flow import (audit_d_squared, audit_sign_transport, build_complex, counting_reconstruction,
                   d_squared_violations, homology_polynomial, kernel_rank_inequality, load_flow)
from .homology import CellModel, SignCocycle, homology_profile
from .intpoly import IntPolynomial
from .morsify import morse_counting_D, morse_counting_N, morsify, verify_main_via_morsification

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _read_json(path, what: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {what}: {exc.strerror}", str(path)) from None
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
                         str(path)) from None


def _max_parallel(n: int) -> int:
    raw = os.environ.get("MBKIT_MAX_PARALLEL")
    if not raw:
        return max(n, 1)
    try:
        return max(int(raw), 1)
    except ValueError:
        return max(n, 1)


def _emit(payload, args) -> None:
    if getattr(args, "envelope", False):
        payload = {"generated_at": datetime.now(timezone.utc).isoformat(), "results": payload}
    sys.stdout.write(canonical_json(payload))


def _md_table(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(str(c) for c in row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


def _verify_one(path: str, args, choices) -> Tuple[int, dict, Optional[VerificationReport]]:
    try:
        d = load_descriptor(path)
        if args.corollary:
            report = verify_corollary(d)
        elif args.via_morsification:
            report = verify_main_via_morsification(d, choices)
        else:
            report = verify_main(d)
    except OSError as exc:
        return EXIT_INPUT, {"path": path, "error": f"cannot read: {exc.strerror}"}, None
    except InputError as exc:
        return EXIT_INPUT, {"path": path, "error": str(exc)}, None
    code = EXIT_PASS if report.passed else EXIT_FAIL
    return code, report.to_json(), report


def cmd_verify(args) -> int:
    choices = None
    if args.choices:
        try:
            choices = _read_json(args.choices, "choices")
        except InputError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        if not isinstance(choices, dict):
            print("error: choices must be an object of name -> counts", file=sys.stderr)
            return EXIT_INPUT
    with ThreadPoolExecutor(max_workers=_max_parallel(len(args.paths))) as pool:
        results = list(pool.map(lambda p: _verify_one(p, args, choices), args.paths))

    for code, payload, _ in results:
        if code == EXIT_INPUT:
            print(f"error: {payload['error']}", file=sys.stderr)
    if args.format == "json":
        _emit([payload for _, payload, _ in results], args)
    else:
        rows = []
        for code, payload, report in results:
            if report is None:
                rows.append([payload["path"], "-", "-", "-", "error", payload["error"]])
            else:
                rows.append([report.descriptor_name, report.theorem, report.lhs,
                             report.quotient if report.exact_division else "-",
                             report.verdict, report.failure_detail])
        sys.stdout.write(_md_table(
            ["descriptor", "theorem", "MB − P", "R(t)", "verdict", "detail"], rows))
    return max(code for code, _, _ in results)


def cmd_homology(args) -> int:
    try:
        model = CellModel.from_json(_read_json(args.path, "cell model"))
        twist = SignCocycle.from_json(_read_json(args.twist, "twist")) if args.twist else None
        profile = homology_profile(model, twist)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    poly = profile.poincare_polynomial()
    if args.format == "json":
        payload = profile.to_json()
        payload["poincare"] = poly.to_list()
        _emit(payload, args)
    else:
        sys.stdout.write(f"{poly}, torsion: {profile.torsion_text()}\n\n")
        sys.stdout.write(_md_table(
            ["degree", "free rank", "torsion"],
            [[k, r, list(t) or "-"] for k, (r, t) in
             enumerate(zip(profile.free_ranks, profile.torsion))]))
    return EXIT_PASS


def cmd_morsify(args) -> int:
    try:
        d = load_descriptor(args.path)
        choices = _read_json(args.choices, "choices") if args.choices else None
        md = morsify(d, choices)
    except OSError as exc:
        print(f"error: cannot read: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    mn, mdd = morse_counting_N(md), morse_counting_D(md)
    if args.format == "json":
        _emit({"descriptor": d.name, "morse_descriptor": md.to_json(),
               "counting_N": mn.to_list(), "counting_D": mdd.to_list()}, args)
    else:
        rows = [[n, md.interior[n], md.boundary_N[n], md.boundary_D[n]]
                for n in range(md.top_degree + 1)]
        sys.stdout.write(_md_table(["index", "I", "N", "D"], rows))
        sys.stdout.write(f"\nM^N_t(h) = {mn}\nM^D_t(h) = {mdd}\n")
    return EXIT_PASS


def _check_rows(checks) -> List[list]:
    return [[c.entry, c.report.theorem, c.report.quotient, c.expected,
             "pass" if c.passed else "fail", c.diagnostics()] for c in checks]


def cmd_catalog(args) -> int:
    if args.action == "list":
        for name in catalog.list_entries():
            print(name)
        return EXIT_PASS
    if args.action == "show":
        if not args.name:
            print("error: catalog show needs an entry name", file=sys.stderr)
            return EXIT_INPUT
        try:
            entry = catalog.get_entry(args.name)
        except InputError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        sys.stdout.write(canonical_json(entry.descriptor.to_json()))
        return EXIT_PASS
    if args.action == "export":
        if not args.name:
            print("error: catalog export needs a target directory", file=sys.stderr)
            return EXIT_INPUT
        out = Path(args.name)
        (out / "flow").mkdir(parents=True, exist_ok=True)
        for name in catalog.list_entries():
            d = catalog.get_entry(name).descriptor
            (out / f"{name}.json").write_text(canonical_json(d.to_json()), encoding="utf-8")
        for name, fx in catalog.FLOW_FIXTURES.items():
            (out / "flow" / f"{name}.json").write_text(
                canonical_json(fx.dataset.to_json()), encoding="utf-8")
            if fx.restricted is not None:
                (out / "flow" / f"{name}.restricted.json").write_text(
                    canonical_json(fx.restricted.to_json()), encoding="utf-8")
        print(f"wrote {len(catalog.ENTRIES)} descriptors and "
              f"{len(catalog.FLOW_FIXTURES)} flow datasets to {out}")
        return EXIT_PASS
    checks = catalog.run_all()
    if args.format == "json":
        _emit([{"entry": c.entry, "report": c.report.to_json(),
                "expected_quotient": c.expected.to_list(), "passed": c.passed,
                "diagnostics": c.diagnostics()} for c in checks], args)
    else:
        sys.stdout.write(_md_table(
            ["entry", "theorem", "R(t)", "expected", "verdict", "detail"], _check_rows(checks)))
    return EXIT_PASS if all(c.passed for c in checks) else EXIT_FAIL


def _parse_poly(text: str) -> IntPolynomial:
    text = text.strip()
    if text.startswith("["):
        values = json.loads(text)
    else:
        values = [int(x) for x in text.split(",") if x.strip()]
    return IntPolynomial(values)


def cmd_flow(args) -> int:
    try:
        fd = load_flow(args.path)
        restricted = load_flow(args.restricted) if args.restricted else None
        expected = _parse_poly(args.expect) if args.expect else None
        cc = build_complex(fd)
    except OSError as exc:
        print(f"error: cannot read: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    checks = []
    bad = d_squared_violations(cc)
    if bad:
        n, p, q, v = bad[0]
        checks.append(("d_squared", False, f"∂²≠0 at ({p},{q}): coefficient {v} in degree {n}"))
    else:
        checks.append(("d_squared", True, "∂∘∂ = 0"))
    got = homology_polynomial(cc)
    if expected is not None:
        checks.append(("homology", got == expected, f"P_t = {got}, expected {expected}"))
    if restricted is not None:
        try:
            ok = audit_sign_transport(fd, restricted)
            checks.append(("sign_transport", ok, "n_h = n_f · Φ on every within-block line"
                           if ok else "sign mismatch on a within-block line"))
        except InputError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
    if audit_d_squared(cc):
        result = kernel_rank_inequality(fd, restricted)
        checks.append(("kernel_rank", result.holds, f"blocks {result.lhs} vs full {result.rhs}"))
        rec = counting_reconstruction(cc)
        checks.append(("reconstruction", rec.holds,
                       f"(1+t)·{rec.quotient} + {rec.homology} = {rec.counting}"))
    else:
        checks.append(("kernel_rank", False, "skipped: needs ∂² = 0"))

    if args.format == "json":
        _emit({"dataset": str(args.path), "homology": got.to_list(),
               "checks": [{"check": c, "pass": ok, "detail": det} for c, ok, det in checks]}, args)
    else:
        for c, ok, det in checks:
            print(f"{c}: {'pass' if ok else 'FAIL'} ({det})")
    return EXIT_PASS if all(ok for _, ok, _ in checks) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mbkit", description="Certify Morse-Bott inequalities on manifolds with boundary.")
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=("json", "md"), default="md")
        p.add_argument("--envelope", action="store_true",
                       help="wrap JSON output with a generation timestamp")

    p = sub.add_parser("verify", help="certify descriptor files")
    p.add_argument("paths", nargs="+")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--corollary", action="store_true", help="check the type D inequality")
    mode.add_argument("--via-morsification", action="store_true",
                      help="route the main inequality through the perturbed Morse function")
    p.add_argument("--choices", help="JSON map of submanifold name to Morse vector")
    fmt(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("homology", help="homology of a cell model")
    p.add_argument("path")
    p.add_argument("--twist", help="JSON edge-sign cocycle")
    fmt(p)
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("morsify", help="critical point counts of the perturbed function")
    p.add_argument("path")
    p.add_argument("--choices")
    fmt(p)
    p.set_defaults(func=cmd_morsify)

    p = sub.add_parser("catalog", help="builtin examples")
    p.add_argument("action", choices=("list", "show", "run", "export"))
    p.add_argument("name", nargs="?", help="entry name (show) or directory (export)")
    fmt(p)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("flow", help="audit a flow dataset")
    p.add_argument("path")
    p.add_argument("--expect", help="expected Poincare polynomial, e.g. 1,0,1")
    p.add_argument("--restricted", help="per-block dataset for the sign/transport audit")
    fmt(p)
    p.set_defaults(func=cmd_flow)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
