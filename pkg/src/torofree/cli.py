"""Command-line frontend: parse specs, run actions/suites/searches, emit JSON.

Every command writes canonical JSON (sorted keys, compact separators) so that
a rerun with the same configuration and seed is byte-identical; --pretty adds
an indented human-readable rendering on stdout without changing the canonical
bytes written to --out.  Exit status: 0 success/pass, 1 check failure,
2 usage or validation error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import classify, repmods, verify
from .errors import ClassificationError, DomainError, StructureError
from .liealg import degree_box
from .polyalg import Poly
from .repmods import ModuleSpec, parse_generator, spec_from_json, spec_to_json

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def _default_seed() -> int:
    env = os.environ.get("TOROFREE_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise StructureError(f"TOROFREE_SEED must be an integer, got {env!r}")


def _load_spec(path: str) -> ModuleSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise StructureError(f"cannot read spec file {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise StructureError(f"spec file {path} is not valid JSON: {exc}")
    return spec_from_json(data)


def _parse_window(text: str, n: int) -> list[tuple[int, ...]]:
    try:
        lo, hi = text.split(":")
        lo_i, hi_i = int(lo), int(hi)
    except ValueError:
        raise StructureError(f"window must look like '-2:2', got {text!r}")
    if lo_i > hi_i:
        raise StructureError(f"empty window {text!r}")
    return degree_box(n, lo_i, hi_i)


def _emit(payload: dict, args) -> None:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(blob)
    if getattr(args, "pretty", False):
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
        if not out:
            return
    elif not out:
        sys.stdout.write(blob)


# -- subcommands ---------------------------------------------------------------


def cmd_act(args) -> int:
    spec = _load_spec(args.spec)
    gen = parse_generator(args.gen, spec.algebra.loop_vars)
    p = Poly.parse(args.poly, *spec.ranks)
    result = repmods.act(spec, gen, p)
    _emit(
        {
            "command": "act",
            "spec": spec_to_json(spec),
            "generator": gen.text(),
            "input": p.text(),
            "result": result.text(),
        },
        args,
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    spec = _load_spec(args.spec)
    window = None
    if args.window:
        window = _parse_window(args.window, spec.algebra.loop_vars)
    reports = verify.suite_for_spec(spec, window, args.samples, args.seed)
    payload = {
        "command": "verify",
        "spec": spec_to_json(spec),
        "seed": args.seed,
        "samples": args.samples,
        "reports": [r.to_dict() for r in reports],
        "all_passed": all(r.passed for r in reports),
    }
    _emit(payload, args)
    return EXIT_OK if payload["all_passed"] else EXIT_CHECK_FAILED


def cmd_simplicity(args) -> int:
    spec = _load_spec(args.spec)
    simple, rule = classify.simplicity_rule(spec)
    _emit(
        {"command": "simplicity", "spec": spec_to_json(spec), "simple": simple, "rule": rule},
        args,
    )
    return EXIT_OK


def cmd_witness(args) -> int:
    spec = _load_spec(args.spec)
    window = None
    if args.window:
        window = _parse_window(args.window, spec.algebra.loop_vars)
    report = classify.submodule_witness_search(
        spec, args.maxdeg, window, args.dim_bound
    )
    _emit(
        {"command": "witness", "spec": spec_to_json(spec), "report": report.to_dict()},
        args,
    )
    return EXIT_OK


def cmd_recover(args) -> int:
    spec = _load_spec(args.spec)
    oracle = classify.oracle_from_spec(spec)
    window = None
    if args.window:
        window = _parse_window(args.window, spec.algebra.loop_vars)
    try:
        rec = classify.recover_parameters(oracle, window, seed=args.seed)
    except ClassificationError as exc:
        _emit(
            {
                "command": "recover",
                "spec": spec_to_json(spec),
                "recovered": None,
                "violated": exc.violated,
                "details": exc.details,
            },
            args,
        )
        return EXIT_CHECK_FAILED
    _emit(
        {"command": "recover", "spec": spec_to_json(spec), "recovered": rec.to_dict()},
        args,
    )
    return EXIT_OK


def cmd_iso(args) -> int:
    s1 = _load_spec(args.spec)
    s2 = _load_spec(args.spec2)
    result = classify.iso_test(s1, s2)
    _emit(
        {
            "command": "iso",
            "spec": spec_to_json(s1),
            "spec2": spec_to_json(s2),
            "isomorphic": result,
        },
        args,
    )
    return EXIT_OK


def cmd_lemma_pa(args) -> int:
    report = verify.lemma_pa_property(
        samples=args.samples, ranks=(args.hvars, args.dvars), seed=args.seed
    )
    _emit({"command": "lemma-pa", "report": report.to_dict()}, args)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_formulas(args) -> int:
    text = repmods.c_family_formula_notes(args.rank)
    if args.doc:
        os.makedirs(os.path.dirname(os.path.abspath(args.doc)), exist_ok=True)
        with open(args.doc, "w", encoding="utf-8") as fh:
            fh.write(text)
    _emit({"command": "formulas", "rank": args.rank, "text": text, "doc": args.doc}, args)
    return EXIT_OK


# -- argument parsing ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torofree",
        description="Exact constructions and checks for rank-1 Cartan-free modules "
        "over finite-type, toroidal, Witt and full toroidal Lie algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spec=True):
        if spec:
            p.add_argument("--spec", required=True, help="module spec JSON file")
        p.add_argument("--out", help="write canonical JSON to this path")
        p.add_argument("--pretty", action="store_true", help="human-readable stdout")
        p.add_argument("--seed", type=int, default=None, help="PRNG seed")

    p = sub.add_parser("act", help="apply one generator to a polynomial")
    common(p)
    p.add_argument("--gen", required=True, help='generator literal, e.g. "x1(2,0)"')
    p.add_argument("--poly", required=True, help='polynomial literal, e.g. "d1*H1"')
    p.set_defaults(fn=cmd_act)

    p = sub.add_parser("verify", help="run every property suite for a spec")
    common(p)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--window", help="loop-degree window 'lo:hi' (default -2:2)")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("simplicity", help="predict simplicity of the module")
    common(p)
    p.set_defaults(fn=cmd_simplicity)

    p = sub.add_parser("witness", help="search for a non-simplicity certificate")
    common(p)
    p.add_argument("--maxdeg", type=int, default=6)
    p.add_argument("--window", help="loop-degree window 'lo:hi'")
    p.add_argument("--dim-bound", type=int, default=None, dest="dim_bound")
    p.set_defaults(fn=cmd_witness)

    p = sub.add_parser("recover", help="recover parameters from the module action")
    common(p)
    p.add_argument("--window", help="loop-degree window 'lo:hi'")
    p.set_defaults(fn=cmd_recover)

    p = sub.add_parser("iso", help="isomorphism test between two specs")
    common(p)
    p.add_argument("--spec2", required=True, help="second module spec JSON file")
    p.set_defaults(fn=cmd_iso)

    p = sub.add_parser("lemma-pa", help="shift-difference degree identity suite")
    common(p, spec=False)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--hvars", type=int, default=2)
    p.add_argument("--dvars", type=int, default=1)
    p.set_defaults(fn=cmd_lemma_pa)

    p = sub.add_parser(
        "formulas", help="emit the resolved C-family action formulas (audit trail)"
    )
    common(p, spec=False)
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--doc", help="also write the plain-text rendering to this file")
    p.set_defaults(fn=cmd_formulas)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "seed", None) is None:
            args.seed = _default_seed()
        return args.fn(args)
    except (StructureError, DomainError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
