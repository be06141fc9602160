"""Command-line entry point.

Exit status: 0 when every requested check passes, 1 when a check fails,
2 for usage or input errors. Parties are 1-based on the command line.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import constructions
from .certificates import Certificate, atomic_write_json, load_certificate, shipped_certificate_dir
from .combinatorics import MissingRouteError, ZgyReport, check_zgy, verify_strong_nonlocality
from .cyclotomic import ResourceLimitError
from .grid import GridOverlapError, export_grid
from .povm import DEFAULT_MARGIN, DEFAULT_TOL, assemble_constraints, solve_solution_space, verify_definition1
from .serialize import read_ops, serialize_ops
from .states import OPSInstance, verify_orthogonality

FAMILY_FLAGS = {
    "four-asym": constructions.FOUR_ASYM,
    "four-sym": constructions.FOUR_SYM,
    "odd": constructions.ODD_N,
    "even": constructions.EVEN_N,
}


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _parties(values: list[int], n: int) -> tuple[int, ...]:
    if not values or any(not 1 <= k <= n for k in values) or len(set(values)) != len(values):
        raise UsageError(f"party list {values} is not valid for n = {n}")
    return tuple(sorted(k - 1 for k in values))


def _instance(args) -> OPSInstance:
    if args.input:
        if args.family:
            raise UsageError("give either --in or --family, not both")
        return read_ops(args.input)
    if not args.family or not args.dims:
        raise UsageError("an instance needs --in FILE or --family with --dims")
    dims = list(args.dims)
    if args.n:
        if len(dims) != 1:
            raise UsageError("--n expects a single value in --dims")
        dims = dims * args.n
    return constructions.build(FAMILY_FLAGS[args.family], dims)


def _certificate(ref: str) -> Certificate:
    path = Path(ref)
    if not path.exists():
        shipped = shipped_certificate_dir()
        for name in (ref, ref + ".json"):
            cand = shipped / name
            if cand.is_file():
                return Certificate.from_json(json.loads(cand.read_text()))
        raise UsageError(f"certificate {ref!r} not found")
    return load_certificate(path)


def _emit(args, payload: dict) -> None:
    if getattr(args, "out", None):
        atomic_write_json(args.out, payload)


def _zgy_json(r: ZgyReport) -> dict:
    return {
        "X": [k + 1 for k in r.X],
        "passed": r.passed,
        "mode": r.mode,
        "conditions": {k: {"ok": c.ok, "detail": c.detail} for k, c in r.conditions.items()},
        "order_independent": r.order_independent,
        "covers_basis": r.covers_basis,
        "sequence": r.sequence,
        "pi_sets": r.pi_sets,
        "witnesses": {k: list(v) for k, v in r.witnesses.items()},
    }


def _zgy_line(r: ZgyReport, extra: str = "") -> str:
    status = "PASS" if r.passed else "FAIL"
    levels = "-" if r.sequence is None else "/".join(str(len(g)) for g in r.sequence)
    why = "" if r.passed else f"  [{r.first_failure()}]"
    return f"{r.label:<8} {status}  chosen={len(r.chosen):<4} levels={levels:<10}{extra}{why}"


# --- subcommands -----------------------------------------------------------------


def cmd_generate(args) -> int:
    ops = _instance(args)
    doc = serialize_ops(ops)
    if args.out:
        atomic_write_json(args.out, doc)
        print(f"{ops.family} {tuple(ops.dims)}: {len(ops.blocks)} blocks, {ops.count()} states -> {args.out}")
    else:
        json.dump(doc, sys.stdout, indent=2)
        print()
    return 0


def cmd_count(args) -> int:
    ops = _instance(args)
    print(ops.count())
    _emit(args, {"family": ops.family, "dims": list(ops.dims), "blocks": len(ops.blocks), "count": ops.count()})
    return 0


def cmd_orthogonality(args) -> int:
    ops = _instance(args)
    rep = verify_orthogonality(ops)
    states = ops.states
    print(f"{rep.n_states} states, {rep.n_pairs} pairs: {'all orthogonal' if rep.ok else 'NOT orthogonal'}")
    for i, j in rep.failures:
        print(f"  overlap: {states[i].block_id} {states[i].label()}  vs  {states[j].block_id} {states[j].label()}")
    _emit(args, {"states": rep.n_states, "pairs": rep.n_pairs, "ok": rep.ok,
                 "failures": [[states[i].label(), states[j].label()] for i, j in rep.failures]})
    return 0 if rep.ok else 1


def cmd_combinatorial(args) -> int:
    ops = _instance(args)
    if args.certificate and args.search:
        raise UsageError("--certificate and --search are exclusive")
    chosen = args.chosen.split(",") if args.chosen else None
    reports = []
    if args.certificate:
        cert = _certificate(args.certificate)
        X = _parties(args.bipartition, ops.n) if args.bipartition else cert.bipartition
        reports.append(check_zgy(chosen, X, ops, cert, args.max_union))
    elif args.bipartition:
        reports.append(check_zgy(chosen, _parties(args.bipartition, ops.n), ops, max_union=args.max_union))
    else:
        mode = "search" if args.search else "certificates"
        for pr in verify_strong_nonlocality(ops, mode, max_union=args.max_union):
            reports.append(pr.report)
            print(_zgy_line(pr.report, f" route={pr.route} {pr.source}"))
        ok = all(r.passed for r in reports)
        _emit(args, {"passed": ok, "reports": [_zgy_json(r) for r in reports]})
        return 0 if ok else 1
    for r in reports:
        print(_zgy_line(r))
    ok = all(r.passed for r in reports)
    _emit(args, {"passed": ok, "reports": [_zgy_json(r) for r in reports]})
    return 0 if ok else 1


def _povm_kw(args) -> dict:
    return {"tol": args.tol, "margin": args.margin, "exact": args.exact}


def _povm_line(rep) -> str:
    gap = "inf" if rep.spectral_gap == float("inf") else f"{rep.spectral_gap:.2e}"
    exact = "" if rep.exact_nullity is None else f" exact_nullity={rep.exact_nullity}"
    return (f"{rep.label:<8} {rep.verdict:<16} solution_dim={rep.solution_dim:<4} gap={gap:<9} "
            f"rows={rep.n_rows}{exact}")


def cmd_povm(args) -> int:
    ops = _instance(args)
    chosen = args.chosen.split(",") if args.chosen else None
    if sum(bool(x) for x in (args.pair, args.all_pairs, args.parties)) != 1:
        raise UsageError("give exactly one of --pair, --parties, --all-pairs")
    if args.all_pairs:
        summary = verify_definition1(ops, threads=args.threads, chosen=chosen, **_povm_kw(args))
        for r in summary.results:
            print(_povm_line(r.joint))
        _emit(args, {"passed": summary.passed, "pairs": summary.rows()})
        return 0 if summary.passed else 1
    sel = args.pair or args.parties
    if args.pair and len(args.pair) != 2:
        raise UsageError("--pair takes two parties")
    X = _parties(sel, ops.n)
    rep = solve_solution_space(assemble_constraints(ops, X, chosen), **_povm_kw(args))
    print(_povm_line(rep))
    _emit(args, rep.summary())
    return 0 if rep.trivial else 1


def cmd_verify_all(args) -> int:
    ops = _instance(args)
    orth = verify_orthogonality(ops)
    print(f"orthogonality: {'ok' if orth.ok else 'FAILED'} ({orth.n_states} states)")
    mode = "search" if args.search else "certificates"
    comb = verify_strong_nonlocality(ops, mode, max_union=args.max_union)
    print(f"combinatorial ({mode}):")
    for pr in comb:
        print("  " + _zgy_line(pr.report, f" route={pr.route}"))
    povm = verify_definition1(ops, threads=args.threads, **_povm_kw(args))
    print("measurement oracle:")
    for r in povm.results:
        print("  " + _povm_line(r.joint))
    agree = all(pr.passed <= r.trivial for pr, r in zip(comb, povm.results))
    ok = orth.ok and all(pr.passed for pr in comb) and povm.passed and agree
    print(f"strong nonlocality: {'PASS' if ok else 'FAIL'}")
    _emit(args, {
        "family": ops.family, "dims": list(ops.dims), "count": ops.count(), "passed": ok,
        "orthogonal": orth.ok,
        "combinatorial": [dict(_zgy_json(pr.report), route=pr.route, source=pr.source) for pr in comb],
        "oracle": povm.rows(),
    })
    return 0 if ok else 1


def cmd_grid(args) -> int:
    ops = _instance(args)
    rows = _parties(args.rows, ops.n)
    cols = _parties(args.cols, ops.n) if args.cols else tuple(k for k in range(ops.n) if k not in rows)
    doc = export_grid(ops, rows, cols, args.format)
    if args.out:
        path = Path(args.out)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(doc)
        tmp.replace(path)
        print(f"wrote {args.format} grid to {args.out}")
    else:
        sys.stdout.write(doc)
    return 0


# --- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="strongops", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def instance_args(p):
        p.add_argument("--family", choices=sorted(FAMILY_FLAGS))
        p.add_argument("--dims", type=_int_list, help="local dimensions, e.g. 3,3,3,3")
        p.add_argument("--n", type=int, help="number of parties when --dims gives one value")
        p.add_argument("--in", dest="input", help="instance JSON written by 'generate'")
        p.add_argument("--out", help="write a JSON report here")

    def povm_args(p):
        p.add_argument("--tol", type=float, default=DEFAULT_TOL)
        p.add_argument("--margin", type=float, default=DEFAULT_MARGIN)
        p.add_argument("--exact", action="store_true", help="also compute the rank modulo a prime")
        p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("generate", help="emit an instance as JSON")
    instance_args(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("count", help="number of states")
    instance_args(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("verify-orthogonality", help="exact pairwise orthogonality")
    instance_args(p)
    p.set_defaults(func=cmd_orthogonality)

    p = sub.add_parser("check-combinatorial", help="projection-set conditions")
    instance_args(p)
    p.add_argument("--bipartition", type=_int_list, help="parties of X, e.g. 3,4")
    p.add_argument("--certificate", help="certificate file or shipped name such as appB_x34")
    p.add_argument("--search", action="store_true")
    p.add_argument("--chosen", help="comma-separated block ids to restrict to")
    p.add_argument("--max-union", type=int, default=3)
    p.set_defaults(func=cmd_combinatorial)

    p = sub.add_parser("check-povm", help="linear-algebra triviality oracle")
    instance_args(p)
    p.add_argument("--pair", type=_int_list)
    p.add_argument("--parties", type=_int_list, help="any proper party subset")
    p.add_argument("--all-pairs", action="store_true")
    p.add_argument("--chosen", help="comma-separated block ids to restrict to")
    povm_args(p)
    p.set_defaults(func=cmd_povm)

    p = sub.add_parser("verify-all", help="orthogonality, conditions and oracle on every pair")
    instance_args(p)
    p.add_argument("--search", action="store_true", help="search instead of replaying certificates")
    p.add_argument("--max-union", type=int, default=3)
    povm_args(p)
    p.set_defaults(func=cmd_verify_all)

    p = sub.add_parser("export-grid", help="draw the block tiling")
    instance_args(p)
    p.add_argument("--rows", type=_int_list, required=True)
    p.add_argument("--cols", type=_int_list)
    p.add_argument("--format", choices=("svg", "ascii"), default="svg")
    p.set_defaults(func=cmd_grid)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, MissingRouteError, ResourceLimitError, GridOverlapError,
            ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
