"""Batch command-line frontend.

Every result is exact: fractions are serialized as decimal-digit strings
"num/den", never floating point.  Exit codes: 0 success, 1 invalid input
(one-line machine-parsable error on stderr), 2 internal-consistency
failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import exactnum, fingrp, massfml, oracle, quatalg
from .dieudonne import (
    format_report,
    good_basis,
    scramble,
    standard_module,
    verify_good_basis,
)
from .errors import InternalConsistencyError
from .numfield import FieldSpec, is_prime, parse_field, places_above

TERM_BUDGET_ENV = "SSMASS_TERM_BUDGET"


def _fraction_str(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _mass_payload(mass: massfml.ExactMass) -> dict:
    return {
        "mass": _fraction_str(mass.value),
        "factored": mass.factored_string(),
    }


def _emit(record: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(record, sort_keys=True))
    else:
        keys = sorted(record)
        print("\t".join(keys))
        print(
            "\t".join(
                str(record[k]).replace("\t", " ").replace("\n", "\\n")
                for k in keys
            )
        )


def _algebra(args, field: FieldSpec):
    algebra = quatalg.parse_algebra(field, args.algebra)
    if getattr(args, "definite", False):
        algebra = quatalg.QuaternionRamification(
            field,
            algebra.ramified_finite,
            frozenset(range(field.degree)),
        )
    return algebra


def _zeta_table(args):
    path = getattr(args, "zeta_table", None)
    if path is None:
        return None
    return massfml.ZetaTable.from_file(path)


def _cmd_classical(args) -> dict:
    mass = massfml.mass_classical(args.g, args.p)
    record = {"command": "classical", "g": args.g, "p": args.p}
    record.update(_mass_payload(mass))
    return record


def _cmd_quaternionic(args) -> dict:
    field = parse_field(args.field)
    algebra = _algebra(args, field)
    mass = massfml.mass_quaternionic(
        field, algebra, args.p, args.m, _zeta_table(args)
    )
    record = {
        "command": "quaternionic",
        "field": str(field),
        "algebra": args.algebra,
        "p": args.p,
        "m": args.m,
    }
    record.update(_mass_payload(mass))
    return record


def _cmd_shimura(args) -> dict:
    field = parse_field(args.field)
    algebra = _algebra(args, field)
    mass = massfml.mass_shimura(field, algebra, args.m, _zeta_table(args))
    diagnostics = []
    if not algebra.ramified_finite:
        diagnostics.append(
            "trivial discriminant: algebra is definite but not division"
        )
    record = {
        "command": "shimura",
        "field": str(field),
        "algebra": args.algebra,
        "m": args.m,
    }
    record.update(_mass_payload(mass))
    if diagnostics:
        record["diagnostics"] = "; ".join(diagnostics)
    return record


def _cmd_count(args) -> dict:
    field = parse_field(args.field)
    algebra = _algebra(args, field)
    result = massfml.superspecial_point_count(
        field, algebra, args.p, args.m, args.N, _zeta_table(args)
    )
    return {
        "command": "count",
        "field": str(field),
        "algebra": args.algebra,
        "p": args.p,
        "m": args.m,
        "N": args.N,
        "group_order": str(result.group_order.value),
        "mass": _fraction_str(result.mass.value),
        "count": str(result.count),
    }


def _cmd_group(args) -> dict:
    record = {"command": f"group {args.group_cmd}"}
    if args.group_cmd == "sp-order":
        order = fingrp.sp_order(args.m, args.q)
        record.update({"m": args.m, "q": args.q})
    elif args.group_cmd == "parabolic":
        order = fingrp.siegel_parabolic_order(args.m, args.q)
        record.update({"m": args.m, "q": args.q})
    elif args.group_cmd == "cosets":
        order = fingrp.isotropic_coset_count(args.m, args.q)
        record.update({"m": args.m, "q": args.q})
    else:  # mod-n
        field = parse_field(args.field)
        order = fingrp.sp_order_mod_N(args.m, field, args.N)
        record.update({"m": args.m, "field": str(field), "N": args.N})
    record["order"] = str(order.value)
    record["factored"] = order.factored_string()
    return record


def _cmd_local_index(args) -> dict:
    field = parse_field(args.field)
    algebra = _algebra(args, field)
    twisted = quatalg.twist_by_Bp_infty(algebra, args.p)
    delta = quatalg.discriminant(twisted)
    index = fingrp.local_index(field, args.p, delta, args.m)
    return {
        "command": "local-index",
        "field": str(field),
        "algebra": args.algebra,
        "p": args.p,
        "m": args.m,
        "twisted_discriminant": ",".join(str(v) for v in delta) or "(1)",
        "index": str(index.value),
        "factored": index.factored_string(),
    }


def _cmd_check(args) -> dict:
    if args.check_cmd == "decomposition":
        field = parse_field(args.field)
        algebra = _algebra(args, field)
        report = massfml.mass_decomposition_check(
            field, algebra, args.p, args.m, _zeta_table(args)
        )
        status = "OK" if report.holds else "MISMATCH"
        summary = (
            f"{status}: {_fraction_str(report.quaternionic.value)} = "
            f"{_fraction_str(report.definite.value)} * {report.index.value}"
        )
        if not report.holds:
            raise InternalConsistencyError(summary)
        return {
            "command": "check decomposition",
            "field": str(field),
            "algebra": args.algebra,
            "p": args.p,
            "m": args.m,
            "holds": report.holds,
            "summary": summary,
        }
    field = parse_field(args.field)
    budget = args.term_budget
    if budget is None:
        budget = int(os.environ.get(TERM_BUDGET_ENV, exactnum.DEFAULT_TERM_BUDGET))
    report = exactnum.zeta_functional_check(
        field, args.i, args.rel_tol, term_budget=budget
    )
    return {
        "command": "check functional",
        "field": str(field),
        "i": args.i,
        "rel_tol": args.rel_tol,
        "passed": report.passed,
        "exact": _fraction_str(report.exact),
        "predicted": repr(report.predicted),
        "rel_error": repr(report.rel_error),
        "terms": report.terms,
    }


def _cmd_dieudonne(args) -> dict:
    module, _ = standard_module(args.p, args.f, args.m)
    scrambled = scramble(module, args.seed)
    basis = good_basis(scrambled)
    ok, violations = verify_good_basis(scrambled, basis)
    if not ok:
        raise InternalConsistencyError("; ".join(violations))
    return {
        "command": "dieudonne",
        "p": args.p,
        "f": args.f,
        "m": args.m,
        "seed": args.seed,
        "verified": ok,
        "report": format_report(scrambled, basis),
    }


def _cmd_oracle(args) -> dict:
    if args.oracle_cmd == "sp":
        result = oracle.enum_sp(args.m, args.q)
        inputs = {"m": args.m, "q": args.q}
    elif args.oracle_cmd == "isotropic":
        result = oracle.enum_isotropic(args.m, args.q)
        inputs = {"m": args.m, "q": args.q}
    elif args.oracle_cmd == "sp-mod":
        result = oracle.enum_sp_mod(1, args.modulus)
        inputs = {"modulus": args.modulus}
    else:  # bernoulli
        value = oracle.bernoulli_alt(args.n)
        return {
            "command": "oracle bernoulli",
            "n": args.n,
            "value": _fraction_str(value),
        }
    return {
        "command": f"oracle {args.oracle_cmd}",
        **inputs,
        "count": str(result.count),
        "elapsed": repr(result.elapsed),
        "method": result.method,
    }


def _cmd_table(args) -> dict | None:
    rows = []
    for g in range(1, args.g_max + 1):
        for p in range(2, args.p_max + 1):
            if not is_prime(p):
                continue
            mass = massfml.mass_classical(g, p)
            rows.append(
                {
                    "g": g,
                    "p": p,
                    "mass": _fraction_str(mass.value),
                    "factored": mass.factored_string(),
                }
            )
    if args.format == "json":
        print(json.dumps({"command": "table", "rows": rows}, sort_keys=True))
    else:
        print("g\tp\tmass\tfactored")
        for row in rows:
            print(f"{row['g']}\t{row['p']}\t{row['mass']}\t{row['factored']}")
    return None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ssmass",
        description="Exact mass formulas for superspecial abelian varieties",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_format(p):
        p.add_argument(
            "--format", choices=("json", "tsv"), default="json"
        )

    p = sub.add_parser("classical", help="principally polarized mass")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    add_format(p)
    p.set_defaults(handler=_cmd_classical)

    p = sub.add_parser("quaternionic", help="mass for an indefinite algebra")
    p.add_argument("--field", required=True)
    p.add_argument("--algebra", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--zeta-table", dest="zeta_table")
    add_format(p)
    p.set_defaults(handler=_cmd_quaternionic)

    p = sub.add_parser("shimura", help="mass for a definite algebra")
    p.add_argument("--field", required=True)
    p.add_argument("--algebra", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--definite", action="store_true",
                   help="ramify every infinite place")
    p.add_argument("--zeta-table", dest="zeta_table")
    add_format(p)
    p.set_defaults(handler=_cmd_shimura)

    p = sub.add_parser("count", help="superspecial points with level structure")
    p.add_argument("--field", required=True)
    p.add_argument("--algebra", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--zeta-table", dest="zeta_table")
    add_format(p)
    p.set_defaults(handler=_cmd_count)

    p = sub.add_parser("group", help="finite group orders")
    gsub = p.add_subparsers(dest="group_cmd", required=True)
    for name in ("sp-order", "parabolic", "cosets"):
        gp = gsub.add_parser(name)
        gp.add_argument("--m", type=int, required=True)
        gp.add_argument("--q", type=int, required=True)
        add_format(gp)
        gp.set_defaults(handler=_cmd_group)
    gp = gsub.add_parser("mod-n")
    gp.add_argument("--m", type=int, required=True)
    gp.add_argument("--field", required=True)
    gp.add_argument("--N", type=int, required=True)
    add_format(gp)
    gp.set_defaults(handler=_cmd_group)

    p = sub.add_parser("local-index", help="index of the level at p")
    p.add_argument("--field", required=True)
    p.add_argument("--algebra", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    add_format(p)
    p.set_defaults(handler=_cmd_local_index)

    p = sub.add_parser("check", help="identity checks")
    csub = p.add_subparsers(dest="check_cmd", required=True)
    cp = csub.add_parser("decomposition")
    cp.add_argument("--field", required=True)
    cp.add_argument("--algebra", required=True)
    cp.add_argument("--p", type=int, required=True)
    cp.add_argument("--m", type=int, required=True)
    cp.add_argument("--zeta-table", dest="zeta_table")
    add_format(cp)
    cp.set_defaults(handler=_cmd_check)
    cp = csub.add_parser("functional")
    cp.add_argument("--field", required=True)
    cp.add_argument("--i", type=int, required=True)
    cp.add_argument("--rel-tol", type=float, default=1e-9, dest="rel_tol")
    cp.add_argument("--term-budget", type=int, default=None, dest="term_budget")
    add_format(cp)
    cp.set_defaults(handler=_cmd_check)

    p = sub.add_parser("dieudonne", help="scramble-and-recover diagnostic")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--f", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    add_format(p)
    p.set_defaults(handler=_cmd_dieudonne)

    p = sub.add_parser("oracle", help="brute-force enumerations")
    osub = p.add_subparsers(dest="oracle_cmd", required=True)
    for name in ("sp", "isotropic"):
        op = osub.add_parser(name)
        op.add_argument("--m", type=int, required=True)
        op.add_argument("--q", type=int, required=True)
        add_format(op)
        op.set_defaults(handler=_cmd_oracle)
    op = osub.add_parser("sp-mod")
    op.add_argument("--modulus", type=int, required=True)
    add_format(op)
    op.set_defaults(handler=_cmd_oracle)
    op = osub.add_parser("bernoulli")
    op.add_argument("--n", type=int, required=True)
    add_format(op)
    op.set_defaults(handler=_cmd_oracle)

    p = sub.add_parser("table", help="classical mass grid")
    p.add_argument("--p-max", type=int, default=13, dest="p_max")
    p.add_argument("--g-max", type=int, default=4, dest="g_max")
    add_format(p)
    p.set_defaults(handler=_cmd_table)

    return parser


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        if args.handler is _cmd_table:
            _cmd_table(args)
            return 0
        record = args.handler(args)
        _emit(record, args.format)
        return 0
    except InternalConsistencyError as exc:
        print(f"error: internal-consistency: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: invalid-input: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
