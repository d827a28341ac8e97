"""Command-line interface: every pipeline stage behind a batch subcommand.

JSON output (--format json) is the machine contract: identical invocations
produce byte-identical documents, and nothing else is written to stdout in
JSON mode.  Text mode renders the same structure for humans.  Exit codes:
0 success, 2 invalid input, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .cyclotomic import InternalCheckError
from .groups import conjugacy_classes, iter_valid_groups, make_group, tower_subgroups
from .characters import (
    character_field,
    faithful_characters,
    formula_field,
    inner_product,
    irreducible_characters,
    is_faithful,
    one_faithful_character,
    permutation_character,
    quotient_identity_virtual_character,
    tensor_decompose,
)
from .schur import global_index, multiplicity_divisibility_check, qadic_class_order
from .elliptic import EllipticCurveQ, a_v
from .frobenius import frobenius_datum, resolve_field_poly
from .lseries import (
    cube_of_quadratic_defect,
    dirichlet_partial,
    identity_series_check,
    symbolic_twisted_euler_factor,
    twisted_euler_factor,
    untwisted_factor,
)
from .predictions import faithful_count, prediction_report

__all__ = ["main"]


def _group_from_args(args) -> object:
    return make_group(args.q, args.p, args.n, args.j)


def _parse_curve(spec: str) -> EllipticCurveQ:
    try:
        coeffs = [int(t) for t in spec.split(",")]
    except ValueError as exc:
        raise ValueError(f"bad curve spec {spec!r}: expected a1,a2,a3,a4,a6") from exc
    return EllipticCurveQ.from_list(coeffs)


def _emit(args, payload: dict, text: str) -> None:
    out = json.dumps(payload, indent=2) if args.format == "json" else text
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)


# -- subcommand handlers -------------------------------------------------------

def cmd_table(args) -> int:
    G = _group_from_args(args)
    table = irreducible_characters(G)
    classes = conjugacy_classes(G)
    rows = []
    for chi in table:
        fld = character_field(chi)
        row = {
            "id": chi.char_id,
            "degree": chi.degree,
            "faithful": is_faithful(chi),
            "provenance": list(chi.provenance),
            "field": fld.to_json(),
            "field_degree": fld.degree,
            "values": [v.to_json() for v in chi.values],
        }
        if row["faithful"] and chi.degree > 1:
            tau_r, lin = tensor_decompose(chi)
            row["tensor_decomposition"] = {"tau_r": tau_r.char_id, "chi": lin.char_id}
        rows.append(row)
    payload = {
        "group": G.to_json(),
        "order": G.order,
        "classes": [
            {"rep": list(c.rep), "size": c.size, "order": c.element_order}
            for c in classes
        ],
        "characters": rows,
        "faithful_count": sum(1 for r in rows if r["faithful"]),
        "formula_field": formula_field(G).to_json(),
    }
    lines = [
        f"group {G} of order {G.order}: {len(classes)} classes, "
        f"{len(table)} irreducible characters, {payload['faithful_count']} faithful",
        "classes (rep, size, element order): "
        + ", ".join(f"(a^{c.rep.x} b^{c.rep.y}, {c.size}, {c.element_order})" for c in classes),
    ]
    for r, chi in zip(rows, table):
        extra = ""
        if "tensor_decomposition" in r:
            td = r["tensor_decomposition"]
            extra = f", = {td['tau_r']} (x) {td['chi']}"
        lines.append(
            f"  {r['id']}: degree {r['degree']}, "
            f"{'faithful' if r['faithful'] else 'unfaithful'}, "
            f"field degree {r['field_degree']} (conductor {r['field']['conductor']})" + extra
        )
        lines.append("    values: " + ", ".join(str(v) for v in chi.values))
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_schur(args) -> int:
    G = _group_from_args(args)
    taus = faithful_characters(G) if args.all else [one_faithful_character(G)]
    reports = [global_index(G, tau) for tau in taus]
    payload = {
        "group": G.to_json(),
        "reports": [rep.to_json() for rep in reports],
    }
    lines = []
    for rep in reports:
        locs = ", ".join(
            f"{entry['place']}:{entry['index']}" for entry in rep.to_json()["local"]
        )
        lines.append(
            f"{G} {rep.character_id}: global Schur index {rep.global_index} (local {locs})"
        )
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_predict(args) -> int:
    G = _group_from_args(args)
    rep = prediction_report(G)
    payload = rep.to_json()
    if rep.forced:
        kinds = {s["kind"]: s for s in rep.statements}
        lines = [
            f"{G}: per-character modulus {rep.schur_modulus} "
            f"(assuming {', '.join(kinds['rank_divisibility']['assuming'])})",
            f"  faithful characters: {kinds['tower_rank_divisibility']['faithful_count']}",
            f"  tower modulus: {kinds['tower_rank_divisibility']['modulus']}"
            f" (sharpened: {kinds['tower_rank_divisibility']['identity_modulus']})",
            f"  Dirichlet reformulation: psi of order {kinds['dirichlet_twist_reformulation']['psi_order']}"
            f" over the degree-{kinds['dirichlet_twist_reformulation']['base_degree']} layer",
        ]
        for s in rep.statements:
            lines.append(f"  [{s['kind']}] assuming {s['assuming']}: {s['statement']}")
    else:
        lines = [f"{G}: no forced divisibility ({rep.statements[0]['statement']})"]
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_frobenius(args) -> int:
    G = _group_from_args(args)
    poly = resolve_field_poly(args.field)
    datum = frobenius_datum(poly, G, args.v)
    payload = datum.to_json()
    cls = f"class a^{datum.conj_class.rep.x} b^{datum.conj_class.rep.y}" if datum.conj_class else (
        "ambiguous among " + ", ".join(f"a^{c.rep.x} b^{c.rep.y}" for c in datum.candidates)
    )
    text = (
        f"v = {args.v}: pattern {list(datum.pattern)}, cyclotomic exponent "
        f"{datum.cyclotomic_component}, order {datum.order_in_G} in G, {cls}"
    )
    _emit(args, payload, text)
    return 0


def cmd_euler(args) -> int:
    if args.symbolic:
        G = _group_from_args(args)
        tau = one_faithful_character(G)
        x_rep = 1 if args.order7_class in (None, "H") else int(args.order7_class)
        cls = next(
            (c for c in conjugacy_classes(G) if c.rep.x == x_rep and c.rep.y == 0 and c.size > 1),
            None,
        )
        if cls is None:
            raise ValueError(f"no order-q class with representative a^{x_rep}")
        poly = symbolic_twisted_euler_factor(tau, cls)
        cube = cube_of_quadratic_defect(poly)
        payload = {
            "group": G.to_json(),
            "character": tau.char_id,
            "class": list(cls.rep),
            "poly": [str(c) for c in poly],
            "cube_of_quadratic": cube,
        }
        lines = [f"symbolic twisted factor at class a^{cls.rep.x} (character {tau.char_id}):"]
        lines += [f"  T^{i}: {c}" for i, c in enumerate(poly)]
        lines.append(
            "not a cube of a quadratic" if not cube["is_cube"] else "IS a cube of a quadratic"
        )
        _emit(args, payload, "\n".join(lines))
        return 0
    if args.curve is None or args.v is None:
        raise ValueError("numeric factors need --curve and -v")
    E = _parse_curve(args.curve)
    av = a_v(E, args.v)
    if args.trivial:
        factor = untwisted_factor(av, args.v)
        payload = {**factor.to_json(), "a_v": av}
        _emit(args, payload, f"factor {factor} (a_{args.v} = {av})")
        return 0
    G = _group_from_args(args)
    poly = resolve_field_poly(args.field)
    datum = frobenius_datum(poly, G, args.v)
    cls = datum.conj_class
    if cls is None:
        if args.pick_first:
            cls = datum.candidates[0]
        else:
            raise ValueError(
                "ambiguous Frobenius class at v="
                f"{args.v}: candidates "
                + ", ".join(f"a^{c.rep.x} b^{c.rep.y}" for c in datum.candidates)
                + "; pass --pick-first to take the smallest"
            )
    tau = one_faithful_character(G)
    factor = twisted_euler_factor(av, args.v, tau, cls)
    payload = {**factor.to_json(), "a_v": av, "character": tau.char_id, "class": list(cls.rep)}
    _emit(args, payload, f"twisted factor {factor} (a_{args.v} = {av}, class a^{cls.rep.x} b^{cls.rep.y})")
    return 0


def _parse_character(G, spec: str):
    if spec == "trivial":
        return irreducible_characters(G)[0]
    if spec.startswith("lin:"):
        return irreducible_characters(G)[int(spec[4:]) % G.pn]
    if spec.startswith("ind:"):
        u, w = (int(t) for t in spec[4:].split(","))
        from .characters import PsiDescriptor, induce_from_X

        return induce_from_X(G, PsiDescriptor(u, w))
    raise ValueError(f"bad character spec {spec!r}: use trivial, lin:e or ind:u,w")


def cmd_series(args) -> int:
    G = _group_from_args(args)
    E = _parse_curve(args.curve)
    poly = resolve_field_poly(args.field)
    chi = _parse_character(G, args.character)
    mode = "first" if args.pick_first else "invariant"
    series = dirichlet_partial(E, G, chi, poly, args.X, on_ambiguous=mode)
    payload = {
        "group": G.to_json(),
        "curve": E.to_json(),
        "character": getattr(chi, "char_id", args.character),
        **series.to_json(),
    }
    shown = []
    for n in range(1, min(series.X, 30) + 1):
        c = series.coefficient(n)
        shown.append(f"a_{n}={c}")
    _emit(args, payload, f"series to X={series.X} (good primes): " + ", ".join(shown))
    return 0


def cmd_identity(args) -> int:
    G = _group_from_args(args)
    E = _parse_curve(args.curve)
    poly = resolve_field_poly(args.field)
    qi = quotient_identity_virtual_character(G)
    chk = identity_series_check(E, poly, G, args.X)
    payload = {
        "virtual_character_identity": qi.to_json(),
        "series_identity": chk.to_json(),
    }
    if not qi.equal:
        raise InternalCheckError("virtual-character identity failed")
    if chk.holds:
        text = (
            f"identity holds to X={args.X} (good primes); "
            f"character identity holds with coefficient {qi.coefficient} "
            f"over {qi.faithful_count} faithful characters"
        )
    else:
        text = f"identity FAILS first at n={chk.first_mismatch}"
        raise InternalCheckError(text)
    _emit(args, payload, text)
    return 0


def _sweep_one(params) -> dict:
    G = params
    idx, details = qadic_class_order(G.q, G.p, G.n, G.r)
    divisible = (G.q - 1) % G.pn == 0
    consistent = (idx == 1) == divisible
    power_ok = idx == 1 or (idx > 1 and G.pr % idx == 0)
    return {
        "q": G.q,
        "p": G.p,
        "n": G.n,
        "j": G.j,
        "r": G.r,
        "index": idx,
        "pn_divides_q_minus_1": divisible,
        "consistent": consistent and power_ok,
        "faithful_count": faithful_count(G),
    }


def cmd_sweep(args) -> int:
    groups = list(iter_valid_groups(args.max))
    threads = args.threads or os.cpu_count() or 1
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_sweep_one, groups))
    else:
        rows = [_sweep_one(G) for G in groups]
    rows.sort(key=lambda row: (row["q"], row["p"], row["n"], row["j"]))
    bad = [row for row in rows if not row["consistent"]]
    table_checked = 0
    if args.tables:
        for G in groups:
            if G.order > args.table_max:
                continue
            table = irreducible_characters(G)
            for i, a in enumerate(table):
                for jj in range(i, len(table)):
                    expected = 1 if i == jj else 0
                    if inner_product(a, table[jj]) != expected:
                        raise InternalCheckError(f"orthogonality failed for {G}")
            for tau in faithful_characters(G):
                if character_field(tau) != formula_field(G):
                    raise InternalCheckError(f"character field formula failed for {G}")
                for sub in tower_subgroups(G):
                    chk = multiplicity_divisibility_check(
                        G, tau, permutation_character(G, sub)
                    )
                    if not chk.divisible:
                        raise InternalCheckError(f"divisibility failed for {G}")
            table_checked += 1
    payload = {
        "max_order": args.max,
        "groups": len(rows),
        "all_consistent": not bad,
        "inconsistent": bad,
        "table_checked": table_checked if args.tables else None,
    }
    if args.verbose_rows:
        payload["rows"] = rows
    if bad:
        raise InternalCheckError(f"{len(bad)} sweep rows inconsistent")
    text = (
        f"swept {len(rows)} groups with q*p^n <= {args.max}: index = 1 exactly when "
        f"p^n | q-1 in every case"
        + (f"; table-level checks on {table_checked} groups" if args.tables else "")
    )
    _emit(args, payload, text)
    return 0


# -- parser ---------------------------------------------------------------------

def _add_group_args(sp, q_default=None, p_default=None):
    sp.add_argument("-q", type=int, required=q_default is None, default=q_default,
                    help="the odd prime q")
    sp.add_argument("-p", type=int, required=p_default is None, default=p_default,
                    help="the odd prime p")
    sp.add_argument("-n", type=int, required=True, help="exponent n of p")
    sp.add_argument("-j", type=int, default=None,
                    help="action residue j (default: smallest of order p)")


def _add_common(sp):
    sp.add_argument("--format", choices=("json", "text"), default="text")
    sp.add_argument("--out", default=None, help="write output to a file")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="schurgate",
        description=(
            "exact character tables, Schur indices, twisted Euler factors and "
            "rank-divisibility predictions for C_q x| C_{p^n}"
        ),
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("table", help="full character table with fields and decompositions")
    _add_group_args(sp)
    _add_common(sp)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("schur", help="local and global Schur index reports")
    _add_group_args(sp)
    sp.add_argument("--all", action="store_true", help="report every faithful character")
    _add_common(sp)
    sp.set_defaults(func=cmd_schur)

    sp = sub.add_parser("predict", help="conditional rank and Selmer predictions")
    _add_group_args(sp)
    _add_common(sp)
    sp.set_defaults(func=cmd_predict)

    sp = sub.add_parser("frobenius", help="Frobenius class data at an unramified prime")
    _add_group_args(sp)
    sp.add_argument("--field", default="example-F1")
    sp.add_argument("-v", type=int, required=True)
    _add_common(sp)
    sp.set_defaults(func=cmd_frobenius)

    sp = sub.add_parser("euler", help="twisted local Euler factors")
    _add_group_args(sp, q_default=7, p_default=3)
    sp.add_argument("--curve", default=None, help="a1,a2,a3,a4,a6")
    sp.add_argument("-v", type=int, default=None)
    sp.add_argument("--trivial", action="store_true", help="untwisted factor")
    sp.add_argument("--symbolic", action="store_true",
                    help="leave a_v and v as formal symbols")
    sp.add_argument("--order7-class", dest="order7_class", default=None,
                    help="H for the orbit of a, or an explicit exponent x")
    sp.add_argument("--field", default="example-F1")
    sp.add_argument("--pick-first", action="store_true",
                    help="resolve an ambiguous Frobenius class to the smallest candidate")
    _add_common(sp)
    sp.set_defaults(func=cmd_euler)

    sp = sub.add_parser("series", help="truncated twisted Dirichlet series")
    _add_group_args(sp, q_default=7, p_default=3)
    sp.add_argument("--curve", required=True)
    sp.add_argument("--field", default="example-F1")
    sp.add_argument("--character", default="trivial", help="trivial, lin:e or ind:u,w")
    sp.add_argument("-X", type=int, default=100)
    sp.add_argument("--pick-first", action="store_true",
                    help="resolve ambiguous Frobenius classes to the smallest candidate")
    _add_common(sp)
    sp.set_defaults(func=cmd_series)

    sp = sub.add_parser("identity", help="tower L-identity, characters and coefficients")
    _add_group_args(sp, q_default=7, p_default=3)
    sp.add_argument("--curve", required=True)
    sp.add_argument("--field", default="example-F1")
    sp.add_argument("-X", type=int, default=500)
    _add_common(sp)
    sp.set_defaults(func=cmd_identity)

    sp = sub.add_parser("sweep", help="index = 1 iff p^n | q-1, over all small groups")
    sp.add_argument("--max", type=int, default=10 ** 4, help="bound on q * p^n")
    sp.add_argument("--tables", action="store_true",
                    help="also run table-level checks on small groups")
    sp.add_argument("--table-max", dest="table_max", type=int, default=300)
    sp.add_argument("--threads", type=int, default=None, help="default: cpu count")
    sp.add_argument("--verbose-rows", dest="verbose_rows", action="store_true")
    _add_common(sp)
    sp.set_defaults(func=cmd_sweep)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InternalCheckError as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 3
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
