"""Command-line front end.

Exit status: 0 when every check passed, 1 when a mathematical check failed,
2 for bad input.  ``--output json`` prints one JSON document with keys
``command``, ``field``, ``result``, ``checks`` and ``provenance``.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from typing import Any

from . import algebra, classify as cls, enumeration, forms, hecke
from .errors import FieldTooLarge, HeckeError, InternalInconsistency, InvalidParameter, MalformedSpec
from .field import FieldDescriptor, parse_field
from .linalg import Matrix
from .serialize import (
    hecke_from_json,
    hecke_to_json,
    triple_from_json,
    triple_to_json,
    zeta_from_json,
)

COMMANDS = ("verify", "construct", "twist", "relations", "hilbert", "forms-check", "classify", "count-classes", "enumerate")

# what each named check verifies
CHECKS = {
    "braid": "(R(x)I)(I(x)R)(R(x)I) = (I(x)R)(R(x)I)(I(x)R) on V(x)V(x)V",
    "hecke": "(R - q)(R + 1) = 0",
    "relations_dim": "q*Id - R has rank 3",
    "commutes": "R commutes with zeta (x) zeta",
    "twisted_relations": "image of q*Id - R equals span{zeta(e_i) e_j - zeta(e_j) e_i}",
    "twist_formulas_agree": "(zeta (x) I) R (zeta^-1 (x) I) = (I (x) zeta^-1) R (I (x) zeta)",
    "twist_round_trip": "twisting by zeta and then by zeta^-1 returns R",
    "polynomial_growth": "graded pieces have the dimensions of a polynomial ring in 3 variables",
    "degree3_line": "the intersection of I2 V and V I2 is one-dimensional",
    "degree3_sum": "I2 V + V I2 has dimension 17",
    "twisted_cyclicity": "the degree-3 generator is invariant under the cyclic shift twisted by det(zeta) zeta^-3",
    "forms_relation": "ell'(x,y)(z) det(zeta) = ell(zeta x, zeta y)(zeta z)",
    "wedge_identity": "ell(x,y) ^ ell'(x,y) = ell(x,x) ^ ell'(y,y)",
    "evaluation_identity": "ell(x,y)(x) = ell(x,x)(y), and likewise for ell'",
    "skew_identity": "ell(x,y)(z) - ell(x,z)(y) = (q+1) omega(x,y,z)",
    "full_braid_identity": "(ell(x,y) ^ ell'(x,z) - ell(x,x) ^ ell'(y,z))(u,v) = q omega(x,y,z) omega(x,u,v)",
    "commutation_conditions": "R commutes with zeta(x)zeta; Y' = Y; Y' = cY; ell' = c ell; ell ^ ell' = 0 (all hold together)",
    "commutes_with_cube": "R commutes with (zeta (x) zeta)^3",
    "diagonal_rank_one": "the forms ell(x,x) span a line",
    "forms_nondegenerate": "the forms ell(x,y) span V* and neither slot has a kernel",
    "skewsymmetrizer_faithful": "no nonzero a has Y(a x) = 0 for all x, or Y(x a) = 0 for all x",
    "canonical_triples_valid": "each listed canonical triple gives a Hecke symmetry commuting with zeta (x) zeta",
    "no_theorem_failures": "every enumerated triple passes braid, Hecke, commutation, twisting and form checks",
    "diagonal_rank_ok": "every enumerated triple has diagonal forms spanning a line",
}

_DIAG = re.compile(r"diag[:(]\s*([^)]*)\)?\s*$")


class InputError(HeckeError):
    pass


def _load_json(path: str, what: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"{what}: cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{what}: {path} is not valid JSON ({e.msg})") from None


def _field(args) -> FieldDescriptor | None:
    return parse_field(args.field) if args.field else None


def _zeta(args, f: FieldDescriptor | None) -> Matrix:
    """--zeta takes a JSON file {"zeta": ...} or the inline form diag:a,b,c."""
    spec = args.zeta
    if spec is None:
        raise InputError("--zeta is required")
    m = _DIAG.match(spec)
    if m and not os.path.exists(spec):
        if f is None:
            raise InputError("--field is required with an inline --zeta")
        vals = [v.strip() for v in m.group(1).split(",")]
        if len(vals) != 3:
            raise MalformedSpec("--zeta: diag needs three entries")
        return Matrix.diag(f, [f.parse(v) for v in vals])
    return zeta_from_json(_load_json(spec, "--zeta"), f)


def _operator(args, f, checked=True) -> hecke.HeckeSymmetry:
    """--input holds an operator {"q", "R"}, a triple {"t", "g", "q"}, or the
    JSON output of construct/twist (whose result carries an "operator")."""
    if not args.input:
        raise InputError("--input is required")
    obj = _load_json(args.input, "--input")
    if isinstance(obj, dict) and isinstance(obj.get("result"), dict) and "operator" in obj["result"]:
        obj = obj["result"]["operator"]
    if isinstance(obj, dict) and "t" in obj:
        return hecke.build_from_triple(triple_from_json(obj, f))
    return hecke_from_json(obj, f, checked=checked)


def _diagonal(zeta: Matrix) -> cls.DiagonalTwist:
    if any(zeta[i, j] for i in range(3) for j in range(3) if i != j):
        raise InvalidParameter("zeta must be diagonal for this command")
    return cls.DiagonalTwist(tuple(zeta[i, i] for i in range(3)))


def _q(args, f: FieldDescriptor):
    if args.q is None:
        raise InputError("--q is required")
    return f.parse(args.q)


# commands -------------------------------------------------------------------


def cmd_verify(args):
    f = _field(args)
    h = _operator(args, f, checked=False)
    checks = {
        "braid": hecke.check_braid(h),
        "hecke": hecke.check_hecke(h),
        "relations_dim": h.skewsymmetrizer().rank() == 3,
    }
    result = {"q": h.field.format(h.q)}
    if args.zeta:
        zeta = _zeta(args, h.field)
        checks["commutes"] = hecke.commutes_with_square(h, zeta)
        checks["twisted_relations"] = checks["relations_dim"] and algebra.is_twisted_polynomial(h, zeta)
    return h.field, result, checks


def cmd_construct(args):
    f = _field(args)
    if args.type is not None:
        if f is None:
            raise InputError("--field is required with --type")
        h = hecke.build_type(args.type, _q(args, f), f)
        result = {"type": args.type}
    else:
        if not args.input:
            raise InputError("construct needs --type or --input")
        tr = triple_from_json(_load_json(args.input, "--input"), f)
        h = hecke.build_from_triple(tr)
        result = {"triple": triple_to_json(tr)}
    result["operator"] = hecke_to_json(h)
    return h.field, result, {"braid": hecke.check_braid(h), "hecke": hecke.check_hecke(h)}


def cmd_twist(args):
    f = _field(args)
    h = _operator(args, f)
    zeta = _zeta(args, h.field)
    if not hecke.commutes_with_square(h, zeta):
        return h.field, {}, {"commutes": False}
    try:
        hz = hecke.twist(h, zeta)
    except InternalInconsistency:
        return h.field, {}, {"commutes": True, "twist_formulas_agree": False}
    back = hecke.twist(hz, zeta.inverse())
    checks = {
        "commutes": True,
        "twist_formulas_agree": True,
        "braid": hecke.check_braid(hz),
        "hecke": hecke.check_hecke(hz),
    }
    # only an operator with commutative relations is expected to acquire the zeta-twisted ones
    if algebra.is_twisted_polynomial(h, _identity(h.field)):
        checks["twisted_relations"] = algebra.is_twisted_polynomial(hz, zeta)
    checks.update({
        "twist_round_trip": back.R == h.R,
    })
    return h.field, {"operator": hecke_to_json(hz)}, checks


def _identity(f):
    return Matrix.identity(f, 3)


def cmd_relations(args):
    f = _field(args)
    h = _operator(args, f)
    rel = algebra.relations_of(h)
    result = {"basis": [[h.field.format(x) for x in v] for v in rel.I2.vectors()], "dim": rel.dim}
    checks = {"relations_dim": rel.dim == 3}
    if args.zeta:
        zeta = _zeta(args, h.field)
        checks["twisted_relations"] = rel.I2 == algebra.twisted_relations(zeta).I2
    return h.field, result, checks


def cmd_hilbert(args):
    f = _field(args)
    if args.input:
        h = _operator(args, f)
        rel = algebra.relations_of(h)
        f = h.field
    else:
        if f is None and not args.zeta:
            raise InputError("hilbert needs --input or --zeta")
        rel = None
    zeta = _zeta(args, f) if args.zeta else None
    if rel is None:
        rel = algebra.twisted_relations(zeta)
        f = zeta.field
    dims = algebra.hilbert_dims(rel, args.max_degree)
    result: dict = {"dims": dims}
    checks = {"polynomial_growth": dims == [(k + 1) * (k + 2) // 2 for k in range(args.max_degree + 1)]}
    if zeta is not None:
        result["degree3_line_dim"] = algebra.upsilon3(zeta).dim
        result["degree3_sum_dim"] = algebra.degree3_sum_dim(zeta)
        checks["degree3_line"] = result["degree3_line_dim"] == 1
        checks["degree3_sum"] = result["degree3_sum_dim"] == 17
        checks["twisted_cyclicity"] = algebra.twisted_cyclicity_check(zeta)
        if args.input:
            checks["twisted_relations"] = rel.I2 == algebra.twisted_relations(zeta).I2
    return f, result, checks


def cmd_forms_check(args):
    f = _field(args)
    h = _operator(args, f)
    zeta = _zeta(args, h.field) if args.zeta else _identity(h.field)
    ctx = forms.FormsContext(h, zeta)
    F = h.field
    try:
        rep = forms.commutation_report(ctx)
        comm_ok = rep.all_true
        rep_json = {k: getattr(rep, k) for k in ("commutes", "y_equal", "y_proportional", "forms_proportional", "wedge_vanishes")}
        rep_json["c"] = None if rep.c is None else F.format(rep.c)
    except InternalInconsistency as e:
        comm_ok, rep_json = False, {"error": str(e)}
    E = [hecke.basis_vector(F, i) for i in range(3)]
    table = {f"e{i + 1}e{j + 1}": [F.format(x) for x in ctx.ell(E[i], E[j])] for i in range(3) for j in range(3)}
    rank = forms.diagonal_rank(ctx)
    checks = {
        "forms_relation": forms.check_forms_relation(ctx),
        "wedge_identity": forms.check_wedge_identity(ctx),
        "evaluation_identity": forms.check_evaluation_identity(ctx),
        "skew_identity": forms.check_skew_identity(ctx),
        "full_braid_identity": forms.check_full_braid_identity(ctx),
        "commutation_conditions": comm_ok,
        "commutes_with_cube": hecke.commutes_with_cubed_square(h, zeta),
        "forms_nondegenerate": forms.check_forms_nondegenerate(ctx),
        "skewsymmetrizer_faithful": forms.skewsymmetrizer_faithful(ctx),
    }
    if args.require_diagonal_rank:
        checks["diagonal_rank_one"] = rank == 1
    result = {"forms": table, "diagonal_rank": rank, "commutation": rep_json}
    return F, result, checks


def _report_json(r: cls.ClassReport) -> dict:
    fmt = cls.DiagonalTwist(r.alphas).field.format
    return {
        "alphas": [fmt(a) for a in r.alphas],
        "q": fmt(r.q),
        "skew_params": [fmt(x) for x in r.skew.as_tuple()],
        "relations": r.skew.relations_text(fmt),
        "table_row": r.table_row,
        "gzeta_index": r.gzeta_index,
        "permitted_types": {str(k): [list(p) for p in v] for k, v in sorted(r.permitted_types.items())},
        "canonical_triples": [
            {"type": t, "ordering": list(perm), "triple": triple_to_json(tr)} for t, perm, tr in r.canonical_triples
        ],
        "class_counts": r.class_counts,
        "closed_field_counts": r.closed_field_counts,
        "notes": r.notes,
    }


def cmd_classify(args):
    f = _field(args)
    d = _diagonal(_zeta(args, f))
    q = _q(args, d.field)
    r = cls.classify(d, q)
    ok = True
    for _, _, tr in r.canonical_triples:
        h = hecke.build_from_triple(tr)
        ok = ok and hecke.check_braid(h) and hecke.check_hecke(h) and hecke.commutes_with_square(h, d.matrix())
    return d.field, _report_json(r), {"canonical_triples_valid": ok}


def cmd_count_classes(args):
    f = _field(args)
    if f is None:
        raise InputError("--field is required")
    if None in (args.p1, args.p2, args.p3):
        raise InputError("--p1, --p2 and --p3 are required")
    sp = cls.SkewParams.parse(f, args.p1, args.p2, args.p3)
    regime = cls.regime_of(_q(args, f))
    count = cls.count_classes(sp, regime)
    return f, {"count": count, "table_row": cls.table_row(sp), "regime": regime, "closed_field": True}, {}


def cmd_enumerate(args):
    f = _field(args)
    if f is None:
        raise InputError("--field is required")
    if f.is_rational:
        raise InvalidParameter("enumeration needs --field Fp:<p>")
    limit = min(args.max_prime, enumeration.MAX_PRIME)
    if f.p > limit:
        raise FieldTooLarge(f"p = {f.p} exceeds --max-prime {limit}")
    d = _diagonal(_zeta(args, f))
    qs = [_q(args, f)] if args.q is not None else enumeration.admissible_qs(f)
    reports = [enumeration.run(d, q, workers=args.workers) for q in qs]
    checks = {
        "no_theorem_failures": all(r.theorem_failures == 0 for r in reports),
        "diagonal_rank_ok": all(r.diag_rank_violations == 0 for r in reports),
    }
    return f, {"reports": [r.to_json_obj() for r in reports]}, checks


HANDLERS = {
    "verify": cmd_verify,
    "construct": cmd_construct,
    "twist": cmd_twist,
    "relations": cmd_relations,
    "hilbert": cmd_hilbert,
    "forms-check": cmd_forms_check,
    "classify": cmd_classify,
    "count-classes": cmd_count_classes,
    "enumerate": cmd_enumerate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heckesym", description="Hecke symmetries with twisted polynomial relations.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="Q or Fp:<prime>")
    common.add_argument("--output", choices=("json", "text"), default="text")
    common.add_argument("--out", metavar="FILE", help="write the output here instead of stdout")
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name in ("verify", "construct", "twist", "relations", "hilbert", "forms-check"):
            p.add_argument("--input", metavar="FILE", help="operator or triple JSON")
        if name in ("verify", "twist", "relations", "hilbert", "forms-check", "classify", "enumerate"):
            p.add_argument("--zeta", help='twist JSON file, or inline "diag:a,b,c"')
        if name in ("construct", "classify", "count-classes", "enumerate"):
            p.add_argument("--q", help="Hecke parameter")
        if name == "construct":
            p.add_argument("--type", type=int, choices=range(1, 9), help="build the operator of this type")
        if name == "hilbert":
            p.add_argument("--max-degree", type=int, default=3, choices=range(0, algebra.MAX_HILBERT_DEGREE + 1))
        if name == "forms-check":
            p.add_argument(
                "--no-diagonal-rank", dest="require_diagonal_rank", action="store_false",
                help="do not require the diagonal forms to span a line (the flip fails it)",
            )
        if name == "count-classes":
            for k in ("--p1", "--p2", "--p3"):
                p.add_argument(k, help="skew parameter (the text eps names a primitive cube root of 1)")
        if name == "enumerate":
            p.add_argument("--max-prime", type=int, default=enumeration.MAX_PRIME)
            p.add_argument("--workers", type=int, default=1)
    return parser


def _text(command: str, f, result: dict, checks: dict) -> str:
    if command == "count-classes":
        return str(result["count"])
    lines = [f"{command} over {f}"]
    for k, v in result.items():
        if k in ("operator", "reports", "canonical_triples", "forms", "triple"):
            continue
        lines.append(f"  {k}: {json.dumps(v, sort_keys=True)}")
    if command == "enumerate":
        for r in result["reports"]:
            lines.append(
                "  q={q}: {total_triples} triples, {kx_orbits} scale orbits, {gzeta_orbits} G(zeta) orbits, "
                "{theorem_failures} failures, {diag_rank_violations} rank violations".format(**r)
            )
            cf = r.get("closed_field")
            if cf:
                tag = "match" if cf["match"] else "differs"
                lines.append(f"    classes with the flip: {cf['observed_classes']}, closed-field table: "
                             f"{cf['closed_field_count']} ({tag}{', exploratory' if cf['exploratory'] else ''})")
    if "operator" in result:
        lines.append("  R (columns are images of e_i e_j):")
        lines.extend("    " + " ".join(f"{x:>5}" for x in row) for row in result["operator"]["R"]["rows"])
    for k, v in checks.items():
        lines.append(f"  [{'ok' if v else 'FAIL'}] {k}")
    return "\n".join(lines)


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        f, result, checks = HANDLERS[args.command](args)
    except InternalInconsistency as e:
        print(f"error: internal inconsistency: {e}", file=sys.stderr)
        return 1
    except HeckeError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    if args.output == "json":
        doc = {
            "command": args.command,
            "field": f.to_json(),
            "result": result,
            "checks": checks,
            "provenance": {k: CHECKS[k] for k in checks},
        }
        text = json.dumps(doc, sort_keys=True, indent=1)
    else:
        text = _text(args.command, f, result, checks)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if all(checks.values()) else 1


def main() -> None:
    sys.exit(run())
