"""Command-line interface.

Verdicts print as JSON on stdout and exit 0 even when the verdict is
negative; operational failures (bad syntax, caps, preconditions) print
an error object on stderr and exit nonzero (2 for syntax, 1 otherwise).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import classify as classify_mod
from . import dsl, logic, tables, topology
from .abelian import AbelianGroup, cyclic_residual_quotient
from .closure_map import emit_closure_map
from .dihedral import GenDihedralGroup, materialize_table
from .words import BallCapExceeded, active_ball_cap


def _print(payload) -> None:
    print(json.dumps(payload, indent=2))


def _load_group_or_table(arg: str, cap: int = 512):
    if os.path.exists(arg):
        return tables.load_table(arg)
    group = dsl.parse_group(arg)
    return group


def _as_table(arg: str, cap: int = 512) -> tables.FiniteGroupTable:
    thing = _load_group_or_table(arg)
    if isinstance(thing, tables.FiniteGroupTable):
        return thing
    return materialize_table(thing, cap)


def _range(text: str) -> range:
    lo, _, hi = text.partition("..")
    return range(int(lo), int(hi) + 1)


def cmd_ball(args) -> int:
    marked = dsl.parse_marked(args.marked)
    ball = topology.relation_ball(marked, args.radius)
    payload = ball.to_json()
    payload["marking"] = str(marked)
    _print(payload)
    return 0


def cmd_dist(args) -> int:
    a = dsl.parse_marked(args.a)
    b = dsl.parse_marked(args.b)
    radius, witness = topology._compare(a, b, args.rmax, args.method, None)
    _print(
        {
            "a": str(a),
            "b": str(b),
            "r_max": args.rmax,
            "agreement_radius": radius,
            "exact": witness is not None,
            "distance": 0.0 if witness is None else 2.0 ** -(radius + 1),
            "separating_word": None if witness is None else str(witness),
        }
    )
    return 0


def cmd_converge(args) -> int:
    indices = _range(args.range)
    limit = dsl.parse_marked(args.limit)

    def family(n: int) -> topology.MarkedGroup:
        return dsl.parse_marked(args.family.replace("N", str(n)))

    report = topology.check_convergence(
        family, limit, indices, r_max=args.rmax
    )
    payload = report.to_json()
    payload["family"] = args.family
    payload["limit"] = str(limit)
    _print(payload)
    return 0


def cmd_limit_check(args) -> int:
    group = dsl.parse_group(args.group)
    payload = {"group": str(group)}
    if isinstance(group, AbelianGroup):
        payload["limit_of_cyclic"] = topology.is_limit_of_cyclic(group)
    decision = topology.is_limit_of_dihedral(group)
    payload["limit_of_dihedral"] = {"value": decision.value, "reason": decision.reason}
    if isinstance(group, GenDihedralGroup):
        payload["rank"] = (
            topology.rank_of_limit(group) if decision.value else None
        )
    _print(payload)
    return 0


def cmd_residual(args) -> int:
    group = dsl.parse_group(args.group)
    if isinstance(group, GenDihedralGroup):
        elements = dsl.parse_elements(args.kill, group)
        witness = topology.dihedral_residual_witness(group, elements)
        _print(
            {
                "group": str(group),
                "target": str(witness.target),
                "half_order": witness.half_order,
                "modulus": witness.quotient.modulus,
                "free_multipliers": list(witness.quotient.free_multipliers),
                "torsion_multipliers": list(witness.quotient.torsion_multipliers),
                "images": {
                    str(x): str(witness.apply(x)) for x in elements
                },
            }
        )
    else:
        elements = dsl.parse_elements(args.kill, group)
        quotient = cyclic_residual_quotient(group, elements)
        _print(
            {
                "group": str(group),
                "target": str(quotient.target_group()),
                "modulus": quotient.modulus,
                "free_multipliers": list(quotient.free_multipliers),
                "torsion_multipliers": list(quotient.torsion_multipliers),
                "images": {str(x): quotient.apply(x) for x in elements},
            }
        )
    return 0


def cmd_check(args) -> int:
    sentence = dsl.parse_sentence(args.sentence)
    table = _as_table(args.structure)
    result = logic.holds_in(table, sentence, budget=args.budget)
    _print(
        {
            "sentence": dsl.print_sentence(sentence),
            "structure": args.structure,
            "order": table.order,
            "holds": result.holds,
            "counterexample": None
            if result.counterexample is None
            else [table.labels[i] for i in result.counterexample],
        }
    )
    return 0


def cmd_classify(args) -> int:
    if os.path.exists(args.target):
        table = tables.load_table(args.target)
        arity = args.arity or 2
        classes = classify_mod.enumerate_markings(table, arity)
        _print(
            {
                "structure": args.target,
                "arity": arity,
                "count": len(classes),
                "classes": [c.to_json() for c in classes],
            }
        )
        return 0
    group = dsl.parse_group(args.target)
    if isinstance(group, GenDihedralGroup) and not group.base.invariant_factors:
        arity = group.base.free_rank + 1
        if args.arity and args.arity != arity:
            raise ValueError(
                f"markings of {group} have length {arity}, not {args.arity}"
            )
        classes = classify_mod.canonical_classes(arity)
        _print(
            {
                "structure": str(group),
                "arity": arity,
                "count": classify_mod.count_marking_classes(arity),
                "classes": [c.to_json() for c in classes],
            }
        )
        return 0
    table = materialize_table(group)
    arity = args.arity or 2
    classes = classify_mod.enumerate_markings(table, arity)
    _print(
        {
            "structure": str(group),
            "arity": arity,
            "count": len(classes),
            "classes": [c.to_json() for c in classes],
        }
    )
    return 0


def cmd_cb_rank(args) -> int:
    group = dsl.parse_group(args.group)
    family = {
        "dihedral": "dihedral-closure",
        "cyclic": "cyclic-closure",
        "abelian": "all-marked",
    }[args.family]
    rank = topology.cb_rank(group, family)
    _print({"group": str(group), "family": args.family, "rank": rank})
    return 0


def cmd_closure_map(args) -> int:
    json_text, dot_text = emit_closure_map(_range(args.range), r_max=args.rmax)
    sys.stdout.write(dot_text if args.dot else json_text)
    return 0


def cmd_recognize(args) -> int:
    table = _as_table(args.target)
    outcome = tables.recognize_generalized_dihedral(table)
    _print(
        {
            "structure": args.target,
            "kind": outcome.kind,
            "base": None if outcome.base is None else str(outcome.base),
            "rotation_part": None
            if outcome.rotation_part is None
            else list(outcome.rotation_part),
            "flip_coset": None if outcome.flip_coset is None else list(outcome.flip_coset),
            "reason": outcome.reason,
        }
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mgs",
        description="exact computation with marked groups "
        f"(word-ball cap: {active_ball_cap()}, override with MGS_BALL_CAP)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ball", help="relation ball of a marked group")
    p.add_argument("marked")
    p.add_argument("--radius", "-R", type=int, required=True)
    p.set_defaults(func=cmd_ball)

    p = sub.add_parser("dist", help="agreement radius and distance of two markings")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--rmax", type=int, default=8)
    p.add_argument("--method", choices=("auto", "enumerate", "profile"), default="auto")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("converge", help="certify a family against a limit")
    p.add_argument("--family", required=True, help="marked-group template; N is the index")
    p.add_argument("--limit", required=True)
    p.add_argument("--range", required=True, help="a..b inclusive")
    p.add_argument("--rmax", type=int, default=None)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("limit-check", help="membership in the cyclic/dihedral closures")
    p.add_argument("group")
    p.set_defaults(func=cmd_limit_check)

    p = sub.add_parser("residual", help="finite quotient keeping elements alive")
    p.add_argument("group")
    p.add_argument("--kill", required=True, help="comma-separated elements to keep nontrivial")
    p.set_defaults(func=cmd_residual)

    p = sub.add_parser("check", help="check a universal sentence on a finite group")
    p.add_argument("sentence", help="a sentence or @P1..@P4")
    p.add_argument("--in", dest="structure", required=True, help="group or table file")
    p.add_argument("--budget", type=int, default=logic.DEFAULT_EVAL_BUDGET)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("classify", help="marking classes up to automorphism")
    p.add_argument("target", help="table file or group")
    p.add_argument("--arity", "-m", type=int, default=None)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("cb-rank", help="Cantor-Bendixson rank in a family")
    p.add_argument("group")
    p.add_argument("--family", choices=("dihedral", "cyclic", "abelian"), required=True)
    p.set_defaults(func=cmd_cb_rank)

    p = sub.add_parser("closure-map", help="the two-generator dihedral closure map")
    p.add_argument("--arity", type=int, default=2)
    p.add_argument("--range", default="3..8")
    p.add_argument("--rmax", type=int, default=8)
    p.add_argument("--dot", action="store_true")
    p.set_defaults(func=cmd_closure_map)

    p = sub.add_parser("recognize", help="recognize generalized dihedral structure")
    p.add_argument("target", help="table file or group")
    p.set_defaults(func=cmd_recognize)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except dsl.ParseError as exc:
        json.dump({"error": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    except (ValueError, TypeError, OSError, BallCapExceeded) as exc:
        json.dump({"error": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
