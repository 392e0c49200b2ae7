"""Command line front end.

Verbs: decide, characters, idempotents, gamma, oracle, crosscheck,
emit-instance.  Exit codes: 0 for a Mathieu-Zhao verdict (or plain
success on table verbs), 1 for a NotMZ verdict or a crosscheck
disagreement, 2 for any input, validation, or budget error.
"""

import argparse
import json
import random
import sys
from pathlib import Path

from . import __version__
from .algebra import AlgebraError
from .characters import character_table, primitive_idempotents
from .decision import DecisionError, decide, instance_gamma
from .fields import FieldError, format_element
from .groups import GroupError
from .instancefile import Instance, InstanceError, load_instance, render_instance
from .oracle import OracleBudget, OracleError, definitional_mz_check
from .subsetsum import SearchError

_USER_ERRORS = (InstanceError, FieldError, GroupError, AlgebraError,
                DecisionError, OracleError, SearchError)


def _field_provenance(fld):
    if fld.characteristic == 0:
        return (f"{fld.spec}, degree {fld.degree} over Q, "
                f"reduction by the order-{fld.e} cyclotomic polynomial")
    if fld.k == 1:
        return f"{fld.spec}, prime field"
    return (f"{fld.spec}, modulus {_poly_text(fld.modulus)}, "
            f"generator {format_element(fld, fld.generator())}")


def _poly_text(coeffs):
    parts = []
    for power in range(len(coeffs) - 1, -1, -1):
        c = coeffs[power]
        if c == 0:
            continue
        if power == 0:
            parts.append(str(c))
        else:
            head = "" if c == 1 else f"{c}*"
            parts.append(f"{head}z" if power == 1 else f"{head}z^{power}")
    return " + ".join(parts) if parts else "0"


def _provenance(fld, group, threads):
    return {
        "engine": f"mzkernel {__version__}",
        "field": _field_provenance(fld),
        "group": (f"{group} (order {group.order}, exponent {group.exponent}); "
                  "coefficients follow the canonical enumeration, "
                  "last factor fastest"),
        "threads": threads,
    }


def _print_provenance(prov):
    print(prov["engine"])
    print(f"field: {prov['field']}")
    print(f"group: {prov['group']}")
    print(f"threads: {prov['threads']}")


def _witness_text(report):
    w = report.witness
    if w is None:
        return "none"
    data = w.as_json()
    if data["type"] == "zero_sum_subset":
        cols = ", ".join(str(c) for c in data["columns"])
        return f"zero-sum subset of live columns {{{cols}}}"
    return (f"offset equation failure: row {data['row']}, "
            f"character {data['character']}, coset offset {data['offset']}")


def _budget_from(instance, args):
    over = dict(instance.budget_overrides)
    if getattr(args, "budget", None) is not None:
        over["max_algebra_size"] = args.budget
    defaults = OracleBudget()
    return OracleBudget(
        max_algebra_size=over.get("max_algebra_size", defaults.max_algebra_size),
        max_pairs=over.get("max_pairs", defaults.max_pairs),
    )


# -- verbs -------------------------------------------------------------------


def cmd_decide(args):
    inst = load_instance(args.instance)
    report = decide(inst.field, inst.group, inst.require_rows(),
                    unsafe_large=args.unsafe_large,
                    backend=args.backend, threads=args.threads)
    if args.json:
        doc = {"provenance": _provenance(inst.field, inst.group, args.threads)}
        doc.update(report.as_json())
        print(json.dumps(doc, indent=2))
    elif args.witness_only:
        print(_witness_text(report))
    else:
        _print_provenance(_provenance(inst.field, inst.group, args.threads))
        print(f"rows: {len(report.pre.rows)} given, rank {len(report.pre.reduced_rows)}")
        print(f"verdict: {report.verdict}  ({report.reason})")
        if report.column_group is not None:
            kind = ("characters of the full group" if report.modular is None
                    else f"characters of the p'-part, p = {report.modular.p}")
            print(f"column group: {report.column_group}  [{kind}]")
            dead = " ".join(str(c) for c in report.dead_columns) or "(none)"
            live = " ".join(str(c) for c in report.live_columns) or "(none)"
            print(f"dead columns: {dead}")
            print(f"live columns: {live}")
        if report.search is not None and report.search.path:
            print(f"search path: {report.search.path}")
        print(f"witness: {_witness_text(report)}")
    return 0 if report.is_mz else 1


def cmd_characters(args):
    inst = load_instance(args.instance)
    table = character_table(inst.group, inst.field)
    if args.json:
        print(json.dumps([[format_element(inst.field, v) for v in row]
                          for row in table], indent=2))
    else:
        for j, row in enumerate(table, start=1):
            print(f"chi_{j}: " + ", ".join(format_element(inst.field, v) for v in row))
    return 0


def cmd_idempotents(args):
    inst = load_instance(args.instance)
    idems = primitive_idempotents(inst.group, inst.field)
    if args.json:
        print(json.dumps([[format_element(inst.field, c) for c in e.coeffs]
                          for e in idems], indent=2))
    else:
        for j, e in enumerate(idems, start=1):
            print(f"e_{j}: " + ", ".join(format_element(inst.field, c)
                                         for c in e.coeffs))
    return 0


def cmd_gamma(args):
    inst = load_instance(args.instance)
    _, gamma, column_group = instance_gamma(
        inst.field, inst.group, inst.require_rows(),
        unsafe_large=args.unsafe_large)
    if gamma is None:
        if args.json:
            print(json.dumps({"column_group": None, "gamma": []}))
        else:
            print("zero map: no gamma matrix")
        return 0
    body = [[format_element(inst.field, v) for v in row] for row in gamma.entries]
    if args.json:
        print(json.dumps({"column_group": str(column_group), "gamma": body},
                         indent=2))
    else:
        print(f"column group: {column_group}")
        for i, row in enumerate(body, start=1):
            print(f"gamma_{i}: " + ", ".join(row))
    return 0


def cmd_oracle(args):
    inst = load_instance(args.instance)
    report = definitional_mz_check(
        inst.field, inst.group, inst.require_rows(),
        budget=_budget_from(inst, args),
        backend=args.backend, threads=args.threads)
    if args.json:
        print(json.dumps(report.as_json(), indent=2))
    else:
        print(f"oracle verdict: {report.verdict}  "
              f"(|K[G]| = {report.algebra_size}, {report.root_count} roots)")
        if report.counterexample is not None:
            cx = report.counterexample.as_json()
            print(f"counterexample: u = {cx['u']}")
            print(f"                a = {cx['a']}")
            print(f"                b = {cx['b']}")
            print(f"                escapes at every exponent "
                  f"{cx['exponent']} + t*{cx['period']}")
    return 0 if report.is_mz else 1


def cmd_crosscheck(args):
    root = Path(args.corpus)
    if not root.is_dir():
        raise InstanceError(f"{root} is not a directory")
    paths = sorted(p for p in root.iterdir()
                   if p.is_file() and not p.name.startswith("."))
    agreed, disagreed = [], []
    for path in paths:
        inst = load_instance(path)
        rows = inst.require_rows()
        dec = decide(inst.field, inst.group, rows,
                     unsafe_large=args.unsafe_large,
                     backend=args.backend, threads=args.threads)
        orc = definitional_mz_check(inst.field, inst.group, rows,
                                    budget=_budget_from(inst, args),
                                    backend=args.backend, threads=args.threads)
        if dec.verdict == orc.verdict:
            agreed.append((path, dec.verdict))
        else:
            disagreed.append((path, dec.verdict, orc.verdict))
            print(f"DISAGREEMENT {path}: engine {dec.verdict}, oracle {orc.verdict}")
    by_verdict = {"MZ": 0, "NotMZ": 0}
    for _, v in agreed:
        by_verdict[v] += 1
    print(f"{len(paths)} instances: {by_verdict['MZ']} MZ, "
          f"{by_verdict['NotMZ']} NotMZ, {len(disagreed)} disagreements")
    return 1 if disagreed else 0


def cmd_emit_instance(args):
    from .fields import FieldSpec, field_make
    from .groups import GroupSpec

    group = GroupSpec.parse(args.group)
    fld = field_make(FieldSpec.parse(args.field))
    rng = random.Random(args.seed)
    rows = []
    for _ in range(args.rows):
        if fld.characteristic:
            rows.append([fld.element(rng.randrange(fld.cardinality))
                         for _ in range(group.order)])
        else:
            rows.append([fld.from_rational(rng.randint(-3, 3))
                         for _ in range(group.order)])
    inst = Instance(group=group, field=fld, rows=rows)
    sys.stdout.write(render_instance(inst, note=f"seed={args.seed}"))
    return 0


# -- argument plumbing -------------------------------------------------------


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="mzkernel",
        description="Decide whether the kernel of a linear map on a finite "
                    "abelian group algebra is a Mathieu-Zhao space.")
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, budget=False, witness=False):
        p.add_argument("--json", action="store_true",
                       help="machine-readable output")
        p.add_argument("--threads", type=int, default=1, metavar="N",
                       help="worker threads inside the engine (default 1)")
        p.add_argument("--backend", choices=("numba", "numpy"), default=None,
                       help="computation backend (default: numba when available)")
        p.add_argument("--unsafe-large", action="store_true",
                       help="lift the default size caps")
        if budget:
            p.add_argument("--budget", type=int, default=None, metavar="M",
                           help="enumeration cap on |K[G]| for the oracle")
        if witness:
            p.add_argument("--witness-only", action="store_true",
                           help="print only the witness")

    p = sub.add_parser("decide", help="run the decision engine on an instance")
    p.add_argument("instance")
    common(p, witness=True)
    p.set_defaults(func=cmd_decide)

    for name, fn, hint in (
        ("characters", cmd_characters, "character table of the instance's group"),
        ("idempotents", cmd_idempotents, "primitive idempotents of K[G]"),
        ("gamma", cmd_gamma, "gamma matrix the decision would search"),
    ):
        p = sub.add_parser(name, help=hint)
        p.add_argument("instance")
        common(p)
        p.set_defaults(func=fn)

    p = sub.add_parser("oracle", help="brute-force definitional check")
    p.add_argument("instance")
    common(p, budget=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("crosscheck",
                       help="engine vs oracle over a directory of instances")
    p.add_argument("corpus")
    common(p, budget=True)
    p.set_defaults(func=cmd_crosscheck)

    p = sub.add_parser("emit-instance",
                       help="write a seeded random instance to stdout")
    p.add_argument("group", help="group spec, e.g. 'Z2 x Z4'")
    p.add_argument("field", help="field spec, e.g. 'GF(4)' or 'Q(zeta_6)'")
    p.add_argument("--rows", type=int, default=1, metavar="R")
    p.add_argument("--seed", type=int, default=0, metavar="S")
    p.set_defaults(func=cmd_emit_instance)

    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _USER_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
