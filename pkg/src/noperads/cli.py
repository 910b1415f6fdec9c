"""Command line entry point: `noperads verify`, `homology`, `ordinals enum`, and friends."""
from __future__ import annotations

import argparse
import json
import sys

from . import harness


def _named_operad(name, n, N):
    from . import operads as op

    table = {
        "ass": lambda: op.ass(n, N),
        "com": lambda: op.desymmetrise(op.sym_com(N), n),
        "sym-ass": lambda: op.desymmetrise(op.sym_ass(N), n),
        "perm": lambda: op.desymmetrise(op.sym_perm(N), n),
    }
    if name not in table:
        raise SystemExit(f"unknown operad {name!r}; choose from {', '.join(table)}")
    return table[name]()


def _load_operad(args):
    from . import operads as op

    if args.file:
        with open(args.file) as fh:
            return op.from_dict(json.load(fh))
    return _named_operad(args.operad, args.n, args.N)


def _emit(obj, out=None):
    text = json.dumps(obj, sort_keys=True, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_verify(args):
    config = harness.load_config(args.config) if args.config else harness.default_config()
    if args.only:
        keep = [s.strip() for s in args.only.split(",") if s.strip()]
        for k in keep:
            if k not in harness.BY_ID:
                raise harness.UnknownCheck("no such check", k)
        known = {e.id for e in config.checks}
        config.checks = [e for e in config.checks if e.id in keep] + [
            harness.CheckEntry(k) for k in keep if k not in known
        ]
    if args.workers:
        config.workers = args.workers
    reports = harness.run_suite(config)
    for r in reports:
        print(harness.summary_line(r))
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(harness.reports_json(reports, args.timings) + "\n")
    return 1 if any(r.verdict == harness.FAIL for r in reports) else 0


def cmd_homology(args):
    from .homotopy import homology_report
    from .ordinals import milgram_poset, quasibijection_category

    cat = quasibijection_category(args.n, args.k) if args.category == "q" else milgram_poset(args.n, args.k)
    rep = homology_report(cat, args.dim, args.field)
    rep.update(category=f"{'Q' if args.category == 'q' else 'J'}_{args.n}({args.k})")
    _emit(rep, args.json)
    return 0


def cmd_ordinals(args):
    from .ordinals import enumerate_ordinals, format_ordinal

    Ts = enumerate_ordinals(args.n, args.k)
    for T in Ts[: args.limit] if args.limit else Ts:
        print(format_ordinal(T))
    print(f"# {len(Ts)} {args.n}-ordinals of size {args.k}", file=sys.stderr)
    return 0


def cmd_milgram(args):
    from .homotopy import betti, nerve
    from .ordinals import milgram_poset

    J = milgram_poset(args.n, args.k)
    rep = betti(nerve(J, args.dim + 1))
    top = min(args.dim, rep.exact_through)
    out = {
        "poset": f"J_{args.n}({args.k})",
        "objects": J.n_objects,
        "morphisms": J.n_morphisms,
        "betti_q": list(rep.betti[: top + 1]),
        "configuration_betti": harness.configuration_betti(args.n, args.k)[: top + 1],
    }
    _emit(out, args.json)
    return 0


def cmd_sym(args):
    from .operads import symmetrise_operad

    A = _load_operad(args)
    B = symmetrise_operad(A)
    _emit({"operad": A.name, "arity_sizes": {str(k): len(v) for k, v in sorted(B.values.items())}}, args.json)
    return 0


def cmd_desym(args):
    from . import operads as op
    from .ordinals import format_ordinal

    builders = {"com": op.sym_com, "ass": op.sym_ass, "perm": op.sym_perm}
    if args.operad not in builders:
        raise SystemExit(f"unknown symmetric operad {args.operad!r}; choose from {', '.join(builders)}")
    A = op.desymmetrise(builders[args.operad](args.N), args.n)
    sizes = {format_ordinal(T): len(A.value(T)) for T in op.ordinals_in(args.n, args.N, A.kind)}
    if args.out:
        _emit(op.to_dict(A), args.out)
    _emit({"operad": A.name, "sizes": sizes})
    return 0


def cmd_free(args):
    from . import operads as op
    from .ordinals import format_ordinal, parse_ordinal

    gens = [op.representable(args.n, args.N, parse_ordinal(g)) for g in args.generator]
    X = op.coproduct(gens) if len(gens) > 1 else gens[0]
    F = op.free_operad(X)
    sizes = {format_ordinal(T): len(F.value(T)) for T in op.ordinals_in(args.n, args.N, F.kind)}
    if args.out:
        _emit(op.to_dict(F), args.out)
    _emit({"operad": F.name, "sizes": sizes})
    return 0


def cmd_check_operad(args):
    from . import operads as op

    with open(args.file) as fh:
        A = op.from_dict(json.load(fh))
    try:
        op.check_operad(A)
    except op.AxiomFailure as e:
        print(f"FAIL {A.name}: {e}")
        return 1
    print(f"OK {A.name}")
    return 0


def cmd_classifier(args):
    from .substitudes import capped_addition, classifier_nop, classifier_pc, marked_finality, monoid_substitude

    if args.kind == "nop":
        C = classifier_nop(args.n, args.cap, args.tree_kind, k_cap=args.k_cap)
    else:
        P = monoid_substitude() if args.kind == "monoid" else capped_addition(args.cap)
        C = classifier_pc(P, args.x_cap, args.k_cap)
    cert = marked_finality(C)
    out = {
        "substitude": C.substitude.name,
        "truncation": C.truncation,
        "objects": C.category.n_objects,
        "morphisms": C.category.n_morphisms,
        "marked": len(C.marked),
        "marked_name": C.marked_name,
        "final": bool(cert),
        "failure": cert.failure,
    }
    _emit(harness._jsonable(out), args.json)
    return 0 if cert else 1


def cmd_explain(args):
    print(harness.explain(args.id), end="")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="noperads", description="Finite checks for n-operads and substitudes.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the verification suite")
    v.add_argument("--config", help="JSON suite config (default: every check)")
    v.add_argument("--only", help="comma-separated check ids")
    v.add_argument("--json", help="write the canonical JSON report here")
    v.add_argument("--timings", action="store_true", help="include wall times in the JSON report")
    v.add_argument("--workers", type=int, help="worker processes")
    v.set_defaults(fn=cmd_verify)

    h = sub.add_parser("homology", help="homology of N(Q_n(k)) or N(J_n(k))")
    h.add_argument("--category", choices=["q", "j"], default="q")
    h.add_argument("--n", type=int, default=2)
    h.add_argument("--k", type=int, default=2)
    h.add_argument("--dim", type=int, default=3)
    h.add_argument("--field", choices=["q", "f2", "z1"], default="q")
    h.add_argument("--json")
    h.set_defaults(fn=cmd_homology)

    o = sub.add_parser("ordinals", help="n-ordinals")
    osub = o.add_subparsers(dest="action", required=True)
    e = osub.add_parser("enum", help="list the n-ordinals of size k")
    e.add_argument("--n", type=int, default=2)
    e.add_argument("--k", type=int, default=3)
    e.add_argument("--limit", type=int)
    e.set_defaults(fn=cmd_ordinals)

    m = sub.add_parser("milgram", help="the Milgram poset J_n(k) and its homology")
    m.add_argument("--n", type=int, default=2)
    m.add_argument("--k", type=int, default=3)
    m.add_argument("--dim", type=int, default=2)
    m.add_argument("--json")
    m.set_defaults(fn=cmd_milgram)

    s = sub.add_parser("sym", help="symmetrise an n-operad")
    s.add_argument("--operad", default="ass", help="ass, com, sym-ass or perm")
    s.add_argument("--file", help="operad JSON file instead of a named operad")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--N", type=int, default=3)
    s.add_argument("--json")
    s.set_defaults(fn=cmd_sym)

    d = sub.add_parser("desym", help="desymmetrise a symmetric operad to an n-operad")
    d.add_argument("--operad", default="com", help="com, ass or perm")
    d.add_argument("--n", type=int, default=2)
    d.add_argument("--N", type=int, default=3)
    d.add_argument("--out", help="write the operad JSON here")
    d.set_defaults(fn=cmd_desym)

    f = sub.add_parser("free", help="free n-operad on representable generators")
    f.add_argument("--generator", action="append", required=True, help="ordinal literal, repeatable")
    f.add_argument("--n", type=int, default=2)
    f.add_argument("--N", type=int, default=3)
    f.add_argument("--out", help="write the operad JSON here")
    f.set_defaults(fn=cmd_free)

    c = sub.add_parser("check-operad", help="check the axioms of an operad JSON file")
    c.add_argument("file")
    c.set_defaults(fn=cmd_check_operad)

    k = sub.add_parser("classifier", help="build a truncated classifier and certify finality")
    k.add_argument("--kind", choices=["monoid", "capped", "nop"], default="monoid")
    k.add_argument("--cap", type=int, default=2, help="poset cap, or vertex cap for nop")
    k.add_argument("--x-cap", type=int, default=3)
    k.add_argument("--k-cap", type=int, default=2)
    k.add_argument("--n", type=int, default=2)
    k.add_argument("--tree-kind", default="constant_free")
    k.add_argument("--json")
    k.set_defaults(fn=cmd_classifier)

    x = sub.add_parser("explain", help="what a check verifies")
    x.add_argument("id")
    x.set_defaults(fn=cmd_explain)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except harness.UnknownCheck as e:
        print(f"unknown check: {e.witness}", file=sys.stderr)
        return 2
    except harness.ConfigError as e:
        print(f"bad config: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
