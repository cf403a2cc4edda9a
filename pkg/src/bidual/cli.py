"""Command-line entry point.

Exit status: 0 when every requested check passes, 1 when a check fails,
2 on usage or input errors.  ``--json`` emits canonical JSON (sorted keys)
so identical configurations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys

from .compiler import all_extensions, center_equations, compile_extension
from .jordan import (
    DimensionError,
    TripotentError,
    jbstar_axiom_checks,
    make_tripotent,
    peirce,
    peirce_rules_residual,
    spectrum_deviation,
    triple_system,
    tripotent_residual,
)
from .limits import (
    FUNCTIONALS,
    GroupTagError,
    arens_gap,
    make_family,
    triple_gap,
    window_functional,
)
from .selftest import run_selftest
from .templates import TemplateError, parse_template, perm
from .terms import RelationSet, StructuralError, render


class UsageError(ValueError):
    pass


def parse_relations(spec: str | None) -> RelationSet:
    if not spec:
        return RelationSet()
    commutative = regular = False
    trace = set()
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        if item == "commutative":
            commutative = True
        elif item == "regular":
            regular = True
        elif item.startswith("trace:"):
            trace.add(item.split(":", 1)[1])
        else:
            raise UsageError(f"unknown relation {item!r}")
    return RelationSet(commutative, regular, frozenset(trace))


def _emit(args, payload, text: str):
    out = json.dumps(payload, sort_keys=True, indent=2) + "\n" if args.json else text + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def cmd_extend(args) -> int:
    tpl = parse_template(args.template)
    rel = parse_relations(args.relations)
    if args.perm == "all":
        report = all_extensions(tpl, rel)
        lines = [f"s{i}: {render(t)}" for i, t in enumerate(report.extensions)]
        lines.append(f"classes: {[list(c) for c in report.classes]}")
        lines.append(f"regular: {report.regular}")
        _emit(args, report.to_json(), "\n".join(lines))
    else:
        try:
            i = int(args.perm)
        except ValueError:
            raise UsageError("--perm must be 0..5 or 'all'") from None
        if not 0 <= i <= 5:
            raise UsageError("--perm must be 0..5 or 'all'")
        term = compile_extension(tpl, perm(i), rel=rel)
        payload = {
            "schema": "bidual/extend/v1",
            "template": args.template,
            "perm": i,
            "relations": args.relations,
            "rendered": render(term),
            "rendered_ascii": render(term, ascii_ops=True),
        }
        _emit(args, payload, render(term))
    return 0


def cmd_jordan(args) -> int:
    sys_ = triple_system(args.system)
    rep = jbstar_axiom_checks(sys_, trials=args.trials, seed=args.seed)
    ok = rep.passed(tol_alg=args.tol)
    payload = rep.to_json()
    payload["pass"] = ok
    text = (
        f"system {args.system}: trials={args.trials} "
        f"jordan_rel={rep.max_jordan_rel:.3e} outer_rel={rep.max_outer_rel:.3e} "
        f"cube_dev={rep.max_cube_norm_dev:.3e} min_spectrum={rep.min_spectrum:.3e} "
        f"qq_rel={rep.max_qq_rel:.3e} -> {'pass' if ok else 'FAIL'}"
    )
    _emit(args, payload, text)
    return 0 if ok else 1


def cmd_peirce(args) -> int:
    sys_ = triple_system(args.system)
    e = make_tripotent(sys_, args.tripotent)
    dec = peirce(sys_, e, tol=args.tol_spectral)
    rules = peirce_rules_residual(sys_, e, samples=args.samples, seed=args.seed)
    ok = (
        dec.resolution_residual() <= args.tol
        and dec.idempotence_residual() <= args.tol
        and dec.orthogonality_residual() <= args.tol
        and spectrum_deviation(sys_, e) <= args.tol_spectral
        and rules.passed(tol=args.tol, tol_spec=args.tol_spectral)
    )
    payload = {
        "schema": "bidual/peirce/v1",
        "system": args.system,
        "tripotent": str(args.tripotent),
        "tripotent_residual": tripotent_residual(sys_, e),
        "projections": dec.to_json(),
        "rules": rules.to_json(),
        "pass": ok,
    }
    text = (
        f"tripotent {args.tripotent} in {args.system}: ranks P0/P1/P2 = "
        f"{dec.ranks[0]}/{dec.ranks[1]}/{dec.ranks[2]}; "
        f"rule residual {rules.max_rule_residual:.3e} -> {'pass' if ok else 'FAIL'}"
    )
    _emit(args, payload, text)
    return 0 if ok else 1


def _witness_from_config(args) -> int:
    """Custom experiment from a JSON config: group tag, family specs,
    functional, N, window and (for three families) the limit orders."""
    with open(args.config) as fh:
        cfg = json.load(fh)
    space = cfg.get("space", "l1z")
    n = int(cfg.get("N", args.N))
    window = int(cfg.get("window", args.window))
    fname = cfg.get("functional", "heaviside")
    if isinstance(fname, dict):
        psi = window_functional(fname.get("values", {}))
    elif fname in FUNCTIONALS:
        psi = FUNCTIONALS[fname]()
    else:
        raise UsageError(f"unknown functional {fname!r}")
    specs = cfg.get("families", [])
    families = [make_family(space, s) for s in specs]
    if len(families) == 2:
        report = arens_gap(families[0], families[1], psi, n, window)
    elif len(families) == 3:
        orders = cfg.get("orders", [0, 2])
        report = triple_gap(tuple(families), psi, orders, n, window)
    else:
        raise UsageError("config needs two or three family specs")
    payload = {
        "schema": "bidual/witness/v1",
        "space": space,
        "config": cfg,
        "report": report.to_json(),
        "pass": report.all_converged,
    }
    _emit(args, payload, report.table())
    return 0 if report.all_converged else 1


def cmd_witness(args) -> int:
    if args.config:
        return _witness_from_config(args)
    if not args.space:
        raise UsageError("either --space or --config is required")
    if args.functional not in FUNCTIONALS:
        raise UsageError(f"unknown functional {args.functional!r}")
    psi = FUNCTIONALS[args.functional]()
    if args.space == "l1z":
        f1 = make_family("l1z", "delta")
        f2 = make_family("l1z", "delta_neg")
        bilinear = arens_gap(f1, f2, psi, args.N, args.window)
        fams = (f1, make_family("l1z", "const"), f2)
        trilinear = triple_gap(fams, psi, [0, 2], args.N, args.window)
    elif args.space == "l1n":
        basis = make_family("l1n", "delta")
        bilinear = arens_gap(basis, basis, psi, args.N, args.window)
        trilinear = triple_gap((basis, basis, basis), psi, list(range(6)), args.N, args.window)
    else:
        raise UsageError("--space must be l1z or l1n")
    ok = bilinear.all_converged and trilinear.all_converged
    payload = {
        "schema": "bidual/witness/v1",
        "space": args.space,
        "functional": args.functional,
        "bilinear": bilinear.to_json(),
        "trilinear": trilinear.to_json(),
        "pass": ok,
    }
    text = (
        "bilinear:\n" + bilinear.table() + "\n\ntrilinear:\n" + trilinear.table()
    )
    _emit(args, payload, text)
    return 0 if ok else 1


def cmd_centers(args) -> int:
    tpl = parse_template(args.template)
    try:
        ids = [int(x) for x in args.triple.split(",")]
        triple = tuple(perm(i) for i in ids)
        if len(triple) != 3:
            raise ValueError
    except ValueError:
        raise UsageError("--triple must be three indices like 0,2,3") from None
    rep = center_equations(tpl, args.slot, triple)
    lines = [f"slot {rep.slot}, triple {[p.label for p in rep.triple]}:"]
    for lhs, rhs, _ in rep.equations:
        lines.append(f"  {render(lhs)} = {render(rhs)}")
    _emit(args, rep.to_json(), "\n".join(lines))
    return 0


def cmd_selftest(args) -> int:
    rep = run_selftest(
        seed=args.seed,
        trials=args.trials,
        samples=args.samples,
        n=args.N,
        window=args.window,
    )
    lines = [
        f"{'PASS' if c['pass'] else 'FAIL'} {c['name']}"
        + (f" ({c['detail']})" if c["detail"] and not c["pass"] else "")
        for c in rep["checks"]
    ]
    lines.append("overall: " + ("pass" if rep["pass"] else "FAIL"))
    _emit(args, rep, "\n".join(lines))
    return 0 if rep["pass"] else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="bidual",
        description="Compile trilinear templates to their six bidual extensions "
        "and verify Jordan triple structure numerically.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="emit canonical JSON")
        p.add_argument("--out", metavar="FILE", help="write output to FILE")

    p = sub.add_parser("extend", help="compile a template's extensions")
    p.add_argument("--template", required=True)
    p.add_argument("--perm", default="all", help="0..5 or 'all'")
    p.add_argument("--all", dest="perm", action="store_const", const="all")
    p.add_argument("--relations", default="", help="commutative,regular,trace:phi")
    common(p)
    p.set_defaults(fn=cmd_extend)

    p = sub.add_parser("jordan", help="numerical Jordan/JB* axiom sweep")
    p.add_argument("--system", required=True, help="cstar:n, rect:pxq, hilbert:n, jbstar:n")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--seed", type=int, default=42)
    common(p)
    p.set_defaults(fn=cmd_jordan)

    p = sub.add_parser("peirce", help="Peirce decomposition of a tripotent")
    p.add_argument("--system", required=True)
    p.add_argument("--tripotent", required=True, help="zero|e11|e11+e22|id or a JSON file")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--tol-spectral", type=float, default=1e-8, dest="tol_spectral")
    p.add_argument("--seed", type=int, default=42)
    common(p)
    p.set_defaults(fn=cmd_peirce)

    p = sub.add_parser("witness", help="iterated-limit (ir)regularity witness")
    p.add_argument("--space", choices=["l1z", "l1n"])
    p.add_argument("--functional", default="heaviside")
    p.add_argument("--N", type=int, default=100)
    p.add_argument("--window", type=int, default=10)
    p.add_argument("--config", metavar="FILE", help="JSON experiment config")
    common(p)
    p.set_defaults(fn=cmd_witness)

    p = sub.add_parser("centers", help="topological-center equations")
    p.add_argument("--template", required=True)
    p.add_argument("--slot", type=int, required=True, choices=[1, 2, 3])
    p.add_argument("--triple", required=True, help="three permutation indices, e.g. 0,2,3")
    common(p)
    p.set_defaults(fn=cmd_centers)

    p = sub.add_parser("selftest", help="golden corpus plus invariant sweeps")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--samples", type=int, default=25)
    p.add_argument("--N", type=int, default=60)
    p.add_argument("--window", type=int, default=10)
    common(p)
    p.set_defaults(fn=cmd_selftest)

    return ap


_INPUT_ERRORS = (
    UsageError,
    TemplateError,
    StructuralError,
    DimensionError,
    TripotentError,
    GroupTagError,
    FileNotFoundError,
)


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
