"""Full self-check: golden corpus plus invariant sweeps, machine-readable.

Exit-status contract of the CLI wrapper: the report's overall ``pass``
field decides success.  With a fixed seed the JSON report is byte-identical
across runs.
"""

from __future__ import annotations

from . import golden
from .compiler import (
    all_extensions,
    coincidence_on_mixed,
    compile_extension,
    jordan_identity_residual,
    outer_symmetry_check,
    symmetry_pairs_check,
    valid_triples,
)
from .jordan import (
    jbstar_axiom_checks,
    make_tripotent,
    peirce,
    peirce_rules_residual,
    spectrum_deviation,
    triple_system,
    tripotent_residual,
)
from .limits import arens_gap, heaviside, make_family, triple_gap
from .templates import PERMS, parse_template
from .terms import (
    ALGEBRA,
    BIDUAL,
    Atom,
    RelationSet,
    Sum,
    Unit,
    normalize,
    render,
    scalar_factors_of,
)
from .tensors import circledast, permuted_extension, random_tensor

import numpy as np

_REL_GRID = (
    RelationSet(),
    RelationSet(base_commutative=True),
    RelationSet(arens_regular=True),
    RelationSet(base_commutative=True, arens_regular=True),
    RelationSet(functional_trace=frozenset({"phi"})),
)

_CORPUS_TEXTS = (
    "a b* c",
    "a b c",
    "1/2 a b* c + 1/2 c b* a",
    "phi(a b*) c + phi(c b*) a",
    "<phi,a> <psi,b> c",
)


def _check(checks, name, ok, detail=""):
    checks.append({"name": name, "pass": bool(ok), "detail": detail})


def _golden_corpus(checks):
    results = golden.check_golden()
    bad = [(label, want, got) for label, want, got, ok in results if not ok]
    _check(
        checks,
        "golden_corpus",
        not bad,
        f"{len(results)} formulas checked" if not bad else f"mismatches: {bad}",
    )


def _mixed_partitions(checks):
    e, b = ALGEBRA, BIDUAL
    full_coincidence = ((e, e, b), (e, b, e), (b, e, e), (e, e, e))
    expected = {
        (e, b, b): [[0, 3, 5], [1, 2, 4]],
        (b, e, b): [[0, 1, 3], [2, 4, 5]],
        (b, b, e): [[0, 1, 4], [2, 3, 5]],
    }
    ok = True
    details = []
    for text in _CORPUS_TEXTS:
        tpl = parse_template(text)
        for pattern in full_coincidence:
            part = coincidence_on_mixed(tpl, pattern)
            if len(part) != 1:
                ok = False
                details.append(f"{text} {pattern}: {part}")
        for pattern, want in expected.items():
            part = coincidence_on_mixed(tpl, pattern)
            # the stated coincidence groups must each land inside one class;
            # degenerate templates may collapse further
            grouped = all(
                any(set(w) <= set(cls) for cls in part) for w in want
            )
            if not grouped:
                ok = False
                details.append(f"{text} {pattern}: {part} does not group {want}")
            if text == "a b* c" and [sorted(c) for c in part] != want:
                ok = False
                details.append(f"{text} {pattern}: expected exactly {want}, got {part}")
    _check(checks, "mixed_level_partitions", ok, "; ".join(details))


def _triples_and_lifting(checks):
    triples = valid_triples()
    labels = [tuple(p.label for p in t) for t in triples]
    want = [
        ("s0", "s2", "s3"),
        ("s0", "s2", "s5"),
        ("s0", "s3", "s4"),
        ("s0", "s4", "s5"),
        ("s1", "s2", "s3"),
        ("s1", "s2", "s5"),
        ("s1", "s3", "s4"),
        ("s1", "s4", "s5"),
    ]
    _check(checks, "valid_triples", labels == want, str(labels))

    ok = True
    details = []
    for text in _CORPUS_TEXTS:
        tpl = parse_template(text)
        exts = [compile_extension(tpl, p) for p in PERMS]
        for rel in _REL_GRID:
            normals = [normalize(t, rel) for t in exts]
            all_equal = all(nf == normals[0] for nf in normals)
            for triple in triples:
                idx = [p.index for p in triple]
                three_equal = (
                    normals[idx[0]] == normals[idx[1]] == normals[idx[2]]
                )
                if three_equal and not all_equal:
                    ok = False
                    details.append(f"{text} {idx} {rel}")
    _check(checks, "triple_equality_lifts_to_all_six", ok, "; ".join(details))


def _regularity_verdicts(checks):
    abc = parse_template("a b* c")
    comm = RelationSet(base_commutative=True)
    both = RelationSet(base_commutative=True, arens_regular=True)
    rep1 = all_extensions(abc, comm)
    rep2 = all_extensions(abc, both)
    pairing = all_extensions(parse_template("<phi,a> <psi,b> c"))
    _check(
        checks,
        "regularity_verdicts",
        len(rep1.classes) == 6
        and not rep1.regular
        and rep2.regular
        and pairing.regular,
        f"commutative: {len(rep1.classes)} classes; "
        f"commutative+regular: {len(rep2.classes)}; pairing: {len(pairing.classes)}",
    )

    jt = parse_template("1/2 a b* c + 1/2 c b* a")
    ft = parse_template("phi(a b*) c + phi(c b*) a")
    _check(
        checks,
        "outer_symmetry_pairs",
        symmetry_pairs_check(jt) and symmetry_pairs_check(ft),
    )

    # regularity makes every corpus template fully coincident
    reg = RelationSet(arens_regular=True)
    ok = all(all_extensions(parse_template(t), reg).regular for t in _CORPUS_TEXTS)
    _check(checks, "regular_relation_collapses", ok)

    # if extension 0 is outer-symmetric then 0, 1, 2, 4 coincide
    ok = True
    details = []
    for text in _CORPUS_TEXTS:
        tpl = parse_template(text)
        for rel in _REL_GRID:
            symmetric, _ = outer_symmetry_check(tpl, 0, rel)
            if symmetric:
                exts = [compile_extension(tpl, PERMS[i]) for i in (0, 1, 2, 4)]
                normals = [normalize(t, rel) for t in exts]
                if not all(nf == normals[0] for nf in normals):
                    ok = False
                    details.append(f"{text} under {rel}")
    _check(checks, "outer_symmetry_implies_0124", ok, "; ".join(details))


def _jordan_obstruction(checks):
    ft = parse_template("phi(a b*) c + phi(c b*) a")
    u = Unit()
    binds = {
        "a": Atom("m", BIDUAL),
        "b": Atom("n", BIDUAL),
        "c": u,
        "d": u,
        "e": u,
    }
    comm = RelationSet(base_commutative=True)
    residual = jordan_identity_residual(ft, 1, binds, comm)
    atoms = {render(f) for f in scalar_factors_of(residual)} - {"phi(1)"}
    want = {"phi(m □ n*)", "phi(n* □ m)"}
    nonzero = residual != Sum(())
    traced = RelationSet(base_commutative=True, functional_trace=frozenset({"phi"}))
    vanished = jordan_identity_residual(ft, 1, binds, traced) == Sum(())
    _check(
        checks,
        "jordan_identity_obstruction",
        nonzero and atoms == want and vanished,
        f"atoms: {sorted(atoms)}; vanishes under trace: {vanished}",
    )

    both = RelationSet(base_commutative=True, arens_regular=True)
    zero = jordan_identity_residual(parse_template("a b* c"), 0, None, both) == Sum(())
    _check(checks, "jordan_identity_under_regularity", zero)


def _numerical_jordan(checks, seed, trials):
    for spec in ("cstar:2", "cstar:3", "rect:2x3", "hilbert:4", "jbstar:3"):
        sys = triple_system(spec)
        rep = jbstar_axiom_checks(sys, trials=trials, seed=seed)
        _check(
            checks,
            f"numerical_jordan[{spec}]",
            rep.passed(),
            f"jordan_rel={rep.max_jordan_rel:.3e} outer_rel={rep.max_outer_rel:.3e} "
            f"cube={rep.max_cube_norm_dev:.3e} minspec={rep.min_spectrum:.3e} "
            f"qq_rel={rep.max_qq_rel:.3e}",
        )


def _peirce_suite(checks, seed, samples):
    sys = triple_system("cstar:3")
    for name in ("zero", "e11", "e11+e22", "id"):
        e = make_tripotent(sys, name)
        dec = peirce(sys, e)
        rep = peirce_rules_residual(sys, e, samples=samples, seed=seed)
        ok = (
            tripotent_residual(sys, e) <= 1e-10
            and dec.resolution_residual() <= 1e-10
            and dec.idempotence_residual() <= 1e-10
            and dec.orthogonality_residual() <= 1e-10
            and spectrum_deviation(sys, e) <= 1e-8
            and rep.passed()
        )
        _check(
            checks,
            f"peirce[{name}]",
            ok,
            f"ranks={dec.ranks} rules={rep.max_rule_residual:.3e} "
            f"annih={rep.max_annihilation_residual:.3e} q_range={rep.max_q_range_residual:.3e}",
        )


def _adjoint_suite(checks, seed):
    rng = np.random.default_rng(seed)
    ok = True
    details = []
    for dims in ((2, 2, 2, 2), (3, 3, 3, 3), (2, 3, 1, 2), (3, 1, 2, 3)):
        t = random_tensor(dims, rng)
        back = circledast(t)
        if not np.allclose(back.array, t.array, atol=1e-12, rtol=0.0):
            ok = False
            details.append(f"circledast {dims}")
        for p in PERMS:
            pe = permuted_extension(t, p)
            if not np.allclose(pe.array, t.array, atol=1e-12, rtol=0.0):
                ok = False
                details.append(f"{dims} {p.label}")
        x = [rng.standard_normal(d) + 1j * rng.standard_normal(d) for d in dims[:3]]
        v1 = t.evaluate(*x)
        v2 = back.evaluate(*x)
        if np.linalg.norm(v1 - v2) > 1e-10 * max(1.0, np.linalg.norm(v1)):
            ok = False
            details.append(f"norm {dims}")
    _check(checks, "finite_dimensional_adjoints", ok, "; ".join(details))


def _witnesses(checks, n, window):
    f_delta = make_family("l1z", "delta")
    f_delta_neg = make_family("l1z", "delta_neg")
    rep = arens_gap(f_delta, f_delta_neg, heaviside(), n, window)
    vals = sorted(str(e.value) for e in rep.entries)
    ok_bilinear = rep.all_converged and vals == ["0", "1"] and str(rep.gap_exact()) == "1"

    fams = (f_delta, make_family("l1z", "const"), f_delta_neg)
    rep3 = triple_gap(fams, heaviside(), [0, 2], n, window)
    ok_triple = rep3.all_converged and str(rep3.gap_exact()) == "1"
    _check(
        checks,
        "l1z_irregularity_witness",
        ok_bilinear and ok_triple,
        f"bilinear values {vals}, triple gap {rep3.gap_exact()}",
    )

    basis = make_family("l1n", "delta")
    repn = triple_gap((basis, basis, basis), heaviside(), list(range(6)), n, window)
    ok_pointwise = repn.all_converged and str(repn.gap_exact()) == "0"
    repb = arens_gap(basis, basis, heaviside(), n, window)
    ok_pb = repb.all_converged and str(repb.gap_exact()) == "0"
    _check(
        checks,
        "l1n_pointwise_regularity",
        ok_pointwise and ok_pb,
        f"triple gap {repn.gap_exact()} over all six orders",
    )


def run_selftest(seed: int = 42, trials: int = 20, samples: int = 25, n: int = 60, window: int = 10) -> dict:
    checks = []
    _golden_corpus(checks)
    _mixed_partitions(checks)
    _triples_and_lifting(checks)
    _regularity_verdicts(checks)
    _jordan_obstruction(checks)
    _numerical_jordan(checks, seed, trials)
    _peirce_suite(checks, seed, samples)
    _adjoint_suite(checks, seed)
    _witnesses(checks, n, window)
    return {
        "schema": "bidual/selftest/v1",
        "seed": seed,
        "trials": trials,
        "samples": samples,
        "N": n,
        "window": window,
        "checks": checks,
        "pass": all(c["pass"] for c in checks),
    }
