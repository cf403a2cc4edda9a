"""Extension compiler: golden formulas, partitions, symmetry, centers."""

import itertools

import pytest

from bidual.compiler import (
    all_extensions,
    center_equations,
    coincidence_on_mixed,
    compile_extension,
    jordan_identity_residual,
    outer_symmetry_check,
    symmetry_pairs_check,
    valid_triples,
)
from bidual.golden import check_golden, golden_count
from bidual.templates import PERMS, TemplateError, parse_template, perm
from bidual.terms import (
    ALGEBRA,
    BIDUAL,
    BOX,
    Atom,
    Prod,
    RelationSet,
    Sum,
    Unit,
    normalize,
    render,
    scalar_factors_of,
)

ABC = parse_template("a b* c")
PLAIN = parse_template("a b c")
JORDAN = parse_template("1/2 a b* c + 1/2 c b* a")
FUNC = parse_template("phi(a b*) c + phi(c b*) a")
PAIRING = parse_template("<phi,a> <psi,b> c")
CORPUS = (ABC, PLAIN, JORDAN, FUNC, PAIRING)

COMM = RelationSet(base_commutative=True)
REG = RelationSet(arens_regular=True)
BOTH = RelationSet(base_commutative=True, arens_regular=True)
REL_GRID = (RelationSet(), COMM, REG, BOTH, RelationSet(functional_trace=frozenset({"phi"})))


# ---------------------------------------------------------------------------
# golden corpus


def test_golden_corpus_all_formulas():
    results = check_golden()
    bad = [(label, want, got) for label, want, got, ok in results if not ok]
    assert not bad
    assert golden_count() == 20


def test_perm_labels_and_inverses():
    assert [p.images for p in PERMS] == [
        (1, 2, 3),
        (1, 3, 2),
        (3, 2, 1),
        (2, 1, 3),
        (3, 1, 2),
        (2, 3, 1),
    ]
    for i in range(4):
        assert PERMS[i].inverse() is PERMS[i]
    assert PERMS[4].inverse() is PERMS[5]
    assert PERMS[5].inverse() is PERMS[4]


def test_single_extension_strings():
    assert render(compile_extension(ABC, perm(0))) == "m □ n* □ p"
    assert render(compile_extension(ABC, perm(5))) == "m ◊ (n* □ p)"
    assert (
        render(compile_extension(JORDAN, perm(1)))
        == "1/2 (m □ (n* ◊ p)) + 1/2 ((p □ n*) ◊ m)"
    )


def test_pairing_template_identical_extensions():
    terms = [compile_extension(PAIRING, s) for s in PERMS]
    assert all(t == terms[0] for t in terms)
    assert render(terms[0]) == "phi(m) psi(n) p"


# ---------------------------------------------------------------------------
# all_extensions and relation verdicts


def test_commutative_gives_six_box_orderings():
    # oracle: the six box words over the letters m, n*, p, one per ordering
    report = all_extensions(ABC, COMM)
    assert len(report.classes) == 6 and not report.regular
    letters = (Atom("m"), Atom("n", BIDUAL, True), Atom("p"))
    expected = {
        normalize(Prod(BOX, word), COMM) for word in itertools.permutations(letters)
    }
    got = {normalize(t, COMM) for t in report.extensions}
    assert got == expected and len(got) == 6


def test_commutative_plus_regular_collapses():
    report = all_extensions(ABC, BOTH)
    assert report.regular and report.classes == ((0, 1, 2, 3, 4, 5),)


def test_pairing_regular_under_empty():
    report = all_extensions(PAIRING)
    assert report.regular


def test_regular_relation_collapses_every_template():
    for tpl in CORPUS:
        assert all_extensions(tpl, REG).regular


def test_functional_template_classes_under_empty():
    # extensions 1 and 4 coincide, as do 3 and 5; 0 and 2 stand alone
    report = all_extensions(FUNC)
    assert report.classes == ((0,), (1, 4), (2,), (3, 5))
    assert not report.regular


def test_product_templates_fully_distinct_under_empty():
    for tpl in (ABC, PLAIN, JORDAN):
        report = all_extensions(tpl)
        assert report.classes == ((0,), (1,), (2,), (3,), (4,), (5,))


def test_report_json_schema():
    data = all_extensions(ABC, COMM).to_json()
    assert data["schema"] == "bidual/extensions/v1"
    assert len(data["extensions"]) == 6
    assert data["classes"] == [[0], [1], [2], [3], [4], [5]]
    assert data["regular"] is False
    assert "extensions_terms" in data


# ---------------------------------------------------------------------------
# mixed-level coincidence


def test_mixed_level_full_coincidence_patterns():
    e, b = ALGEBRA, BIDUAL
    for tpl in CORPUS:
        for pattern in ((e, e, b), (e, b, e), (b, e, e), (e, e, e)):
            assert len(coincidence_on_mixed(tpl, pattern)) == 1


def test_mixed_level_exact_partitions_for_abc():
    e, b = ALGEBRA, BIDUAL
    assert coincidence_on_mixed(ABC, (e, b, b)) == [[0, 3, 5], [1, 2, 4]]
    assert coincidence_on_mixed(ABC, (b, e, b)) == [[0, 1, 3], [2, 4, 5]]
    assert coincidence_on_mixed(ABC, (b, b, e)) == [[0, 1, 4], [2, 3, 5]]


def test_mixed_level_partitions_group_for_every_template():
    e, b = ALGEBRA, BIDUAL
    expected = {
        (e, b, b): [[0, 3, 5], [1, 2, 4]],
        (b, e, b): [[0, 1, 3], [2, 4, 5]],
        (b, b, e): [[0, 1, 4], [2, 3, 5]],
    }
    for tpl in CORPUS:
        for pattern, groups in expected.items():
            part = coincidence_on_mixed(tpl, pattern)
            for g in groups:
                assert any(set(g) <= set(cls) for cls in part), (tpl.source, pattern, part)


# ---------------------------------------------------------------------------
# valid triples and the lifting property


def test_valid_triples_exact_list():
    labels = [tuple(q.label for q in t) for t in valid_triples()]
    assert labels == [
        ("s0", "s2", "s3"),
        ("s0", "s2", "s5"),
        ("s0", "s3", "s4"),
        ("s0", "s4", "s5"),
        ("s1", "s2", "s3"),
        ("s1", "s2", "s5"),
        ("s1", "s3", "s4"),
        ("s1", "s4", "s5"),
    ]
    assert len(labels) == 8
    assert ("s0", "s2", "s3") in labels and ("s1", "s4", "s5") in labels


def test_triple_equality_implies_full_regularity():
    for tpl in CORPUS:
        exts = [compile_extension(tpl, s) for s in PERMS]
        for rel in REL_GRID:
            normals = [normalize(t, rel) for t in exts]
            all_equal = all(nf == normals[0] for nf in normals)
            for triple in valid_triples():
                idx = [q.index for q in triple]
                if normals[idx[0]] == normals[idx[1]] == normals[idx[2]]:
                    assert all_equal, (tpl.source, idx, rel)


# ---------------------------------------------------------------------------
# outer symmetry


def test_outer_symmetry_examples():
    ok, residual = outer_symmetry_check(ABC, 0, COMM)
    assert not ok and residual != Sum(())
    ok, _ = outer_symmetry_check(FUNC, 1)
    assert ok
    ok, _ = outer_symmetry_check(JORDAN, 0, REG)
    assert ok


def test_symmetry_pairs_for_outer_symmetric_templates():
    assert symmetry_pairs_check(JORDAN)
    assert symmetry_pairs_check(FUNC)


def test_symmetry_pairs_precondition():
    with pytest.raises(TemplateError):
        symmetry_pairs_check(ABC)


def test_outer_symmetry_of_ext0_implies_0124_coincide():
    for tpl in CORPUS:
        for rel in REL_GRID:
            ok, _ = outer_symmetry_check(tpl, 0, rel)
            if ok:
                normals = [
                    normalize(compile_extension(tpl, PERMS[i]), rel) for i in (0, 1, 2, 4)
                ]
                assert all(nf == normals[0] for nf in normals), (tpl.source, rel)


# ---------------------------------------------------------------------------
# Jordan identity at template level


def _unit_bindings():
    u = Unit()
    return {"a": Atom("m", BIDUAL), "b": Atom("n", BIDUAL), "c": u, "d": u, "e": u}


def test_jordan_obstruction_atoms():
    residual = jordan_identity_residual(FUNC, 1, _unit_bindings(), COMM)
    assert residual != Sum(())
    atoms = {render(f) for f in scalar_factors_of(residual)} - {"phi(1)"}
    assert atoms == {"phi(m □ n*)", "phi(n* □ m)"}


def test_jordan_obstruction_vanishes_under_trace():
    traced = RelationSet(base_commutative=True, functional_trace=frozenset({"phi"}))
    assert jordan_identity_residual(FUNC, 1, _unit_bindings(), traced) == Sum(())


def test_jordan_identity_lifts_under_regularity():
    assert jordan_identity_residual(ABC, 0, None, BOTH) == Sum(())
    for i in range(6):
        assert jordan_identity_residual(JORDAN, i, None, BOTH) == Sum(())


def test_jordan_identity_obstructed_without_relations():
    assert jordan_identity_residual(FUNC, 1, _unit_bindings()) != Sum(())


# ---------------------------------------------------------------------------
# topological centers


def test_center_equations_slot1():
    rep = center_equations(PLAIN, 1, (perm(0), perm(2), perm(3)))
    sides = {render(l) for l, r, d in rep.equations} | {
        render(r) for l, r, d in rep.equations
    }
    assert sides == {
        "m □ n □ p",
        "m ◊ n ◊ p",
        "(m ◊ n) □ p",
    }
    assert len(rep.equations) == 3


def test_center_equations_slot2():
    rep = center_equations(PLAIN, 2, (perm(0), perm(1), perm(3)))
    assert rep.slot == 2
    assert [q.label for q in rep.triple] == ["s0", "s1", "s3"]
    data = rep.to_json()
    assert data["schema"] == "bidual/centers/v1"


def test_center_equations_slot3():
    rep = center_equations(PLAIN, 3, (perm(0), perm(1), perm(2)))
    assert rep.slot == 3


def test_center_equations_invalid_triples():
    with pytest.raises(TemplateError):
        center_equations(PLAIN, 1, (perm(0), perm(1), perm(2)))
    with pytest.raises(TemplateError):
        # distinct values at 2 but the first permutation does not fix 2
        center_equations(PLAIN, 2, (perm(1), perm(0), perm(3)))
    with pytest.raises(TemplateError):
        center_equations(PLAIN, 4, (perm(0), perm(2), perm(3)))


# ---------------------------------------------------------------------------
# template DSL


def test_template_requires_each_slot_once():
    with pytest.raises(TemplateError):
        parse_template("a b")
    with pytest.raises(TemplateError):
        parse_template("a a b* c")


def test_template_parse_errors_carry_position():
    with pytest.raises(TemplateError) as exc:
        parse_template("a b* ?")
    assert "position" in str(exc.value)


def test_template_constants_and_unit():
    tpl = parse_template("a u* b* c + 1 a b c")
    exts = [compile_extension(tpl, s) for s in PERMS]
    assert len({normalize(t) for t in exts}) > 1


def test_wrappers_isolate_adjacency():
    # slots inside a wrapper never form Arens products with outside slots
    tpl = parse_template("phi(a) b c")
    t0 = compile_extension(tpl, perm(0))
    assert render(t0) == "phi(m) (n □ p)"
    tpl2 = parse_template("phi(a b c)")
    t = compile_extension(tpl2, perm(0))
    assert render(t) == "phi(m □ n □ p)"
