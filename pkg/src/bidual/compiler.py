"""Compile trilinear templates into their six bidual extensions.

For a permutation s in S3 the extension takes weak* limits innermost-first
in the order s(3), s(2), s(1).  When a slot's limit is taken it is the
outermost limit so far, so every product adjacency between its block and an
already-limited (bidual-valued) block resolves to the Arens product that is
weak*-continuous on the newly limited side: block on the left -> Box, block
on the right -> Loz.  Adjacencies with not-yet-limited slots, constants and
algebra-level slots remain flat module actions; functional wrappers are
scalar-valued and transparent.  When both neighbours of a newly limited
slot are bidual blocks, the most recently completed block binds tighter,
which is forced by uniqueness of weak*-continuous extensions off a dense
subspace.

Slot k is rendered as the bidual atom m (k=1), n (k=2), p (k=3); slots held
at algebra level render as a, b, c.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .scalars import GaussianRational, ONE
from .templates import (
    Const,
    Perm3,
    Slot,
    TemplateError,
    TrilinearTemplate,
    UnitItem,
    Wrapped,
    perm,
    PERMS,
)
from .terms import (
    ALGEBRA,
    BIDUAL,
    BOX,
    EMPTY_RELATIONS,
    FLAT,
    LOZ,
    Atom,
    FuncApp,
    Prod,
    RelationSet,
    Sum,
    Term,
    Unit,
    equal,
    normalize,
    render,
    sub,
    substitute,
    term_to_json,
)

_BIDUAL_NAME = {1: "m", 2: "n", 3: "p"}
_ALGEBRA_NAME = {1: "a", 2: "b", 3: "c"}

FULL_BIDUAL = (BIDUAL, BIDUAL, BIDUAL)


class _Cell:
    __slots__ = ("term", "kind", "recency")

    def __init__(self, term, kind, recency=-1):
        self.term = term
        self.kind = kind  # 'alg', 'pending' or 'bid'
        self.recency = recency


def _compile_group(items, stages, levels):
    """Compile one adjacency group; returns (scalar FuncApps, vector Term | None)."""
    scalars = []
    cells = []
    slot_cell = {}
    for it in items:
        if isinstance(it, Wrapped):
            inner_scalars, inner_vec = _compile_group(it.items, stages, levels)
            scalars.extend(inner_scalars)
            if inner_vec is None:
                raise TemplateError(
                    f"functional wrapper {it.name!r} has no element-valued content"
                )
            scalars.append(FuncApp(it.name, inner_vec))
        elif isinstance(it, Slot):
            if levels[it.k - 1] == ALGEBRA:
                cell = _Cell(Atom(_ALGEBRA_NAME[it.k], ALGEBRA, it.starred), "alg")
            else:
                cell = _Cell(Atom(_BIDUAL_NAME[it.k], BIDUAL, it.starred), "pending")
            cells.append(cell)
            slot_cell[it.k] = cell
        elif isinstance(it, Const):
            cells.append(_Cell(Atom(it.name, ALGEBRA, it.starred), "alg"))
        elif isinstance(it, UnitItem):
            cells.append(_Cell(Unit(), "alg"))
        else:
            raise TemplateError(f"unknown template item: {it!r}")

    for stage, k in stages:
        cell = slot_cell.get(k)
        if cell is None:
            continue
        cell.kind = "bid"
        cell.recency = stage
        pos = cells.index(cell)
        cells = _resolve(cells, pos, stage)

    vec_parts = [c.term for c in cells]
    if not vec_parts:
        return scalars, None
    if len(vec_parts) == 1:
        return scalars, vec_parts[0]
    return scalars, Prod(FLAT, tuple(vec_parts))


def _scan(cells, pos, step):
    """Nearest bidual block in direction step, skipping algebra cells."""
    j = pos + step
    between = []
    while 0 <= j < len(cells) and cells[j].kind == "alg":
        between.append(j)
        j += step
    if 0 <= j < len(cells) and cells[j].kind == "bid":
        return j, between
    return None, []


def _resolve(cells, pos, stage):
    """Merge the newly limited cell with adjacent bidual blocks."""
    while True:
        left, left_between = _scan(cells, pos, -1)
        right, right_between = _scan(cells, pos, +1)
        if left is None and right is None:
            return cells
        if left is not None and (right is None or cells[left].recency > cells[right].recency):
            lo = left
            terms = (
                [cells[left].term]
                + [cells[j].term for j in sorted(left_between)]
                + [cells[pos].term]
            )
            merged = _Cell(Prod(LOZ, tuple(terms)), "bid", stage)
            cells = cells[:lo] + [merged] + cells[pos + 1:]
            pos = lo
        else:
            hi = right
            terms = (
                [cells[pos].term]
                + [cells[j].term for j in sorted(right_between)]
                + [cells[right].term]
            )
            merged = _Cell(Prod(BOX, tuple(terms)), "bid", stage)
            cells = cells[:pos] + [merged] + cells[hi + 1:]


def compile_extension(
    tpl: TrilinearTemplate,
    sigma: Perm3,
    levels: tuple = FULL_BIDUAL,
    rel: RelationSet = EMPTY_RELATIONS,
) -> Term:
    """The extension indexed by sigma, as a normalized bidual expression."""
    # limits are taken innermost-first: s(3), then s(2), then s(1);
    # slots held at algebra level never take a limit
    order = [sigma(3), sigma(2), sigma(1)]
    stages = [
        (s + 1, k) for s, k in enumerate(k for k in order if levels[k - 1] == BIDUAL)
    ]
    addends = []
    for mono in tpl.monomials:
        scalars, vec = _compile_group(mono.items, stages, levels)
        parts = list(scalars) + ([vec] if vec is not None else [])
        if not parts:
            raise TemplateError("monomial compiled to nothing")
        term = parts[0] if len(parts) == 1 else Prod(FLAT, tuple(parts))
        addends.append((mono.coeff, term))
    return normalize(Sum(tuple(addends)), rel)


def compile_all(tpl, levels=FULL_BIDUAL):
    return tuple(compile_extension(tpl, p, levels) for p in PERMS)


def _partition(terms, rel):
    """Group extension indices by term equality under rel."""
    normals = [normalize(t, rel) for t in terms]
    classes = []
    for i, nf in enumerate(normals):
        for cls in classes:
            if normals[cls[0]] == nf:
                cls.append(i)
                break
        else:
            classes.append([i])
    return [sorted(c) for c in classes]


@dataclass(frozen=True)
class ExtensionReport:
    template: str
    relations: tuple
    extensions: tuple  # six Terms, indexed 0..5
    classes: tuple  # partition of {0..5}
    regular: bool

    def to_json(self):
        return {
            "schema": "bidual/extensions/v1",
            "template": self.template,
            "relations": list(self.relations),
            "extensions": [render(t) for t in self.extensions],
            "extensions_ascii": [render(t, ascii_ops=True) for t in self.extensions],
            "extensions_terms": [term_to_json(t) for t in self.extensions],
            "classes": [list(c) for c in self.classes],
            "regular": self.regular,
        }


def relation_names(rel: RelationSet):
    names = []
    if rel.base_commutative:
        names.append("commutative")
    if rel.arens_regular:
        names.append("regular")
    names.extend(f"trace:{f}" for f in sorted(rel.functional_trace))
    return tuple(names)


def all_extensions(tpl: TrilinearTemplate, rel: RelationSet = EMPTY_RELATIONS) -> ExtensionReport:
    terms = compile_all(tpl)
    classes = _partition(terms, rel)
    return ExtensionReport(
        template=tpl.source,
        relations=relation_names(rel),
        extensions=terms,
        classes=tuple(tuple(c) for c in classes),
        regular=len(classes) == 1,
    )


def coincidence_on_mixed(tpl: TrilinearTemplate, pattern: tuple):
    """Partition of the six extensions when some slots stay at algebra level.

    ``pattern`` gives each slot's level; E-level slots skip their limit
    stage and compile as algebra atoms.
    """
    for lv in pattern:
        if lv not in (ALGEBRA, BIDUAL):
            raise TemplateError(f"bad level {lv!r}")
    terms = compile_all(tpl, levels=tuple(pattern))
    return _partition(terms, EMPTY_RELATIONS)


def valid_triples():
    """The eight unordered triples of permutations with distinct values at 1."""
    out = []
    for i, j, k in itertools.combinations(range(6), 3):
        vals = {PERMS[i](1), PERMS[j](1), PERMS[k](1)}
        if len(vals) == 3:
            out.append((PERMS[i], PERMS[j], PERMS[k]))
    return out


def outer_symmetry_check(tpl, i: int, rel: RelationSet = EMPTY_RELATIONS):
    """Whether extension i is symmetric in the outer variables; returns (bool, residual)."""
    t = compile_extension(tpl, perm(i))
    swapped = substitute(
        t, {"m": Atom("p", BIDUAL), "p": Atom("m", BIDUAL)}
    )
    residual = normalize(sub(t, swapped), rel)
    return residual == Sum(()), residual


def symmetry_pairs_check(tpl) -> bool:
    """Verify pi0(m,n,p)=pi2(p,n,m), pi1=pi4 and pi3=pi5 under the outer swap.

    Requires the template itself to be outer-symmetric.
    """
    if not tpl.is_outer_symmetric():
        raise TemplateError("template is not outer-symmetric in slots 1 and 3")
    swap = {"m": Atom("p", BIDUAL), "p": Atom("m", BIDUAL)}
    for i, j in ((0, 2), (1, 4), (3, 5)):
        ti = compile_extension(tpl, perm(i))
        tj_swapped = substitute(compile_extension(tpl, perm(j)), swap)
        if not equal(ti, tj_swapped):
            return False
    return True


_JORDAN_VARS = ("a", "b", "c", "d", "e")


def jordan_identity_residual(
    tpl,
    i: int,
    bindings: dict | None = None,
    rel: RelationSet = EMPTY_RELATIONS,
) -> Term:
    """Residual of the Jordan identity for extension i under the bindings.

    The five identity variables a..e default to generic bidual atoms; the
    bound terms must not reuse the reserved slot atoms m, n, p.
    """
    bindings = dict(bindings or {})
    var = {v: bindings.get(v, Atom(v, BIDUAL)) for v in _JORDAN_VARS}
    pi = compile_extension(tpl, perm(i))

    def app(x, y, z):
        return substitute(pi, {"m": x, "n": y, "p": z})

    a, b, c, d, e = (var[v] for v in _JORDAN_VARS)
    lhs = app(a, b, app(c, d, e))
    t1 = app(app(a, b, c), d, e)
    t2 = app(c, app(b, a, d), e)
    t3 = app(c, d, app(a, b, e))
    residual = Sum(
        (
            (ONE, lhs),
            (GaussianRational(-1), t1),
            (ONE, t2),
            (GaussianRational(-1), t3),
        )
    )
    return normalize(residual, rel)


@dataclass(frozen=True)
class CenterReport:
    slot: int
    triple: tuple  # three Perm3
    equations: tuple  # of (lhs Term, rhs Term, difference Term)

    def to_json(self):
        return {
            "schema": "bidual/centers/v1",
            "slot": self.slot,
            "triple": [p.label for p in self.triple],
            "equations": [
                {
                    "lhs": render(l),
                    "rhs": render(r),
                    "difference": render(d),
                    "lhs_term": term_to_json(l),
                    "rhs_term": term_to_json(r),
                }
                for l, r, d in self.equations
            ],
        }


def center_equations(tpl, j: int, triple) -> CenterReport:
    """Defining equations of the j-th topological center for a valid triple.

    The three permutations must attain pairwise distinct values at j and
    the first must fix j.  Slot j is the distinguished variable; no solving
    is attempted.
    """
    if j not in (1, 2, 3):
        raise TemplateError(f"slot index must be 1..3, got {j}")
    sigma, tau, rho = triple
    vals = {sigma(j), tau(j), rho(j)}
    if len(vals) != 3:
        raise TemplateError(
            f"triple ({sigma.label},{tau.label},{rho.label}) does not attain "
            f"distinct values at {j}"
        )
    if sigma(j) != j:
        raise TemplateError(f"first permutation of the triple must fix {j}")
    terms = [compile_extension(tpl, p) for p in triple]
    eqs = []
    for x, y in itertools.combinations(range(3), 2):
        eqs.append((terms[x], terms[y], normalize(sub(terms[x], terms[y]))))
    return CenterReport(slot=j, triple=tuple(triple), equations=tuple(eqs))
