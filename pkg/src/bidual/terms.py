"""Immutable term AST for bidual expressions with decidable normalization.

Terms are built from atoms at two levels (algebra elements sit inside their
bidual), three associative products (the two Arens products Box/Loz plus a
Flat product for module actions with algebra-level factors), formal sums
with exact Gaussian-rational coefficients, linear functional applications,
and an involution.

The canonical form is a star-pushed, run-flattened, sum-expanded, sorted
representation.  Products between an algebra-level factor and a bidual
block are absorbed into the block's own product (both Arens products agree
with the module action there), which gives unique normal forms on this
fragment.  Mixed Box/Loz words do not re-associate: no confluence is
claimed beyond the rules implemented here.

Always-on rules: the involution is an anti-homomorphism swapping the two
products ((x Box y)* = y* Loz x*), stars are involutive, everything is
multilinear, and products with the unit collapse.  Optional relations:

* ``base_commutative`` rewrites x Loz y -> y Box x, eliminating Loz;
* ``arens_regular`` identifies the products, Loz -> Box (same order);
* both together make Box commutative, so its factors are sorted;
* ``functional_trace`` symbols identify cyclic rotations of Box-word
  arguments, phi(x Box y) = phi(y Box x).

Functional symbols are hermitian: conj(phi(x)) = phi(x*).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Union

from .scalars import GaussianRational, ONE

# levels
ALGEBRA = "algebra"
BIDUAL = "bidual"

# product ops
BOX = "box"
LOZ = "loz"
FLAT = "flat"

_OP_RANK = {BOX: 0, LOZ: 1, FLAT: 2}
_DUAL_OP = {BOX: LOZ, LOZ: BOX, FLAT: FLAT}


class StructuralError(ValueError):
    """A term violates the AST invariants (e.g. Flat joining two bidual blocks)."""


class LevelMismatchError(StructuralError):
    """A substitution put a bidual-valued term where an algebra atom was required."""


@dataclass(frozen=True)
class Atom:
    name: str
    level: str = BIDUAL
    starred: bool = False

    def __post_init__(self):
        if not self.name:
            raise StructuralError("atom name must be nonempty")
        if self.level not in (ALGEBRA, BIDUAL):
            raise StructuralError(f"bad level {self.level!r}")


@dataclass(frozen=True)
class Unit:
    """The constant 1 (the unit of the base algebra)."""


@dataclass(frozen=True)
class Prod:
    op: str
    factors: tuple

    def __post_init__(self):
        if self.op not in (BOX, LOZ, FLAT):
            raise StructuralError(f"bad op {self.op!r}")
        if len(self.factors) < 2:
            raise StructuralError("product needs at least two factors")


@dataclass(frozen=True)
class FuncApp:
    """Application of a bounded functional; scalar-valued."""

    name: str
    arg: "Term"


@dataclass(frozen=True)
class Sum:
    """Formal sum of (coefficient, term) addends; the empty sum is zero."""

    addends: tuple  # of (GaussianRational, Term)


Term = Union[Atom, Unit, Prod, FuncApp, Sum]


@dataclass(frozen=True)
class RelationSet:
    base_commutative: bool = False
    arens_regular: bool = False
    functional_trace: frozenset = field(default_factory=frozenset)

    @classmethod
    def of(cls, *flags, trace=()) -> "RelationSet":
        return cls(
            base_commutative="commutative" in flags,
            arens_regular="regular" in flags,
            functional_trace=frozenset(trace),
        )


EMPTY_RELATIONS = RelationSet()


# ---------------------------------------------------------------------------
# basic structure queries


def value_kind(t: Term) -> str:
    """'scalar', 'algebra' or 'bidual'."""
    if isinstance(t, FuncApp):
        return "scalar"
    if isinstance(t, Atom):
        return t.level
    if isinstance(t, Unit):
        return ALGEBRA
    if isinstance(t, Prod):
        kinds = [value_kind(f) for f in t.factors]
        if any(k == BIDUAL for k in kinds):
            return BIDUAL
        if any(k == ALGEBRA for k in kinds):
            return ALGEBRA
        return "scalar"
    if isinstance(t, Sum):
        for _, m in t.addends:
            return value_kind(m)
        return "scalar"
    raise StructuralError(f"not a term: {t!r}")


def validate(t: Term) -> None:
    """Check the AST invariants, raising StructuralError on violation."""
    if isinstance(t, (Atom, Unit)):
        return
    if isinstance(t, FuncApp):
        validate(t.arg)
        return
    if isinstance(t, Sum):
        for _, m in t.addends:
            validate(m)
        return
    if isinstance(t, Prod):
        for f in t.factors:
            validate(f)
        kinds = [value_kind(f) for f in t.factors]
        if t.op == FLAT:
            if sum(k == BIDUAL for k in kinds) > 1:
                raise StructuralError("Flat product joining two bidual blocks")
        else:
            if any(k == "scalar" for k in kinds):
                raise StructuralError(f"{t.op} product with scalar-valued factor")
        return
    raise StructuralError(f"not a term: {t!r}")


def sort_key(t: Term):
    """Fixed total order: lexicographic on (node kind, op, atom name, star
    flag, children); kinds rank Atom < Unit < Prod < FuncApp < Sum and ops
    rank Box < Loz < Flat.  Normal forms are stable across runs."""
    if isinstance(t, Atom):
        return (0, t.name, t.starred)
    if isinstance(t, Unit):
        return (1,)
    if isinstance(t, Prod):
        return (2, _OP_RANK[t.op], len(t.factors), tuple(sort_key(f) for f in t.factors))
    if isinstance(t, FuncApp):
        return (3, t.name, sort_key(t.arg))
    if isinstance(t, Sum):
        return (4, tuple((c.sort_key(), sort_key(m)) for c, m in t.addends))
    raise StructuralError(f"not a term: {t!r}")


def atoms_of(t: Term) -> set:
    if isinstance(t, Atom):
        return {t}
    if isinstance(t, Unit):
        return set()
    if isinstance(t, Prod):
        return set().union(*(atoms_of(f) for f in t.factors)) if t.factors else set()
    if isinstance(t, FuncApp):
        return atoms_of(t.arg)
    if isinstance(t, Sum):
        out = set()
        for _, m in t.addends:
            out |= atoms_of(m)
        return out
    raise StructuralError(f"not a term: {t!r}")


def scalar_factors_of(t: Term) -> list:
    """The FuncApp scalar factors occurring in a (normalized) term."""
    if isinstance(t, FuncApp):
        return [t]
    if isinstance(t, Prod):
        out = []
        for f in t.factors:
            out.extend(scalar_factors_of(f))
        return out
    if isinstance(t, Sum):
        out = []
        for _, m in t.addends:
            out.extend(scalar_factors_of(m))
        return out
    return []


# ---------------------------------------------------------------------------
# involution and substitution


def involute(t: Term) -> Term:
    """The formal involution: stars to atoms, products reversed with Box<->Loz."""
    if isinstance(t, Atom):
        return Atom(t.name, t.level, not t.starred)
    if isinstance(t, Unit):
        return t
    if isinstance(t, Prod):
        return Prod(_DUAL_OP[t.op], tuple(involute(f) for f in reversed(t.factors)))
    if isinstance(t, FuncApp):
        # hermitian functionals: conj(phi(x)) = phi(x*)
        return FuncApp(t.name, involute(t.arg))
    if isinstance(t, Sum):
        return Sum(tuple((c.conjugate(), involute(m)) for c, m in t.addends))
    raise StructuralError(f"not a term: {t!r}")


def substitute(t: Term, bindings: dict) -> Term:
    """Simultaneous substitution of terms for atom names.

    A starred occurrence receives the involution of the bound term.  The
    result is re-validated; a binding that breaks the Flat invariant raises
    LevelMismatchError.
    """
    out = _subst(t, bindings)
    try:
        validate(out)
    except StructuralError as exc:
        raise LevelMismatchError(str(exc)) from exc
    return out


def _subst(t: Term, bindings: dict) -> Term:
    if isinstance(t, Atom):
        if t.name in bindings:
            r = bindings[t.name]
            return involute(r) if t.starred else r
        return t
    if isinstance(t, Unit):
        return t
    if isinstance(t, Prod):
        return Prod(t.op, tuple(_subst(f, bindings) for f in t.factors))
    if isinstance(t, FuncApp):
        return FuncApp(t.name, _subst(t.arg, bindings))
    if isinstance(t, Sum):
        return Sum(tuple((c, _subst(m, bindings)) for c, m in t.addends))
    raise StructuralError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# normalization

# A monomial during expansion is (coeff, scalars, vector) where scalars is a
# sorted tuple of FuncApp factors and vector is a canonical word (Atom, Unit
# absent, or Prod) or None for scalar-valued monomials.


def _is_algebra_item(v: Term) -> bool:
    return value_kind(v) == ALGEBRA


def _canon_word(op: str, parts: list, rel: RelationSet) -> Optional[Term]:
    """Combine canonical word parts under op into one canonical word.

    Returns None for the empty (all units) word under FLAT.
    """
    items = []
    for p in parts:
        if p is None or isinstance(p, Unit):
            continue
        if isinstance(p, Prod) and (p.op == op or p.op == FLAT):
            items.extend(p.factors)
        else:
            items.append(p)
    items = [x for x in items if not isinstance(x, Unit)]

    if not items:
        return None
    if len(items) == 1 and op == FLAT:
        return items[0]

    if op in (BOX, LOZ):
        bid = [x for x in items if not _is_algebra_item(x)]
        if any(value_kind(x) == "scalar" for x in items):
            raise StructuralError(f"{op} product with scalar-valued factor")
        if len(bid) <= 1:
            # a module-action word in disguise; canonical form is Flat
            return _canon_word(FLAT, items, rel)
        if op == LOZ and rel.arens_regular:
            return _canon_word(BOX, items, rel)
        if op == LOZ and rel.base_commutative:
            return _canon_word(BOX, list(reversed(items)), rel)
        if op == BOX and rel.base_commutative:
            if rel.arens_regular:
                items = sorted(items, key=sort_key)
            else:
                # algebra-level factors commute with everything under Box
                alg = sorted((x for x in items if _is_algebra_item(x)), key=sort_key)
                items = alg + [x for x in items if not _is_algebra_item(x)]
        if len(items) == 1:
            return items[0]
        return Prod(op, tuple(items))

    # FLAT
    bid_idx = [i for i, x in enumerate(items) if value_kind(x) == BIDUAL]
    if len(bid_idx) > 1:
        raise StructuralError("Flat product joining two bidual blocks")
    if len(bid_idx) == 1 and isinstance(items[bid_idx[0]], Prod):
        # absorb surrounding algebra factors into the bidual block's product
        k = bid_idx[0]
        block = items[k]
        merged = list(items[:k]) + list(block.factors) + list(items[k + 1:])
        return _canon_word(block.op, merged, rel)
    if rel.base_commutative:
        items = sorted(items, key=sort_key)
    if len(items) == 1:
        return items[0]
    return Prod(FLAT, tuple(items))


def _trace_canon(name: str, vec: Term, rel: RelationSet) -> Term:
    """Cyclic canonicalization of Box-word arguments of traced functionals."""
    if name in rel.functional_trace and isinstance(vec, Prod) and vec.op == BOX:
        fs = vec.factors
        best = min(
            (fs[i:] + fs[:i] for i in range(len(fs))),
            key=lambda r: tuple(sort_key(x) for x in r),
        )
        return Prod(BOX, best)
    return vec


def _mono_key(scalars: tuple, vector: Optional[Term]):
    vkey = (0,) if vector is None else (1, sort_key(vector))
    return (vkey, tuple(sort_key(s) for s in scalars))


def _expand(t: Term, rel: RelationSet) -> dict:
    """Expand a term to {key: (coeff, scalars, vector)} in canonical form."""
    if isinstance(t, (Atom, Unit)):
        return {_mono_key((), t): [ONE, (), t]}
    if isinstance(t, FuncApp):
        out = {}
        for coeff, scalars, vec in _expand(t.arg, rel).values():
            if vec is None:
                raise StructuralError("functional applied to a scalar-valued term")
            sf = FuncApp(t.name, _trace_canon(t.name, vec, rel))
            new_scalars = tuple(sorted(scalars + (sf,), key=sort_key))
            _acc(out, coeff, new_scalars, None)
        return out
    if isinstance(t, Sum):
        out = {}
        for c, m in t.addends:
            for coeff, scalars, vec in _expand(m, rel).values():
                _acc(out, c * coeff, scalars, vec)
        return out
    if isinstance(t, Prod):
        expansions = [list(_expand(f, rel).values()) for f in t.factors]
        out = {}
        for combo in itertools.product(*expansions):
            coeff = ONE
            scalars = ()
            vecs = []
            for c, s, v in combo:
                coeff = coeff * c
                scalars = scalars + s
                vecs.append(v)
            if t.op in (BOX, LOZ) and any(v is None for v in vecs):
                raise StructuralError(f"{t.op} product with scalar-valued factor")
            elem = [v for v in vecs if v is not None]
            word = _canon_word(t.op, elem, rel)
            if word is None and elem:
                word = Unit()  # a product of units is the unit, not a scalar
            scalars = tuple(sorted(scalars, key=sort_key))
            _acc(out, coeff, scalars, word)
        return out
    raise StructuralError(f"not a term: {t!r}")


def _acc(out: dict, coeff, scalars, vec):
    key = _mono_key(scalars, vec)
    if key in out:
        out[key][0] = out[key][0] + coeff
        if out[key][0].is_zero():
            del out[key]
    elif not coeff.is_zero():
        out[key] = [coeff, scalars, vec]


def _mono_term(scalars: tuple, vector: Optional[Term]) -> Term:
    parts = list(scalars)
    if vector is not None:
        if isinstance(vector, Prod) and vector.op == FLAT:
            parts.extend(vector.factors)
        else:
            parts.append(vector)
    if not parts:
        return Unit()
    if len(parts) == 1:
        return parts[0]
    return Prod(FLAT, tuple(parts))


def normalize(t: Term, rel: RelationSet = EMPTY_RELATIONS) -> Term:
    """Canonical form of a term under the always-on rules plus ``rel``."""
    poly = _expand(t, rel)
    entries = sorted(poly.items())
    if not entries:
        return Sum(())
    if len(entries) == 1:
        coeff, scalars, vec = entries[0][1]
        if coeff.is_one():
            return _mono_term(scalars, vec)
    return Sum(tuple((c, _mono_term(s, v)) for _, (c, s, v) in entries))


def equal(t1: Term, t2: Term, rel: RelationSet = EMPTY_RELATIONS) -> bool:
    return normalize(t1, rel) == normalize(t2, rel)


def is_zero(t: Term, rel: RelationSet = EMPTY_RELATIONS) -> bool:
    return normalize(t, rel) == Sum(())


def sub(t1: Term, t2: Term) -> Term:
    return Sum(((ONE, t1), (GaussianRational(-1), t2)))


# ---------------------------------------------------------------------------
# rendering

_OP_GLYPH = {BOX: " □ ", LOZ: " ◊ ", FLAT: " "}
_OP_ASCII = {BOX: " [] ", LOZ: " <> ", FLAT: " "}


def render(t: Term, ascii_ops: bool = False) -> str:
    glyphs = _OP_ASCII if ascii_ops else _OP_GLYPH
    return _render(t, glyphs)


def _render(t: Term, glyphs) -> str:
    if isinstance(t, Atom):
        return t.name + ("*" if t.starred else "")
    if isinstance(t, Unit):
        return "1"
    if isinstance(t, FuncApp):
        return f"{t.name}({_render(t.arg, glyphs)})"
    if isinstance(t, Prod):
        parts = []
        for f in t.factors:
            s = _render(f, glyphs)
            if isinstance(f, Prod):
                s = f"({s})"
            parts.append(s)
        return glyphs[t.op].join(parts)
    if isinstance(t, Sum):
        if not t.addends:
            return "0"
        chunks = []
        for c, m in t.addends:
            body = _render(m, glyphs)
            wrapped = f"({body})" if isinstance(m, Prod) else body
            if c.is_one():
                txt = body
            elif (-c).is_one():
                txt = "-" + body
            else:
                txt = f"{c} {wrapped}"
            chunks.append(txt)
        out = chunks[0]
        for nxt in chunks[1:]:
            if nxt.startswith("-"):
                out += " - " + nxt[1:]
            else:
                out += " + " + nxt
        return out
    raise StructuralError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# JSON serialization


def term_to_json(t: Term):
    if isinstance(t, Atom):
        return {"atom": {"name": t.name, "level": t.level, "star": t.starred}}
    if isinstance(t, Unit):
        return {"unit": True}
    if isinstance(t, Prod):
        return {"prod": {"op": t.op, "factors": [term_to_json(f) for f in t.factors]}}
    if isinstance(t, FuncApp):
        return {"func": {"name": t.name, "arg": term_to_json(t.arg)}}
    if isinstance(t, Sum):
        return {"sum": [[c.to_json(), term_to_json(m)] for c, m in t.addends]}
    raise StructuralError(f"not a term: {t!r}")


def term_from_json(data) -> Term:
    if not isinstance(data, dict) or len(data) != 1:
        raise StructuralError(f"bad term JSON: {data!r}")
    tag, body = next(iter(data.items()))
    if tag == "atom":
        return Atom(body["name"], body.get("level", BIDUAL), body.get("star", False))
    if tag == "unit":
        return Unit()
    if tag == "prod":
        return Prod(body["op"], tuple(term_from_json(f) for f in body["factors"]))
    if tag == "func":
        return FuncApp(body["name"], term_from_json(body["arg"]))
    if tag == "sum":
        return Sum(
            tuple(
                (GaussianRational.from_json(c), term_from_json(m)) for c, m in body
            )
        )
    raise StructuralError(f"bad term tag: {tag!r}")
