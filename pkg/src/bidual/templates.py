"""Trilinear templates (the compiler's source language) and S3 permutations.

A template is a formal sum of monomials; each monomial is a word of items
(the three slots, named constants, the unit) possibly grouped under
functional wrappers, with an exact rational coefficient.  Every monomial
must contain each slot exactly once.

Text DSL: monomials separated by ``+``/``-``, items juxtaposed, slots
``a b c``, star ``*``, functional wrapper ``phi( ... )``, pairing
``<phi,a>``, rational coefficients like ``1/2``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .scalars import GaussianRational, ONE


class TemplateError(ValueError):
    """Malformed template text or structure."""


# ---------------------------------------------------------------------------
# permutations


@dataclass(frozen=True)
class Perm3:
    """An element of S3 in the fixed labeling s0..s5.

    ``images`` holds (s(1), s(2), s(3)).  s0=(), s1=(23), s2=(13), s3=(12),
    s4=(132), s5=(123); the inverse of s4 is s5 and every other element is
    its own inverse.
    """

    index: int
    images: tuple

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    @property
    def label(self) -> str:
        return f"s{self.index}"

    def inverse(self) -> "Perm3":
        inv = [0, 0, 0]
        for k in (1, 2, 3):
            inv[self(k) - 1] = k
        return perm_from_images(tuple(inv))


PERMS = (
    Perm3(0, (1, 2, 3)),
    Perm3(1, (1, 3, 2)),
    Perm3(2, (3, 2, 1)),
    Perm3(3, (2, 1, 3)),
    Perm3(4, (3, 1, 2)),
    Perm3(5, (2, 3, 1)),
)

_BY_IMAGES = {p.images: p for p in PERMS}


def perm_from_images(images: tuple) -> Perm3:
    try:
        return _BY_IMAGES[images]
    except KeyError:
        raise TemplateError(f"not a permutation of (1,2,3): {images!r}") from None


def perm(i: int) -> Perm3:
    if not 0 <= i <= 5:
        raise TemplateError(f"permutation index out of range: {i}")
    return PERMS[i]


# ---------------------------------------------------------------------------
# template items


@dataclass(frozen=True)
class Slot:
    k: int  # 1, 2 or 3
    starred: bool = False


@dataclass(frozen=True)
class Const:
    name: str
    starred: bool = False


@dataclass(frozen=True)
class UnitItem:
    pass


@dataclass(frozen=True)
class Wrapped:
    """A sub-word grouped under a functional symbol; scalar-valued."""

    name: str
    items: tuple


@dataclass(frozen=True)
class Monomial:
    coeff: GaussianRational
    items: tuple


@dataclass(frozen=True)
class TrilinearTemplate:
    monomials: tuple
    source: str = ""

    def __post_init__(self):
        for mono in self.monomials:
            counts = {1: 0, 2: 0, 3: 0}
            _count_slots(mono.items, counts)
            if any(c != 1 for c in counts.values()):
                raise TemplateError(
                    f"each slot must occur exactly once per monomial, got {counts}"
                )

    def functional_names(self) -> set:
        names = set()
        for mono in self.monomials:
            _collect_wrappers(mono.items, names)
        return names

    def swap_outer(self) -> "TrilinearTemplate":
        """The template with slots 1 and 3 interchanged."""
        return TrilinearTemplate(
            tuple(Monomial(m.coeff, _swap13(m.items)) for m in self.monomials)
        )

    def is_outer_symmetric(self) -> bool:
        """True when the monomial multiset is invariant under swapping slots 1 and 3."""
        orig = sorted((repr(m) for m in self.monomials))
        swapped = sorted((repr(m) for m in self.swap_outer().monomials))
        return orig == swapped


def _count_slots(items, counts):
    for it in items:
        if isinstance(it, Slot):
            counts[it.k] += 1
        elif isinstance(it, Wrapped):
            _count_slots(it.items, counts)


def _collect_wrappers(items, names):
    for it in items:
        if isinstance(it, Wrapped):
            names.add(it.name)
            _collect_wrappers(it.items, names)


def _swap13(items):
    out = []
    for it in items:
        if isinstance(it, Slot):
            k = {1: 3, 2: 2, 3: 1}[it.k]
            out.append(Slot(k, it.starred))
        elif isinstance(it, Wrapped):
            out.append(Wrapped(it.name, _swap13(it.items)))
        else:
            out.append(it)
    return tuple(out)


# ---------------------------------------------------------------------------
# DSL parser

_TOKEN = re.compile(
    r"\s*(?:(?P<rat>\d+(?:/\d+)?)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<sym>[*+\-(),<>]))"
)

_SLOT_NAMES = {"a": 1, "b": 2, "c": 3}


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise TemplateError(f"bad character at position {pos}: {text[pos:]!r}")
        if m.lastgroup is None and m.group().strip() == "":
            pos = m.end()
            continue
        kind = m.lastgroup
        out.append((kind, m.group(kind), pos))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def error(self, msg, pos):
        raise TemplateError(f"{msg} at position {pos} in {self.text!r}")

    def parse(self) -> TrilinearTemplate:
        monos = [self.monomial(ONE)]
        while self.peek()[0] is not None:
            kind, val, pos = self.next()
            if kind != "sym" or val not in "+-":
                self.error(f"expected '+' or '-', got {val!r}", pos)
            sign = ONE if val == "+" else GaussianRational(-1)
            monos.append(self.monomial(sign))
        return TrilinearTemplate(tuple(monos), source=self.text)

    def monomial(self, sign) -> Monomial:
        coeff = sign
        kind, val, pos = self.peek()
        if kind == "rat":
            self.next()
            coeff = coeff * GaussianRational(Fraction(val))
        items = []
        while True:
            kind, val, pos = self.peek()
            if kind is None or (kind == "sym" and val in "+-)>,"):
                break
            items.append(self.item())
        if not items:
            self.error("empty monomial", pos)
        return Monomial(coeff, tuple(items))

    def item(self):
        kind, val, pos = self.next()
        if kind == "rat":
            if val == "1":
                return UnitItem()
            self.error(f"unexpected number {val!r}", pos)
        if kind == "sym" and val == "<":
            k2, name, p2 = self.next()
            if k2 != "ident":
                self.error("expected functional name after '<'", p2)
            k3, v3, p3 = self.next()
            if (k3, v3) != ("sym", ","):
                self.error("expected ',' in pairing", p3)
            inner = self.item()
            k4, v4, p4 = self.next()
            if (k4, v4) != ("sym", ">"):
                self.error("expected '>' closing pairing", p4)
            return Wrapped(name, (inner,))
        if kind != "ident":
            self.error(f"unexpected token {val!r}", pos)
        name = val
        kind2, val2, _ = self.peek()
        if kind2 == "sym" and val2 == "(":
            self.next()
            inner = []
            while True:
                k, v, p = self.peek()
                if k is None:
                    self.error("unclosed wrapper", p)
                if (k, v) == ("sym", ")"):
                    self.next()
                    break
                inner.append(self.item())
            if not inner:
                self.error("empty functional wrapper", p)
            return Wrapped(name, tuple(inner))
        starred = False
        if kind2 == "sym" and val2 == "*":
            self.next()
            starred = True
        if name in _SLOT_NAMES:
            return Slot(_SLOT_NAMES[name], starred)
        return Const(name, starred)


def parse_template(text: str) -> TrilinearTemplate:
    return _Parser(text).parse()


# the three templates used throughout the paper-derived corpus
ASSOCIATIVE = "a b* c"
ASSOCIATIVE_PLAIN = "a b c"
JORDAN_CSTAR = "1/2 a b* c + 1/2 c b* a"
FUNCTIONAL = "phi(a b*) c + phi(c b*) a"
PAIRING = "<phi,a> <psi,b> c"


def corpus() -> dict:
    """Named test-corpus templates."""
    return {
        "associative": parse_template(ASSOCIATIVE),
        "associative_plain": parse_template(ASSOCIATIVE_PLAIN),
        "jordan_cstar": parse_template(JORDAN_CSTAR),
        "functional": parse_template(FUNCTIONAL),
        "pairing": parse_template(PAIRING),
    }
