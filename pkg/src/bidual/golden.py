"""Reference corpus: known-correct extensions of the three model templates.

The expected strings are the canonical renderings (unicode printer) of the
six compiled extensions for the convolution-algebra triple product a b* c,
the two K(c0)-style products (plain associative a b c and the symmetrized
1/2(a b* c + c b* a)), and the functional template phi(a b*)c + phi(c b*)a.
Only the entries displayed in the reference derivations are asserted for
the associative and symmetrized products (indices 0..3); the other two
templates pin all six.
"""

from __future__ import annotations

from .compiler import compile_extension
from .templates import parse_template, perm
from .terms import render

# (template text, {extension index: canonical rendering})
GOLDEN = (
    (
        "a b* c",
        {
            0: "m □ n* □ p",
            1: "m □ (n* ◊ p)",
            2: "m ◊ n* ◊ p",
            3: "(m ◊ n*) □ p",
            4: "(m □ n*) ◊ p",
            5: "m ◊ (n* □ p)",
        },
    ),
    (
        "a b c",
        {
            0: "m □ n □ p",
            1: "m □ (n ◊ p)",
            2: "m ◊ n ◊ p",
            3: "(m ◊ n) □ p",
        },
    ),
    (
        "1/2 a b* c + 1/2 c b* a",
        {
            0: "1/2 (m □ n* □ p) + 1/2 (p ◊ n* ◊ m)",
            1: "1/2 (m □ (n* ◊ p)) + 1/2 ((p □ n*) ◊ m)",
            2: "1/2 (p □ n* □ m) + 1/2 (m ◊ n* ◊ p)",
            3: "1/2 ((m ◊ n*) □ p) + 1/2 (p ◊ (n* □ m))",
        },
    ),
    (
        "phi(a b*) c + phi(c b*) a",
        {
            0: "phi(p ◊ n*) m + phi(m □ n*) p",
            1: "phi(p □ n*) m + phi(m □ n*) p",
            2: "phi(p □ n*) m + phi(m ◊ n*) p",
            3: "phi(p ◊ n*) m + phi(m ◊ n*) p",
            4: "phi(p □ n*) m + phi(m □ n*) p",
            5: "phi(p ◊ n*) m + phi(m ◊ n*) p",
        },
    ),
)


def golden_count() -> int:
    return sum(len(expected) for _, expected in GOLDEN)


def check_golden():
    """Compile every corpus template and compare against the pinned strings.

    Returns a list of (label, expected, got, ok).
    """
    results = []
    for text, expected in GOLDEN:
        tpl = parse_template(text)
        for i, want in sorted(expected.items()):
            got = render(compile_extension(tpl, perm(i)))
            results.append((f"{text} | s{i}", want, got, got == want))
    return results
