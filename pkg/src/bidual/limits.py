"""Iterated-limit experiments on finitely supported sequence algebras.

Two desk-scale models: the convolution algebra on Z (whose failure of Arens
regularity the heaviside witness exhibits as a genuine iterated-limit gap)
and pointwise multiplication on N (regular; all gaps vanish on basis nets).

A "limit" here is tail stabilization: a value counts as the limit of a
finite index range only when it is exactly constant over a trailing window
of length W.  Inner limits are evaluated on ranges that outgrow the outer
indices (each nesting level doubles the bound and adds W) so stabilization
points that grow with the outer index stay detectable; non-stabilization is
reported honestly via convergence flags.  All arithmetic on the shipped
witnesses is exact (Gaussian rationals).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .scalars import GaussianRational, ONE, ZERO
from .templates import Perm3, perm

GROUP_Z_CONV = "l1z"
GROUP_N_POINTWISE = "l1n"

MAX_SUPPORT = 4_000_000


class GroupTagError(ValueError):
    pass


class WindowOverflowError(ValueError):
    pass


@dataclass(frozen=True)
class TruncatedSeq:
    """A finitely supported sequence, exact coefficients, tagged by its algebra."""

    group: str
    coeffs: tuple  # sorted tuple of (index, GaussianRational), zeros dropped

    def __post_init__(self):
        if self.group not in (GROUP_Z_CONV, GROUP_N_POINTWISE):
            raise GroupTagError(f"unknown group tag {self.group!r}")

    @classmethod
    def of(cls, group: str, data: dict) -> "TruncatedSeq":
        items = []
        for j, v in data.items():
            v = v if isinstance(v, GaussianRational) else GaussianRational.of(v)
            if group == GROUP_N_POINTWISE and j < 0:
                raise GroupTagError("negative index in an l1(N) sequence")
            if not v.is_zero():
                items.append((int(j), v))
        items.sort()
        return cls(group, tuple(items))

    def at(self, j: int) -> GaussianRational:
        for k, v in self.coeffs:
            if k == j:
                return v
        return ZERO

    def support(self):
        return [j for j, _ in self.coeffs]

    def norm1(self):
        """Exact l1 norm as a Fraction when all coefficients are real or
        purely imaginary; a float otherwise."""
        if all(v.im == 0 for _, v in self.coeffs):
            return sum((abs(v.re) for _, v in self.coeffs), Fraction(0))
        if all(v.re == 0 for _, v in self.coeffs):
            return sum((abs(v.im) for _, v in self.coeffs), Fraction(0))
        return sum(abs(v.to_complex()) for _, v in self.coeffs)


def delta(group: str, j: int) -> TruncatedSeq:
    return TruncatedSeq.of(group, {j: ONE})


def _check_tags(x: TruncatedSeq, y: TruncatedSeq, want=None):
    if x.group != y.group:
        raise GroupTagError(f"group tags differ: {x.group} vs {y.group}")
    if want is not None and x.group != want:
        raise GroupTagError(f"operation needs group {want}, got {x.group}")


def convolve(x: TruncatedSeq, y: TruncatedSeq) -> TruncatedSeq:
    _check_tags(x, y, GROUP_Z_CONV)
    if len(x.coeffs) * len(y.coeffs) > MAX_SUPPORT:
        raise WindowOverflowError("convolution support exceeds the configured bound")
    out = {}
    for j, vx in x.coeffs:
        for k, vy in y.coeffs:
            idx = j + k
            out[idx] = out.get(idx, ZERO) + vx * vy
    return TruncatedSeq.of(GROUP_Z_CONV, out)


def pointwise(x: TruncatedSeq, y: TruncatedSeq) -> TruncatedSeq:
    _check_tags(x, y, GROUP_N_POINTWISE)
    ys = dict(y.coeffs)
    out = {j: vx * ys[j] for j, vx in x.coeffs if j in ys}
    return TruncatedSeq.of(GROUP_N_POINTWISE, out)


def multiply(x: TruncatedSeq, y: TruncatedSeq) -> TruncatedSeq:
    _check_tags(x, y)
    return convolve(x, y) if x.group == GROUP_Z_CONV else pointwise(x, y)


def involution(x: TruncatedSeq) -> TruncatedSeq:
    """Group involution: x*(j) = conj(x(-j)) on Z, entrywise conjugation on N."""
    if x.group == GROUP_Z_CONV:
        return TruncatedSeq.of(x.group, {-j: v.conjugate() for j, v in x.coeffs})
    return TruncatedSeq.of(x.group, {j: v.conjugate() for j, v in x.coeffs})


def triple_product(a: TruncatedSeq, b: TruncatedSeq, c: TruncatedSeq) -> TruncatedSeq:
    """The Banach *-algebra triple product a b* c."""
    return multiply(multiply(a, involution(b)), c)


@dataclass(frozen=True)
class TestFunctional:
    """A bounded test sequence paired against l1 elements."""

    name: str
    fn: object  # int -> GaussianRational
    bound: Fraction = Fraction(1)

    def __call__(self, j: int) -> GaussianRational:
        v = self.fn(j)
        return v if isinstance(v, GaussianRational) else GaussianRational.of(v)


def heaviside() -> TestFunctional:
    return TestFunctional("heaviside", lambda j: ONE if j >= 0 else ZERO)


def parity() -> TestFunctional:
    return TestFunctional("parity", lambda j: ONE if j % 2 == 0 else GaussianRational(-1))


def constant() -> TestFunctional:
    return TestFunctional("constant", lambda j: ONE)


def window_functional(values: dict, name="window") -> TestFunctional:
    table = {int(j): GaussianRational.of(v) for j, v in values.items()}
    bound = max((abs(v.re) + abs(v.im) for v in table.values()), default=Fraction(0))
    return TestFunctional(name, lambda j: table.get(j, ZERO), bound)


FUNCTIONALS = {"heaviside": heaviside, "parity": parity, "constant": constant}


def pair(psi: TestFunctional, x: TruncatedSeq) -> GaussianRational:
    out = ZERO
    for j, v in x.coeffs:
        out = out + psi(j) * v
    return out


# ---------------------------------------------------------------------------
# built-in index families


def make_family(group: str, spec: str):
    """Named closed-form families: 'delta' (n -> d_n), 'delta_neg' (n -> d_-n),
    'const' or 'const:j' (constantly d_j)."""
    spec = spec.strip()
    if spec == "delta":
        return lambda n: delta(group, n)
    if spec == "delta_neg":
        if group != GROUP_Z_CONV:
            raise GroupTagError("delta_neg needs the Z convolution group")
        return lambda n: delta(group, -n)
    if spec == "const" or spec.startswith("const:"):
        j = int(spec.split(":", 1)[1]) if ":" in spec else 0
        return lambda n: delta(group, j)
    raise GroupTagError(f"unknown family spec {spec!r}")


# ---------------------------------------------------------------------------
# tail-stabilized iterated limits


def _level_bounds(n: int, window: int, depth: int):
    """Outermost bound first; inner ranges outgrow all outer indices."""
    if n < 0:
        raise WindowOverflowError(f"index bound must be nonnegative, got {n}")
    if window < 1:
        raise WindowOverflowError(f"window must be positive, got {window}")
    bounds = [n]
    for _ in range(depth - 1):
        bounds.append(2 * bounds[-1] + window)
    return bounds


def _stabilize(value_at, bound: int, window: int):
    """Exact-constancy check over the trailing window of [0..bound]."""
    w = min(window, bound + 1)
    vals = []
    for idx in range(bound - w + 1, bound + 1):
        v, ok = value_at(idx)
        if not ok:
            return None, False
        vals.append(v)
    if all(v == vals[0] for v in vals[1:]):
        return vals[0], True
    return None, False


def _iterated(v_fn, axes, bounds, window, fixed):
    axis = axes[0]
    if len(axes) == 1:
        def value_at(idx):
            point = dict(fixed)
            point[axis] = idx
            return v_fn(point), True
    else:
        def value_at(idx):
            point = dict(fixed)
            point[axis] = idx
            return _iterated(v_fn, axes[1:], bounds[1:], window, point)
    return _stabilize(value_at, bounds[0], window)


@dataclass
class LimitEntry:
    order: str
    value: GaussianRational | None
    converged: bool

    def to_json(self):
        return {
            "order": self.order,
            "value": None if self.value is None else str(self.value),
            "value_float": None
            if self.value is None
            else [float(self.value.re), float(self.value.im)],
            "converged": self.converged,
        }


@dataclass
class IteratedLimitReport:
    kind: str
    n: int
    window: int
    entries: list = field(default_factory=list)

    @property
    def all_converged(self) -> bool:
        return all(e.converged for e in self.entries)

    def gap_exact(self):
        """Max pairwise difference of stabilized values, exact when rational."""
        vals = [e.value for e in self.entries if e.converged]
        if len(vals) < 2:
            return Fraction(0)
        best = Fraction(0)
        best_float = 0.0
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                d = vals[i] - vals[j]
                if d.im == 0:
                    cand = abs(d.re)
                    if cand > best:
                        best = cand
                        best_float = float(cand)
                else:
                    cand = abs(d.to_complex())
                    if cand > best_float:
                        best_float = cand
                        best = Fraction(cand).limit_denominator(10**12)
        return best

    @property
    def gap(self) -> float:
        return float(self.gap_exact())

    def to_json(self):
        return {
            "schema": "bidual/limits/v1",
            "kind": self.kind,
            "N": self.n,
            "window": self.window,
            "entries": [e.to_json() for e in self.entries],
            "gap": self.gap,
            "gap_exact": str(self.gap_exact()),
            "all_converged": self.all_converged,
        }

    def table(self) -> str:
        rows = [("order", "value", "converged")]
        for e in self.entries:
            rows.append((e.order, "-" if e.value is None else str(e.value), str(e.converged)))
        widths = [max(len(r[i]) for r in rows) for i in range(3)]
        lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in rows]
        lines.append(f"gap = {self.gap_exact()}")
        return "\n".join(lines)


def arens_gap(family1, family2, psi: TestFunctional, n: int, window: int = 10) -> IteratedLimitReport:
    """Both iterated limits of (i,k) -> <psi, family1(i) family2(k)> and their gap."""

    def v_fn(point):
        return pair(psi, multiply(family1(point[0]), family2(point[1])))

    report = IteratedLimitReport(kind="bilinear", n=n, window=window)
    for label, axes in (("lim_1 lim_2", (0, 1)), ("lim_2 lim_1", (1, 0))):
        bounds = _level_bounds(n, window, 2)
        value, ok = _iterated(v_fn, axes, bounds, window, {})
        report.entries.append(LimitEntry(label, value, ok))
    return report


def triple_gap(
    families,
    psi: TestFunctional,
    orders,
    n: int,
    window: int = 10,
) -> IteratedLimitReport:
    """Iterated limits of <psi, f1(i1) f2(i2)* f3(i3)> in the requested orders.

    ``orders`` is an iterable of permutations (indices or Perm3); each
    order sigma takes the slot-sigma(1) limit outermost, per the extension
    semantics.
    """
    f1, f2, f3 = families

    def v_fn(point):
        val = triple_product(f1(point[0]), f2(point[1]), f3(point[2]))
        return pair(psi, val)

    report = IteratedLimitReport(kind="trilinear", n=n, window=window)
    for o in orders:
        sigma = o if isinstance(o, Perm3) else perm(int(o))
        axes = (sigma(1) - 1, sigma(2) - 1, sigma(3) - 1)
        bounds = _level_bounds(n, window, 3)
        value, ok = _iterated(v_fn, axes, bounds, window, {})
        report.entries.append(LimitEntry(sigma.label, value, ok))
    return report
