"""Finite-dimensional numerical Jordan triple systems.

Provides concrete triple-product evaluators with their norms, residual
checks for the Jordan identity and the JB*-triple axioms, the operator
calculus L(a,b) and Q(a,b), tripotents and Peirce decompositions.

Conjugate-linear operators are represented on the realified space (real
dimension 2d) so idempotence and spectra reduce to ordinary real linear
algebra.  Random elements are drawn entry-wise from the complex unit disc
with a caller-supplied seed.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

import numpy as np


class DimensionError(ValueError):
    pass


class TripotentError(ValueError):
    pass


# default tolerance policy: 1e-10 relative for algebraic identities,
# 1e-8 for norm/spectrum claims
TOL_ALGEBRAIC = 1e-10
TOL_SPECTRAL = 1e-8
TOL_OPERATOR = 1e-9


@dataclass(frozen=True)
class TripleSystem:
    """A concrete complex Jordan triple of one of the four built-in kinds.

    kind 'cstar'  : n x n complex matrices, {a,b,c} = (ab*c + cb*a)/2
    kind 'rect'   : p x q complex matrices, same product
    kind 'hilbert': C^n, {a,b,c} = (<a,b>c + <c,b>a)/2
    kind 'jbstar' : commutative C*-model (diagonal), {a,b,c} entry-wise
                    (a o b*) o c + (c o b*) o a - (a o c) o b* = a conj(b) c
    """

    kind: str
    shape: tuple
    name: str

    @property
    def dim(self) -> int:
        d = 1
        for s in self.shape:
            d *= s
        return d

    # -- element algebra ----------------------------------------------------

    def product(self, a, b, c):
        a, b, c = (self._coerce(x) for x in (a, b, c))
        if self.kind in ("cstar", "rect"):
            bs = b.conj().T
            return 0.5 * (a @ bs @ c + c @ bs @ a)
        if self.kind == "hilbert":
            return 0.5 * (np.vdot(b, a) * c + np.vdot(b, c) * a)
        if self.kind == "jbstar":
            return a * b.conj() * c
        raise DimensionError(f"unknown kind {self.kind}")

    def norm(self, a) -> float:
        a = self._coerce(a)
        if self.kind in ("cstar", "rect"):
            return float(np.linalg.norm(a, 2))
        if self.kind == "hilbert":
            return float(np.linalg.norm(a))
        return float(np.max(np.abs(a))) if a.size else 0.0

    def _coerce(self, a):
        a = np.asarray(a, dtype=complex)
        if a.shape != self.shape:
            raise DimensionError(f"expected shape {self.shape}, got {a.shape}")
        return a

    def zero(self):
        return np.zeros(self.shape, dtype=complex)

    def basis(self):
        for idx in np.ndindex(*self.shape):
            e = self.zero()
            e[idx] = 1.0
            yield e

    def vec(self, a):
        return self._coerce(a).reshape(-1)

    def unvec(self, v):
        return np.asarray(v, dtype=complex).reshape(self.shape)

    def random_element(self, rng):
        r = np.sqrt(rng.uniform(size=self.shape))
        theta = rng.uniform(0.0, 2.0 * np.pi, size=self.shape)
        return r * np.exp(1j * theta)


_SPEC_RE = re.compile(r"^(cstar|hilbert|jbstar):(\d+)$|^(rect):(\d+)x(\d+)$")


def triple_system(spec: str) -> TripleSystem:
    """Parse a system spec like 'cstar:3', 'rect:2x3', 'hilbert:4', 'jbstar:3'."""
    m = _SPEC_RE.match(spec.strip())
    if not m:
        raise DimensionError(f"bad system spec {spec!r}")
    if m.group(3) == "rect":
        p, q = int(m.group(4)), int(m.group(5))
        return TripleSystem("rect", (p, q), spec)
    kind, n = m.group(1), int(m.group(2))
    shape = (n, n) if kind == "cstar" else (n,)
    return TripleSystem(kind, shape, spec)


# ---------------------------------------------------------------------------
# residuals


def jordan_residual(sys: TripleSystem, a, b, c, d, e) -> float:
    """Norm of {a,b,{c,d,e}} - {{a,b,c},d,e} + {c,{b,a,d},e} - {c,d,{a,b,e}}."""
    t = sys.product
    r = t(a, b, t(c, d, e)) - t(t(a, b, c), d, e) + t(c, t(b, a, d), e) - t(c, d, t(a, b, e))
    return sys.norm(r)


def outer_symmetry_residual(sys: TripleSystem, a, b, c) -> float:
    return sys.norm(sys.product(a, b, c) - sys.product(c, b, a))


def abelian_residual(sys: TripleSystem, a, b, c, d, e) -> float:
    """Norm of {a,b,{c,d,e}} - {{a,b,c},d,e}; zero on abelian subtriples."""
    t = sys.product
    return sys.norm(t(a, b, t(c, d, e)) - t(t(a, b, c), d, e))


# ---------------------------------------------------------------------------
# operator calculus


def L_operator(sys: TripleSystem, a, b) -> np.ndarray:
    """Dense complex matrix of x -> {a,b,x} on the vectorized space."""
    cols = [sys.vec(sys.product(a, b, x)) for x in sys.basis()]
    return np.stack(cols, axis=1)


def realify_map(sys: TripleSystem, fn) -> np.ndarray:
    """Real 2d x 2d matrix of an R-linear map on the vectorized space."""
    d = sys.dim
    out = np.zeros((2 * d, 2 * d))
    for j, x in enumerate(sys.basis()):
        for off, mult in ((0, 1.0), (d, 1j)):
            y = sys.vec(fn(sys.unvec(mult * sys.vec(x))))
            out[:d, j + off] = y.real
            out[d:, j + off] = y.imag
    return out


def realify_matrix(sys: TripleSystem, m: np.ndarray) -> np.ndarray:
    return realify_map(sys, lambda x: sys.unvec(m @ sys.vec(x)))


def Q_operator(sys: TripleSystem, a, b=None) -> np.ndarray:
    """The conjugate-linear map x -> {a,x,b} as a realified matrix; Q(a)=Q(a,a)."""
    if b is None:
        b = a
    return realify_map(sys, lambda x: sys.product(a, x, b))


def Q_squared(sys: TripleSystem, a) -> np.ndarray:
    """Q(a)^2 as a complex-linear matrix on the vectorized space."""
    q = lambda x: sys.product(a, x, a)
    cols = [sys.vec(q(q(x))) for x in sys.basis()]
    return np.stack(cols, axis=1)


def qq_identity_residual(sys: TripleSystem, a, b) -> float:
    """Operator-norm residual of Q(a)Q(b) = 2 L(a,b)L(a,b) - L(Q(a)b, b)."""
    qa = lambda x: sys.product(a, x, a)
    qb = lambda x: sys.product(b, x, b)
    lhs = realify_map(sys, lambda x: qa(qb(x)))
    lab = L_operator(sys, a, b)
    qab = sys.product(a, b, a)
    rhs_c = 2.0 * (lab @ lab) - L_operator(sys, qab, b)
    rhs = realify_matrix(sys, rhs_c)
    return float(np.linalg.norm(lhs - rhs, 2))


# ---------------------------------------------------------------------------
# JB* axiom sweep


@dataclass
class AxiomReport:
    system: str
    trials: int
    max_cube_norm_dev: float = 0.0
    max_hermitian_dev: float = 0.0
    min_spectrum: float = float("inf")
    max_jordan_rel: float = 0.0
    max_outer_rel: float = 0.0
    max_qq_rel: float = 0.0
    failures: list = field(default_factory=list)

    def passed(self, tol_alg=TOL_ALGEBRAIC, tol_spec=TOL_SPECTRAL, tol_op=TOL_OPERATOR):
        return (
            not self.failures
            and self.max_cube_norm_dev <= tol_spec
            and self.max_hermitian_dev <= tol_spec
            and self.min_spectrum >= -tol_spec
            and self.max_jordan_rel <= tol_alg
            and self.max_outer_rel <= tol_alg
            and self.max_qq_rel <= tol_op
        )

    def to_json(self):
        return {
            "schema": "bidual/jordan/v1",
            "system": self.system,
            "trials": self.trials,
            "max_cube_norm_dev": self.max_cube_norm_dev,
            "max_hermitian_dev": self.max_hermitian_dev,
            "min_spectrum": self.min_spectrum,
            "max_jordan_rel": self.max_jordan_rel,
            "max_outer_rel": self.max_outer_rel,
            "max_qq_rel": self.max_qq_rel,
            "failures": self.failures,
            "pass": self.passed(),
        }


def _rel(value: float, scale: float) -> float:
    return value / max(scale, 1e-300)


def jbstar_axiom_checks(sys: TripleSystem, trials: int, seed: int) -> AxiomReport:
    """Cube-norm and hermitian-positivity axioms plus identity residual sweeps."""
    rng = np.random.default_rng(seed)
    rep = AxiomReport(system=sys.name, trials=trials)
    for _ in range(trials):
        xs = [sys.random_element(rng) for _ in range(5)]
        a, b, c, d, e = xs
        norms = [sys.norm(x) for x in xs]

        cube = sys.norm(sys.product(a, a, a))
        na3 = norms[0] ** 3
        rep.max_cube_norm_dev = max(rep.max_cube_norm_dev, _rel(abs(cube - na3), na3))

        h = L_operator(sys, a, a)
        rep.max_hermitian_dev = max(
            rep.max_hermitian_dev, float(np.linalg.norm(h - h.conj().T, 2))
        )
        eigs = np.linalg.eigvalsh((h + h.conj().T) / 2.0)
        rep.min_spectrum = min(rep.min_spectrum, float(eigs.min()))

        jr = jordan_residual(sys, a, b, c, d, e)
        rep.max_jordan_rel = max(rep.max_jordan_rel, _rel(jr, float(np.prod(norms))))

        osr = outer_symmetry_residual(sys, a, b, c)
        rep.max_outer_rel = max(
            rep.max_outer_rel, _rel(osr, norms[0] * norms[1] * norms[2])
        )

        qq = qq_identity_residual(sys, a, b)
        rep.max_qq_rel = max(rep.max_qq_rel, _rel(qq, norms[0] ** 2 * norms[1] ** 2))
    return rep


# ---------------------------------------------------------------------------
# tripotents and Peirce decomposition


def tripotent_residual(sys: TripleSystem, e) -> float:
    return sys.norm(sys.product(e, e, e) - sys._coerce(e))


@dataclass(frozen=True)
class TripotentRecord:
    """An element together with its {e,e,e} - e residual."""

    element: np.ndarray
    residual: float

    def accepted(self, tol: float = TOL_SPECTRAL) -> bool:
        return self.residual <= tol


def tripotent_record(sys: TripleSystem, e) -> TripotentRecord:
    e = sys._coerce(e)
    return TripotentRecord(element=e, residual=tripotent_residual(sys, e))


def make_tripotent(sys: TripleSystem, spec) -> np.ndarray:
    """Canonical partial isometries by name, or explicit data / a JSON file.

    Names: 'zero', 'e11', 'e11+e22', 'id'.  Matrix names index matrix units
    for matrix kinds and basis vectors for vector kinds.
    """
    if isinstance(spec, str) and spec.endswith(".json"):
        with open(spec) as fh:
            spec = json.load(fh)
    if isinstance(spec, str):
        name = spec.strip().lower()
        e = sys.zero()
        if name in ("zero", "0"):
            return e
        if name == "id":
            if sys.kind in ("cstar",):
                return np.eye(sys.shape[0], dtype=complex)
            if sys.kind in ("hilbert", "jbstar", "rect"):
                if sys.kind == "jbstar":
                    return np.ones(sys.shape, dtype=complex)
                raise TripotentError(f"'id' undefined for kind {sys.kind}")
        m = re.match(r"^e(\d)(\d)?(?:\+e(\d)(\d)?)*$", name)
        if not m:
            raise TripotentError(f"unknown tripotent spec {spec!r}")
        for unit in name.split("+"):
            um = re.match(r"^e(\d)(\d)?$", unit)
            if not um:
                raise TripotentError(f"unknown tripotent spec {spec!r}")
            i = int(um.group(1)) - 1
            j = int(um.group(2)) - 1 if um.group(2) else i
            if len(sys.shape) == 2:
                e[i, j] = 1.0
            else:
                e[i] = 1.0
        return e
    data = np.asarray(spec, dtype=complex)
    if data.ndim == len(sys.shape) + 1 and data.shape[-1] == 2:
        data = data[..., 0] + 1j * data[..., 1]
    return sys._coerce(data)


@dataclass
class PeirceDecomposition:
    """The projections P0, P1, P2 onto the 0, 1/2, 1 eigenspaces of L(e,e)."""

    P0: np.ndarray
    P1: np.ndarray
    P2: np.ndarray

    @property
    def ranks(self):
        return tuple(int(round(np.trace(P).real)) for P in (self.P0, self.P1, self.P2))

    def resolution_residual(self) -> float:
        d = self.P0.shape[0]
        return float(np.linalg.norm(self.P0 + self.P1 + self.P2 - np.eye(d), 2))

    def idempotence_residual(self) -> float:
        return max(
            float(np.linalg.norm(P @ P - P, 2)) for P in (self.P0, self.P1, self.P2)
        )

    def orthogonality_residual(self) -> float:
        ps = (self.P0, self.P1, self.P2)
        return max(
            float(np.linalg.norm(ps[i] @ ps[j], 2))
            for i in range(3)
            for j in range(3)
            if i != j
        )

    def project(self, sys: TripleSystem, k: int, x):
        P = (self.P0, self.P1, self.P2)[k]
        return sys.unvec(P @ sys.vec(x))

    def to_json(self):
        return {
            "ranks": list(self.ranks),
            "resolution_residual": self.resolution_residual(),
            "idempotence_residual": self.idempotence_residual(),
            "orthogonality_residual": self.orthogonality_residual(),
        }


def peirce(sys: TripleSystem, e, tol: float = TOL_SPECTRAL) -> PeirceDecomposition:
    """Peirce projections P2 = Q(e)^2, P1 = 2(L(e,e) - Q(e)^2), P0 = Id - 2L + Q^2."""
    res = tripotent_residual(sys, e)
    if res > tol:
        raise TripotentError(f"not a tripotent: residual {res:.3e} > {tol:.1e}")
    L = L_operator(sys, e, e)
    Q2 = Q_squared(sys, e)
    eye = np.eye(sys.dim)
    return PeirceDecomposition(
        P0=eye - 2.0 * L + Q2,
        P1=2.0 * (L - Q2),
        P2=Q2,
    )


@dataclass
class PeirceRulesReport:
    system: str
    samples: int
    max_rule_residual: float = 0.0
    max_annihilation_residual: float = 0.0
    max_q_range_residual: float = 0.0
    spectrum_dev: float = 0.0

    def passed(self, tol=TOL_ALGEBRAIC, tol_spec=TOL_SPECTRAL):
        return (
            self.max_rule_residual <= tol
            and self.max_annihilation_residual <= tol
            and self.max_q_range_residual <= tol
            and self.spectrum_dev <= tol_spec
        )

    def to_json(self):
        return {
            "system": self.system,
            "samples": self.samples,
            "max_rule_residual": self.max_rule_residual,
            "max_annihilation_residual": self.max_annihilation_residual,
            "max_q_range_residual": self.max_q_range_residual,
            "spectrum_dev": self.spectrum_dev,
            "pass": self.passed(),
        }


def spectrum_deviation(sys: TripleSystem, e) -> float:
    """Distance of spec(L(e,e)) from {0, 1/2, 1}."""
    L = L_operator(sys, e, e)
    eigs = np.linalg.eigvalsh((L + L.conj().T) / 2.0)
    targets = np.array([0.0, 0.5, 1.0])
    return float(max(np.min(np.abs(targets - ev)) for ev in eigs)) if eigs.size else 0.0


def peirce_rules_residual(
    sys: TripleSystem, e, samples: int, seed: int
) -> PeirceRulesReport:
    """Peirce multiplication rules {E_i,E_j,E_k} in E_{i-j+k}, the vanishing
    mixed products {E_0,E_2,E} = {E_2,E_0,E} = 0, and Q(a,b)P2 = Q(a,b) for
    a, b in E_2."""
    dec = peirce(sys, e)
    rng = np.random.default_rng(seed)
    rep = PeirceRulesReport(system=sys.name, samples=samples)
    rep.spectrum_dev = spectrum_deviation(sys, e)
    projections = [lambda x, k=k: dec.project(sys, k, x) for k in range(3)]
    for _ in range(samples):
        xs = [proj(sys.random_element(rng)) for proj in projections]
        y = sys.random_element(rng)
        for i in range(3):
            for j in range(3):
                for k in range(3):
                    prod = sys.product(xs[i], xs[j], xs[k])
                    target = i - j + k
                    if target in (0, 1, 2):
                        r = sys.norm(prod - dec.project(sys, target, prod))
                        rep.max_rule_residual = max(rep.max_rule_residual, r)
                    else:
                        rep.max_rule_residual = max(rep.max_rule_residual, sys.norm(prod))
        rep.max_annihilation_residual = max(
            rep.max_annihilation_residual,
            sys.norm(sys.product(xs[0], xs[2], y)),
            sys.norm(sys.product(xs[2], xs[0], y)),
        )
        # Q(a,b) kills the complement of the Peirce-2 space for a,b in E_2
        a2 = dec.project(sys, 2, sys.random_element(rng))
        b2 = dec.project(sys, 2, sys.random_element(rng))
        comp = y - dec.project(sys, 2, y)
        rep.max_q_range_residual = max(
            rep.max_q_range_residual, sys.norm(sys.product(a2, comp, b2))
        )
    return rep
