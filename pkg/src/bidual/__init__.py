"""Workbench for Arens-product extensions of trilinear maps on biduals,
with numerical verification of Jordan triple structure at desk scale."""

from .scalars import GaussianRational
from .terms import (
    ALGEBRA,
    BIDUAL,
    BOX,
    FLAT,
    LOZ,
    Atom,
    FuncApp,
    LevelMismatchError,
    Prod,
    RelationSet,
    StructuralError,
    Sum,
    Unit,
    equal,
    involute,
    normalize,
    render,
    substitute,
    term_from_json,
    term_to_json,
)
from .templates import Perm3, TemplateError, TrilinearTemplate, parse_template, perm
from .compiler import (
    ExtensionReport,
    all_extensions,
    center_equations,
    coincidence_on_mixed,
    compile_extension,
    jordan_identity_residual,
    outer_symmetry_check,
    symmetry_pairs_check,
    valid_triples,
)
from .jordan import (
    PeirceDecomposition,
    TripleSystem,
    TripotentRecord,
    jbstar_axiom_checks,
    jordan_residual,
    make_tripotent,
    peirce,
    peirce_rules_residual,
    qq_identity_residual,
    triple_system,
    tripotent_record,
)
from .tensors import TrilinearTensor, adjoint, circledast, permuted_extension
from .limits import (
    IteratedLimitReport,
    TestFunctional,
    TruncatedSeq,
    arens_gap,
    convolve,
    involution,
    pair,
    pointwise,
    triple_gap,
)
from .selftest import run_selftest

__version__ = "0.1.0"
