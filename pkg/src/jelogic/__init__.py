"""Toolkit for two justification dialects and their sequent calculi.

The package covers the full pipeline: parsing and printing (``syntax``),
axiom schemes and constant specifications (``axioms``), Hilbert-style
derivations with the deduction and internalization transforms (``hilbert``),
cut-free sequent calculi GE and GM with bounded proof search (``sequent``),
realization of sequent proofs into justified derivations (``realization``),
finite evidence-function models with soundness fuzzing and neighborhood
countermodels (``semantics``), random generators for testing (``generate``),
plain-text file formats (``formats``) and the ``jelogic`` command line
(``cli``).
"""

from .syntax import (
    Apply,
    Atom,
    BOT,
    Bang,
    Bottom,
    Box,
    Dialect,
    DialectError,
    Evidence,
    Implies,
    JustOf,
    JustSum,
    JustVar,
    MApply,
    Not,
    Or,
    And,
    ParseError,
    ProofConst,
    ProofOf,
    ProofVar,
    Substitution,
    Sum,
    apply_substitution,
    forgetful,
    parse_formula,
    parse_just_term,
    parse_proof_term,
    parse_sequent,
    print_formula,
    print_sequent,
    print_term,
)
from .axioms import (
    AxiomScheme,
    ConstantSpecification,
    cs_total,
    match_axiom,
    scheme_by_id,
)
from .hilbert import (
    ANStep,
    AxiomStep,
    Builder,
    Derivation,
    DerivationError,
    Hyp,
    Judgment,
    MPStep,
    NotAppropriate,
    check_derivation,
    deduction_transform,
    internalize,
    prune,
    substitute_derivation,
)
from .sequent import (
    FamilyAnalysis,
    Proof,
    Sequent,
    SequentProofError,
    check_sequent_proof,
    compute_families,
    parse_sequent_line,
    prove_bounded,
)
from .realization import (
    RealizationResult,
    UncheckedProof,
    VerificationError,
    realize,
    simplify,
    verify_realization,
)
from .semantics import (
    FiniteBasicEvaluation,
    QuasiModel,
    build_singleton_model,
    check_basic_model,
    check_fully_explanatory,
    check_modular,
    find_modal_countermodel,
    model_truth,
    monotone_closure,
    saturate,
    soundness_fuzz,
)

__version__ = "0.1.0"

__all__ = [
    "ANStep",
    "And",
    "Apply",
    "Atom",
    "AxiomScheme",
    "AxiomStep",
    "BOT",
    "Bang",
    "Bottom",
    "Box",
    "Builder",
    "ConstantSpecification",
    "Derivation",
    "DerivationError",
    "Dialect",
    "DialectError",
    "Evidence",
    "FamilyAnalysis",
    "FiniteBasicEvaluation",
    "Hyp",
    "Implies",
    "Judgment",
    "JustOf",
    "JustSum",
    "JustVar",
    "MApply",
    "MPStep",
    "Not",
    "NotAppropriate",
    "Or",
    "ParseError",
    "Proof",
    "ProofConst",
    "ProofOf",
    "ProofVar",
    "QuasiModel",
    "RealizationResult",
    "Sequent",
    "SequentProofError",
    "Substitution",
    "Sum",
    "UncheckedProof",
    "VerificationError",
    "apply_substitution",
    "build_singleton_model",
    "check_basic_model",
    "check_derivation",
    "check_fully_explanatory",
    "check_modular",
    "check_sequent_proof",
    "compute_families",
    "cs_total",
    "deduction_transform",
    "find_modal_countermodel",
    "forgetful",
    "internalize",
    "match_axiom",
    "model_truth",
    "monotone_closure",
    "parse_formula",
    "parse_just_term",
    "parse_proof_term",
    "parse_sequent",
    "parse_sequent_line",
    "print_formula",
    "print_sequent",
    "print_term",
    "prove_bounded",
    "prune",
    "realize",
    "saturate",
    "scheme_by_id",
    "simplify",
    "soundness_fuzz",
    "substitute_derivation",
    "verify_realization",
]
