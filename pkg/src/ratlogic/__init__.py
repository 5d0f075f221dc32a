"""Infinitary classical logic on rational trees.

Formulas and derivations are possibly ill-founded labeled trees, finitely
presented as graphs.  The package solves recursive formula equations, checks
derivations, and runs the test/environment interaction game whose error-free
outcome characterizes tests that come from derivations.
"""

from .formula import (
    BOTTOM,
    TOP,
    Atom,
    Conn,
    Equation,
    EquationError,
    Factorization,
    Formula,
    conj,
    disj,
    factorize,
    neg_var,
    negate,
    solution_label_oracle,
    solve,
    substitute,
    validate_equation,
    var,
)
from .interaction import (
    ERROR,
    ClosedNoError,
    Config,
    Environment,
    ErrorAt,
    OpenNoError,
    PeriodicNoError,
    Test,
    comes_from_check,
    complete_skeleton,
    conjoin,
    explore,
    negate_sequent,
    play_session,
    reconstruct_derivation,
    step,
)
from .position import Position, concat, prefix_relation, strip_prefix
from .proof import (
    Axiom,
    Conj,
    DerivationCandidate,
    Disj,
    Sequent,
    ValidClosed,
    ValidPeriodic,
    ValidUpToDepth,
    Violation,
    append_disjunct,
    build_repetition_derivation,
    build_solution_derivation,
    check_derivation,
    expand_sequent,
    no_rule_applicable,
    skeleton_of,
)
from .syntax import ParseError, parse_derivation, parse_equation, parse_formula, parse_sequent
from .tree import OracleTree, RationalTree, bisimilar, is_well_founded, unfold

__version__ = "0.1.0"
