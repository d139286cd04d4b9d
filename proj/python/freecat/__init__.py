"""Identity of deductions in freely generated cartesian and symmetric
associative categories: parsing, coherence oracles, finite-model evaluation,
bounded congruence closure, and an equational proof-script checker.
"""

from ._freecat import (  # noqa: F401
    Arrow,
    Formula,
    FreecatError,
    Sequent,
    Signature,
    TheoryConfig,
    apply_policy,
    apply_thinning,
    bundled_script_text,
    check_scripts,
    closure_equal,
    decide_equal_cartesian,
    decide_equal_symmetric,
    detect_collapse,
    eval_finite_model,
    expand_diag,
    interpret_cartesian,
    interpret_symmetric,
    leaves,
    object_image,
    parse_arrow,
    parse_formula,
    parse_sequent,
    preorder_and_fullness,
    sequent_to_arrow_type,
    substitute_letter,
    term_universe,
    typecheck,
    w_iso_criterion,
)

__all__ = [
    "Arrow",
    "Formula",
    "FreecatError",
    "Sequent",
    "Signature",
    "TheoryConfig",
    "apply_policy",
    "apply_thinning",
    "bundled_script_text",
    "check_scripts",
    "closure_equal",
    "decide_equal_cartesian",
    "decide_equal_symmetric",
    "detect_collapse",
    "eval_finite_model",
    "expand_diag",
    "interpret_cartesian",
    "interpret_symmetric",
    "leaves",
    "object_image",
    "parse_arrow",
    "parse_formula",
    "parse_sequent",
    "preorder_and_fullness",
    "sequent_to_arrow_type",
    "substitute_letter",
    "term_universe",
    "typecheck",
    "w_iso_criterion",
]

__version__ = "0.1.0"
