"""Mamdani fuzzy machinery: membership functions, rule tables, inference."""

from alexsim.fuzzy.engine import (
    FuzzyInference,
    GainAdjustment,
    aggregate,
    control_surface,
    defuzzify_centroid,
    evaluate_rules,
    infer,
)
from alexsim.fuzzy.membership import (
    TERMS,
    LinguisticTerm,
    LinguisticVariable,
    MembershipFunction,
    Shoulder,
    TermDegrees,
    fuzzify,
    standard_variable,
)
from alexsim.fuzzy.rules import (
    GRID_CHECKSUMS,
    RuleTable,
    dump_rule_grid,
    grid_checksum,
    grid_resource,
    kd_rules,
    ki_rules,
    kp_rules,
    load_rule_grid,
)

__all__ = [
    # Membership
    "TERMS",
    "LinguisticTerm",
    "LinguisticVariable",
    "MembershipFunction",
    "Shoulder",
    "TermDegrees",
    "fuzzify",
    "standard_variable",
    # Rules
    "GRID_CHECKSUMS",
    "RuleTable",
    "dump_rule_grid",
    "grid_checksum",
    "grid_resource",
    "kd_rules",
    "ki_rules",
    "kp_rules",
    "load_rule_grid",
    # Inference
    "FuzzyInference",
    "GainAdjustment",
    "aggregate",
    "control_surface",
    "defuzzify_centroid",
    "evaluate_rules",
    "infer",
]
