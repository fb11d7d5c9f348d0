"""Simulated color sensor and fuzzy color classification."""

from alexsim.color.classifier import (
    UNAMBIGUOUS_COLORS,
    ChannelMFs,
    ColorResult,
    LevelDegrees,
    NoiseTrials,
    SelfCheckRow,
    calibrate_memberships,
    channel_partition,
    classify,
    classify_row_matches,
    fuzzify_channel,
    run_noise_trials,
    self_classification,
)
from alexsim.color.rules import (
    LEVELS,
    ColorRuleSet,
    Level,
    describe_rules,
    distinct_rule_count,
    load_rule_set,
    parse_rule_set,
    rule_matrix_rank,
)
from alexsim.color.sensor import (
    CHANNELS,
    DATA_CHECKSUMS,
    FAR_CM,
    NEAR_CM,
    Channel,
    ChannelReading,
    ColorCalibration,
    ColorClass,
    data_checksum,
    data_resource,
    load_calibration,
    parse_calibration,
    raw_to_intensity,
    simulate_sensor,
)

__all__ = [
    # Sensor
    "CHANNELS",
    "DATA_CHECKSUMS",
    "FAR_CM",
    "NEAR_CM",
    "Channel",
    "ChannelReading",
    "ColorCalibration",
    "ColorClass",
    "data_checksum",
    "data_resource",
    "load_calibration",
    "parse_calibration",
    "raw_to_intensity",
    "simulate_sensor",
    # Rules
    "LEVELS",
    "ColorRuleSet",
    "Level",
    "describe_rules",
    "distinct_rule_count",
    "load_rule_set",
    "parse_rule_set",
    "rule_matrix_rank",
    # Classification
    "UNAMBIGUOUS_COLORS",
    "ChannelMFs",
    "ColorResult",
    "LevelDegrees",
    "NoiseTrials",
    "SelfCheckRow",
    "calibrate_memberships",
    "channel_partition",
    "classify",
    "classify_row_matches",
    "fuzzify_channel",
    "run_noise_trials",
    "self_classification",
]
