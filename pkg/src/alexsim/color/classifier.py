"""
Fuzzy color classification.

Each channel's normalized intensity is fuzzified into LOW/MED/HIGH degrees.
A color's activation is the minimum of the three degrees its rule selects;
the color with the highest activation wins and every color within the
ambiguity tolerance of the winner is reported alongside it.
"""

from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from alexsim.color.rules import LEVELS, ColorRuleSet, Level
from alexsim.color.sensor import (
    CHANNELS,
    FAR_CM,
    NEAR_CM,
    Channel,
    ChannelReading,
    ColorCalibration,
    ColorClass,
    raw_to_intensity,
    simulate_sensor,
)
from alexsim.config import get_settings
from alexsim.errors import CalibrationError, UnrecognizedColorError
from alexsim.fuzzy.membership import MembershipFunction, Shoulder

# Colors whose rule rows are unique.
UNAMBIGUOUS_COLORS: Tuple[ColorClass, ...] = (
    ColorClass.BLACK,
    ColorClass.RED,
    ColorClass.ORANGE,
    ColorClass.BLUE,
    ColorClass.PURPLE,
)


class LevelDegrees(NamedTuple):
    low: float
    med: float
    high: float

    def degree(self, level: Level) -> float:
        return self[LEVELS.index(level)]


class ChannelMFs(BaseModel):
    """LOW, MED and HIGH membership functions for each channel."""

    model_config = ConfigDict(frozen=True)

    functions: Dict[Channel, Tuple[MembershipFunction, MembershipFunction, MembershipFunction]]

    def peaks(self, channel: Channel) -> Tuple[float, float, float]:
        low, med, high = self.functions[channel]
        return low.b, med.b, high.b


def channel_partition(
    p_low: float, p_med: float, p_high: float
) -> Tuple[MembershipFunction, MembershipFunction, MembershipFunction]:
    """Three-term partition of unity with the given peaks."""
    if not p_low < p_med < p_high:
        raise CalibrationError(f"peaks must increase, got ({p_low}, {p_med}, {p_high})")
    return (
        MembershipFunction(a=p_low, b=p_low, c=p_med, shoulder=Shoulder.LEFT),
        MembershipFunction(a=p_low, b=p_med, c=p_high),
        MembershipFunction(a=p_med, b=p_high, c=p_high, shoulder=Shoulder.RIGHT),
    )


def calibrate_memberships(cal: ColorCalibration, rules: ColorRuleSet) -> ChannelMFs:
    """
    Fit each channel's partition to the calibration table.

    A level's peak is the median intensity of the near and far readings of
    every color whose rule uses that level on the channel. An unused LOW or
    HIGH level is mirrored from the MED peak across the nearer universe edge;
    an unused MED level cannot be placed.
    """
    functions = {}
    for ch_index, channel in enumerate(CHANNELS):
        groups: Dict[Level, List[float]] = {level: [] for level in LEVELS}
        for color in ColorClass:
            level = rules.label(color, ch_index)
            for table in (cal.near, cal.far):
                groups[level].append(raw_to_intensity(table[color].raw(channel), channel, cal))

        if not groups[Level.MED]:
            raise CalibrationError(
                f"rule label {Level.MED.value} unused on channel {channel.value}"
            )
        p_med = float(np.median(groups[Level.MED]))
        p_low = float(np.median(groups[Level.LOW])) if groups[Level.LOW] else -p_med
        p_high = float(np.median(groups[Level.HIGH])) if groups[Level.HIGH] else 2.0 - p_med
        logger.debug(
            f"channel {channel.value}: peaks low={p_low:.6f} med={p_med:.6f} high={p_high:.6f}"
        )
        functions[channel] = channel_partition(p_low, p_med, p_high)
    return ChannelMFs(functions=functions)


def fuzzify_channel(intensity: float, mfs: ChannelMFs, channel: Channel) -> LevelDegrees:
    if not 0.0 <= intensity <= 1.0:
        raise ValueError(f"intensity must lie in [0, 1], got {intensity}")
    low, med, high = mfs.functions[channel]
    return LevelDegrees(low(intensity), med(intensity), high(intensity))


class ColorResult(BaseModel):
    """Winning color, its activation and every color tied with it."""

    winner: ColorClass
    activation: float
    activations: Dict[ColorClass, float]
    ambiguous: List[ColorClass] = Field(default_factory=list)

    @property
    def is_ambiguous(self) -> bool:
        return len(self.ambiguous) > 1


def classify(
    reading: ChannelReading,
    mfs: ChannelMFs,
    rules: ColorRuleSet,
    cal: ColorCalibration,
    tolerance: Optional[float] = None,
) -> ColorResult:
    """
    Classify one reading.

    Ties go to the earlier color in enumeration order; ``ambiguous`` lists
    every color within ``tolerance`` of the winner, the winner included.
    """
    if tolerance is None:
        tolerance = get_settings().color.ambiguity_tolerance
    degrees = [
        fuzzify_channel(raw_to_intensity(reading.raw(ch), ch, cal), mfs, ch) for ch in CHANNELS
    ]
    activations = {
        color: min(d.degree(level) for d, level in zip(degrees, rules.rows[color]))
        for color in ColorClass
    }
    best = max(activations.values())
    if best <= 0.0:
        raise UnrecognizedColorError()
    ambiguous = [c for c, a in activations.items() if a >= best - tolerance]
    return ColorResult(
        winner=ambiguous[0], activation=best, activations=activations, ambiguous=ambiguous
    )


def classify_row_matches(result: ColorResult, truth: ColorClass) -> bool:
    """A reading counts as recognized when its true color is the winner or tied with it."""
    return result.winner is truth or truth in result.ambiguous


class SelfCheckRow(NamedTuple):
    color: ColorClass
    distance_cm: float
    result: ColorResult
    correct: bool


def self_classification(
    cal: ColorCalibration, mfs: ChannelMFs, rules: ColorRuleSet
) -> List[SelfCheckRow]:
    """Classify every calibration reading against its own color."""
    rows = []
    for color in ColorClass:
        for distance, table in ((FAR_CM, cal.far), (NEAR_CM, cal.near)):
            result = classify(table[color], mfs, rules, cal)
            rows.append(SelfCheckRow(color, distance, result, classify_row_matches(result, color)))
    return rows


class NoiseTrials(BaseModel):
    trials: int
    correct: int
    unrecognized: int

    @property
    def accuracy(self) -> float:
        return self.correct / self.trials if self.trials else 0.0


def run_noise_trials(
    cal: ColorCalibration,
    mfs: ChannelMFs,
    rules: ColorRuleSet,
    trials: int = 1000,
    noise: float = 0.02,
    seed: int = 0,
    colors: Sequence[ColorClass] = UNAMBIGUOUS_COLORS,
) -> NoiseTrials:
    """
    Classify noisy readings of random colors at random distances in the
    calibrated range; only an outright win counts as correct.
    """
    if trials <= 0:
        raise ValueError(f"trials must be positive, got {trials}")
    rng = np.random.default_rng(seed)
    correct = unrecognized = 0
    for _ in range(trials):
        color = colors[int(rng.integers(len(colors)))]
        distance = float(rng.uniform(NEAR_CM, FAR_CM))
        reading = simulate_sensor(color, distance, cal, noise=noise, rng=rng)
        try:
            result = classify(reading, mfs, rules, cal)
        except UnrecognizedColorError:
            unrecognized += 1
            continue
        correct += result.winner is color
    logger.debug(f"noise trials: {correct}/{trials} correct, {unrecognized} unrecognized")
    return NoiseTrials(trials=trials, correct=correct, unrecognized=unrecognized)
