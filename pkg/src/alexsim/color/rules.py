"""
Color rule set: one LOW/MED/HIGH label per channel for every color.

As a matrix the rule set has one row per color and three one-hot columns per
channel.
"""

import csv
import io
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np
import sympy
from pydantic import BaseModel, ConfigDict, model_validator

from alexsim.color.sensor import CHANNELS, ColorClass, data_resource


class Level(str, Enum):
    LOW = "Low"
    MED = "Med"
    HIGH = "High"


LEVELS: Tuple[Level, ...] = tuple(Level)


class ColorRuleSet(BaseModel):
    """Channel labels (R, G, B) per color."""

    model_config = ConfigDict(frozen=True)

    rows: Dict[ColorClass, Tuple[Level, Level, Level]]

    @model_validator(mode="after")
    def _complete(self) -> "ColorRuleSet":
        missing = [c.value for c in ColorClass if c not in self.rows]
        if missing:
            raise ValueError(f"rule set lacks {', '.join(missing)}")
        return self

    def label(self, color: ColorClass, channel_index: int) -> Level:
        return self.rows[color][channel_index]

    def matrix(self) -> np.ndarray:
        """Binary 7x9 matrix, rows in color order."""
        m = np.zeros((len(ColorClass), len(CHANNELS) * len(LEVELS)), dtype=int)
        for i, color in enumerate(ColorClass):
            for ch, level in enumerate(self.rows[color]):
                m[i, ch * len(LEVELS) + LEVELS.index(level)] = 1
        return m


def parse_rule_set(text: str) -> ColorRuleSet:
    rows: Dict[ColorClass, Tuple[Level, Level, Level]] = {}
    for record in csv.DictReader(io.StringIO(text)):
        try:
            color = ColorClass(record["color"])
            labels: List[Level] = []
            for ch in CHANNELS:
                bits = [int(record[f"{ch.value.lower()}_{lv.name.lower()}"]) for lv in LEVELS]
                if sorted(bits) != [0, 0, 1]:
                    raise ValueError(f"channel {ch.value} must select exactly one level")
                labels.append(LEVELS[bits.index(1)])
        except (KeyError, TypeError, ValueError) as e:
            raise ValueError(f"bad rule row {record}: {e}") from e
        rows[color] = (labels[0], labels[1], labels[2])
    return ColorRuleSet(rows=rows)


@lru_cache(maxsize=None)
def _shipped_rules() -> ColorRuleSet:
    return parse_rule_set(data_resource("rules.csv"))


def load_rule_set(source: Union[str, Path, None] = None) -> ColorRuleSet:
    """The shipped rule set, or one read from CSV text or a file."""
    if source is None:
        return _shipped_rules()
    if isinstance(source, Path):
        return parse_rule_set(source.read_text(encoding="utf-8"))
    return parse_rule_set(source)


def rule_matrix_rank(rules: Union[ColorRuleSet, Sequence[Sequence[int]], np.ndarray]) -> int:
    """Rank over the rationals, by exact elimination."""
    m = rules.matrix() if isinstance(rules, ColorRuleSet) else np.asarray(rules, dtype=int)
    if m.size == 0:
        return 0
    return int(sympy.Matrix(m.tolist()).rank())


def distinct_rule_count(rules: ColorRuleSet) -> int:
    return len(set(rules.rows.values()))


def describe_rules(rules: ColorRuleSet) -> List[str]:
    """The rule set as IF-THEN sentences, one per color."""
    sentences = []
    for color in ColorClass:
        terms = " AND ".join(
            f"{ch.value} is {level.value}" for ch, level in zip(CHANNELS, rules.rows[color])
        )
        sentences.append(f"IF {terms} THEN the color is {color.value}")
    return sentences
