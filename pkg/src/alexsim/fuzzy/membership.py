"""
Membership functions and seven-term linguistic variables.

A variable covers a closed universe with seven triangular terms whose
degrees sum to one everywhere (a Ruspini partition). The two outer terms
are shoulders that stay at full membership out to the universe edges.
"""

from enum import Enum
from typing import Dict, Iterator, NamedTuple, Tuple

import numpy as np
import skfuzzy as fuzz
from pydantic import BaseModel, ConfigDict, Field, model_validator


class Shoulder(str, Enum):
    """Which side of a membership function saturates at 1."""

    NONE = "none"
    LEFT = "left"
    RIGHT = "right"


class LinguisticTerm(str, Enum):
    """The seven ordered terms used by every controller variable."""

    NB = "NB"
    NM = "NM"
    NS = "NS"
    ZO = "ZO"
    PS = "PS"
    PM = "PM"
    PB = "PB"

    @property
    def index(self) -> int:
        return _TERM_ORDER[self]


TERMS: Tuple[LinguisticTerm, ...] = tuple(LinguisticTerm)
_TERM_ORDER = {term: i for i, term in enumerate(TERMS)}


class MembershipFunction(BaseModel):
    """
    Triangle (a, b, c) with peak b, optionally saturating on one side.

    A left shoulder is 1 for every x <= b; a right shoulder is 1 for every
    x >= b.
    """

    model_config = ConfigDict(frozen=True)

    a: float
    b: float
    c: float
    shoulder: Shoulder = Shoulder.NONE

    @model_validator(mode="after")
    def _ordered(self) -> "MembershipFunction":
        if not self.a <= self.b <= self.c:
            raise ValueError(f"need a <= b <= c, got ({self.a}, {self.b}, {self.c})")
        return self

    def __call__(self, x: float) -> float:
        a, b, c = self.a, self.b, self.c
        if x <= b:
            if self.shoulder is Shoulder.LEFT or x == b:
                return 1.0
            if x <= a:
                return 0.0
            return (x - a) / (b - a)
        if self.shoulder is Shoulder.RIGHT:
            return 1.0
        if x >= c:
            return 0.0
        return (c - x) / (c - b)

    def sample(self, xs: np.ndarray) -> np.ndarray:
        """Evaluate on a sorted grid."""
        xs = np.asarray(xs, dtype=float)
        if self.shoulder is Shoulder.LEFT:
            lo = min(self.a, float(xs[0]))
            return fuzz.trapmf(xs, [lo, lo, self.b, self.c])
        if self.shoulder is Shoulder.RIGHT:
            hi = max(self.c, float(xs[-1]))
            return fuzz.trapmf(xs, [self.a, self.b, hi, hi])
        return fuzz.trimf(xs, [self.a, self.b, self.c])

    def level_crossings(self, level: float) -> Tuple[float, ...]:
        """Points on the sloped edges where the function equals ``level``."""
        points = []
        if self.shoulder is not Shoulder.LEFT and self.b > self.a:
            points.append(self.a + level * (self.b - self.a))
        if self.shoulder is not Shoulder.RIGHT and self.c > self.b:
            points.append(self.c - level * (self.c - self.b))
        return tuple(points)


class TermDegrees(NamedTuple):
    """Membership degree of a crisp value in each of the seven terms."""

    NB: float = 0.0
    NM: float = 0.0
    NS: float = 0.0
    ZO: float = 0.0
    PS: float = 0.0
    PM: float = 0.0
    PB: float = 0.0

    @classmethod
    def of(cls, degrees: Dict[LinguisticTerm, float]) -> "TermDegrees":
        return cls(**{term.value: float(v) for term, v in degrees.items()})

    def degree(self, term: LinguisticTerm) -> float:
        return self[term.index]

    def active(self) -> Iterator[Tuple[LinguisticTerm, float]]:
        """Terms with a nonzero degree, in term order."""
        for term, d in zip(TERMS, self):
            if d > 0.0:
                yield term, d


class LinguisticVariable(BaseModel):
    """Seven-term fuzzy partition of the closed universe [lo, hi]."""

    model_config = ConfigDict(frozen=True)

    name: str = Field(default="x")
    lo: float
    hi: float
    terms: Tuple[MembershipFunction, ...] = Field(description="One function per term, NB..PB")

    @model_validator(mode="after")
    def _partition(self) -> "LinguisticVariable":
        if not self.lo < self.hi:
            raise ValueError(f"empty universe [{self.lo}, {self.hi}]")
        if len(self.terms) != len(TERMS):
            raise ValueError(f"need {len(TERMS)} terms, got {len(self.terms)}")
        peaks = [mf.b for mf in self.terms]
        if any(p1 <= p0 for p0, p1 in zip(peaks, peaks[1:])):
            raise ValueError(f"term peaks must increase strictly: {peaks}")
        if self.terms[0].shoulder is not Shoulder.LEFT:
            raise ValueError("NB must be a left shoulder")
        if self.terms[-1].shoulder is not Shoulder.RIGHT:
            raise ValueError("PB must be a right shoulder")
        return self

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def mf(self, term: LinguisticTerm) -> MembershipFunction:
        return self.terms[term.index]

    def clamp(self, x: float) -> float:
        return min(max(x, self.lo), self.hi)

    def breakpoints(self) -> np.ndarray:
        """All term corner points inside the universe."""
        pts = np.array([v for mf in self.terms for v in (mf.a, mf.b, mf.c)])
        return pts[(pts >= self.lo) & (pts <= self.hi)]

    def grid(self, samples: int) -> np.ndarray:
        return np.linspace(self.lo, self.hi, samples)


def standard_variable(lo: float = -3.0, hi: float = 3.0, name: str = "x") -> LinguisticVariable:
    """Seven evenly spaced triangles with shoulders at both ends."""
    peaks = np.linspace(lo, hi, len(TERMS))
    step = peaks[1] - peaks[0]
    terms = []
    for i, p in enumerate(peaks):
        shoulder = Shoulder.NONE
        if i == 0:
            shoulder = Shoulder.LEFT
        elif i == len(peaks) - 1:
            shoulder = Shoulder.RIGHT
        terms.append(
            MembershipFunction(a=float(p - step), b=float(p), c=float(p + step), shoulder=shoulder)
        )
    return LinguisticVariable(name=name, lo=lo, hi=hi, terms=tuple(terms))


def fuzzify(v: LinguisticVariable, x: float, clamp: bool = True) -> TermDegrees:
    """Degree of ``x`` in every term of ``v``; out-of-universe values are clamped."""
    if clamp:
        x = v.clamp(x)
    return TermDegrees(*(mf(x) for mf in v.terms))
