"""
Seven-by-seven rule tables for the gain-scheduling controller.

A table maps (EC term, E term) to an output term. Tables are stored as
plain-text grids::

    EC\\E NB NM NS ZO PS PM PB
    NB PB PB PM PM PS ZO ZO
    ...

one header line, then one line per EC term, single spaces, trailing newline.
"""

import hashlib
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Dict, Tuple, Union

from pydantic import BaseModel, ConfigDict, field_validator

from alexsim.fuzzy.membership import TERMS, LinguisticTerm

GRID_HEADER = "EC\\E " + " ".join(t.value for t in TERMS)

# SHA-256 of the shipped grid files.
GRID_CHECKSUMS: Dict[str, str] = {
    "kp.grid": "2ab4ae6b970c03f660be3025d08f4fde35ff2c6c2f741536bdfb3f32a6b0c050",
    "ki.grid": "2b66151ea1e29a80d275f92b583fa57afb69e991bd0899b17ce806c935f10063",
    "kd.grid": "a50a8fedb164f150bc82216491723d65841eb82800e4542011fe71c2b3e7023d",
}


class RuleTable(BaseModel):
    """Output term for every (EC term, E term) pair; ``cells[ec][e]``."""

    model_config = ConfigDict(frozen=True)

    name: str = "rules"
    cells: Tuple[Tuple[LinguisticTerm, ...], ...]

    @field_validator("cells")
    @classmethod
    def _complete(
        cls, cells: Tuple[Tuple[LinguisticTerm, ...], ...]
    ) -> Tuple[Tuple[LinguisticTerm, ...], ...]:
        if len(cells) != len(TERMS) or any(len(row) != len(TERMS) for row in cells):
            raise ValueError(f"rule table must be {len(TERMS)}x{len(TERMS)}")
        return cells

    def lookup(self, ec: LinguisticTerm, e: LinguisticTerm) -> LinguisticTerm:
        return self.cells[ec.index][e.index]


def load_rule_grid(source: Union[str, Path], name: str = "rules") -> RuleTable:
    """Parse a rule grid from text, or from a file when given a ``Path``."""
    text = source.read_text(encoding="utf-8") if isinstance(source, Path) else source
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines or lines[0].split() != GRID_HEADER.split():
        raise ValueError(f"rule grid must start with '{GRID_HEADER}'")
    rows = lines[1:]
    if len(rows) != len(TERMS):
        raise ValueError(f"rule grid needs {len(TERMS)} rows, got {len(rows)}")

    cells = []
    for expected, line in zip(TERMS, rows):
        label, *codes = line.split()
        if label != expected.value:
            raise ValueError(f"expected row {expected.value}, got {label}")
        try:
            cells.append(tuple(LinguisticTerm(code) for code in codes))
        except ValueError as e:
            raise ValueError(f"row {label}: {e}") from e
    return RuleTable(name=name, cells=tuple(cells))


def dump_rule_grid(table: RuleTable) -> str:
    lines = [GRID_HEADER]
    for ec, row in zip(TERMS, table.cells):
        lines.append(" ".join([ec.value, *(cell.value for cell in row)]))
    return "\n".join(lines) + "\n"


def grid_resource(filename: str) -> str:
    """Text of a shipped grid file."""
    return (resources.files("alexsim.fuzzy") / "data" / filename).read_text(encoding="utf-8")


def grid_checksum(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@lru_cache(maxsize=None)
def _shipped(filename: str) -> RuleTable:
    return load_rule_grid(grid_resource(filename), name=filename.split(".")[0])


def kp_rules() -> RuleTable:
    """Proportional gain adjustments by error and error rate."""
    return _shipped("kp.grid")


def ki_rules() -> RuleTable:
    """Integral gain adjustments by error and error rate."""
    return _shipped("ki.grid")


def kd_rules() -> RuleTable:
    """Derivative gain adjustments by error and error rate."""
    return _shipped("kd.grid")
