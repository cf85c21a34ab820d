"""Artifact identifiers: parsing, rendering, and per-kind numbering.

Every artifact carries an identifier made of a kind token and a positive
number. Rendered forms are zero-padded to two digits (FR01, IoT S01, IIA-01);
parsing also accepts unpadded and loosely spaced input, and RN as a legacy
prefix for business rules.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

FR = "FR"
NFR = "NFR"
BR = "BR"
NEED = "NEED"
STK = "STK"
SCENARIO = "IoT-S"
USE_CASE = "IoT-UC"
IIA = "IIA"
CR = "CR"

KINDS = (FR, NFR, BR, NEED, STK, SCENARIO, USE_CASE, IIA, CR)

_PATTERNS = (
    (NFR, re.compile(r"NFR\s*0*(\d+)", re.IGNORECASE)),
    (FR, re.compile(r"FR\s*0*(\d+)", re.IGNORECASE)),
    (BR, re.compile(r"(?:BR|RN)\s*0*(\d+)", re.IGNORECASE)),
    (NEED, re.compile(r"NEED\s*0*(\d+)", re.IGNORECASE)),
    (STK, re.compile(r"STK\s*0*(\d+)", re.IGNORECASE)),
    (SCENARIO, re.compile(r"IoT\s*S\s*0*(\d+)", re.IGNORECASE)),
    (USE_CASE, re.compile(r"IoT\s*UC\s*0*(\d+)", re.IGNORECASE)),
    (IIA, re.compile(r"IIA\s*-?\s*0*(\d+)", re.IGNORECASE)),
    (CR, re.compile(r"CR\s*0*(\d+)", re.IGNORECASE)),
)


@dataclass(frozen=True, order=True)
class Identifier:
    kind: str
    number: int

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown artifact kind {self.kind!r}")
        if self.number < 1:
            raise ValueError(f"identifier number must be positive, got {self.number}")

    def render(self) -> str:
        num = f"{self.number:02d}"
        if self.kind == SCENARIO:
            return f"IoT S{num}"
        if self.kind == USE_CASE:
            return f"IoT UC{num}"
        if self.kind == IIA:
            return f"IIA-{num}"
        return f"{self.kind}{num}"

    def __str__(self) -> str:
        return self.render()


def parse_identifier(text: str) -> Identifier | None:
    """Parse one identifier; returns None when the text matches no kind."""
    stripped = text.strip()
    for kind, pattern in _PATTERNS:
        match = pattern.fullmatch(stripped)
        if match:
            number = int(match.group(1))
            if number < 1:
                return None
            return Identifier(kind, number)
    return None


def parse_identifier_list(text: str) -> tuple[list[Identifier], list[str]]:
    """Parse a comma-separated identifier list; returns (parsed, rejected)."""
    parsed: list[Identifier] = []
    rejected: list[str] = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        ident = parse_identifier(chunk)
        if ident is None:
            rejected.append(chunk)
        elif ident not in parsed:
            parsed.append(ident)
    return parsed, rejected
