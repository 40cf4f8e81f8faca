"""Resource limits for the exhaustive constructions."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Limits:
    # Cap on DFA states produced by derivative closure or products.
    max_states: int = 10_000
    # Cap on the carrier size of any finite algebra.
    max_carrier: int = 4096


DEFAULT_LIMITS = Limits()
