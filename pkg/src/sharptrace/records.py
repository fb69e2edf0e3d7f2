"""Structured result records shared by the ball and half-space evaluators."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class InequalityReport:
    """Both sides of a trace inequality for one datum.

    ``breakdown`` splits ``rhs`` into named contributions that sum to it.
    ``extras`` carries side computations (alternative constants, the printed
    boundary form, quadrature cross-checks).
    """

    kind: str
    lhs: float
    rhs: float
    sharp_constant: float
    breakdown: dict
    params: dict
    datum: dict
    quad: dict
    extras: dict = field(default_factory=dict)

    @property
    def ratio(self) -> float:
        if self.lhs == 0:
            return 1.0 if self.rhs == 0 else math.inf
        return self.rhs / self.lhs

    @property
    def gap(self) -> float:
        return self.rhs - self.lhs

    def breakdown_closes(self, rel: float = 1e-12) -> bool:
        total = math.fsum(self.breakdown.values())
        return abs(total - self.rhs) <= rel * max(1.0, abs(self.rhs))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "sharp_constant": self.sharp_constant,
            "breakdown": dict(self.breakdown),
            "params": dict(self.params),
            "datum": dict(self.datum),
            "quad": dict(self.quad),
            "extras": dict(self.extras),
        }
