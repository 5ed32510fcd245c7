"""Check records and suite reports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any


@dataclass
class CheckRecord:
    name: str
    inputs: dict
    lhs: Any
    rhs: Any
    distance: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "check": self.name,
            "inputs": self.inputs,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "distance": self.distance,
            "pass": self.passed,
        }


@dataclass
class Report:
    suite: str
    checks: list[CheckRecord]
    timings: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> str:
        return json.dumps(
            {
                "suite": self.suite,
                "checks": [c.to_dict() for c in self.checks],
                "pass": self.passed,
                "timings": self.timings,
            },
            indent=2,
        )
