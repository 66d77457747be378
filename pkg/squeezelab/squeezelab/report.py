"""Machine-readable reports written by the command-line tools."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from squeezelab.settings.custom_types import CheckDict, JSONType, ReportDict
from squeezelab.settings.global_variables import REPORT_SCHEMA_VERSION


@dataclass
class Report:
    """
    A report under construction.

    Sections hold plain numbers; every check records the measured value next
    to the bound it was held to. ``passed`` is the conjunction of the checks,
    so a report without checks passes.
    """

    command: str
    input: dict[str, JSONType] = field(default_factory=dict)
    sections: dict[str, JSONType] = field(default_factory=dict)
    checks: list[CheckDict] = field(default_factory=list)

    def add_section(self, name: str, value: JSONType) -> None:
        self.sections[name] = value

    def add_check(
        self, name: str, residual: float, tolerance: float, expected: JSONType = None
    ) -> bool:
        """Record ``residual <= tolerance``; NaN never passes."""
        passed = bool(not math.isnan(residual) and residual <= tolerance)
        check: CheckDict = {
            "name": name,
            "passed": passed,
            "value": float(residual),
            "tolerance": float(tolerance),
        }
        if expected is not None:
            check["expected"] = expected
        self.checks.append(check)
        return passed

    def add_flag(self, name: str, passed: bool, value: JSONType = None) -> bool:
        """Record a yes/no claim; the tolerance is 0."""
        self.checks.append(
            {"name": name, "passed": bool(passed), "value": value, "tolerance": 0.0}
        )
        return bool(passed)

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    @property
    def failures(self) -> list[str]:
        return [c["name"] for c in self.checks if not c["passed"]]

    def to_dict(self) -> ReportDict:
        out: ReportDict = {
            "schema_version": REPORT_SCHEMA_VERSION,
            "command": self.command,
            "sections": self.sections,
            "checks": self.checks,
            "passed": self.passed,
        }
        if self.input:
            out["input"] = self.input
        return out

    def to_json(self) -> str:
        """Indented JSON; floats use the shortest repr that reads back exactly."""
        return json.dumps(self.to_dict(), indent=2)
