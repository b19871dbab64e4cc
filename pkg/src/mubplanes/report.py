from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class CheckReport:
    """Outcome of a verifier.  A failing report always carries a witness."""

    name: str
    passed: bool
    details: list[str] = field(default_factory=list)
    witness: Any = None
    data: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.passed and self.witness is None:
            raise ValueError(f"failing report {self.name!r} needs a witness")

    def __bool__(self):
        return self.passed

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def line(self) -> str:
        detail = "; ".join(self.details)
        return f"CHECK {self.name} {self.verdict} {detail}".rstrip()


def combine(name: str, reports: list[CheckReport]) -> CheckReport:
    failed = [r for r in reports if not r.passed]
    details = [r.line() for r in reports]
    if failed:
        return CheckReport(name, False, details, witness=failed[0].witness)
    return CheckReport(name, True, details)
