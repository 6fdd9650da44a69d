from __future__ import annotations

from pydantic import BaseModel

VERDICT_HEADER = ["check", "statistic", "value", "target", "sigma", "pass"]


class Verdict(BaseModel):
    """One pass/fail line of a verification report."""

    check: str
    statistic: str
    value: float
    target: float
    sigma: float = 0.0
    passed: bool

    def row(self) -> tuple:
        return (
            self.check,
            self.statistic,
            self.value,
            self.target,
            self.sigma,
            "pass" if self.passed else "fail",
        )
