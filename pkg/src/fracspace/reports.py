"""The CheckReport record returned by every verification routine."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

from .quadrature import _jsonable

__all__ = ["CheckReport"]


@dataclass
class CheckReport:
    """Result of a verification.

    ``passed`` is always ``gap <= tol``; a NaN gap never passes.
    """

    check: str
    params: dict
    value: Any
    reference: Any
    gap: float
    tol: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(not math.isnan(self.gap) and self.gap <= self.tol)

    def to_dict(self) -> dict:
        return _jsonable({
            "check": self.check,
            "params": self.params,
            "value": self.value,
            "reference": self.reference,
            "gap": self.gap,
            "tol": self.tol,
            "pass": self.passed,
            "diagnostics": self.diagnostics,
        })

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def summary(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag} {self.check}: gap={self.gap:.3e} tol={self.tol:.1e}"
