"""Pass/fail records shared by the transform-law checks and the verification suite."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one check.

    ``measured`` is the worst discrepancy for agreement checks and the witness
    value for violation checks (``kind="violation"``), where passing means the
    measured value exceeds ``tolerance``.
    """

    name: str
    passed: bool
    measured: float
    tolerance: float
    kind: str = "agreement"
    details: dict = field(default_factory=dict)
    witness: Any = None

    @classmethod
    def agreement(cls, name, measured, tolerance, **kw) -> "CheckReport":
        measured = float(measured)
        return cls(name, bool(measured <= tolerance), measured, float(tolerance), **kw)

    @classmethod
    def violation(cls, name, measured, margin, **kw) -> "CheckReport":
        measured = float(measured)
        return cls(name, bool(measured > margin), measured, float(margin), kind="violation", **kw)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["measured"] = _finite(self.measured)
        d["details"] = {k: _finite(v) for k, v in self.details.items()}
        if self.passed:
            d.pop("witness")
        return d

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        rel = ">" if self.kind == "violation" else "<="
        return f"{status} {self.name}: measured {self.measured:.3e} ({rel} {self.tolerance:.1e} required)"


def _finite(v):
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v
