"""
Verdicts: the outcome of a decision procedure, with a witness cell on failure.
"""

from dataclasses import dataclass, field
from typing import Any

from .utils import format_approx, format_exact


@dataclass(frozen=True)
class Witness:
    """A cell on which a checked condition fails, with the offending exact value."""

    ball: Any
    value: Any
    note: str = ""

    def to_json(self) -> dict:
        ball = None
        if self.ball is not None:
            ball = {"center": str(self.ball.center), "level": self.ball.level}
        return {"ball": ball, "value": format_exact(self.value), "note": self.note}


@dataclass
class Verdict:
    """
    Outcome of a check.

    A failed verdict always carries a witness; `condition` names the clause that was decided
    (for failures, the first clause that failed).
    """

    ok: bool
    condition: str
    witness: Witness | None = None
    report: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.ok and self.witness is None:
            raise ValueError(f"failed verdict '{self.condition}' has no witness")

    def __bool__(self) -> bool:
        return self.ok

    def approx_json(self) -> dict:
        return {"ok": self.ok, "condition": self.condition, "report": format_approx(self.report)}

    def to_json(self, approx: bool = False) -> dict:
        data = {
            "ok": self.ok,
            "condition": self.condition,
            "witness": self.witness.to_json() if self.witness else None,
            "report": format_exact(self.report),
        }
        if approx:
            data["approx"] = format_approx(self.report)
        return data
