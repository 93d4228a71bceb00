"""Three-valued check results with replayable witnesses.

Every decision procedure in the package returns a Verdict: Yes with a
certificate, No with a counterexample, or Inconclusive with a budget report.
The `checked` dict records the bounds, budgets and variants the verdict is
valid for; a verdict never claims more than what was actually tested.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class Outcome(Enum):
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"


@dataclass
class Verdict:
    outcome: Outcome
    witness: Any = None
    checked: dict = field(default_factory=dict)

    @property
    def is_yes(self) -> bool:
        return self.outcome is Outcome.YES

    @property
    def is_no(self) -> bool:
        return self.outcome is Outcome.NO

    @property
    def is_inconclusive(self) -> bool:
        return self.outcome is Outcome.INCONCLUSIVE

    def exit_code(self) -> int:
        return {Outcome.YES: 0, Outcome.NO: 1, Outcome.INCONCLUSIVE: 2}[self.outcome]

    def describe(self) -> dict:
        return {
            "outcome": self.outcome.value,
            "witness": _jsonable(self.witness),
            "checked": _jsonable(self.checked),
        }


def yes(witness: Any = None, **checked) -> Verdict:
    return Verdict(Outcome.YES, witness, dict(checked))


def no(witness: Any = None, **checked) -> Verdict:
    return Verdict(Outcome.NO, witness, dict(checked))


def inconclusive(witness: Any = None, **checked) -> Verdict:
    return Verdict(Outcome.INCONCLUSIVE, witness, dict(checked))


def conjoin(verdicts: list[tuple[Any, Verdict]], **checked) -> Verdict:
    """All-of combinator.  First No wins (deterministic: input order), else
    first Inconclusive; witnesses are tagged with their label."""
    for label, v in verdicts:
        if v.is_no:
            return Verdict(Outcome.NO, {"at": label, "witness": v.witness},
                           {**checked, **v.checked})
    for label, v in verdicts:
        if v.is_inconclusive:
            return Verdict(Outcome.INCONCLUSIVE, {"at": label, "witness": v.witness},
                           {**checked, **v.checked})
    return Verdict(Outcome.YES, {"parts": len(verdicts)}, dict(checked))


def _jsonable(obj: Any) -> Any:
    """Best-effort conversion of witnesses to JSON-compatible data."""
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "describe"):
        return obj.describe()
    return repr(obj)
