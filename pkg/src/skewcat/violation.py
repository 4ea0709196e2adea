"""A failed law instance, carrying enough data to re-check it."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Violation:
    law: str
    witness: tuple
    lhs: object
    rhs: object
    raw: tuple = field(default=(), compare=False, repr=False)

    def as_dict(self) -> dict:
        return {"law": self.law, "witness": [str(w) for w in self.witness], "lhs": str(self.lhs), "rhs": str(self.rhs)}

    def __str__(self):
        ws = ", ".join(str(w) for w in self.witness)
        return f"{self.law} [{ws}]: {self.lhs} != {self.rhs}"


def expect(out: list, law: str, witness, lhs, rhs, raw=()) -> bool:
    """Append a violation unless ``lhs == rhs``; return whether they agree."""
    if lhs == rhs:
        return True
    out.append(Violation(law, tuple(witness), lhs, rhs, tuple(raw)))
    return False
