"""Verification reports with deterministic JSON and CSV serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, NamedTuple

__all__ = ["CaseResult", "VerificationReport", "jsonable"]


class CaseResult(NamedTuple):
    id: str
    lhs: float
    rhs: float
    constant: float


def jsonable(obj: Any) -> Any:
    """Recursively convert to JSON-safe values; non-finite floats become strings."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else repr(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "item") and callable(obj.item):  # numpy scalars
        return jsonable(obj.item())
    return obj


@dataclass
class VerificationReport:
    """Per-case constants, suite supremum and verdict for one assumption."""

    assumption: str
    backend: dict
    params: dict
    per_case: list[CaseResult]
    suite_constant: float
    refinement_ratio: float | None = None
    verdict: str = "computed"
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return jsonable({
            "assumption": self.assumption,
            "backend": self.backend,
            "params": self.params,
            "per_case": [c._asdict() for c in self.per_case],
            "suite_constant": self.suite_constant,
            "refinement_ratio": self.refinement_ratio,
            "verdict": self.verdict,
            **({"extra": self.extra} if self.extra else {}),
        })

    def to_json(self, **extra) -> str:
        data = self.as_dict()
        data.update(jsonable(extra))
        return json.dumps(data, sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["assumption", "id", "lhs", "rhs", "constant"])
        for c in self.per_case:
            w.writerow([self.assumption, c.id, repr(float(c.lhs)), repr(float(c.rhs)),
                        repr(float(c.constant))])
        return buf.getvalue()
