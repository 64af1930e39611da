"""Outcome records for bounded checks."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"

Witness = tuple[str, ...]


@dataclass(frozen=True)
class Report:
    """Result of a check.

    Witnesses are tuples of rendered strings whose first entry names the
    violated law. A failing report always carries at least one.
    """

    status: str
    witnesses: tuple[Witness, ...] = ()
    stats: dict = field(default_factory=dict)
    depth: int | None = None

    def __post_init__(self):
        if self.status not in (PASS, FAIL, INCONCLUSIVE):
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == FAIL and not self.witnesses:
            raise ValueError("a failing report needs a witness")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self, command: str | None = None) -> str:
        payload = {"schema": 1}
        if command is not None:
            payload["command"] = command
        payload["status"] = self.status
        if self.depth is not None:
            payload["depth"] = self.depth
        payload["witnesses"] = [list(w) for w in self.witnesses]
        payload["stats"] = dict(sorted(self.stats.items()))
        return json.dumps(payload, indent=2, sort_keys=False)

    def to_text(self) -> str:
        lines = [f"status: {self.status}"]
        if self.depth is not None:
            lines.append(f"depth: {self.depth}")
        for w in self.witnesses:
            lines.append("witness: " + " ".join(w))
        for key, value in sorted(self.stats.items()):
            lines.append(f"stat {key}: {value}")
        return "\n".join(lines)


def verdict(witnesses, stats=None, depth=None, inconclusive=False) -> Report:
    """Build a report that fails iff there are witnesses."""
    witnesses = tuple(tuple(w) for w in witnesses)
    if witnesses:
        status = FAIL
    elif inconclusive:
        status = INCONCLUSIVE
    else:
        status = PASS
    return Report(status, witnesses, dict(stats or {}), depth)
