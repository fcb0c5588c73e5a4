"""Command reports and their deterministic JSON form."""

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

STATUSES = ("verified", "refuted", "skipped", "budget-exceeded")
EXIT_CODES = {"verified": 0, "skipped": 0, "refuted": 1, "budget-exceeded": 3}


def jsonable(x):
    """Plain JSON data from witnesses that may hold numpy scalars, tuples or fractions."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(jsonable(v) for v in x)
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (str, float)) or x is None:
        return x
    return str(x)


@dataclass
class Report:
    command: str
    status: str
    witnesses: dict = field(default_factory=dict)
    timing_ms: float = 0.0

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        self.witnesses = jsonable(self.witnesses)

    @property
    def exit_code(self):
        return EXIT_CODES[self.status]

    def to_dict(self, timing=True):
        out = {"command": self.command, "status": self.status, "witnesses": self.witnesses}
        if timing:
            out["timing_ms"] = round(self.timing_ms, 3)
        return out

    def to_json(self, timing=True, indent=None):
        return json.dumps(self.to_dict(timing), sort_keys=True, indent=indent)


def dumps(reports, timing=True):
    """A list of reports as stable, indented JSON."""
    return json.dumps([r.to_dict(timing) for r in reports], sort_keys=True, indent=2) + "\n"


def exit_code(reports):
    """The worst status decides: budget (3) over refuted (1) over ok (0)."""
    codes = {r.exit_code for r in reports}
    for c in (3, 1):
        if c in codes:
            return c
    return 0
