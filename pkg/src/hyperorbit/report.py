"""Machine-readable run reports: named checks with measured values and bounds."""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field


@dataclass
class Check:
    """One verified inequality or equality, with its measured value and bound.

    ``verifies`` is a stable identifier of the property being checked, so
    reports can be compared across runs and versions.
    """

    name: str
    status: str              # "pass" | "fail" | "skip"
    measured: float | None = None
    bound: float | None = None
    verifies: str = ""

    @property
    def margin(self) -> float | None:
        if self.measured is None or self.bound is None:
            return None
        return self.measured - self.bound

    def to_json(self) -> dict:
        def _num(x):
            if x is None:
                return None
            if math.isinf(x):
                return "-inf" if x < 0 else "inf"
            return x
        return {
            "name": self.name,
            "status": self.status,
            "measured": _num(self.measured),
            "bound": _num(self.bound),
            "margin": _num(self.margin),
            "verifies": self.verifies,
        }


def check_leq(name: str, measured: float, bound: float, verifies: str = "",
              strict: bool = False) -> Check:
    ok = measured < bound if strict else measured <= bound
    return Check(name, "pass" if ok else "fail", measured, bound, verifies)


def check_flag(name: str, ok: bool, verifies: str = "") -> Check:
    return Check(name, "pass" if ok else "fail", 0.0 if ok else 1.0, 0.0, verifies)


@dataclass
class RunReport:
    """A command run: parameters, checks, and wall time; fails if any check fails."""

    command: str
    parameters: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    wall_time: float = 0.0
    _t0: float = field(default_factory=time.perf_counter, repr=False)

    def add(self, check: Check) -> None:
        self.checks.append(check)

    def extend(self, checks) -> None:
        self.checks.extend(checks)

    def finish(self) -> "RunReport":
        self.wall_time = time.perf_counter() - self._t0
        return self

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    @property
    def status(self) -> str:
        return "pass" if self.ok else "fail"

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "status": self.status,
            "checks": [c.to_json() for c in self.checks],
            "wall_time": self.wall_time,
        }

    def write(self, path=None) -> None:
        text = json.dumps(self.to_json(), indent=2, sort_keys=False)
        if path is None:
            print(text)
        else:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")


def certificates_to_checks(certs, verifies: str) -> list:
    """Convert construction certificates into report checks."""
    out = []
    for c in certs:
        idx = "" if c.index is None else f"[{c.index}]"
        out.append(Check(f"{c.name}{idx}", "pass" if c.ok else "fail",
                         c.measured, c.bound, verifies))
    return out
