"""Suite reports: an ordered list of named checks serialized to JSON."""

import json
import time


class Check:
    __slots__ = ("name", "status", "witness")

    def __init__(self, name, status, witness=None):
        self.name = name
        self.status = status
        self.witness = witness

    @property
    def passed(self):
        return self.status == "pass"

    @property
    def failed(self):
        # "discrepancy" marks a documented mismatch with a displayed formula
        return self.status not in ("pass", "discrepancy")

    def as_dict(self):
        d = {"name": self.name, "status": self.status}
        if self.witness is not None:
            d["witness"] = self.witness
        return d

    def __repr__(self):
        return f"Check({self.name!r}, {self.status!r})"


def check(name, ok, witness=None):
    return Check(name, "pass" if ok else "fail", None if ok else witness)


class Report:
    def __init__(self, suite, n, parameters, checks=None, elapsed=0.0):
        self.suite = suite
        self.n = n
        self.parameters = dict(parameters)
        self.checks = list(checks or [])
        self.elapsed = elapsed

    @property
    def passed(self):
        return not self.failures()

    def failures(self):
        return [c for c in self.checks if c.failed]

    def discrepancies(self):
        return [c for c in self.checks if c.status == "discrepancy"]

    def as_dict(self, elapsed=True):
        d = {"suite": self.suite, "n": self.n, "parameters": self.parameters,
             "checks": [c.as_dict() for c in self.checks]}
        if elapsed:
            d["elapsed"] = round(self.elapsed, 3)
        return d

    def to_json(self, elapsed=True):
        return json.dumps(self.as_dict(elapsed), indent=2, sort_keys=False)

    def summary(self):
        bad = self.failures()
        good = sum(c.passed for c in self.checks)
        dis = self.discrepancies()
        return (f"{self.suite} n={self.n}: {good}/{len(self.checks)} pass"
                + ("" if not dis else f", {len(dis)} documented discrepancy")
                + ("" if not bad else " | failing: " + ", ".join(c.name for c in bad[:6])))


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        return False
