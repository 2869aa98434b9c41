"""Verification report records shared by every suite and the CLI."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field


@dataclass
class VerificationReport:
    """One named check: parameters, residuals, and a pass flag.

    ``max_abs_err``/``max_rel_err`` are the largest residuals seen over all
    trials; ``passed`` reflects the check's stated tolerance.  ``elapsed_ms``
    is excluded from the deterministic body (it is timing noise).
    """

    check: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    trials: int = 1
    max_abs_err: float = 0.0
    max_rel_err: float = 0.0
    passed: bool = True
    elapsed_ms: float = 0.0

    def body(self) -> dict:
        """Deterministic portion: everything except the wall-clock field."""
        return {
            "check": self.check,
            "params": {k: _plain(v) for k, v in sorted(self.params.items())},
            "seed": int(self.seed),
            "trials": int(self.trials),
            "max_abs_err": float(self.max_abs_err),
            "max_rel_err": float(self.max_rel_err),
            "pass": bool(self.passed),
        }

    def to_json(self, include_elapsed: bool = True) -> str:
        obj = self.body()
        if include_elapsed:
            obj["elapsed_ms"] = round(self.elapsed_ms, 3)
        return json.dumps(obj, sort_keys=True, separators=(",", ":"))

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        params = " ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return (
            f"[{status}] {self.check:28s} {params:32s} "
            f"abs={self.max_abs_err:.3e} rel={self.max_rel_err:.3e}"
        )


def _plain(v):
    """Plain-Python scalar for JSON (numpy scalars are not serializable)."""
    if isinstance(v, bool):
        return v
    if hasattr(v, "item"):
        return v.item()
    if isinstance(v, float):
        return v
    if isinstance(v, int):
        return v
    return str(v) if not isinstance(v, str) else v


class _Clock:
    def __init__(self):
        self.ms = 0.0


@contextmanager
def timed_report():
    """Context manager measuring elapsed milliseconds into ``.ms``."""
    clock = _Clock()
    start = time.perf_counter()
    try:
        yield clock
    finally:
        clock.ms = (time.perf_counter() - start) * 1000.0
