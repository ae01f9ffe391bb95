"""Run configuration, check records and the JSON verification report."""

from __future__ import annotations

import json
import math
import os
import uuid
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Any

import numpy as np

from .errors import KahlerVerifyError

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


class ConfigError(KahlerVerifyError, ValueError):
    """Invalid run configuration (exit code 2)."""


def tol_scale_from_env(env=None) -> float:
    env = os.environ if env is None else env
    raw = env.get("KV_TOL_SCALE", "1.0")
    try:
        val = float(raw)
    except ValueError:
        raise ConfigError(f"KV_TOL_SCALE must be a float, got {raw!r}") from None
    if not val > 0:
        raise ConfigError("KV_TOL_SCALE must be positive")
    return val


@dataclass(frozen=True)
class RunConfig:
    suite: str = "all"
    m: float = 1.0
    samples: int = 256
    resolution: int = 48
    refine: int = 2
    seed: int = 42
    out: str | None = None
    a: float = 1.0
    b: float = 2.0
    tol_scale: float = 1.0

    def __post_init__(self):
        if not self.m > 0:
            raise ConfigError("m must be positive")
        for name in ("samples", "resolution", "refine"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be a positive integer")
        if not 0 < self.a < self.b:
            raise ConfigError("annulus radii must satisfy 0 < a < b")
        if not self.tol_scale > 0:
            raise ConfigError("tolerance scale must be positive")

    def snapshot(self) -> dict:
        d = asdict(self)
        d.pop("out")
        return d


def _jsonable(x: Any):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


@dataclass
class CheckRecord:
    id: str
    description: str
    paper_ref: str
    computed: Any
    expected: Any
    residual: float
    tolerance: float
    status: str
    note: str = ""

    def __post_init__(self):
        if not self.paper_ref:
            raise ValueError(f"check {self.id} needs a paper_ref or 'plumbing'")

    def as_dict(self) -> dict:
        return _jsonable(asdict(self))


def judge(id: str, description: str, paper_ref: str, computed, expected, residual: float,
          tolerance: float, note: str = "") -> CheckRecord:
    residual = float(residual)
    ok = math.isfinite(residual) and residual <= tolerance
    return CheckRecord(id, description, paper_ref, computed, expected, residual, float(tolerance),
                       PASS if ok else FAIL, note)


def failed(id: str, description: str, paper_ref: str, tolerance: float, exc: BaseException) -> CheckRecord:
    return CheckRecord(id, description, paper_ref, None, None, float("inf"), float(tolerance), FAIL,
                       f"{type(exc).__name__}: {exc}")


@dataclass
class VerificationReport:
    config: dict
    checks: list = field(default_factory=list)
    run_id: str = field(default_factory=lambda: uuid.uuid4().hex)
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    @property
    def passed(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def summary(self) -> dict:
        counts = {PASS: 0, FAIL: 0, SKIPPED: 0}
        for c in self.checks:
            counts[c.status] += 1
        return counts

    def as_dict(self) -> dict:
        return {
            "run_id": self.run_id,
            "timestamp": self.timestamp,
            "config": _jsonable(self.config),
            "checks": [c.as_dict() for c in self.checks],
            "summary": self.summary(),
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2)

    def checks_json(self) -> str:
        """The check section alone: byte-identical across runs with the same config."""
        return json.dumps([c.as_dict() for c in self.checks], sort_keys=True, indent=2)
