"""Run configuration: defaults, JSON round-trip, validation."""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, field

from .errors import PreconditionError

ENV_JOBS = "ZETALAB_JOBS"


def default_jobs() -> int:
    env = os.environ.get(ENV_JOBS, "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


@dataclass
class AuditConfig:
    """Sweep and audit configuration; mirrors the JSON config file schema."""

    t_min: float = 16.0
    t_max: float = 1.0e6
    t_points: int = 50
    spacing: str = "log"  # "log" | "linear"
    t: float | None = None  # single-height commands
    sigma: list = field(default_factory=list)
    c1: float = 3.0
    delta: float = 0.01
    radii: dict | None = None
    precision: str = "auto"  # "double" | "double_double" | "auto"
    jobs: int = 0  # 0: use ZETALAB_JOBS or 1
    json_path: str | None = None
    csv_path: str | None = None

    def __post_init__(self):
        if self.spacing not in ("log", "linear"):
            raise PreconditionError(f"spacing must be log|linear, got {self.spacing!r}")
        if self.precision not in ("auto", "double", "double_double"):
            raise PreconditionError(f"unknown precision mode {self.precision!r}")
        if self.t_points < 1:
            raise PreconditionError("t_points must be >= 1")
        if self.jobs == 0:
            self.jobs = default_jobs()

    def validate_conditional(self):
        """Conditional audits need t >= 16 (the sigma = 4 line checks do not)."""
        if self.t is not None and self.t < 16.0:
            raise PreconditionError(f"conditional audits need t >= 16, got {self.t}")
        if self.t is None and self.t_min < 16.0:
            raise PreconditionError(
                f"conditional sweeps need t_min >= 16, got {self.t_min}"
            )

    def t_grid(self) -> list:
        if self.t is not None:
            return [float(self.t)]
        if self.t_points == 1:
            return [float(self.t_min)]
        if self.spacing == "log":
            if self.t_min <= 0:
                raise PreconditionError("log spacing needs t_min > 0")
            ratio = (self.t_max / self.t_min) ** (1.0 / (self.t_points - 1))
            return [self.t_min * ratio**k for k in range(self.t_points)]
        step = (self.t_max - self.t_min) / (self.t_points - 1)
        return [self.t_min + step * k for k in range(self.t_points)]

    def to_json(self) -> dict:
        d = asdict(self)
        return {k: d[k] for k in sorted(d)}

    @classmethod
    def from_json(cls, data: dict) -> "AuditConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise PreconditionError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path: str) -> "AuditConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))
