"""Experiment configuration: defaults, optional JSON file, CLI overrides."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Dict, Mapping, Optional, Tuple

from core.utils.constants import (
    DEFAULT_MAX_ITER,
    DEFAULT_NS,
    DEFAULT_SEED,
    DEFAULT_TOL,
    LARGE_N,
    TABLE_ALPHAS,
)
from core.utils.logger import get_logger

_log = get_logger(__name__)


class ConfigError(ValueError):
    """Invalid experiment configuration (reported as a usage error)."""


@dataclass(frozen=True)
class ExperimentSpec:
    alphas: Tuple[float, ...] = TABLE_ALPHAS
    Ns: Tuple[int, ...] = DEFAULT_NS
    k_over_pi: float = 16.0
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    seed: int = DEFAULT_SEED
    output: Optional[str] = None
    include_large: bool = False
    jobs: int = 1
    extra: Dict[str, Any] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        try:
            object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
            object.__setattr__(self, "Ns", tuple(int(n) for n in self.Ns))
            for name, kind in (("k_over_pi", float), ("tol", float), ("max_iter", int),
                               ("seed", int), ("jobs", int)):
                object.__setattr__(self, name, kind(getattr(self, name)))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid configuration value: {exc}") from exc
        if not self.alphas or not self.Ns:
            raise ConfigError("alphas and Ns must be nonempty")
        if any(a < 0 for a in self.alphas):
            raise ConfigError("alphas must be >= 0")
        if any(n < 1 for n in self.Ns):
            raise ConfigError("every N must be >= 1")
        if not 0 < self.tol < 1:
            raise ConfigError(f"tol must lie in (0, 1), got {self.tol!r}")
        if self.max_iter < 1:
            raise ConfigError(f"max_iter must be >= 1, got {self.max_iter!r}")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs!r}")
        if not self.include_large and LARGE_N in self.Ns and len(self.Ns) > 1:
            _log.warning("N = %d skipped: pass --include-large to run it", LARGE_N)

    @property
    def grid_sizes(self) -> Tuple[int, ...]:
        """Ns to run; N = 640 only when large runs are enabled or it is the sole N."""
        if self.include_large:
            return self.Ns if LARGE_N in self.Ns else self.Ns + (LARGE_N,)
        return tuple(n for n in self.Ns if n != LARGE_N) or self.Ns

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "ExperimentSpec":
        known = {f.name for f in fields(cls)} - {"extra"}
        unknown = {k: v for k, v in data.items() if k not in known}
        values = {k: v for k, v in data.items() if k in known}
        try:
            return cls(**values, extra=unknown)
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    def to_header(self) -> Dict[str, Any]:
        """Spec echo for CSV header lines (no output path, no thread count)."""
        data = asdict(self)
        for key in ("output", "jobs", "extra"):
            data.pop(key, None)
        data["Ns"] = list(self.grid_sizes)
        data["alphas"] = list(self.alphas)
        return data


def load_spec(path: str) -> ExperimentSpec:
    """Read an ExperimentSpec from a JSON object file."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    return ExperimentSpec.from_mapping(data)


def merge_overrides(spec: ExperimentSpec, **overrides: Any) -> ExperimentSpec:
    """Apply CLI flags on top of *spec*; ``None`` means "flag not given"."""
    given = {k: v for k, v in overrides.items() if v is not None}
    return replace(spec, **given) if given else spec
