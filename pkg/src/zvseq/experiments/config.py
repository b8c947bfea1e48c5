"""Experiment configuration: a line-oriented ``key = value`` file."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields
from pathlib import Path

from ..errors import ConfigurationError

OUTPUT_DIR_ENV = "ZVSEQ_OUTPUT_DIR"


@dataclass(frozen=True)
class ExperimentConfig:
    prime_range: tuple[int, int] = (10**4, 10**6)
    pairs_per_v: int = 20
    v_values: tuple[int, ...] = (2, 3, 4, 5, 6, 7, 8)
    t_values: tuple[int, ...] = (2, 3, 4)
    generators_per_prime: int = 10
    require_g_equals_v: bool = False
    seed: int = 20240101
    output_dir: str = "zvseq-results"
    retain_raw: bool = True
    raw_size_limit: int = 10**6
    bin_width: float = 0.1
    gap_outlier_threshold: int = 10
    baseline: bool = True

    def __post_init__(self):
        lo, hi = self.prime_range
        if lo < 3 or hi < lo:
            raise ConfigurationError(f"prime_range must satisfy 3 <= min <= max, got {self.prime_range}")
        if self.pairs_per_v < 1 or self.generators_per_prime < 1:
            raise ConfigurationError("pairs_per_v and generators_per_prime must be at least 1")
        if not self.v_values or any(v < 2 for v in self.v_values):
            raise ConfigurationError(f"every v must be at least 2, got {self.v_values}")
        if not self.t_values or any(t < 1 for t in self.t_values):
            raise ConfigurationError(f"every t must be at least 1, got {self.t_values}")
        if not 0 <= self.seed < 2**64:
            raise ConfigurationError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.bin_width <= 0:
            raise ConfigurationError("bin_width must be positive")

    def resolved_output_dir(self) -> Path:
        return Path(os.environ.get(OUTPUT_DIR_ENV) or self.output_dir)


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_ints(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.replace(",", " ").split())


_PARSERS = {
    "prime_range": lambda s: tuple(_parse_ints(s)),
    "prime_min": int,
    "prime_max": int,
    "pairs_per_v": int,
    "v_values": _parse_ints,
    "t_values": _parse_ints,
    "generators_per_prime": int,
    "require_g_equals_v": _parse_bool,
    "seed": int,
    "output_dir": str.strip,
    "retain_raw": _parse_bool,
    "raw_size_limit": int,
    "bin_width": float,
    "gap_outlier_threshold": int,
    "baseline": _parse_bool,
}


def parse_config(text: str) -> ExperimentConfig:
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _PARSERS:
            raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
        try:
            values[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigurationError(f"line {lineno}: bad value for {key}: {exc}") from exc
    lo = values.pop("prime_min", None)
    hi = values.pop("prime_max", None)
    if lo is not None or hi is not None:
        default_lo, default_hi = ExperimentConfig.prime_range
        values["prime_range"] = (lo or default_lo, hi or default_hi)
    if "prime_range" in values and len(values["prime_range"]) != 2:
        raise ConfigurationError("prime_range needs exactly two integers")
    return ExperimentConfig(**values)


def load_config(path: str | os.PathLike) -> ExperimentConfig:
    return parse_config(Path(path).read_text())


def dump_config(config: ExperimentConfig) -> str:
    lines = []
    for f in fields(config):
        value = getattr(config, f.name)
        if isinstance(value, tuple):
            value = ",".join(map(str, value))
        elif isinstance(value, bool):
            value = str(value).lower()
        lines.append(f"{f.name} = {value}")
    return "\n".join(lines) + "\n"


__all__ = ["ExperimentConfig", "OUTPUT_DIR_ENV", "dump_config", "load_config", "parse_config"]
