"""Trial generation over (p, g, v, t) grids and Monte Carlo moment checks."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from ..bounds import best_run_bounds, elgamal_tuple_bounds
from ..errors import ConfigurationError, InvariantViolation, ParameterError
from ..modarith import is_primitive_root, primes_in_range, primitive_roots
from ..seqgen import ElGamalParams, elgamal_sequence, random_balanced_sequence
from ..stats import run_counts, tuple_counts
from ..theory import MomentPair, run_moments_exact, tuple_moments_exact
from .config import ExperimentConfig


def _digest(*parts) -> bytes:
    return hashlib.sha256(":".join(map(str, parts)).encode()).digest()


def trial_seed(seed: int, p: int, g: int, v: int) -> int:
    """64-bit seed for one (p, g, v) trial, independent of scheduling order."""
    return int.from_bytes(_digest("trial", seed, p, g, v)[:8], "big")


def select_primes(config: ExperimentConfig, v: int, candidates: Sequence[int]) -> list[int]:
    """Pick ``pairs_per_v`` primes for this v by ranking candidates on a seeded hash."""
    eligible = [p for p in candidates if (p - 1) % v == 0 and 1 < v < p - 1]
    if config.require_g_equals_v:
        eligible = [p for p in eligible if is_primitive_root(v, p)]
    if len(eligible) < config.pairs_per_v:
        lo, hi = config.prime_range
        raise ConfigurationError(
            f"v={v}: only {len(eligible)} eligible primes in [{lo}, {hi}], "
            f"need {config.pairs_per_v}"
        )
    ranked = sorted(eligible, key=lambda p: _digest("pair", config.seed, v, p))
    return sorted(ranked[: config.pairs_per_v])


@dataclass(frozen=True)
class TrialRecord:
    p: int
    g: int
    v: int
    t: int
    seed: int
    min_lambda: int
    max_lambda: int
    lb: int
    ub: int
    lb_hit: bool
    ub_hit: bool
    all_tuples_present: bool
    run_per_symbol: tuple[int, ...]  # rho(b, t) for b = 0..v-1
    run_lb: int
    run_ub: int
    run_total: int  # rho(t)
    run_total_next: int  # rho(t+1)
    baseline_min_lambda: int | None = None
    baseline_max_lambda: int | None = None
    raw_counts: tuple[int, ...] | None = None

    @property
    def g_equals_v(self) -> bool:
        return self.g == self.v

    @property
    def run_lb_hit(self) -> bool:
        return self.run_lb in self.run_per_symbol

    @property
    def run_ub_hit(self) -> bool:
        return self.run_ub in self.run_per_symbol

    @property
    def run_ratio(self) -> float | None:
        """rho(t+1) * v / rho(t); None when rho(t) = 0."""
        if self.run_total == 0:
            return None
        return self.run_total_next * self.v / self.run_total

    @property
    def sort_key(self) -> tuple[int, int, int, int]:
        return (self.p, self.g, self.v, self.t)


TRIAL_COLUMNS = (
    "p", "g", "v", "t", "seed", "min_lambda", "max_lambda", "lb", "ub", "lb_hit", "ub_hit",
    "all_tuples_present", "run_per_symbol", "run_lb", "run_ub", "run_total", "run_total_next",
    "run_ratio", "baseline_min_lambda", "baseline_max_lambda",
)


def record_row(rec: TrialRecord) -> dict:
    ratio = rec.run_ratio
    return {
        "p": rec.p, "g": rec.g, "v": rec.v, "t": rec.t, "seed": rec.seed,
        "min_lambda": rec.min_lambda, "max_lambda": rec.max_lambda,
        "lb": rec.lb, "ub": rec.ub,
        "lb_hit": int(rec.lb_hit), "ub_hit": int(rec.ub_hit),
        "all_tuples_present": int(rec.all_tuples_present),
        "run_per_symbol": " ".join(map(str, rec.run_per_symbol)),
        "run_lb": rec.run_lb, "run_ub": rec.run_ub,
        "run_total": rec.run_total, "run_total_next": rec.run_total_next,
        "run_ratio": "" if ratio is None else repr(ratio),
        "baseline_min_lambda": "" if rec.baseline_min_lambda is None else rec.baseline_min_lambda,
        "baseline_max_lambda": "" if rec.baseline_max_lambda is None else rec.baseline_max_lambda,
    }


def _audit(rec: TrialRecord) -> None:
    if not rec.lb <= rec.min_lambda <= rec.max_lambda <= rec.ub:
        raise InvariantViolation(
            f"tuple bound violated at p={rec.p} g={rec.g} v={rec.v} t={rec.t}: "
            f"lambda in [{rec.min_lambda}, {rec.max_lambda}] vs bounds [{rec.lb}, {rec.ub}]"
        )
    for b, r in enumerate(rec.run_per_symbol):
        if not rec.run_lb <= r <= rec.run_ub:
            raise InvariantViolation(
                f"run bound violated at p={rec.p} g={rec.g} v={rec.v} t={rec.t} b={b}: "
                f"rho={r} vs bounds [{rec.run_lb}, {rec.run_ub}]"
            )


def _extremes(counts: dict[int, int], size: int) -> tuple[int, int, bool]:
    present = len(counts) == size
    lo = min(counts.values()) if present else 0
    return lo, max(counts.values()), present


def trials_for(p: int, g: int, v: int, config: ExperimentConfig) -> list[TrialRecord]:
    """All t-records for one (p, g, v), sharing the sequence and the baseline draw."""
    seq = elgamal_sequence(ElGamalParams(p, g, v))
    runs = run_counts(seq)
    seed = trial_seed(config.seed, p, g, v)
    base = None
    if config.baseline and (p - 1) % v == 0:
        base = random_balanced_sequence(v, p - 1, np.random.default_rng(seed))
    out = []
    for t in config.t_values:
        if t > p - 1:
            continue
        size = v**t
        stats = tuple_counts(seq, t)
        lo, hi, present = _extremes(stats.counts, size)
        tb = elgamal_tuple_bounds(p, g, v, t)
        rb = best_run_bounds(p, g, v, t)
        b_lo = b_hi = None
        if base is not None:
            b_lo, b_hi, _ = _extremes(tuple_counts(base, t).counts, size)
        raw = None
        if config.retain_raw and size <= config.raw_size_limit:
            raw = tuple(stats.dense().tolist())
        rec = TrialRecord(
            p=p, g=g, v=v, t=t, seed=seed,
            min_lambda=lo, max_lambda=hi, lb=tb.lower, ub=tb.upper,
            lb_hit=lo == tb.lower, ub_hit=hi == tb.upper, all_tuples_present=present,
            run_per_symbol=tuple(runs.rho(b, t) for b in range(v)),
            run_lb=rb.lower, run_ub=rb.upper,
            run_total=runs.total(t), run_total_next=runs.total(t + 1),
            baseline_min_lambda=b_lo, baseline_max_lambda=b_hi, raw_counts=raw,
        )
        _audit(rec)
        out.append(rec)
    return out


def trial_points(config: ExperimentConfig) -> list[tuple[int, int, int]]:
    """The (p, g, v) points a config selects, in (p, g, v) order."""
    lo, hi = config.prime_range
    candidates = primes_in_range(max(lo, 3), hi)
    points = []
    for v in config.v_values:
        for p in select_primes(config, v, candidates):
            gens = [v] if config.require_g_equals_v else primitive_roots(p, config.generators_per_prime)
            points.extend((p, g, v) for g in gens)
    return sorted(points)


def run_trial_grid(config: ExperimentConfig) -> Iterator[TrialRecord]:
    """Records sorted by (p, g, v, t); aborts on the first bound violation."""
    for p, g, v in trial_points(config):
        yield from trials_for(p, g, v, config)


@dataclass(frozen=True)
class MonteCarloResult:
    empirical_mean: float
    empirical_variance: float
    theory: MomentPair
    z_score: float | None  # None when the theoretical variance is 0
    samples: int


def _sample_matrix(v: int, n: int, samples: int, rng: np.random.Generator) -> np.ndarray:
    base = np.repeat(np.arange(v, dtype=np.int64), n // v)
    return rng.permuted(np.tile(base, (samples, 1)), axis=1)


def _tuple_hits(mat: np.ndarray, z: Sequence[int]) -> np.ndarray:
    hit = np.ones(mat.shape, dtype=bool)
    for k, c in enumerate(z):
        hit &= np.roll(mat, -k, axis=1) == c
    return hit.sum(axis=1)


def _run_hits(mat: np.ndarray, b: int, t: int) -> np.ndarray:
    hit = np.roll(mat, 1, axis=1) != b
    for k in range(t):
        hit &= np.roll(mat, -k, axis=1) == b
    hit &= np.roll(mat, -t, axis=1) != b
    return hit.sum(axis=1)


def monte_carlo_moments(
    v: int,
    n: int,
    *,
    z: Sequence[int] | None = None,
    run: tuple[int, int] | None = None,
    samples: int = 10**4,
    seed: int = 0,
    chunk: int = 2000,
) -> MonteCarloResult:
    """Compare sampled lambda(z) or rho(b, t) over B(v, n) with the exact moments."""
    if (z is None) == (run is None):
        raise ParameterError("give exactly one of z or run=(b, t)")
    if samples < 2:
        raise ParameterError("need at least two samples")
    if z is not None:
        theory = tuple_moments_exact(v, n, z)
    else:
        b, t = run
        if not 0 <= b < v:
            raise ParameterError(f"symbol {b} outside Z_{v}")
        theory = run_moments_exact(v, n, t)
    rng = np.random.default_rng(seed)
    values = []
    left = samples
    while left:
        m = min(chunk, left)
        mat = _sample_matrix(v, n, m, rng)
        values.append(_tuple_hits(mat, z) if z is not None else _run_hits(mat, *run))
        left -= m
    data = np.concatenate(values).astype(np.float64)
    mean = float(data.mean())
    var = float(data.var(ddof=1))
    z_score = None
    if theory.variance > 0:
        z_score = (mean - float(theory.mean)) / math.sqrt(float(theory.variance) / samples)
    return MonteCarloResult(mean, var, theory, z_score, samples)
