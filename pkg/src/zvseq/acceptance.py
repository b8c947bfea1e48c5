"""The acceptance suite: eleven end-to-end checks shared by the CLI and the tests."""

from __future__ import annotations

import filecmp
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from . import bounds, oracle, stats, theory
from .experiments import ExperimentConfig, monte_carlo_moments, run_experiment
from .modarith import is_primitive_root, primes_in_range, primitive_roots
from .seqgen import SequenceZv, elgamal_permutation, least_period


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.1f}s)"


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


def check_safe_prime_probabilities() -> tuple[bool, str]:
    t0 = time.perf_counter()
    a = float(theory.short_period_probability(83, 2))
    b = float(theory.short_period_probability(137, 8))
    elapsed = time.perf_counter() - t0
    ok = _rel(a, 4.708e-24) < 1e-3 and _rel(b, 2.82e-112) < 1e-2 and elapsed < 1.0
    return ok, f"p=83: {a:.4e}, p=137: {b:.4e}, {elapsed * 1000:.0f} ms"


def check_moment_oracle_equality() -> tuple[bool, str]:
    mismatches, compared = [], 0
    for v in (2, 3):
        for n in range(v, 13, v):
            for t in (1, 2, 3):
                if n > 2 * t - 2:
                    for z, dist in oracle.exact_tuple_distributions(v, n, t).items():
                        m = theory.tuple_moments_exact(v, n, z)
                        compared += 1
                        if (m.mean, m.variance) != (dist.mean, dist.variance):
                            mismatches.append(("tuple", v, n, z))
                if n >= 2 * v * t:
                    m = theory.run_moments_exact(v, n, t)
                    for b in range(v):
                        dist = oracle.exact_run_distribution(v, n, b, t)
                        compared += 1
                        if (m.mean, m.variance) != (dist.mean, dist.variance):
                            mismatches.append(("run", v, n, b, t))
    return not mismatches, f"{compared} targets compared, mismatches {mismatches[:5]}"


def check_period_census() -> tuple[bool, str]:
    problems = []
    for v in (1, 2, 3):
        for rho in range(v, 13, v):
            census = oracle.exact_period_census(v, rho)
            # a word of length rho with least period d is a balanced word of length d repeated
            for d in range(v, rho + 1, v):
                if rho % d == 0 and census.get(d, 0) != theory.count_period_exact(v, d).value:
                    problems.append(("census", v, rho, d))
    perms = {}
    for p in (3, 5, 7):
        perms[p] = theory.count_max_period_permutations(p, 2).value
        if perms[p] != oracle.exhaustive_max_period_count(p, 2):
            problems.append(("T", p))
    bracketed = 0
    for p in primes_in_range(3, 50):
        for v in (2, 3, 4):
            if (p - 1) % v == 0:
                lo, hi = theory.max_period_count_bounds(p, v)
                if not lo <= theory.count_max_period_permutations(p, v) <= hi:
                    problems.append(("eq1", p, v))
                bracketed += 1
    return not problems, f"T(3,5,7)={list(perms.values())}, {bracketed} brackets, problems {problems[:5]}"


def check_elgamal_max_period() -> tuple[bool, str]:
    exceptions, checked = [], 0
    for p in primes_in_range(5, 5000):
        for g in primitive_roots(p, 5):
            perm = elgamal_permutation(p, g)
            for v in range(2, min(8, p - 2) + 1):
                checked += 1
                if least_period(SequenceZv(v, perm % v)) != p - 1:
                    exceptions.append((p, g, v))
    return not exceptions, f"{checked} sequences, exceptions {exceptions[:5]}"


def _grid(v_max: int = 6):
    for p in primes_in_range(5, 5000):
        perms = {}
        for g in primitive_roots(p, 5):
            perms[g] = elgamal_permutation(p, g)
        yield p, perms, [v for v in range(2, v_max + 1) if v < p - 1]


def check_bound_containment() -> tuple[bool, str]:
    violations, points = [], 0
    for p, perms, vs in _grid():
        for g, perm in perms.items():
            for v in vs:
                seq = SequenceZv(v, perm % v)
                runs = stats.run_counts(seq)
                for t in range(1, min(5, p - 1) + 1):
                    points += 1
                    ts = stats.tuple_counts(seq, t)
                    tb = bounds.elgamal_tuple_bounds(p, g, v, t)
                    if ts.min_count < tb.lower or ts.max_count > tb.upper:
                        violations.append(("tuple", p, g, v, t))
                    rb = bounds.best_run_bounds(p, g, v, t)
                    for b in range(v):
                        if runs.rho(b, t) not in rb:
                            violations.append(("run", p, g, v, t, b))
    return not violations, f"{points} grid points, violations {violations[:5]}"


def check_two_value_law() -> tuple[bool, str]:
    problems, points = [], 0
    for p in primes_in_range(5, 5000):
        for v in range(2, 7):
            if not v < p - 1 or not is_primitive_root(v, p):
                continue
            perm = elgamal_permutation(p, v)
            seq = SequenceZv(v, perm % v)
            for t in range(1, min(5, p - 1) + 1):
                points += 1
                split = bounds.tuple_count_split(p, v, t)
                dense = stats.tuple_counts(seq, t).dense()
                values = set(dense.tolist())
                if not values <= {split.lower_value, split.upper_value}:
                    problems.append(("values", p, v, t))
                n_l = int((dense == split.lower_value).sum())
                n_u = int((dense == split.upper_value).sum())
                if (n_l, n_u) != (split.n_lower, split.n_upper) or n_l == 0:
                    problems.append(("split", p, v, t))
                if (n_u == 0) != (p % v**t == 1):
                    problems.append(("iff", p, v, t))
    return not problems, f"{points} g=v points, problems {problems[:5]}"


def check_comparison_anecdotes() -> tuple[bool, str]:
    wrong = []
    for g in primitive_roots(1759, 1759):
        d = bounds.run_bounds_difference(1759, g, 2, 3)
        s = bounds.run_bounds_sum(1759, g, 2, 3)
        if (d.lower > s.lower) != (g == 6):
            wrong.append(("1759", g))
    for g, relation in ((3, "<"), (5, "<"), (6, "=")):
        d = bounds.run_bounds_difference(1097, g, 2, 3).upper
        s = bounds.run_bounds_sum(1097, g, 2, 3).upper
        if (relation == "<" and not s < d) or (relation == "=" and s != d):
            wrong.append(("1097", g, s, d))
    return not wrong, f"disagreements {wrong}"


_MC_TARGETS = (
    ("z=(0,1)", {"z": (0, 1)}),
    ("z=(0,0,1)", {"z": (0, 0, 1)}),
    ("rho(0,1)", {"run": (0, 1)}),
    ("rho(0,2)", {"run": (0, 2)}),
)


def check_monte_carlo(seed: int = 8675309) -> tuple[bool, str]:
    parts, ok = [], True
    for label, target in _MC_TARGETS:
        scores = []
        for attempt in range(2):
            res = monte_carlo_moments(2, 1000, samples=10**4, seed=seed + 7919 * attempt, **target)
            scores.append(res.z_score)
            if res.z_score is not None and abs(res.z_score) < 5:
                break
        else:
            ok = False
        parts.append(f"{label} z={', '.join(f'{s:+.2f}' for s in scores)}")
    return ok, "; ".join(parts)


def check_asymptotic_trend() -> tuple[bool, str]:
    errors = []
    for n in (10**3, 10**4, 10**5):
        exact = theory.tuple_moments_exact(2, n, (0, 1)).mean
        approx = theory.tuple_moment_approximations(2, n, 2).e_upper
        errors.append(abs(approx - float(exact)) / float(exact))
    ok = errors[0] > errors[1] > errors[2] and errors[2] < 0.01
    return ok, "relative errors " + ", ".join(f"{e:.2e}" for e in errors)


def check_normality_direction() -> tuple[bool, str]:
    def skew(dist):
        return abs(oracle.normality_diagnostic(dist).skewness)

    t8, t16 = (skew(oracle.exact_tuple_distribution(2, n, (0, 1))) for n in (8, 16))
    r8, r16 = (skew(oracle.exact_run_distribution(2, n, 0, 1)) for n in (8, 16))
    ok = t16 < t8 and r16 < r8
    return ok, f"tuple |skew| {t8:.3f} -> {t16:.3f}, run |skew| {r8:.3f} -> {r16:.3f}"


DETERMINISM_CONFIG = ExperimentConfig(
    prime_range=(100, 3000),
    pairs_per_v=4,
    v_values=(2, 3, 4),
    t_values=(2, 3),
    generators_per_prime=3,
    seed=12345,
)


def check_experiment_determinism(config: ExperimentConfig = DETERMINISM_CONFIG) -> tuple[bool, str]:
    with tempfile.TemporaryDirectory() as a, tempfile.TemporaryDirectory() as b:
        _, first = run_experiment(config, Path(a))
        _, second = run_experiment(config, Path(b))
        names = [p.name for p in first]
        if names != [p.name for p in second]:
            return False, "different file sets"
        _, mismatch, errors = filecmp.cmpfiles(a, b, names, shallow=False)
        return not mismatch and not errors, f"{len(names)} files compared, differing {mismatch + errors}"


CRITERIA: tuple[tuple[str, Callable[[], tuple[bool, str]]], ...] = (
    ("safe-prime probabilities", check_safe_prime_probabilities),
    ("moment formulas equal enumeration", check_moment_oracle_equality),
    ("period census and maximal-period counts", check_period_census),
    ("ElGamal sequences have maximal period", check_elgamal_max_period),
    ("tuple and run bound containment", check_bound_containment),
    ("g = v two-value law", check_two_value_law),
    ("run-bound comparison cases", check_comparison_anecdotes),
    ("Monte Carlo agreement", check_monte_carlo),
    ("expansion error shrinks with n", check_asymptotic_trend),
    ("skewness shrinks with n", check_normality_direction),
    ("experiment output is deterministic", check_experiment_determinism),
)


def run_criterion(number: int) -> CriterionResult:
    name, fn = CRITERIA[number - 1]
    t0 = time.perf_counter()
    try:
        passed, detail = fn()
    except Exception as exc:  # a crash is a failure, reported with its message
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    return CriterionResult(number, name, passed, detail, time.perf_counter() - t0)


def run_all(numbers=None) -> list[CriterionResult]:
    chosen = numbers or range(1, len(CRITERIA) + 1)
    return [run_criterion(k) for k in chosen]
