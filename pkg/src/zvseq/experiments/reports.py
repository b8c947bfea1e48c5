"""Aggregate reports over trial records, and their deterministic file output."""

from __future__ import annotations

import csv
import json
import math
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ..errors import ConfigurationError, ParameterError
from .config import ExperimentConfig, dump_config
from .harness import TRIAL_COLUMNS, TrialRecord, record_row, run_trial_grid


def _pct(hits: int, total: int) -> float | None:
    return None if total == 0 else 100.0 * hits / total


def _strata(records: Iterable[TrialRecord]) -> dict[tuple[int, int], list[TrialRecord]]:
    groups: dict[tuple[int, int], list[TrialRecord]] = defaultdict(list)
    for rec in sorted(records, key=lambda r: r.sort_key):
        groups[(rec.v, rec.t)].append(rec)
    return dict(sorted(groups.items()))


def _stratum_key(v: int, t: int) -> str:
    return f"v={v},t={t}"


def bound_tightness_report(records: Sequence[TrialRecord]) -> dict[str, dict]:
    """Hit rates of the tuple and run bounds per (v, t); empty conditioning sets give None."""
    if not records:
        raise ParameterError("no records to summarize")
    out = {}
    for (v, t), group in _strata(records).items():
        present = [r for r in group if r.all_tuples_present]
        g_eq_v = [r for r in group if r.g_equals_v]
        out[_stratum_key(v, t)] = {
            "trials": len(group),
            "pct_lb_hit": _pct(sum(r.lb_hit for r in group), len(group)),
            "pct_ub_hit": _pct(sum(r.ub_hit for r in group), len(group)),
            "pct_lb_hit_given_all_present": _pct(sum(r.lb_hit for r in present), len(present)),
            "pct_lb_hit_given_g_eq_v": _pct(sum(r.lb_hit for r in g_eq_v), len(g_eq_v)),
            "pct_ub_hit_given_g_eq_v": _pct(sum(r.ub_hit for r in g_eq_v), len(g_eq_v)),
            "pct_run_lb_hit": _pct(sum(r.run_lb_hit for r in group), len(group)),
            "pct_run_ub_hit": _pct(sum(r.run_ub_hit for r in group), len(group)),
            "pct_run_lb_hit_given_g_eq_v": _pct(sum(r.run_lb_hit for r in g_eq_v), len(g_eq_v)),
            "pct_run_ub_hit_given_g_eq_v": _pct(sum(r.run_ub_hit for r in g_eq_v), len(g_eq_v)),
        }
    return out


def _histogram(values: Iterable[int]) -> dict[int, int]:
    hist: dict[int, int] = defaultdict(int)
    for x in values:
        hist[x] += 1
    return dict(sorted(hist.items()))


@dataclass(frozen=True)
class GapSummary:
    lower_gap: dict[int, int]
    upper_gap: dict[int, int]
    excluded_zero_min: int
    lower_outlier_mass: float | None  # share of lower gaps above the threshold
    upper_outlier_mass: float | None

    def to_dict(self) -> dict:
        return {
            "lower_gap": self.lower_gap,
            "upper_gap": self.upper_gap,
            "excluded_zero_min": self.excluded_zero_min,
            "lower_outlier_mass": self.lower_outlier_mass,
            "upper_outlier_mass": self.upper_outlier_mass,
        }


def _gap_summary(records: Sequence[TrialRecord], threshold: int) -> GapSummary:
    kept = [r for r in records if r.min_lambda > 0]
    lower = [r.min_lambda - r.lb for r in kept]
    upper = [r.ub - r.max_lambda for r in records]
    if any(g < 0 for g in lower + upper):
        raise ParameterError("negative gap: records violate their bounds")
    return GapSummary(
        _histogram(lower),
        _histogram(upper),
        len(records) - len(kept),
        (sum(g > threshold for g in lower) / len(lower)) if lower else None,
        (sum(g > threshold for g in upper) / len(upper)) if upper else None,
    )


def gap_distribution_report(records: Sequence[TrialRecord], outlier_threshold: int = 10) -> dict:
    """Gaps min_lambda - lb and ub - max_lambda, pooled and per (v, t).

    Trials where some tuple never occurs are left out of the lower-gap histogram.
    """
    if not records:
        raise ParameterError("no records to summarize")
    return {
        "outlier_threshold": outlier_threshold,
        "pooled": _gap_summary(records, outlier_threshold).to_dict(),
        "strata": {
            _stratum_key(v, t): _gap_summary(group, outlier_threshold).to_dict()
            for (v, t), group in _strata(records).items()
        },
    }


def _shape(x: np.ndarray) -> tuple[float, float | None, float | None]:
    mean = float(x.mean())
    var = float(x.var())
    if var == 0:
        return mean, None, None
    c = x - mean
    return mean, float((c**3).mean() / var**1.5), float((c**4).mean() / var**2 - 3.0)


def normalized_lambda_report(records: Sequence[TrialRecord], bin_width: float = 0.1) -> dict:
    """Pooled histogram of (lambda(z) - (p-1)/v^t) * sqrt(v^t/(p-1)), keyed by bin index.

    Bin k covers [k*bin_width, (k+1)*bin_width).
    """
    if not records:
        raise ParameterError("no records to summarize")
    if any(r.raw_counts is None for r in records):
        raise ConfigurationError("normalized lambda report needs retained raw tuple counts")
    chunks = []
    for r in sorted(records, key=lambda r: r.sort_key):
        n, size = r.p - 1, r.v**r.t
        counts = np.asarray(r.raw_counts, dtype=np.float64)
        chunks.append((counts - n / size) * math.sqrt(size / n))
    x = np.concatenate(chunks)
    bins = np.floor(x / bin_width).astype(np.int64)
    keys, freq = np.unique(bins, return_counts=True)
    mean, skew, kurt = _shape(x)
    return {
        "bin_width": bin_width,
        "histogram": [[int(k), int(f)] for k, f in zip(keys, freq)],
        "points": int(x.size),
        "mean": mean,
        "min": float(x.min()),
        "max": float(x.max()),
        "skewness": skew,
        "excess_kurtosis": kurt,
    }


def run_ratio_report(records: Sequence[TrialRecord], ratio_bin: float = 0.1) -> dict:
    """Samples of rho(t+1) v / rho(t) with per-t median and IQR.

    Points with rho(t) = 0 are dropped and counted. ``heatmap`` holds
    (t, ratio bin lower edge, weight) triples.
    """
    samples: dict[int, list[float]] = defaultdict(list)
    dropped: dict[int, int] = defaultdict(int)
    for r in sorted(records, key=lambda r: r.sort_key):
        ratio = r.run_ratio
        if ratio is None:
            dropped[r.t] += 1
        else:
            samples[r.t].append(ratio)
    per_t = {}
    heat: dict[tuple[int, int], int] = defaultdict(int)
    for t in sorted(set(samples) | set(dropped)):
        xs = np.asarray(samples.get(t, []), dtype=np.float64)
        if xs.size:
            q1, med, q3 = (float(v) for v in np.percentile(xs, [25, 50, 75]))
            summary = {"median": med, "q1": q1, "q3": q3, "iqr": q3 - q1}
            for b in np.floor(xs / ratio_bin).astype(np.int64).tolist():
                heat[(t, b)] += 1
        else:
            summary = {"median": None, "q1": None, "q3": None, "iqr": None}
        per_t[str(t)] = {**summary, "samples": int(xs.size), "dropped": dropped.get(t, 0)}
    return {
        "samples": [[t, x] for t in sorted(samples) for x in samples[t]],
        "per_t": per_t,
        "heatmap": [[t, round(b * ratio_bin, 10), w] for (t, b), w in sorted(heat.items())],
        "dropped": sum(dropped.values()),
    }


@dataclass(frozen=True)
class ExperimentReport:
    records: list[TrialRecord]
    tightness: dict
    gaps: dict
    normalized_lambda: dict | None
    run_ratios: dict


def build_report(config: ExperimentConfig, records: Sequence[TrialRecord] | None = None) -> ExperimentReport:
    recs = sorted(run_trial_grid(config) if records is None else records, key=lambda r: r.sort_key)
    normalized = None
    if config.retain_raw and all(r.raw_counts is not None for r in recs):
        normalized = normalized_lambda_report(recs, config.bin_width)
    return ExperimentReport(
        recs,
        bound_tightness_report(recs),
        gap_distribution_report(recs, config.gap_outlier_threshold),
        normalized,
        run_ratio_report(recs),
    )


def _dump_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def write_report(report: ExperimentReport, config: ExperimentConfig, out_dir: Path | None = None) -> list[Path]:
    """Write trials.csv, one JSON file per aggregate and heatmap.csv; returns the paths."""
    out = Path(out_dir) if out_dir is not None else config.resolved_output_dir()
    out.mkdir(parents=True, exist_ok=True)
    written = []

    trials = out / "trials.csv"
    with trials.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=TRIAL_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for rec in report.records:
            writer.writerow(record_row(rec))
    written.append(trials)

    heat = out / "heatmap.csv"
    with heat.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "y", "weight"])
        writer.writerows(report.run_ratios["heatmap"])
    written.append(heat)

    for name, payload in (
        ("tightness.json", report.tightness),
        ("gaps.json", report.gaps),
        ("run_ratios.json", report.run_ratios),
        ("normalized_lambda.json", report.normalized_lambda),
    ):
        if payload is None:
            continue
        _dump_json(out / name, payload)
        written.append(out / name)

    cfg = out / "config.txt"
    cfg.write_text(dump_config(config))
    written.append(cfg)
    return written


def run_experiment(config: ExperimentConfig, out_dir: Path | None = None) -> tuple[ExperimentReport, list[Path]]:
    report = build_report(config)
    return report, write_report(report, config, out_dir)
