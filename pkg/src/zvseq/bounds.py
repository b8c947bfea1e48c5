"""Floor/ceiling bounds on tuple and run counts of ElGamal sequences."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Iterable, TextIO

from .errors import InvariantViolation, ParameterError
from .seqgen import ElGamalParams

SOURCES = ("tuple_thm", "exact_balance", "mu_thm", "runs_diff", "runs_sum", "g_invertible", "combined")


def _cdiv(a: int, b: int) -> int:
    return -(-a // b)


@dataclass(frozen=True)
class BoundInterval:
    """Integer interval [lower, upper] with the provenance of each side.

    ``aux`` holds the quotients behind the bound, e.g. {"q": 48, "r": 31}.
    ``raw_lower`` is the lower expression before clamping at zero.
    """

    lower: int
    upper: int
    source: str
    source_lower: tuple[str, ...] = ()
    source_upper: tuple[str, ...] = ()
    aux: dict = field(default_factory=dict, compare=False)
    vacuous: bool = False
    raw_lower: int | None = None

    def __post_init__(self):
        if self.lower < 0 or self.lower > self.upper:
            raise InvariantViolation(f"malformed interval [{self.lower}, {self.upper}]")
        if not self.source_lower:
            object.__setattr__(self, "source_lower", (self.source,))
        if not self.source_upper:
            object.__setattr__(self, "source_upper", (self.source,))

    def __contains__(self, value: int) -> bool:
        return self.lower <= value <= self.upper

    @property
    def width(self) -> int:
        return self.upper - self.lower


def _params(p: int, g: int, v: int) -> None:
    ElGamalParams(p, g, v)  # validates


def _split(p: int, base: int) -> tuple[int, int]:
    return divmod(p, base)


def elgamal_tuple_bounds(p: int, g: int, v: int, t: int) -> BoundInterval:
    """Bounds on lambda(z) valid for every z in Z_v^t."""
    _params(p, g, v)
    if t < 1:
        raise ParameterError(f"tuple length must be positive, got {t}")
    if t == 1:
        lo, hi = (p - 1) // v, _cdiv(p - 1, v)
        return BoundInterval(lo, hi, "exact_balance", aux={"alpha": p % v})
    q, r = _split(p, g ** (t - 1))
    fl = q // v
    lower = (g // v) ** (t - 1) * fl
    upper = _cdiv(g, v) ** (t - 1) * (fl + 1)
    return BoundInterval(lower, upper, "tuple_thm", aux={"q": q, "r": r}, vacuous=lower == 0)


@dataclass(frozen=True)
class TupleSplit:
    n_lower: int
    n_upper: int
    lower_value: int
    upper_value: int
    q: int
    n_upper_zero_iff_p_one_mod: bool

    @property
    def p_is_one_mod_vt(self) -> bool:
        return self.n_upper == 0


def tuple_count_split(p: int, v: int, t: int) -> TupleSplit:
    """With g = v, how many t-tuples take each of the two admissible values.

    Solves n_l + n_u = v^t and n_l*floor(q/v) + n_u*(floor(q/v)+1) = p-1.
    """
    _params(p, v, v)
    if t < 1:
        raise ParameterError(f"tuple length must be positive, got {t}")
    q = p // v ** (t - 1)
    fl = q // v
    total = v**t
    n_u = (p - 1) - total * fl
    n_l = total - n_u
    if n_u < 0 or n_l <= 0:
        raise InvariantViolation(f"no valid split for p={p}, v={v}, t={t}: n_l={n_l}, n_u={n_u}")
    iff = (n_u == 0) == (p % total == 1)
    if not iff:
        raise InvariantViolation(f"n_u = 0 disagrees with p = 1 mod v^t at p={p}, v={v}, t={t}")
    return TupleSplit(n_l, n_u, fl, fl + 1, q, iff)


def mu_bounds(p: int, g: int, v: int, t: int) -> BoundInterval:
    """Bounds on mu(z): windows agreeing with z except at the last position."""
    _params(p, g, v)
    if t < 2:
        raise ParameterError(f"mu(z) needs t >= 2, got {t}")
    q, r = _split(p, g ** (t - 1))
    fl = q // v
    lower = (g // v) ** (t - 2) * ((v - 1) * g // v) * fl
    upper = _cdiv(g, v) ** (t - 2) * _cdiv((v - 1) * g, v) * (fl + 1)
    return BoundInterval(lower, upper, "mu_thm", aux={"q": q, "r": r}, vacuous=lower == 0)


def run_bounds_difference(p: int, g: int, v: int, t: int) -> BoundInterval:
    """rho(b,t) = mu(b^(t+1)) - mu(b^(t+2)), each side bounded separately."""
    _params(p, g, v)
    if t < 1:
        raise ParameterError(f"run length must be positive, got {t}")
    qt, rt = _split(p, g**t)
    qn, rn = _split(p, g ** (t + 1))
    lo_g, hi_g = g // v, _cdiv(g, v)
    lo_w, hi_w = (v - 1) * g // v, _cdiv((v - 1) * g, v)
    raw = lo_g ** (t - 1) * lo_w * (qt // v) - hi_g**t * hi_w * _cdiv(qn + 1, v)
    upper = hi_g ** (t - 1) * hi_w * _cdiv(qt + 1, v) - lo_g**t * lo_w * (qn // v)
    lower = max(raw, 0)
    return BoundInterval(
        lower,
        upper,
        "runs_diff",
        aux={"q_t": qt, "r_t": rt, "q_t1": qn, "r_t1": rn},
        vacuous=lower == 0,
        raw_lower=raw,
    )


def run_bounds_sum(p: int, g: int, v: int, t: int) -> BoundInterval:
    """rho(b,t) = sum over a != b of mu(a b^(t+1))."""
    _params(p, g, v)
    if t < 1:
        raise ParameterError(f"run length must be positive, got {t}")
    q, r = _split(p, g ** (t + 1))
    lower = (v - 1) * (g // v) ** t * ((v - 1) * g // v) * (q // v)
    upper = (v - 1) * _cdiv(g, v) ** t * _cdiv((v - 1) * g, v) * _cdiv(q + 1, v)
    return BoundInterval(lower, upper, "runs_sum", aux={"q": q, "r": r}, vacuous=lower == 0)


def run_bounds_invertible(p: int, g: int, v: int, t: int) -> BoundInterval:
    """Sharper run bounds when g is a unit mod v."""
    _params(p, g, v)
    if math.gcd(g, v) != 1:
        raise ParameterError(f"g={g} is not invertible mod v={v}")
    if t < 1:
        raise ParameterError(f"run length must be positive, got {t}")
    q, r = _split(p, g ** (t + 1))
    lo_w, hi_w = (v - 1) * g // v, _cdiv((v - 1) * g, v)
    lower = (g // v) ** (t - 1) * lo_w**2 * (q // v)
    upper = _cdiv(g, v) ** (t - 1) * hi_w**2 * _cdiv(q + 1, v)
    return BoundInterval(lower, upper, "g_invertible", aux={"q": q, "r": r}, vacuous=lower == 0)


def combine(intervals: Iterable[BoundInterval]) -> BoundInterval:
    """Intersect intervals; ties on either side keep every contributing source."""
    parts = list(intervals)
    if not parts:
        raise ParameterError("nothing to combine")
    lower = max(b.lower for b in parts)
    upper = min(b.upper for b in parts)
    if lower > upper:
        raise InvariantViolation(f"constituent bounds are disjoint: {parts}")
    src_lo = tuple(b.source for b in parts if b.lower == lower)
    src_hi = tuple(b.source for b in parts if b.upper == upper)
    aux = {b.source: b.aux for b in parts}
    return BoundInterval(lower, upper, "combined", src_lo, src_hi, aux, vacuous=lower == 0)


def best_run_bounds(p: int, g: int, v: int, t: int) -> BoundInterval:
    parts = [run_bounds_difference(p, g, v, t), run_bounds_sum(p, g, v, t)]
    if math.gcd(g, v) == 1:
        parts.append(run_bounds_invertible(p, g, v, t))
    return combine(parts)


def successor_set(g: int, v: int, a: int) -> frozenset[int]:
    """Symbols that can follow a in an ElGamal sequence when g < v.

    Only valid for primes p = 1 (mod v); otherwise the wrap by p shifts the residue.
    """
    if not 1 <= g < v:
        raise ParameterError(f"successor constraint needs g < v, got g={g}, v={v}")
    if not 0 <= a < v:
        raise ParameterError(f"symbol {a} outside Z_{v}")
    return frozenset((g * a - s) % v for s in range(g))


@dataclass(frozen=True)
class CoverageVerdict:
    sufficient: bool
    necessary: bool
    exact: bool | None = None  # the iff verdict when g = v


def tuple_coverage_check(p: int, g: int, v: int, t: int) -> CoverageVerdict:
    """Whether every t-tuple must (sufficient) or can (necessary) occur."""
    _params(p, g, v)
    sufficient = g >= v and p >= v * g ** (t - 1)
    necessary = g >= v and p >= v**t + 1
    exact = (p >= v**t + 1) if g == v else None
    return CoverageVerdict(sufficient, necessary, exact)


BOUND_REPORT_COLUMNS = ("p", "g", "v", "t", "kind", "lower", "upper", "source_lower", "source_upper", "vacuous")


def bound_report_rows(p: int, g: int, v: int, t: int) -> list[dict]:
    rows = []
    kinds = [("tuple", elgamal_tuple_bounds)]
    if t >= 2:
        kinds.append(("mu", mu_bounds))
    kinds += [("runs_diff", run_bounds_difference), ("runs_sum", run_bounds_sum)]
    if math.gcd(g, v) == 1:
        kinds.append(("g_invertible", run_bounds_invertible))
    kinds.append(("runs_best", best_run_bounds))
    for kind, fn in kinds:
        b = fn(p, g, v, t)
        rows.append(
            {
                "p": p, "g": g, "v": v, "t": t, "kind": kind,
                "lower": b.lower, "upper": b.upper,
                "source_lower": "+".join(b.source_lower),
                "source_upper": "+".join(b.source_upper),
                "vacuous": int(b.vacuous),
            }
        )
    return rows


def write_bound_report(fh: TextIO, rows: Iterable[dict]) -> None:
    writer = csv.DictWriter(fh, fieldnames=BOUND_REPORT_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
