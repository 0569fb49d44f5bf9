"""Seeded Monte Carlo harness for the constant-free experimental claims.

Experiments are fully described by an immutable spec; trial i of a run
draws from streams derived from ``(master_seed, i)``, so any run is
reproducible bit-for-bit (and any single trial is reproducible without
rerunning the others).  Summaries report nearest-rank quantiles and,
when a threshold is set, the exceedance frequency (``value >=
threshold``) with its binomial standard error; per-trial values are
retained so delimited output can list them.

The ``verify_*`` entry points wrap the specific experimental designs the
acceptance suite exercises: extremal lower-bound constructions, order
statistics sums, desymmetrized scalar sums, binomial median checks and
the covariance-deviation scaling study.
"""

from __future__ import annotations

import csv
import hashlib
import math
import time
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import bounds
from .tailmodels import (
    GENERATOR_ID,
    ColumnModel,
    derive_seed,
    model_record,
    pareto,
    stream,
    sym_weibull,
    truncated_pareto,
)
from .speclab import (
    column_norm_max,
    covariance_deviation_S,
    exact_Ak,
    exact_Bk_sq,
    exact_delta_m,
    generate_matrix,
    max_colnorm_sq_deviation,
)

__all__ = [
    "ZSpec",
    "z_uniform01",
    "z_abs_pareto",
    "ExperimentSpec",
    "TrialSummary",
    "run_experiment",
    "write_trials_csv",
    "write_summary_csv",
    "LowerBoundResult",
    "verify_lower_bound",
    "OrderStatsResult",
    "verify_order_stats",
    "DesymResult",
    "verify_desymmetrization",
    "BinomialMedianRow",
    "verify_binomial_median",
    "KlsScalingResult",
    "kls_scaling_experiment",
    "nearest_rank_quantile",
]

_STATISTICS = ("ak", "bksq", "deltam", "m", "s", "ptheta", "orderstatsum", "desymdev")
_MATRIX_STATISTICS = ("ak", "bksq", "deltam", "m", "s", "ptheta")
_TWO53 = float(1 << 53)


# ---------------------------------------------------------------------------
# Scalar draw models (for the scalar-sum experiments, where draws are not columns)


@dataclass(frozen=True)
class ZSpec:
    """A nonnegative scalar distribution for the sum experiments.

    ``uniform01`` is uniform on (0, 1); ``abs_pareto`` is |Pareto(q_tail)|
    with tail s^-q_tail for s >= 1, divided by a2 = sqrt(q_tail/(q_tail-2))
    when ``normalized`` (so its second moment is exactly 1).
    """

    kind: str
    q_tail: float | None = None
    normalized: bool = True

    def __post_init__(self) -> None:
        if self.kind not in ("uniform01", "abs_pareto"):
            raise ValueError(f"unknown scalar model {self.kind!r}")
        if self.kind == "abs_pareto" and (self.q_tail is None or self.q_tail <= 2):
            raise ValueError("abs_pareto requires q_tail > 2")

    def _scale(self) -> float:
        if self.kind == "abs_pareto" and self.normalized:
            return math.sqrt(self.q_tail / (self.q_tail - 2.0))
        return 1.0

    def mean(self) -> float:
        if self.kind == "uniform01":
            return 0.5
        return self.q_tail / (self.q_tail - 1.0) / self._scale()

    def abs_moment(self, r: float) -> float:
        """E Z^r (domain error if infinite)."""
        if r < 0:
            raise ValueError("moment order must be nonnegative")
        if self.kind == "uniform01":
            return 1.0 / (r + 1.0)
        if r >= self.q_tail:
            raise ValueError(f"moment of order {r} diverges for q_tail = {self.q_tail}")
        return self.q_tail / (self.q_tail - r) / self._scale() ** r

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        u = (rng.integers(0, 1 << 53, size=size).astype(np.float64) + 0.5) / _TWO53
        if self.kind == "uniform01":
            return u
        return u ** (-1.0 / self.q_tail) / self._scale()

    def record(self) -> str:
        if self.kind == "uniform01":
            return "kind=uniform01"
        flag = "true" if self.normalized else "false"
        return f"kind=abs_pareto q_tail={self.q_tail!r} normalized={flag}"


def z_uniform01() -> ZSpec:
    return ZSpec("uniform01")


def z_abs_pareto(q_tail: float, normalized: bool = True) -> ZSpec:
    return ZSpec("abs_pareto", q_tail=float(q_tail), normalized=normalized)


# ---------------------------------------------------------------------------
# Experiment spec and summary


@dataclass(frozen=True)
class ExperimentSpec:
    """Complete, hashable description of one Monte Carlo run.

    ``statistic`` selects the per-trial value:

    * ``"ak"``, ``"bksq"``, ``"deltam"``: exact sparse extremal statistics
      at support size ``k`` (``deltam`` respects ``normalize``),
    * ``"m"``: the largest column norm,
    * ``"s"``: covariance deviation from the identity,
    * ``"ptheta"``: the largest column-norm-squared deviation (threshold
      defaults to ``theta``),
    * ``"orderstatsum"``: sum of the N - k_start + 1 smallest of N raw
      Pareto(q) magnitudes,
    * ``"desymdev"``: |sum Z_i - E sum Z_i| for N scalar draws from
      ``zspec``.

    Matrix statistics require ``model``; trial i generates its matrix
    from seed ``derive_seed(master_seed, i)``.
    """

    statistic: str
    N: int
    trials: int
    master_seed: int
    n: int | None = None
    model: ColumnModel | None = None
    k: int | None = None
    normalize: bool = True
    threshold: float | None = None
    theta: float | None = None
    q: float | None = None
    k_start: int | None = None
    zspec: ZSpec | None = None

    def __post_init__(self) -> None:
        if self.statistic not in _STATISTICS:
            raise ValueError(f"unknown statistic {self.statistic!r}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.N < 1:
            raise ValueError("N must be at least 1")
        if self.master_seed < 0:
            raise ValueError("master_seed must be nonnegative")
        if self.statistic in _MATRIX_STATISTICS:
            if self.model is None:
                raise ValueError(f"statistic {self.statistic!r} requires a column model")
            if self.n is None or self.n < 1:
                raise ValueError("matrix statistics require n >= 1")
        if self.statistic in ("ak", "bksq", "deltam"):
            if self.k is None or not 1 <= self.k <= self.N:
                raise ValueError("sparse statistics require 1 <= k <= N")
        if self.statistic == "ptheta" and self.threshold is None:
            if self.theta is None or self.theta <= 0:
                raise ValueError("ptheta requires theta > 0 (or an explicit threshold)")
        if self.statistic == "orderstatsum":
            if self.q is None or self.q <= 0:
                raise ValueError("orderstatsum requires q > 0")
            if self.k_start is None or not 1 <= self.k_start <= self.N:
                raise ValueError("orderstatsum requires 1 <= k_start <= N")
        if self.statistic == "desymdev" and self.zspec is None:
            raise ValueError("desymdev requires a scalar model")

    def effective_threshold(self) -> float | None:
        if self.threshold is not None:
            return self.threshold
        if self.statistic == "ptheta":
            return self.theta
        return None

    def record(self) -> str:
        """Canonical one-line key=value form (basis of the spec hash)."""
        parts = [
            f"statistic={self.statistic}",
            f"N={self.N}",
            f"trials={self.trials}",
            f"master_seed={self.master_seed}",
            f"generator_id={GENERATOR_ID}",
        ]
        if self.n is not None:
            parts.append(f"n={self.n}")
        if self.model is not None:
            parts.append(f"model:{model_record(self.model)}")
        if self.k is not None:
            parts.append(f"k={self.k}")
        if self.statistic == "deltam":
            parts.append(f"normalize={'true' if self.normalize else 'false'}")
        thr = self.effective_threshold()
        if thr is not None:
            parts.append(f"threshold={thr!r}")
        if self.q is not None:
            parts.append(f"q={self.q!r}")
        if self.k_start is not None:
            parts.append(f"k_start={self.k_start}")
        if self.zspec is not None:
            parts.append(f"zmodel:{self.zspec.record()}")
        return " ".join(parts)

    def spec_hash(self) -> str:
        return hashlib.sha256(self.record().encode("utf-8")).hexdigest()[:12]


@dataclass(frozen=True)
class TrialSummary:
    """Per-run results: retained trial values, quantiles, exceedance frequency."""

    spec: ExperimentSpec
    spec_hash: str
    generator_id: str
    values: tuple[float, ...]
    minimum: float
    q25: float
    median: float
    q75: float
    maximum: float
    threshold: float | None
    frequency: float | None
    freq_se: float | None
    wall_time: float = field(compare=False, default=0.0)


def nearest_rank_quantile(values: Sequence[float], fraction: float) -> float:
    """Nearest-rank quantile: the ceil(fraction * T)-th smallest value."""
    if not 0.0 < fraction <= 1.0:
        raise ValueError("fraction must lie in (0, 1]")
    ordered = sorted(values)
    if not ordered:
        raise ValueError("need at least one value")
    rank = max(1, math.ceil(fraction * len(ordered)))
    return float(ordered[rank - 1])


def _trial_value(spec: ExperimentSpec, trial_seed: int) -> float:
    stat = spec.statistic
    if stat in _MATRIX_STATISTICS:
        matrix = generate_matrix(spec.model, spec.n, spec.N, trial_seed)
        if stat == "ak":
            return exact_Ak(matrix, spec.k).value
        if stat == "bksq":
            return exact_Bk_sq(matrix, spec.k).value
        if stat == "deltam":
            return exact_delta_m(matrix, spec.k, normalize=spec.normalize).value
        if stat == "m":
            return column_norm_max(matrix)
        if stat == "s":
            return covariance_deviation_S(matrix)
        return max_colnorm_sq_deviation(matrix)
    rng = stream(trial_seed, 0)
    if stat == "orderstatsum":
        u = (rng.integers(0, 1 << 53, size=spec.N).astype(np.float64) + 0.5) / _TWO53
        draws = np.sort(u ** (-1.0 / spec.q))
        return float(np.sum(draws[: spec.N - spec.k_start + 1]))
    draws = spec.zspec.sample(rng, spec.N)
    return float(abs(np.sum(draws) - spec.N * spec.zspec.mean()))


def run_experiment(spec: ExperimentSpec) -> TrialSummary:
    """Run all trials of ``spec`` and summarize them.

    Identical specs produce identical summaries (wall time excluded from
    comparisons).
    """
    start = time.perf_counter()
    values = tuple(_trial_value(spec, derive_seed(spec.master_seed, i)) for i in range(spec.trials))
    threshold = spec.effective_threshold()
    frequency = freq_se = None
    if threshold is not None:
        hits = sum(1 for v in values if v >= threshold)
        frequency = hits / spec.trials
        freq_se = math.sqrt(frequency * (1.0 - frequency) / spec.trials)
    return TrialSummary(
        spec=spec,
        spec_hash=spec.spec_hash(),
        generator_id=GENERATOR_ID,
        values=values,
        minimum=min(values),
        q25=nearest_rank_quantile(values, 0.25),
        median=nearest_rank_quantile(values, 0.5),
        q75=nearest_rank_quantile(values, 0.75),
        maximum=max(values),
        threshold=threshold,
        frequency=frequency,
        freq_se=freq_se,
        wall_time=time.perf_counter() - start,
    )


def write_trials_csv(summary: TrialSummary, path) -> None:
    """One row per trial; the full spec rides along in a leading comment line."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# spec: {summary.spec.record()}\n")
        writer = csv.writer(fh)
        writer.writerow(
            ["spec_hash", "trial_index", "trial_seed", "value", "threshold", "exceeds", "generator_id"]
        )
        thr = summary.threshold
        for i, value in enumerate(summary.values):
            seed = derive_seed(summary.spec.master_seed, i)
            exceeds = "" if thr is None else str(int(value >= thr))
            writer.writerow(
                [summary.spec_hash, i, seed, repr(value), "" if thr is None else repr(thr), exceeds, summary.generator_id]
            )


def write_summary_csv(summary: TrialSummary, path) -> None:
    """One summary row embedding the resolved spec record."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["spec_hash", "statistic", "trials", "min", "q25", "median", "q75", "max",
             "threshold", "frequency", "freq_se", "master_seed", "generator_id", "spec"]
        )
        writer.writerow(
            [
                summary.spec_hash,
                summary.spec.statistic,
                summary.spec.trials,
                repr(summary.minimum),
                repr(summary.q25),
                repr(summary.median),
                repr(summary.q75),
                repr(summary.maximum),
                "" if summary.threshold is None else repr(summary.threshold),
                "" if summary.frequency is None else repr(summary.frequency),
                "" if summary.freq_se is None else repr(summary.freq_se),
                summary.spec.master_seed,
                summary.generator_id,
                summary.spec.record(),
            ]
        )


# ---------------------------------------------------------------------------
# Experimental designs


class LowerBoundResult(NamedTuple):
    threshold: float
    frequency: float
    freq_se: float
    trials: int
    model: ColumnModel


_LOWER_KINDS = ("trunc_pareto", "pareto", "weibull")


def verify_lower_bound(
    kind: str, shape: float, m: int, n: int, N: int, trials: int, master_seed: int
) -> LowerBoundResult:
    """Frequency with which the matching construction's exact A_m reaches its threshold.

    ``kind`` selects the construction: ``"trunc_pareto"`` (shape = p,
    truncation solved from lambda^p - 1 = N/(m+1)), ``"pareto"``
    (shape = q) or ``"weibull"`` (shape = alpha).  All entries are
    moment-normalized but carry no other scaling.  The claim under test
    is that the frequency is about 1/2 or more.
    """
    if kind not in _LOWER_KINDS:
        raise ValueError(f"unknown construction {kind!r}")
    if kind == "trunc_pareto":
        lam = (1.0 + N / (m + 1.0)) ** (1.0 / shape)
        model = truncated_pareto(shape, lam)
        threshold = bounds.lower_threshold_trunc_pareto(shape, m, N)
    elif kind == "pareto":
        model = pareto(shape)
        threshold = bounds.lower_threshold_pareto(shape, m, N)
    else:
        model = sym_weibull(shape)
        threshold = bounds.lower_threshold_weibull(shape, m, N)
    spec = ExperimentSpec(
        statistic="ak", n=n, N=N, trials=trials, master_seed=master_seed,
        model=model, k=m, threshold=threshold,
    )
    summary = run_experiment(spec)
    return LowerBoundResult(threshold, summary.frequency, summary.freq_se, trials, model)


class OrderStatsResult(NamedTuple):
    violations: int
    bound: float
    fail_allowance: float
    trials: int


def verify_order_stats(
    q: float, s: float, k: int, N: int, trials: int, master_seed: int
) -> OrderStatsResult:
    """Count trials where the trimmed Pareto(q) sum exceeds its high-probability bound.

    Each trial draws N raw Pareto(q) magnitudes and sums all but the k - 1
    largest; the bound fails with probability at most s^-k, reported as
    ``fail_allowance``.
    """
    bound = bounds.order_stats_bound(q, s, k, N)
    spec = ExperimentSpec(
        statistic="orderstatsum", N=N, trials=trials, master_seed=master_seed,
        q=q, k_start=k,
    )
    summary = run_experiment(spec)
    violations = sum(1 for v in summary.values if v > bound)
    return OrderStatsResult(violations, bound, s ** (-float(k)), trials)


class DesymResult(NamedTuple):
    threshold: float
    frequency: float
    freq_se: float
    trials: int


def verify_desymmetrization(
    zspec: ZSpec, q: float, N: int, trials: int, master_seed: int
) -> DesymResult:
    """Frequency with which |sum Z_i - E sum Z_i| stays within 4 N^(1/min(q,2)).

    Requires E Z^q <= 1 (checked analytically); the claim under test is
    frequency >= 1/2.
    """
    if zspec.abs_moment(q) > 1.0 + 1e-12:
        raise ValueError(f"E Z^{q} = {zspec.abs_moment(q):.6g} exceeds 1")
    threshold = bounds.desymmetrization_threshold(q, N)
    spec = ExperimentSpec(
        statistic="desymdev", N=N, trials=trials, master_seed=master_seed, zspec=zspec,
    )
    summary = run_experiment(spec)
    within = sum(1 for v in summary.values if v <= threshold)
    frequency = within / trials
    se = math.sqrt(frequency * (1.0 - frequency) / trials)
    return DesymResult(threshold, frequency, se, trials)


class BinomialMedianRow(NamedTuple):
    N: int
    v: float
    m: int
    applies: bool
    tail: float
    ok: bool


def verify_binomial_median(grid: Iterable[tuple[int, float, int]]) -> list[BinomialMedianRow]:
    """Exact check of the binomial median inequality over a grid of (N, v, m).

    A row passes when either m > floor(N v) (the inequality does not
    apply) or the exact tail P(Binomial(N, v) >= m) is at least 1/2.
    """
    rows = []
    for N, v, m in grid:
        applies = bounds.binomial_median_check(N, v, m)
        tail = bounds.binomial_tail(N, v, m)
        ok = (not applies) or tail >= 0.5
        rows.append(BinomialMedianRow(N, v, m, applies, tail, ok))
    return rows


class KlsScalingResult(NamedTuple):
    n: int
    N_values: tuple[int, ...]
    medians: tuple[float, ...]
    slope: float
    intercept: float
    residuals: tuple[float, ...]


def kls_scaling_experiment(
    model: ColumnModel, n: int, N_values: Sequence[int], trials: int, master_seed: int
) -> KlsScalingResult:
    """Median covariance deviation S across aspect ratios, with a log-log fit.

    For each N, runs ``trials`` matrices and takes the median S; then
    regresses ln(median) on ln(n/N).  A slope near 1/2 reproduces the
    sqrt(n/N) scaling; block seeds are derived per N so the grid can be
    extended without disturbing earlier cells.
    """
    if len(N_values) < 2:
        raise ValueError("need at least two values of N for a slope")
    medians = []
    for i, big_n in enumerate(N_values):
        spec = ExperimentSpec(
            statistic="s", n=n, N=int(big_n), trials=trials,
            master_seed=derive_seed(master_seed, i), model=model,
        )
        medians.append(run_experiment(spec).median)
    x = np.log(n / np.asarray(N_values, dtype=np.float64))
    y = np.log(np.asarray(medians))
    x_bar, y_bar = float(np.mean(x)), float(np.mean(y))
    slope = float(np.sum((x - x_bar) * (y - y_bar)) / np.sum((x - x_bar) ** 2))
    intercept = y_bar - slope * x_bar
    residuals = tuple(float(r) for r in (y - (intercept + slope * x)))
    return KlsScalingResult(n, tuple(int(v) for v in N_values), tuple(medians), slope, intercept, residuals)
