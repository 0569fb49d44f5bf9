"""Report generation: delimited summaries plus rendered figures.

Each report writes one CSV of plot-ready rows and, alongside it, a PNG
rendering of the same data (matplotlib's Agg backend; nothing opens a
window).  All rows embed the seeds and generator id that produced them.
"""

from __future__ import annotations

import csv
import os

from . import harness
from .tailmodels import GENERATOR_ID, coupon_basis, gaussian, model_record, sym_weibull

__all__ = [
    "report_lower_bounds",
    "report_kls_scaling",
    "report_coupon",
    "run_report",
]

_LOWER_CONFIGS = (
    ("trunc_pareto", 4.0, 30),
    ("pareto", 4.0, 40),
    ("weibull", 1.0, 40),
)


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def report_lower_bounds(
    out_dir: str,
    trials: int = 400,
    master_seed: int = 20250819,
    n: int = 12,
    m: int = 2,
) -> list[str]:
    """Threshold-exceedance frequencies for the three extremal constructions."""
    csv_path = os.path.join(out_dir, "lower_bounds.csv")
    png_path = os.path.join(out_dir, "lower_bounds.png")
    rows = []
    for kind, shape, N in _LOWER_CONFIGS:
        result = harness.verify_lower_bound(kind, shape, m, n, N, trials, master_seed)
        rows.append(
            {
                "construction": kind,
                "shape": shape,
                "m": m,
                "n": n,
                "N": N,
                "trials": trials,
                "threshold": repr(result.threshold),
                "frequency": repr(result.frequency),
                "freq_se": repr(result.freq_se),
                "model": model_record(result.model),
                "master_seed": master_seed,
                "generator_id": GENERATOR_ID,
            }
        )
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)

    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    labels = [f"{r['construction']}\nN={r['N']}" for r in rows]
    freqs = [float(r["frequency"]) for r in rows]
    errs = [float(r["freq_se"]) for r in rows]
    ax.bar(labels, freqs, yerr=errs, color="#4878d0", capsize=4)
    ax.axhline(0.5, color="k", linestyle="--", linewidth=1, label="claimed floor 1/2")
    ax.set_ylabel(f"frequency of A_{m} >= threshold")
    ax.set_title(f"Extremal lower-bound constructions (n={n}, {trials} trials)")
    ax.set_ylim(0, 1.05)
    ax.legend()
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
    return [csv_path, png_path]


def report_kls_scaling(
    out_dir: str,
    trials: int = 50,
    master_seed: int = 20250819,
    n: int = 20,
    N_values: tuple[int, ...] = (200, 400, 800, 1600),
) -> list[str]:
    """Median covariance deviation versus aspect ratio, with log-log fits."""
    csv_path = os.path.join(out_dir, "kls_scaling.csv")
    png_path = os.path.join(out_dir, "kls_scaling.png")
    models = [("gaussian", gaussian()), ("sym_weibull_1", sym_weibull(1.0))]
    results = []
    rows = []
    for label, model in models:
        result = harness.kls_scaling_experiment(model, n, N_values, trials, master_seed)
        results.append((label, result))
        for big_n, median in zip(result.N_values, result.medians):
            rows.append(
                {
                    "model": label,
                    "model_record": model_record(model),
                    "n": n,
                    "N": big_n,
                    "trials": trials,
                    "median_S": repr(median),
                    "slope": repr(result.slope),
                    "intercept": repr(result.intercept),
                    "master_seed": master_seed,
                    "generator_id": GENERATOR_ID,
                }
            )
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)

    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, result in results:
        ratios = [n / big_n for big_n in result.N_values]
        ax.loglog(ratios, result.medians, "o-", label=f"{label} (slope {result.slope:.3f})")
    ax.set_xlabel("n / N")
    ax.set_ylabel("median S")
    ax.set_title(f"Covariance deviation scaling (n={n}, {trials} trials per point)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
    return [csv_path, png_path]


def report_coupon(
    out_dir: str,
    trials: int = 200,
    master_seed: int = 20250819,
    n: int = 16,
    N: int = 32,
) -> list[str]:
    """Frequency with which the coupon-basis model keeps S >= 1 (covariance not yet learned)."""
    csv_path = os.path.join(out_dir, "coupon.csv")
    spec = harness.ExperimentSpec(
        statistic="s", n=n, N=N, trials=trials, master_seed=master_seed,
        model=coupon_basis(), threshold=1.0,
    )
    summary = harness.run_experiment(spec)
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["n", "N", "trials", "threshold", "frequency", "freq_se", "median_S",
             "master_seed", "generator_id", "spec"]
        )
        writer.writerow(
            [n, N, trials, repr(summary.threshold), repr(summary.frequency),
             repr(summary.freq_se), repr(summary.median), master_seed,
             GENERATOR_ID, summary.spec.record()]
        )
    return [csv_path]


def run_report(
    out_dir: str,
    suite: str = "all",
    master_seed: int = 20250819,
    lower_trials: int = 400,
    kls_trials: int = 50,
    coupon_trials: int = 200,
) -> list[str]:
    """Write the selected report suite into ``out_dir`` and return the paths."""
    if suite not in ("all", "lower", "kls", "coupon"):
        raise ValueError(f"unknown report suite {suite!r}")
    os.makedirs(out_dir, exist_ok=True)
    paths: list[str] = []
    if suite in ("all", "lower"):
        paths += report_lower_bounds(out_dir, trials=lower_trials, master_seed=master_seed)
    if suite in ("all", "kls"):
        paths += report_kls_scaling(out_dir, trials=kls_trials, master_seed=master_seed)
    if suite in ("all", "coupon"):
        paths += report_coupon(out_dir, trials=coupon_trials, master_seed=master_seed)
    return paths
