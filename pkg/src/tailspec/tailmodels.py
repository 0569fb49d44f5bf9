"""Column distributions for heavy-tailed random matrix experiments.

A *column model* describes the i.i.d. entry distribution of one matrix
column (or, for the coupon basis, the joint distribution of the column as
a whole).  The module provides exact samplers driven by inverse-CDF
transforms, closed-form tails and moments, and the small analytic
calculators that the bound formulas downstream depend on (a Lanczos gamma
evaluator and the Rosenthal moment bracket).

Sampling is deterministic given a stream: every sampler takes an explicit
`numpy.random.Generator` and consumes it in a fixed order (all magnitudes,
then all signs), so a column is reproducible from ``(master_seed, column
index)`` alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

__all__ = [
    "GENERATOR_ID",
    "ColumnModel",
    "TailHypothesis",
    "truncated_pareto",
    "pareto",
    "sym_weibull",
    "gaussian",
    "coupon_basis",
    "scaled",
    "stream",
    "derive_seed",
    "sample_column",
    "inverse_tail_truncated_pareto",
    "magnitude_tail",
    "entry_cdf",
    "moment_p_truncated_pareto",
    "raw_abs_moment",
    "second_moment",
    "normalizer",
    "gamma_function",
    "rosenthal_mq",
    "rosenthal_bracket",
    "concentration_tail_bound",
    "model_record",
    "parse_model_record",
]

#: Identifier for the reproducible stream scheme: PCG64 generators keyed by
#: ``SeedSequence((master_seed, stream_index))``.  Recorded in every
#: serialized artifact so stored data can be regenerated bit-for-bit.
GENERATOR_ID = "pcg64-seedseq-v1"

_TWO53 = float(1 << 53)

# Recognized model kinds.
TRUNCATED_PARETO = "truncated_pareto"
PARETO = "pareto"
SYM_WEIBULL = "sym_weibull"
GAUSSIAN = "gaussian"
COUPON_BASIS = "coupon_basis"
SCALED = "scaled"

_KINDS = (TRUNCATED_PARETO, PARETO, SYM_WEIBULL, GAUSSIAN, COUPON_BASIS, SCALED)


@dataclass(frozen=True)
class ColumnModel:
    """Immutable descriptor of a column distribution.

    Use the constructor helpers (:func:`truncated_pareto`, :func:`pareto`,
    :func:`sym_weibull`, :func:`gaussian`, :func:`coupon_basis`,
    :func:`scaled`) rather than instantiating directly; they validate the
    parameter ranges for their kind.

    ``normalized`` selects whether entries are divided by the model's
    natural normalizing constant: a_p (the p-th moment constant) for the
    truncated Pareto, a2 = sqrt(E xi^2) for the Pareto, and sqrt(E xi^2)
    for the symmetric Weibull.  It is ignored by kinds that have no such
    constant.
    """

    kind: str
    p: float | None = None
    lambda_cut: float | None = None
    q: float | None = None
    alpha: float | None = None
    scale: float | None = None
    inner: "ColumnModel | None" = None
    normalized: bool = True

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.kind == TRUNCATED_PARETO:
            if self.p is None or self.p <= 0:
                raise ValueError("truncated_pareto requires p > 0")
            if self.lambda_cut is None or self.lambda_cut <= 1:
                raise ValueError("truncated_pareto requires lambda_cut > 1")
        elif self.kind == PARETO:
            if self.q is None or self.q <= 2:
                raise ValueError("pareto requires q > 2 (finite variance)")
        elif self.kind == SYM_WEIBULL:
            if self.alpha is None or not 0 < self.alpha <= 2:
                raise ValueError("sym_weibull requires 0 < alpha <= 2")
        elif self.kind == SCALED:
            if self.scale is None or not math.isfinite(self.scale) or self.scale < 0:
                raise ValueError("scaled requires a finite scale >= 0")
            if self.inner is None:
                raise ValueError("scaled requires an inner model")
            if self.inner.kind == SCALED:
                # Flatten nested scalings so a Scaled never wraps a Scaled.
                object.__setattr__(self, "scale", self.scale * self.inner.scale)
                object.__setattr__(self, "inner", self.inner.inner)

    def tail_hypothesis(self, vartheta: float = 1.0) -> "TailHypothesis":
        """The envelope hypothesis this model satisfies with constant 1.

        Polynomial kinds map to phi(t) = t^p (with their tail exponent);
        the symmetric Weibull maps to phi(t) = exp(t^alpha) - 1.
        """
        if self.kind == TRUNCATED_PARETO:
            return TailHypothesis("polynomial", p=self.p, vartheta=vartheta)
        if self.kind == PARETO:
            return TailHypothesis("polynomial", p=self.q, vartheta=vartheta)
        if self.kind == SYM_WEIBULL:
            return TailHypothesis("exponential", alpha=self.alpha, vartheta=vartheta)
        raise ValueError(f"no canonical tail hypothesis for kind {self.kind!r}")


def truncated_pareto(p: float, lambda_cut: float, normalized: bool = True) -> ColumnModel:
    """Symmetric truncated Pareto: density p / (2 (1 - lambda^-p) |x|^(p+1)) on 1 <= |x| <= lambda."""
    return ColumnModel(TRUNCATED_PARETO, p=float(p), lambda_cut=float(lambda_cut), normalized=normalized)


def pareto(q: float, normalized: bool = True) -> ColumnModel:
    """Symmetric Pareto with tail P(|xi| > s) = s^-q for s >= 1; requires q > 2."""
    return ColumnModel(PARETO, q=float(q), normalized=normalized)


def sym_weibull(alpha: float, normalized: bool = True) -> ColumnModel:
    """Symmetric Weibull with tail P(|xi| > t) = exp(-t^alpha), 0 < alpha <= 2."""
    return ColumnModel(SYM_WEIBULL, alpha=float(alpha), normalized=normalized)


def gaussian() -> ColumnModel:
    """Standard normal entries."""
    return ColumnModel(GAUSSIAN)


def coupon_basis() -> ColumnModel:
    """Column equal to sqrt(n) * e_i with i uniform on {0, ..., n-1}."""
    return ColumnModel(COUPON_BASIS)


def scaled(scale: float, inner: ColumnModel) -> ColumnModel:
    """Entries of ``inner`` multiplied by ``scale`` (nested scalings flatten)."""
    return ColumnModel(SCALED, scale=float(scale), inner=inner)


@dataclass(frozen=True)
class TailHypothesis:
    """Envelope hypothesis P(|xi| > t) <= vartheta / phi(t).

    ``regime`` is ``"polynomial"`` (phi(t) = t^p, p > 4) or
    ``"exponential"`` (phi(t) = exp(t^alpha) - 1, 0 < alpha <= 2);
    ``vartheta >= 1`` is the envelope constant.
    """

    regime: str
    p: float | None = None
    alpha: float | None = None
    vartheta: float = 1.0

    def __post_init__(self) -> None:
        if self.regime == "polynomial":
            if self.p is None or self.p <= 4:
                raise ValueError("polynomial regime requires p > 4")
        elif self.regime == "exponential":
            if self.alpha is None or not 0 < self.alpha <= 2:
                raise ValueError("exponential regime requires 0 < alpha <= 2")
        else:
            raise ValueError(f"unknown regime {self.regime!r}")
        if self.vartheta < 1:
            raise ValueError("vartheta must be >= 1")

    def phi(self, t: float) -> float:
        if t < 0:
            raise ValueError("phi is defined for t >= 0")
        if self.regime == "polynomial":
            return t**self.p
        return math.expm1(t**self.alpha)

    def tail_bound(self, t: float) -> float:
        """min(1, vartheta / phi(t)); the probability envelope at level t."""
        phi = self.phi(t)
        if phi <= 0.0:
            return 1.0
        return min(1.0, self.vartheta / phi)


# ---------------------------------------------------------------------------
# Streams


def stream(master_seed: int, index: int) -> np.random.Generator:
    """Independent PCG64 stream number ``index`` under ``master_seed``.

    Streams with distinct (seed, index) pairs are statistically
    independent; the same pair always yields the same draws.
    """
    if master_seed < 0 or index < 0:
        raise ValueError("master_seed and index must be nonnegative")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((master_seed, index))))


def derive_seed(master_seed: int, index: int) -> int:
    """A nonnegative child seed for nesting stream families (e.g. one per trial)."""
    if master_seed < 0 or index < 0:
        raise ValueError("master_seed and index must be nonnegative")
    words = np.random.SeedSequence((master_seed, index)).generate_state(2, np.uint64)
    return (int(words[0]) << 64) | int(words[1])


def _open_uniform(rng: np.random.Generator, size: int) -> np.ndarray:
    # Uniform on the open interval (0, 1): lattice points (k + 1/2) / 2^53,
    # so tail inversions never see 0 or 1 exactly.
    return (rng.integers(0, 1 << 53, size=size).astype(np.float64) + 0.5) / _TWO53


def _signs(rng: np.random.Generator, size: int) -> np.ndarray:
    return rng.integers(0, 2, size=size).astype(np.float64) * 2.0 - 1.0


# ---------------------------------------------------------------------------
# Tails and inverse tails


def inverse_tail_truncated_pareto(p: float, lambda_cut: float, v: float) -> float:
    """Level s in [1, lambda] with P(|xi| > s) = v for the truncated Pareto.

    Solves (s^-p - lambda^-p) / (1 - lambda^-p) = v in closed form:
    s = (v (1 - lambda^-p) + lambda^-p)^(-1/p).  ``v`` must lie in [0, 1];
    v = 0 maps to lambda and v = 1 maps to 1.
    """
    if p <= 0:
        raise ValueError("p must be positive")
    if lambda_cut <= 1:
        raise ValueError("lambda_cut must exceed 1")
    if not 0.0 <= v <= 1.0:
        raise ValueError("v must lie in [0, 1]")
    lam_mp = lambda_cut ** (-p)
    return float((v * (1.0 - lam_mp) + lam_mp) ** (-1.0 / p))


def _raw_magnitude_tail(model: ColumnModel, s) -> np.ndarray:
    """P(|xi| > s) for the unnormalized entry distribution, vectorized in s."""
    s = np.asarray(s, dtype=np.float64)
    if model.kind == TRUNCATED_PARETO:
        p, lam = model.p, model.lambda_cut
        lam_mp = lam ** (-p)
        core = (np.clip(s, 1.0, lam) ** (-p) - lam_mp) / (1.0 - lam_mp)
        return np.where(s < 1.0, 1.0, np.where(s >= lam, 0.0, core))
    if model.kind == PARETO:
        return np.where(s < 1.0, 1.0, np.maximum(s, 1.0) ** (-model.q))
    if model.kind == SYM_WEIBULL:
        return np.exp(-(np.maximum(s, 0.0) ** model.alpha))
    if model.kind == GAUSSIAN:
        return _sp.erfc(np.maximum(s, 0.0) / math.sqrt(2.0))
    raise ValueError(f"kind {model.kind!r} has no scalar entry distribution")


def magnitude_tail(model: ColumnModel, s) -> np.ndarray:
    """P(|entry| > s) for the model's entry distribution (normalization included).

    Vectorized in ``s``.  Not defined for the coupon basis, whose entries
    are not i.i.d. scalars.
    """
    if model.kind == COUPON_BASIS:
        raise ValueError("coupon_basis has no scalar entry distribution")
    if model.kind == SCALED:
        c = model.scale
        s_arr = np.asarray(s, dtype=np.float64)
        if c == 0.0:
            return np.where(s_arr < 0.0, 1.0, 0.0)
        return magnitude_tail(model.inner, s_arr / c)
    s_arr = np.asarray(s, dtype=np.float64)
    if model.kind in (TRUNCATED_PARETO, PARETO, SYM_WEIBULL) and model.normalized:
        s_arr = s_arr * normalizer(model)
    return _raw_magnitude_tail(model, s_arr)


def entry_cdf(model: ColumnModel, x) -> np.ndarray:
    """CDF of a (symmetric) model entry, vectorized: F(x) = 1 - tail(|x|)/2 for x >= 0."""
    x_arr = np.asarray(x, dtype=np.float64)
    t = magnitude_tail(model, np.abs(x_arr))
    return np.where(x_arr < 0.0, 0.5 * t, 1.0 - 0.5 * t)


# ---------------------------------------------------------------------------
# Moments


def moment_p_truncated_pareto(p: float, lambda_cut: float) -> float:
    """a_p = (E |xi|^p)^(1/p) for the truncated Pareto: (p ln(lambda) / (1 - lambda^-p))^(1/p)."""
    if p <= 0:
        raise ValueError("p must be positive")
    if lambda_cut <= 1:
        raise ValueError("lambda_cut must exceed 1")
    return float((p * math.log(lambda_cut) / (1.0 - lambda_cut ** (-p))) ** (1.0 / p))


def raw_abs_moment(model: ColumnModel, r: float) -> float:
    """E |xi|^r for the unnormalized entry distribution (domain error if infinite)."""
    if r < 0:
        raise ValueError("moment order must be nonnegative")
    if r == 0:
        return 1.0
    if model.kind == TRUNCATED_PARETO:
        p, lam = model.p, model.lambda_cut
        if abs(r - p) < 1e-14:
            return p * math.log(lam) / (1.0 - lam ** (-p))
        return p * (1.0 - lam ** (r - p)) / ((1.0 - lam ** (-p)) * (p - r))
    if model.kind == PARETO:
        if r >= model.q:
            raise ValueError(f"Pareto moment of order {r} diverges for q = {model.q}")
        return model.q / (model.q - r)
    if model.kind == SYM_WEIBULL:
        return gamma_function(r / model.alpha + 1.0)
    if model.kind == GAUSSIAN:
        # E |g|^r = 2^(r/2) Gamma((r+1)/2) / sqrt(pi)
        return 2.0 ** (r / 2.0) * gamma_function((r + 1.0) / 2.0) / math.sqrt(math.pi)
    if model.kind == SCALED:
        return model.scale**r * raw_abs_moment(model.inner, r)
    raise ValueError(f"kind {model.kind!r} has no scalar entry moments")


def normalizer(model: ColumnModel) -> float:
    """The constant entries are divided by when ``normalized`` is set.

    a_p for the truncated Pareto, a2 = sqrt(q/(q-2)) for the Pareto,
    sqrt(Gamma(2/alpha + 1)) for the symmetric Weibull, 1 otherwise.
    """
    if model.kind == TRUNCATED_PARETO:
        return moment_p_truncated_pareto(model.p, model.lambda_cut)
    if model.kind == PARETO:
        return math.sqrt(model.q / (model.q - 2.0))
    if model.kind == SYM_WEIBULL:
        return math.sqrt(gamma_function(2.0 / model.alpha + 1.0))
    return 1.0


def second_moment(model: ColumnModel) -> float:
    """Exact variance of one entry (equals E entry^2 by symmetry).

    Respects the ``normalized`` flag: a model normalized by the square
    root of this quantity reports exactly 1.  The coupon basis reports 1
    (each coordinate has E Z_i^2 = 1).
    """
    if model.kind == COUPON_BASIS or model.kind == GAUSSIAN:
        return 1.0
    if model.kind == SCALED:
        return model.scale**2 * second_moment(model.inner)
    m2 = raw_abs_moment(model, 2.0)
    if model.normalized:
        return m2 / normalizer(model) ** 2
    return m2


# ---------------------------------------------------------------------------
# Sampling


def sample_column(model: ColumnModel, n: int, rng: np.random.Generator) -> np.ndarray:
    """One length-``n`` column drawn from ``model`` using ``rng``.

    Entry magnitudes come from inverting the exact tail at open-uniform
    variates, signs from independent fair draws; the coupon basis draws a
    single uniform index.  Draw order is fixed (magnitudes, then signs).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if model.kind == COUPON_BASIS:
        col = np.zeros(n)
        col[int(rng.integers(0, n))] = math.sqrt(n)
        return col
    if model.kind == SCALED:
        return model.scale * sample_column(model.inner, n, rng)

    u = _open_uniform(rng, n)
    if model.kind == TRUNCATED_PARETO:
        lam_mp = model.lambda_cut ** (-model.p)
        mags = (u * (1.0 - lam_mp) + lam_mp) ** (-1.0 / model.p)
    elif model.kind == PARETO:
        mags = u ** (-1.0 / model.q)
    elif model.kind == SYM_WEIBULL:
        mags = (-np.log(u)) ** (1.0 / model.alpha)
    elif model.kind == GAUSSIAN:
        # Magnitude of a standard normal: invert P(|g| > s) = u.
        mags = _sp.ndtri(1.0 - u / 2.0)
    else:  # pragma: no cover - kinds are exhaustive
        raise ValueError(f"unhandled kind {model.kind!r}")

    if model.kind != GAUSSIAN and model.normalized:
        mags = mags / normalizer(model)
    return mags * _signs(rng, n)


# ---------------------------------------------------------------------------
# Analytic calculators


_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_function(x: float) -> float:
    """Gamma(x) for real x > 0 by the Lanczos approximation (g = 7, 9 terms).

    Relative accuracy is well below 1e-10 up to the float overflow point
    near x = 171.6; the reflection formula handles 0 < x < 1/2.
    Nonpositive x is a domain error.
    """
    if not math.isfinite(x) or x <= 0.0:
        raise ValueError("gamma_function requires x > 0")
    if x < 0.5:
        # Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return math.pi / (math.sin(math.pi * x) * gamma_function(1.0 - x))
    z = x - 1.0
    acc = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    log_t = math.log(t)
    if (z + 0.5) * log_t > 700.0:
        # The bare power t^(z+0.5) would overflow even when Gamma(x) itself
        # is representable; assemble the result in log space instead.
        return math.exp(0.5 * math.log(2.0 * math.pi) + (z + 0.5) * log_t - t + math.log(acc))
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * acc


def rosenthal_mq(q: float, a: np.ndarray, norm2_xi: float, normq_xi: float) -> float:
    """M_q = max(||a||_2 ||xi||_2, ||a||_q ||xi||_q) for sums of a_i xi_i.

    ``norm2_xi`` and ``normq_xi`` are the L2 and Lq norms of the symmetric
    summand distribution; requires q > 2 and nonnegative norms.
    """
    if q <= 2:
        raise ValueError("q must exceed 2")
    if norm2_xi < 0 or normq_xi < 0:
        raise ValueError("norms must be nonnegative")
    a = np.asarray(a, dtype=np.float64)
    a2 = float(np.sqrt(np.sum(a * a)))
    aq = float(np.sum(np.abs(a) ** q) ** (1.0 / q))
    return max(a2 * norm2_xi, aq * normq_xi)


def rosenthal_bracket(
    q: float, a: np.ndarray, norm2_xi: float, normq_xi: float, c_abs: float = 1.0
) -> tuple[float, float]:
    """Two-sided moment bracket (M_q / 2, c_abs * q / ln(q) * M_q) around ||sum a_i xi_i||_q."""
    if c_abs <= 0:
        raise ValueError("c_abs must be positive")
    mq = rosenthal_mq(q, a, norm2_xi, normq_xi)
    return 0.5 * mq, c_abs * q / math.log(q) * mq


def concentration_tail_bound(
    p: float, t: float, moment_p: float, n: int, N: int, c_abs: float = 1.0
) -> float:
    """Upper bound for the chance that some column-norm-squared deviation exceeds t.

    Evaluates (c_abs p / (t ln p))^(p/2) * moment_p * N / n^(p/4), clipped
    to [0, 1].  ``moment_p`` is the p-th absolute entry moment; requires
    p > 4 and t > 0.
    """
    if p <= 4:
        raise ValueError("p must exceed 4")
    if t <= 0:
        raise ValueError("t must be positive")
    if moment_p < 0:
        raise ValueError("moment_p must be nonnegative")
    if n < 1 or N < 1:
        raise ValueError("n and N must be at least 1")
    if c_abs <= 0:
        raise ValueError("c_abs must be positive")
    raw = (c_abs * p / (t * math.log(p))) ** (p / 2.0) * moment_p * N / n ** (p / 4.0)
    return min(1.0, raw)


# ---------------------------------------------------------------------------
# Serialization


def _format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def model_record(model: ColumnModel, prefix: str = "") -> str:
    """One-line key=value record for a model (exact float round trip via repr)."""
    parts = [f"{prefix}kind={model.kind}"]
    for name in ("p", "lambda_cut", "q", "alpha", "scale"):
        val = getattr(model, name)
        if val is not None:
            parts.append(f"{prefix}{name}={_format_value(val)}")
    if model.kind in (TRUNCATED_PARETO, PARETO, SYM_WEIBULL):
        parts.append(f"{prefix}normalized={_format_value(model.normalized)}")
    if model.kind == SCALED:
        parts.append(model_record(model.inner, prefix=prefix + "inner."))
    return " ".join(parts)


def parse_model_record(text: str) -> ColumnModel:
    """Inverse of :func:`model_record`."""
    fields: dict[str, str] = {}
    for token in text.split():
        if "=" not in token:
            raise ValueError(f"malformed model record token {token!r}")
        key, _, value = token.partition("=")
        if key in fields:
            raise ValueError(f"duplicate model record key {key!r}")
        fields[key] = value
    return _model_from_fields(fields, prefix="")


def _model_from_fields(fields: dict[str, str], prefix: str) -> ColumnModel:
    def take(name: str) -> str | None:
        return fields.get(prefix + name)

    kind = take("kind")
    if kind is None:
        raise ValueError("model record lacks a kind")
    kwargs: dict = {}
    for name in ("p", "lambda_cut", "q", "alpha", "scale"):
        raw = take(name)
        if raw is not None:
            kwargs[name] = float(raw)
    norm_raw = take("normalized")
    if norm_raw is not None:
        if norm_raw not in ("true", "false"):
            raise ValueError(f"normalized must be true or false, got {norm_raw!r}")
        kwargs["normalized"] = norm_raw == "true"
    if kind == SCALED:
        kwargs["inner"] = _model_from_fields(fields, prefix=prefix + "inner.")
    return ColumnModel(kind, **kwargs)
