"""Closed-form calculators for heavy-tailed sparse-spectrum bounds.

Each function evaluates one published bound exactly as displayed, with the
parameter preconditions enforced up front.  Probability guarantees are
returned both raw (as the formula gives them, possibly negative and hence
vacuous at desk scale) and clipped to [0, 1]; sparsity outputs report the
admissible-window check as a flag rather than an error, because stepping
outside the window leaves the formulas evaluable but their guarantees
void.

Absolute constants the source bounds leave unspecified enter as explicit
configuration: lowercase ``c_abs`` and uppercase ``C_abs``, both
defaulting to 1.0.  Every result echoes enough of its inputs for reports
to reconstruct the configuration.

Two tail regimes appear throughout and are tagged by the suffixes
``case1`` (polynomial envelope, phi(t) = t^p) and ``case2`` (exponential
envelope, phi(t) = exp(t^alpha) - 1 or (1/2) exp(t^alpha)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .tailmodels import gamma_function

__all__ = [
    "Case1Params",
    "Case2Params",
    "RipParams",
    "M1Beta",
    "AkBkUpper",
    "BoundWithFloor",
    "RipSparsity",
    "KlsMid",
    "KlsTail",
    "c1_sigma_lambda_p",
    "c2_sigma_lambda",
    "c3_sigma_lambda_p",
    "c2_bilinear",
    "sigma_preset_quarter",
    "sigma_preset_low",
    "m1_beta_case1",
    "m1_beta_case2",
    "ak_bk_upper",
    "qk_bound_case1",
    "qk_bound_case2",
    "rip_sparsity",
    "rip_delta_sandwich",
    "kls_c_p_eps",
    "kls_bound_mid_p",
    "kls_bound_high_p",
    "kls_bound_exponential",
    "kls_decomposition_bound",
    "kls_cphi_polynomial",
    "kls_cphi_exponential",
    "desymmetrization_threshold",
    "order_stats_bound",
    "lower_threshold_trunc_pareto",
    "lower_threshold_pareto",
    "lower_threshold_weibull",
    "rip_sharpness_cap",
    "binomial_tail",
    "binomial_median_check",
]

#: Guard added before flooring quantities like 2n/t^2 and N*v whose inputs
#: are decimal-intended: absorbs float representation error without
#: changing any honestly non-integer value.
_FLOOR_GUARD = 1e-9

_BETA_CEILING = 1.0 / 32.0


def _clip01(x: float) -> float:
    return min(1.0, max(0.0, x))


# ---------------------------------------------------------------------------
# Parameter bundles


@dataclass(frozen=True)
class Case1Params:
    """Inputs for the polynomial-envelope sparse-norm bound.

    Requires p > 4, sigma in (2, p/2), lambda_par in [1, p],
    vartheta >= 1, t > 0 and a support size 1 <= k <= N.  The envelope
    constant C_phi is e^4 in this regime.
    """

    p: float
    sigma: float
    lambda_par: float
    vartheta: float
    t: float
    k: int
    N: int

    def __post_init__(self) -> None:
        if self.p <= 4:
            raise ValueError("p must exceed 4")
        if not 2.0 < self.sigma < self.p / 2.0:
            raise ValueError("sigma must lie in (2, p/2)")
        if not 1.0 <= self.lambda_par <= self.p:
            raise ValueError("lambda_par must lie in [1, p]")
        if self.vartheta < 1.0:
            raise ValueError("vartheta must be >= 1")
        if self.t <= 0.0:
            raise ValueError("t must be positive")
        if not 1 <= self.k <= self.N:
            raise ValueError("k must satisfy 1 <= k <= N")

    @property
    def c_phi(self) -> float:
        return math.e**4


@dataclass(frozen=True)
class Case2Params:
    """Inputs for the exponential-envelope sparse-norm bound.

    Requires alpha in (0, 2], lambda_par >= 2, vartheta >= 1, t > 0,
    1 <= k <= N; ``c_abs`` is the unspecified absolute constant (default
    1.0).  The envelope constant C_phi is c_abs^(1/alpha).
    """

    alpha: float
    lambda_par: float
    vartheta: float
    t: float
    k: int
    N: int
    c_abs: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha <= 2.0:
            raise ValueError("alpha must lie in (0, 2]")
        if self.lambda_par < 2.0:
            raise ValueError("lambda_par must be >= 2")
        if self.vartheta < 1.0:
            raise ValueError("vartheta must be >= 1")
        if self.t <= 0.0:
            raise ValueError("t must be positive")
        if not 1 <= self.k <= self.N:
            raise ValueError("k must satisfy 1 <= k <= N")
        if self.c_abs <= 0.0:
            raise ValueError("c_abs must be positive")

    @property
    def c_phi(self) -> float:
        return self.c_abs ** (1.0 / self.alpha)


@dataclass(frozen=True)
class RipParams:
    """Inputs for the restricted-isometry sparsity formula.

    ``regime`` selects the envelope: ``"polynomial"`` requires p > 4 and
    0 < eps <= min(1, (p-4)/4); ``"exponential"`` requires alpha in
    (0, 2].  theta is the target isometry constant in (0, 1); c_abs and
    C_abs are the lowercase/uppercase unspecified absolute constants.
    """

    regime: str
    theta: float
    n: int
    N: int
    eps: float | None = None
    p: float | None = None
    alpha: float | None = None
    vartheta: float = 1.0
    c_abs: float = 1.0
    C_abs: float = 1.0

    def __post_init__(self) -> None:
        if self.regime not in ("polynomial", "exponential"):
            raise ValueError(f"unknown regime {self.regime!r}")
        if not 0.0 < self.theta < 1.0:
            raise ValueError("theta must lie in (0, 1)")
        if self.n < 1 or self.N < 1:
            raise ValueError("n and N must be at least 1")
        if self.vartheta < 1.0:
            raise ValueError("vartheta must be >= 1")
        if self.c_abs <= 0.0 or self.C_abs <= 0.0:
            raise ValueError("absolute constants must be positive")
        if self.regime == "polynomial":
            if self.p is None or self.p <= 4:
                raise ValueError("polynomial regime requires p > 4")
            if self.eps is None or not 0.0 < self.eps <= min(1.0, (self.p - 4.0) / 4.0):
                raise ValueError("eps must lie in (0, min(1, (p-4)/4)]")
        else:
            if self.alpha is None or not 0.0 < self.alpha <= 2.0:
                raise ValueError("exponential regime requires alpha in (0, 2]")


# ---------------------------------------------------------------------------
# Result tuples


class M1Beta(NamedTuple):
    m1: float
    beta: float


class AkBkUpper(NamedTuple):
    a_bound: float
    bsq_bound: float


class BoundWithFloor(NamedTuple):
    bound: float
    prob_floor: float
    prob_floor_raw: float


class RipSparsity(NamedTuple):
    m: int
    beta: float
    window_low: float
    window_high: float
    in_window: bool


class KlsMid(NamedTuple):
    bound: float
    prob_floor: float
    prob_floor_raw: float


class KlsTail(NamedTuple):
    bound: float
    p0: float
    p0_raw: float
    in_window: bool


# ---------------------------------------------------------------------------
# Sparse-norm constants (polynomial regime)


def _check_sigma_lambda(sigma: float, lambda_par: float) -> None:
    if sigma <= 2.0:
        raise ValueError("sigma must exceed 2")
    if lambda_par < 1.0:
        raise ValueError("lambda_par must be >= 1")


def c1_sigma_lambda_p(sigma: float, lambda_par: float, p: float) -> float:
    """Leading constant of the polynomial-regime sparse-norm term M_1."""
    _check_sigma_lambda(sigma, lambda_par)
    if p <= 2.0 * sigma:
        raise ValueError("p must exceed 2*sigma")
    return (
        32.0
        * math.e**4
        * math.sqrt((sigma + lambda_par) / (1.0 + lambda_par / 2.0))
        * (2.0 * p / (p - 2.0 * sigma)) ** (1.0 + 2.0 * sigma / p)
        * ((sigma + lambda_par) / (sigma - 2.0)) ** (2.0 * sigma / p)
        * (20.0 * math.e) ** (sigma / p)
    )


def c2_sigma_lambda(sigma: float, lambda_par: float) -> float:
    """Constant multiplying (vartheta N)^-lambda in the failure probability."""
    _check_sigma_lambda(sigma, lambda_par)
    return (2.0 * (sigma + lambda_par) / (5.0 * math.e * (sigma - 2.0))) ** lambda_par / (
        2.0 * lambda_par - 1.0
    )


def c3_sigma_lambda_p(sigma: float, lambda_par: float, p: float) -> float:
    """Constant multiplying N^2 vartheta / t^p in the failure probability."""
    _check_sigma_lambda(sigma, lambda_par)
    if p <= 0.0:
        raise ValueError("p must be positive")
    return (sigma + lambda_par) ** p / (4.0 * (2.0 * (sigma - 2.0)) ** p)


def c2_bilinear(sigma: float, lambda_par: float, p: float) -> float:
    """Leading constant of the bilinear-coupling sparse term (polynomial regime)."""
    _check_sigma_lambda(sigma, lambda_par)
    if p <= 2.0 * sigma:
        raise ValueError("p must exceed 2*sigma")
    return (
        8.0
        * math.sqrt((sigma + lambda_par) / (1.0 + lambda_par / 2.0))
        * (2.0 * p / (p - 2.0 * sigma)) ** (1.0 + 2.0 * sigma / p)
        * (2.0 * (sigma + lambda_par) / (sigma - 2.0)) ** (2.0 * sigma / p)
    )


def sigma_preset_quarter(p: float) -> float:
    """The sigma = p/4 preset (valid for p > 8)."""
    if p <= 8.0:
        raise ValueError("sigma = p/4 requires p > 8 to keep sigma > 2")
    return p / 4.0


def sigma_preset_low(p: float, eps: float) -> float:
    """The sigma = 2 + eps preset (valid while 2 + eps < p/2)."""
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    if 2.0 + eps >= p / 2.0:
        raise ValueError("sigma = 2 + eps requires 2 + eps < p/2")
    return 2.0 + eps


# ---------------------------------------------------------------------------
# Sparse-norm main terms


def m1_beta_case1(params: Case1Params) -> M1Beta:
    """(M_1, beta) for the polynomial envelope.

    M_1 = C_1 sqrt(k) (N vartheta / k)^(sigma/p); beta is the failure
    weight C_2 (vartheta N)^-lambda + C_3 N^2 vartheta / t^p.
    """
    c1 = c1_sigma_lambda_p(params.sigma, params.lambda_par, params.p)
    c2 = c2_sigma_lambda(params.sigma, params.lambda_par)
    c3 = c3_sigma_lambda_p(params.sigma, params.lambda_par, params.p)
    m1 = c1 * math.sqrt(params.k) * (params.N * params.vartheta / params.k) ** (params.sigma / params.p)
    beta = (
        c2 * (params.vartheta * params.N) ** (-params.lambda_par)
        + c3 * params.N**2 * params.vartheta / params.t**params.p
    )
    return M1Beta(m1, beta)


def m1_beta_case2(params: Case2Params) -> M1Beta:
    """(M_1, beta) for the exponential envelope.

    M_1 = (c_abs lambda)^(1/alpha) sqrt(k) (ln(2 N vartheta / k) + 1/alpha)^(1/alpha);
    beta adds a stretched-exponential support term to the tail weight
    N^2 vartheta / (2 exp((2t)^alpha)).
    """
    a, lam = params.alpha, params.lambda_par
    m1 = (
        (params.c_abs * lam) ** (1.0 / a)
        * math.sqrt(params.k)
        * (math.log(2.0 * params.N * params.vartheta / params.k) + 1.0 / a) ** (1.0 / a)
    )
    support_term = (10.0 * params.N * params.vartheta) ** (-lam) * math.exp(
        -lam * params.k ** (a / 2.0) / (3.5 * math.log(2.0 * params.k)) ** (2.0 * a)
    )
    # exp(-x) underflows to 0.0 for large thresholds where exp(x) would
    # overflow, so keep the exponential in the numerator.
    tail_term = params.N**2 * params.vartheta / 2.0 * math.exp(-((2.0 * params.t) ** a))
    return M1Beta(m1, support_term + tail_term)


def ak_bk_upper(M: float, M1: float, t: float, beta: float, C_phi: float) -> AkBkUpper:
    """Upper bounds for (A_k, B_k^2) from the main terms.

    Requires beta < 1/32 (hard error otherwise: the concentration
    argument behind the bound collapses), M, M1, t >= 0 and C_phi > 0.
    """
    if beta < 0.0:
        raise ValueError("beta must be nonnegative")
    if beta >= _BETA_CEILING:
        raise ValueError(f"beta = {beta:.6g} violates the standing assumption beta < 1/32")
    if M < 0.0 or M1 < 0.0:
        raise ValueError("M and M1 must be nonnegative")
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    if C_phi <= 0.0:
        raise ValueError("C_phi must be positive")
    root = math.sqrt(beta)
    shrink = 1.0 - 4.0 * root
    a_bound = (M + 2.0 * math.sqrt(C_phi * t * M) + M1) / shrink
    bsq_bound = (4.0 * root * M**2 + (8.0 * C_phi * t + M1) * M + 2.0 * M1**2) / shrink**2
    return AkBkUpper(a_bound, bsq_bound)


# ---------------------------------------------------------------------------
# Bilinear coupling bounds


def qk_bound_case1(params: Case1Params, M: float, Ak: float) -> BoundWithFloor:
    """Q_k(I) bound, polynomial envelope, with its probability floor.

    bound = e^4 (t M + C_2' sqrt(k) (5 vartheta e N / k)^(sigma/p) A_k);
    the floor is 1 minus the same failure weight as the sparse-norm bound.
    """
    if M < 0.0 or Ak < 0.0:
        raise ValueError("M and Ak must be nonnegative")
    c2p = c2_bilinear(params.sigma, params.lambda_par, params.p)
    sparse = (
        c2p
        * math.sqrt(params.k)
        * (5.0 * params.vartheta * math.e * params.N / params.k) ** (params.sigma / params.p)
        * Ak
    )
    bound = math.e**4 * (params.t * M + sparse)
    floor_raw = 1.0 - m1_beta_case1(params).beta
    return BoundWithFloor(bound, _clip01(floor_raw), floor_raw)


def qk_bound_case2(params: Case2Params, M: float, Ak: float) -> BoundWithFloor:
    """Q_k(I) bound, exponential envelope, with its probability floor.

    bound = C_phi (t M + (c_abs lambda)^(1/alpha) sqrt(k)
    ((ln(20 vartheta e N / k))^(1/alpha) + (1/alpha)^(1/alpha)) A_k).
    """
    if M < 0.0 or Ak < 0.0:
        raise ValueError("M and Ak must be nonnegative")
    a, lam = params.alpha, params.lambda_par
    log_term = math.log(20.0 * params.vartheta * math.e * params.N / params.k)
    if log_term <= 0.0:
        raise ValueError("logarithm in the sparse term is nonpositive")
    sparse = (
        (params.c_abs * lam) ** (1.0 / a)
        * math.sqrt(params.k)
        * (log_term ** (1.0 / a) + (1.0 / a) ** (1.0 / a))
        * Ak
    )
    bound = params.c_phi * (params.t * M + sparse)
    floor_raw = 1.0 - m1_beta_case2(params).beta
    return BoundWithFloor(bound, _clip01(floor_raw), floor_raw)


# ---------------------------------------------------------------------------
# Restricted isometry sparsity


def rip_sparsity(params: RipParams) -> RipSparsity:
    """Admissible sparsity m and failure weight beta for a target isometry constant.

    m may come out 0 (no sparsity is certified); the admissible window on
    N is reported as (window_low, window_high, in_window) rather than
    enforced, since the formulas stay evaluable outside it.
    """
    theta, vt, n, N = params.theta, params.vartheta, params.n, params.N
    if params.regime == "polynomial":
        p, eps, c = params.p, params.eps, params.c_abs
        gamma = p - 4.0 - 2.0 * eps
        big_c = (
            c
            * ((p - 4.0) / p) ** (2.0 * (p + 4.0 + 2.0 * eps) / gamma)
            * eps ** (4.0 * (2.0 + eps) / gamma)
            * theta ** (2.0 * p / gamma)
        )
        m = int(math.floor(big_c * n * (N * vt / n) ** (-2.0 * (2.0 + eps) / gamma)))
        beta = 4.0 / (3.0 * math.e**2 * eps**2 * N**2 * vt**2) + 5.0**p * N**2 * vt / (
            4.0 * (2.0 * c * eps * theta) ** p * n ** (p / 2.0)
        )
        window_low = 2.0**8 / (eps * theta * vt)
        window_high = c * theta * (c * eps * theta) ** (p / 2.0) * n ** (p / 4.0) * math.sqrt(vt)
    else:
        a, c, big = params.alpha, params.c_abs, params.C_abs
        log_arg = big ** (2.0 / a) * N * vt / (theta**2 * n)
        if log_arg <= 1.0:
            raise ValueError("sparsity formula undefined: its logarithm is nonpositive")
        m = int(math.floor(big ** (-2.0 / a) * theta**2 * n * math.log(log_arg) ** (-2.0 / a)))
        if m == 0:
            support_factor = 1.0  # the m -> 0+ limit; conservative
        else:
            support_factor = math.exp(
                -2.0 * m ** (a / 2.0) / (3.5 * math.log(2.0 * m)) ** (2.0 * a)
            )
        beta = (10.0 * N * vt) ** (-2.0) * support_factor + (N**2 * vt / 2.0) * math.exp(
            -c * (theta * math.sqrt(n)) ** a
        )
        window_low = (1.0 / vt) * max(2.0 ** (1.0 / a), 4.0 / theta)
        high_exponent = 0.5 * (c * theta * math.sqrt(n)) ** a
        if high_exponent > 700.0:
            window_high = math.inf
        else:
            window_high = c * theta * math.sqrt(vt) * math.exp(high_exponent)
    in_window = window_low <= N <= window_high
    return RipSparsity(m, beta, window_low, window_high, in_window)


def rip_delta_sandwich(bm_sq: float, max_col_dev: float, n: int) -> tuple[float, float]:
    """Deterministic sandwich on delta_m(A/sqrt(n)).

    Returns (lower, upper) = (max column-norm-squared deviation, B_m^2/n +
    that deviation); the isometry constant always lies between them.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if bm_sq < 0.0 or max_col_dev < 0.0:
        raise ValueError("bm_sq and max_col_dev must be nonnegative")
    return max_col_dev, bm_sq / n + max_col_dev


# ---------------------------------------------------------------------------
# Empirical covariance deviation


def kls_c_p_eps(p: float, eps: float) -> float:
    """C(p, eps) = (p-4)^(-1/2) eps^(-4(2+eps)/p)."""
    if p <= 4.0:
        raise ValueError("p must exceed 4")
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    return (p - 4.0) ** (-0.5) * eps ** (-4.0 * (2.0 + eps) / p)


def kls_bound_mid_p(p: float, eps: float, n: int, N: int, M: float, C_abs: float = 1.0) -> KlsMid:
    """Covariance deviation bound for 4 < p <= 8 with its probability floor.

    bound = C_abs (M^2/N + C(p, eps) (n/N)^(gamma/p)), gamma = p - 4 - 2 eps;
    floor_raw = 1 - 8 e^-n - 2 eps^(-p/2) max(N^-3/2, n^-(p/4-1)).
    """
    if not 4.0 < p <= 8.0:
        raise ValueError("p must lie in (4, 8]")
    if not 0.0 < eps <= min(1.0, (p - 4.0) / 4.0):
        raise ValueError("eps must lie in (0, min(1, (p-4)/4)]")
    if n < 1 or N < 1:
        raise ValueError("n and N must be at least 1")
    if M < 0.0:
        raise ValueError("M must be nonnegative")
    if C_abs <= 0.0:
        raise ValueError("C_abs must be positive")
    gamma = p - 4.0 - 2.0 * eps
    bound = C_abs * (M**2 / N + kls_c_p_eps(p, eps) * (n / N) ** (gamma / p))
    floor_raw = 1.0 - 8.0 * math.exp(-n) - 2.0 * eps ** (-p / 2.0) * max(
        N ** (-1.5), n ** (-(p / 4.0 - 1.0))
    )
    return KlsMid(bound, _clip01(floor_raw), floor_raw)


def kls_bound_high_p(p: float, n: int, N: int, M: float, C_abs: float = 1.0) -> KlsTail:
    """Covariance deviation bound for p > 8 with failure probability p0.

    bound = C_abs M^2/N + C_abs sqrt(n/N);
    p0_raw = 8 e^-n + 2 ((3p-8)/(6(p-8)))^(p/2) N^(-(p-8)/8) n^(-p/8).
    """
    if p <= 8.0:
        raise ValueError("p must exceed 8")
    if n < 1 or N < 1:
        raise ValueError("n and N must be at least 1")
    if M < 0.0:
        raise ValueError("M must be nonnegative")
    if C_abs <= 0.0:
        raise ValueError("C_abs must be positive")
    bound = C_abs * M**2 / N + C_abs * math.sqrt(n / N)
    p0_raw = 8.0 * math.exp(-n) + 2.0 * ((3.0 * p - 8.0) / (6.0 * (p - 8.0))) ** (p / 2.0) * N ** (
        -(p - 8.0) / 8.0
    ) * n ** (-p / 8.0)
    return KlsTail(bound, _clip01(p0_raw), p0_raw, True)


def kls_bound_exponential(alpha: float, n: int, N: int, M: float, C_abs: float = 1.0) -> KlsTail:
    """Covariance deviation bound for the exponential envelope.

    bound = C_abs M^2/N + (C_abs/alpha)^(2.5/alpha) sqrt(n/N); p0_raw adds
    a stretched-exponential net term and an extreme-tail term to 8 e^-n.
    ``in_window`` records the standing assumption N >= (4/alpha)^(8/alpha).
    """
    if not 0.0 < alpha <= 2.0:
        raise ValueError("alpha must lie in (0, 2]")
    if n < 1 or N < 1:
        raise ValueError("n and N must be at least 1")
    if M < 0.0:
        raise ValueError("M must be nonnegative")
    if C_abs <= 0.0:
        raise ValueError("C_abs must be positive")
    bound = C_abs * M**2 / N + (C_abs / alpha) ** (2.5 / alpha) * math.sqrt(n / N)
    p0_raw = (
        8.0 * math.exp(-n)
        + (10.0 * N) ** (-4.0)
        * math.exp(4.0 * n ** (alpha / 2.0) / (3.5 * math.log(2.0 * n)) ** (2.0 * alpha))
        + N**2 / 2.0 * math.exp(-((2.0 * n * N) ** (alpha / 4.0)))
    )
    in_window = N >= (4.0 / alpha) ** (8.0 / alpha)
    return KlsTail(bound, _clip01(p0_raw), p0_raw, in_window)


def kls_decomposition_bound(A: float, Z: float, n: int, C_phi: float) -> float:
    """Quadratic-form deviation bound 2 A^2 + 6 sqrt(n) Z + C_phi.

    ``A`` bounds the decoupled bilinear sup, ``Z`` the centered linear
    sup; C_phi covers the diagonal via the envelope's fourth moments.
    """
    if A < 0.0 or Z < 0.0 or C_phi < 0.0:
        raise ValueError("A, Z and C_phi must be nonnegative")
    if n < 1:
        raise ValueError("n must be at least 1")
    return 2.0 * A**2 + 6.0 * math.sqrt(n) * Z + C_phi


def kls_cphi_polynomial(p: float, N: int, vartheta: float = 1.0) -> float:
    """Diagonal term 8 vartheta^(2/p) N^(2/min(p,4)) for the polynomial envelope (p >= 2)."""
    if p < 2.0:
        raise ValueError("p must be >= 2")
    if N < 1:
        raise ValueError("N must be at least 1")
    if vartheta < 1.0:
        raise ValueError("vartheta must be >= 1")
    return 8.0 * vartheta ** (2.0 / p) * N ** (2.0 / min(p, 4.0))


def kls_cphi_exponential(alpha: float, N: int, vartheta: float = 1.0) -> float:
    """Diagonal term 8 sqrt(C_alpha N vartheta), C_alpha = (8/alpha) Gamma(4/alpha)."""
    if not 0.0 < alpha <= 2.0:
        raise ValueError("alpha must lie in (0, 2]")
    if N < 1:
        raise ValueError("N must be at least 1")
    if vartheta < 1.0:
        raise ValueError("vartheta must be >= 1")
    c_alpha = (8.0 / alpha) * gamma_function(4.0 / alpha)
    return 8.0 * math.sqrt(c_alpha * N * vartheta)


# ---------------------------------------------------------------------------
# Scalar-sum thresholds and tails


def desymmetrization_threshold(q: float, N: int) -> float:
    """Median-scale threshold 4 N^(1/min(q,2)) for centered sums with E|Z|^q <= 1."""
    if q < 1.0:
        raise ValueError("q must be >= 1")
    if N < 1:
        raise ValueError("N must be at least 1")
    return 4.0 * N ** (1.0 / min(q, 2.0))


def order_stats_bound(q: float, s: float, k: int, N: int) -> float:
    """High-probability bound for the sum of the N - k + 1 smallest of N Pareto(q) draws.

    Holds with probability at least 1 - s^-k; the three branches cover
    q < 1, q = 1 (detected within 1e-12) and q > 1.
    """
    if q <= 0.0:
        raise ValueError("q must be positive")
    if s <= 1.0:
        raise ValueError("s must exceed 1")
    if not 1 <= k <= N:
        raise ValueError("k must satisfy 1 <= k <= N")
    if abs(q - 1.0) <= 1e-12:
        return 2.0 * math.e * s * N * math.log(math.e * N / k)
    if q < 1.0:
        return (2.0 * math.e * s) ** (1.0 / q) / (1.0 - q) * N ** (1.0 / q) * k ** (1.0 - 1.0 / q)
    return 12.0 * q * (math.e * s) ** (1.0 / q) / (q - 1.0) * N


def lower_threshold_trunc_pareto(p: float, m: int, N: int) -> float:
    """Level the truncated-Pareto construction's A_m reaches with frequency >= ~1/2.

    sqrt(m) (N / (2 (m+1) ln(2N/(m+1))))^(1/p); requires p > 2 and
    1 <= m < N.
    """
    if p <= 2.0:
        raise ValueError("p must exceed 2")
    if not 1 <= m < N:
        raise ValueError("m must satisfy 1 <= m < N")
    return math.sqrt(m) * (N / (2.0 * (m + 1) * math.log(2.0 * N / (m + 1)))) ** (1.0 / p)


def lower_threshold_pareto(q: float, m: int, N: int) -> float:
    """Level for the Pareto construction: sqrt(m (q-2)/q) (N/(m+1))^(1/q); q > 2, 1 <= m < N."""
    if q <= 2.0:
        raise ValueError("q must exceed 2")
    if not 1 <= m < N:
        raise ValueError("m must satisfy 1 <= m < N")
    return math.sqrt(m * (q - 2.0) / q) * (N / (m + 1)) ** (1.0 / q)


def lower_threshold_weibull(alpha: float, m: int, N: int) -> float:
    """Level for the Weibull construction: sqrt(m/2) (ln(N/(m+1)))^(1/alpha); N >= m+1."""
    if not 0.0 < alpha <= 2.0:
        raise ValueError("alpha must lie in (0, 2]")
    if m < 1:
        raise ValueError("m must be at least 1")
    if N < m + 1:
        raise ValueError("N must be at least m + 1")
    return math.sqrt(m / 2.0) * math.log(N / (m + 1.0)) ** (1.0 / alpha)


def rip_sharpness_cap(t: float, n: int) -> int:
    """Largest sparsity floor(2n/t^2) a matrix with A_m >= t sqrt(m) can certify at constant 1/2."""
    if t <= 0.0:
        raise ValueError("t must be positive")
    if n < 1:
        raise ValueError("n must be at least 1")
    return int(math.floor(2.0 * n / t**2 + _FLOOR_GUARD))


def binomial_tail(N: int, v: float, m: int) -> float:
    """P(Binomial(N, v) >= m), by direct summation (exact up to float rounding)."""
    if N < 1:
        raise ValueError("N must be at least 1")
    if not 0.0 <= v <= 1.0:
        raise ValueError("v must lie in [0, 1]")
    if m <= 0:
        return 1.0
    if m > N:
        return 0.0
    total = 0.0
    for j in range(m, N + 1):
        total += math.comb(N, j) * v**j * (1.0 - v) ** (N - j)
    return _clip01(total)


def binomial_median_check(N: int, v: float, m: int) -> bool:
    """Whether m <= floor(N v), the regime where Binomial(N, v) >= m holds with chance >= 1/2."""
    if N < 1:
        raise ValueError("N must be at least 1")
    if not 0.0 <= v <= 1.0:
        raise ValueError("v must lie in [0, 1]")
    return m <= int(math.floor(N * v + _FLOOR_GUARD))
