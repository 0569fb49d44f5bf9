"""Exact small-scale computation of extremal sparse spectral statistics.

Everything here is deliberate brute force: supports are enumerated in
lexicographic order, restricted Gram matrices are diagonalized with a
self-contained cyclic Jacobi solver, and the maxima are exact up to
floating point.  Resource caps turn combinatorial explosions into loud
`ResourceCapError`s instead of silent approximations; the only sanctioned
fallback is :func:`randomized_lower_estimate`, whose results are flagged
as inexact lower estimates.

Statistics follow the sparse-restriction conventions: for a matrix A with
columns X_1..X_N,

* ``A_k``   = max over k-column supports of the largest singular value,
* ``B_k^2`` = max over supports of ||Gram - diag(Gram)||_op (hollow Gram),
* ``delta_m`` = restricted isometry constant of A/sqrt(n) at sparsity m,
* ``Q_k(I)`` = max over size-k supports E of half the largest singular
  value of the cross Gram between E's columns inside and outside I.

Suprema over supports of size *at most* k are attained at size exactly k
(enlarging a support can only help), so enumeration at exact size k is
sufficient.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .tailmodels import (
    GENERATOR_ID,
    ColumnModel,
    model_record,
    parse_model_record,
    sample_column,
    stream,
)

__all__ = [
    "ResourceCapError",
    "ConvergenceError",
    "ENUMERATION_CAP",
    "ELEMENT_CAP",
    "JACOBI_SIZE_CAP",
    "SampleMatrix",
    "generate_matrix",
    "matrix_from_entries",
    "save_matrix",
    "load_matrix",
    "jacobi_spectrum",
    "symmetric_extreme_eigs",
    "operator_norm",
    "column_norm_max",
    "max_colnorm_sq_deviation",
    "SparseExtremum",
    "exact_Ak",
    "exact_Bk_sq",
    "exact_delta_m",
    "exact_Qk",
    "bilinear_Q",
    "covariance_deviation_S",
    "net_norm_estimate",
    "decomposition_identity_check",
    "randomized_lower_estimate",
]

#: Hard ceiling on the number of supports an exact enumeration may visit.
ENUMERATION_CAP = 10**7
#: Hard ceiling on n * N for matrix generation.
ELEMENT_CAP = 10**8
#: Largest symmetric matrix the Jacobi solver accepts.
JACOBI_SIZE_CAP = 512
#: Largest family size the decomposition identity enumerates (2^N subsets).
DECOMPOSITION_CAP = 20

_SYM_TOL = 1e-12
_TIE_REL = 1e-12


class ResourceCapError(RuntimeError):
    """An exact computation would exceed a declared resource cap."""


class ConvergenceError(RuntimeError):
    """The Jacobi sweep limit was reached before the off-diagonal vanished."""


# ---------------------------------------------------------------------------
# Jacobi eigensolver


def jacobi_spectrum(
    matrix: np.ndarray,
    *,
    off_tol: float = 1e-12,
    sweep_cap: int = 100,
    size_cap: int = JACOBI_SIZE_CAP,
) -> np.ndarray:
    """All eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi.

    The input must be symmetric to within 1e-12 (relative to its largest
    entry).  Convergence is declared when the off-diagonal Frobenius norm
    drops below ``off_tol`` times the Frobenius norm of the input; hitting
    ``sweep_cap`` sweeps first raises :class:`ConvergenceError`.
    """
    a = np.array(matrix, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    m = a.shape[0]
    if m > size_cap:
        raise ResourceCapError(f"matrix size {m} exceeds the Jacobi size cap {size_cap}")
    scale = max(1.0, float(np.max(np.abs(a)))) if m else 1.0
    if m and float(np.max(np.abs(a - a.T))) > _SYM_TOL * scale:
        raise ValueError("matrix is not symmetric to within 1e-12")
    a = 0.5 * (a + a.T)

    if m == 0:
        return np.empty(0)
    if m == 1:
        return a[0, :1].copy()
    if m == 2:
        return np.sort(_eig2(a[0, 0], a[0, 1], a[1, 1]))

    fro = math.sqrt(float(np.sum(a * a)))
    if fro == 0.0:
        return np.zeros(m)
    threshold = off_tol * fro

    for _ in range(sweep_cap):
        if _offdiag_norm(a) <= threshold:
            return np.sort(np.diag(a))
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = float(a[p, q])
                if apq == 0.0:
                    continue
                diff = float(a[q, q]) - float(a[p, p])
                if abs(apq) < 1e-200 * abs(diff):
                    # The rotation angle underflows; the entry is dead weight.
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    continue
                tau = diff / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                a[p, q] = 0.0
                a[q, p] = 0.0
    off = _offdiag_norm(a)
    if off <= threshold:
        return np.sort(np.diag(a))
    raise ConvergenceError(f"off-diagonal norm {off:.3e} after {sweep_cap} sweeps (target {threshold:.3e})")


def _offdiag_norm(a: np.ndarray) -> float:
    # Frobenius norm of the off-diagonal part, summed directly (no
    # cancellation against the diagonal).
    b = a.copy()
    np.fill_diagonal(b, 0.0)
    return math.sqrt(float(np.sum(b * b)))


def _eig2(a: float, b: float, d: float) -> np.ndarray:
    # Eigenvalues of [[a, b], [b, d]]: one exact Jacobi rotation.
    if b == 0.0:
        return np.array([a, d])
    half_tr = 0.5 * (a + d)
    rad = math.hypot(0.5 * (a - d), b)
    return np.array([half_tr - rad, half_tr + rad])


def symmetric_extreme_eigs(matrix: np.ndarray, **kwargs) -> tuple[float, float]:
    """(lambda_min, lambda_max) of a symmetric matrix via :func:`jacobi_spectrum`."""
    spectrum = jacobi_spectrum(matrix, **kwargs)
    if spectrum.size == 0:
        raise ValueError("matrix must be nonempty")
    return float(spectrum[0]), float(spectrum[-1])


def operator_norm(matrix: np.ndarray, **kwargs) -> float:
    """Spectral norm max(|lambda|) of a symmetric matrix."""
    lo, hi = symmetric_extreme_eigs(matrix, **kwargs)
    return max(abs(lo), abs(hi))


# ---------------------------------------------------------------------------
# Matrices


@dataclass(frozen=True, eq=False)
class SampleMatrix:
    """An n x N matrix with columns X_1..X_N plus its provenance.

    ``entries[i, j]`` is coordinate i of column j.  Matrices produced by
    :func:`generate_matrix` record the model and master seed they were
    drawn from and regenerate bit-for-bit; hand-built matrices carry
    ``model=None`` and ``generator_id="external"``.
    """

    n: int
    N: int
    entries: np.ndarray
    model: ColumnModel | None
    master_seed: int | None
    generator_id: str

    def __post_init__(self) -> None:
        e = np.asarray(self.entries, dtype=np.float64)
        if e.shape != (self.n, self.N):
            raise ValueError(f"entries shape {e.shape} does not match (n, N) = ({self.n}, {self.N})")
        e = e.copy()
        e.flags.writeable = False
        object.__setattr__(self, "entries", e)

    def column_norms(self) -> np.ndarray:
        return np.sqrt(np.sum(self.entries**2, axis=0))

    def regenerate(self) -> "SampleMatrix":
        """Re-draw this matrix from its recorded model and seed."""
        if self.model is None or self.master_seed is None:
            raise ValueError("matrix has no generation record")
        return generate_matrix(self.model, self.n, self.N, self.master_seed)


def generate_matrix(
    model: ColumnModel,
    n: int,
    N: int,
    master_seed: int,
    *,
    element_cap: int = ELEMENT_CAP,
) -> SampleMatrix:
    """Draw an n x N matrix with i.i.d. columns from ``model``.

    Column j consumes stream ``(master_seed, j)`` only, so any column can
    be reproduced without drawing the others.  ``n * N`` above
    ``element_cap`` raises :class:`ResourceCapError`.
    """
    if n < 1 or N < 1:
        raise ValueError("n and N must be at least 1")
    if n * N > element_cap:
        raise ResourceCapError(f"n * N = {n * N} exceeds the element cap {element_cap}")
    cols = np.empty((n, N))
    for j in range(N):
        cols[:, j] = sample_column(model, n, stream(master_seed, j))
    return SampleMatrix(n, N, cols, model, master_seed, GENERATOR_ID)


def matrix_from_entries(entries: np.ndarray) -> SampleMatrix:
    """Wrap explicit entries (no generation record) as a SampleMatrix."""
    e = np.asarray(entries, dtype=np.float64)
    if e.ndim != 2:
        raise ValueError("entries must be a 2-D array")
    return SampleMatrix(e.shape[0], e.shape[1], e, None, None, "external")


def save_matrix(matrix: SampleMatrix, path) -> None:
    """Write the text container: header key=value lines, then one line per column.

    Floats are serialized with ``repr`` so loading round-trips bit-for-bit.
    """
    lines = ["# tailspec matrix container v1"]
    lines.append(f"n={matrix.n}")
    lines.append(f"N={matrix.N}")
    lines.append(f"generator_id={matrix.generator_id}")
    if matrix.master_seed is not None:
        lines.append(f"master_seed={matrix.master_seed}")
    if matrix.model is not None:
        lines.append(f"model={model_record(matrix.model)}")
    lines.append("entries=columns")
    for j in range(matrix.N):
        lines.append(" ".join(repr(float(v)) for v in matrix.entries[:, j]))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_matrix(path) -> SampleMatrix:
    """Read a matrix written by :func:`save_matrix`."""
    header: dict[str, str] = {}
    columns: list[list[float]] = []
    in_entries = False
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if in_entries:
                columns.append([float(tok) for tok in line.split()])
                continue
            key, _, value = line.partition("=")
            if key == "entries":
                in_entries = True
                continue
            header[key] = value
    try:
        n = int(header["n"])
        N = int(header["N"])
    except KeyError as exc:
        raise ValueError(f"matrix container lacks required header {exc}") from exc
    if len(columns) != N or any(len(col) != n for col in columns):
        raise ValueError("matrix container entries do not match declared shape")
    entries = np.array(columns, dtype=np.float64).T
    model = parse_model_record(header["model"]) if "model" in header else None
    seed = int(header["master_seed"]) if "master_seed" in header else None
    return SampleMatrix(n, N, entries, model, seed, header.get("generator_id", "external"))


def column_norm_max(matrix: SampleMatrix) -> float:
    """M = max_j ||X_j||_2."""
    if matrix.N < 1:
        raise ValueError("matrix must have at least one column")
    return float(np.max(matrix.column_norms()))


def max_colnorm_sq_deviation(matrix: SampleMatrix) -> float:
    """max_j | ||X_j||^2 / n - 1 |, the sparsity-1 isometry defect of A/sqrt(n)."""
    return float(np.max(np.abs(np.sum(matrix.entries**2, axis=0) / matrix.n - 1.0)))


# ---------------------------------------------------------------------------
# Exact extremal statistics


@dataclass(frozen=True)
class SparseExtremum:
    """Value and attaining support of an extremal sparse statistic.

    ``support`` is the lexicographically first maximizer (0-based column
    indices); ties within relative 1e-12 keep the earlier support.
    ``exact`` distinguishes full enumeration from randomized lower
    estimates.  For restricted-isometry results, ``rip_violated`` records
    whether the value reached 1.
    """

    statistic: str
    value: float
    support: tuple[int, ...]
    exact: bool = True
    rip_violated: bool | None = None


def _check_enumeration(N: int, k: int, cap: int) -> None:
    if not 1 <= k <= N:
        raise ValueError(f"support size k = {k} must satisfy 1 <= k <= N = {N}")
    count = math.comb(N, k)
    if count > cap:
        raise ResourceCapError(f"C({N}, {k}) = {count} supports exceeds the enumeration cap {cap}")


def _improves(value: float, best: float) -> bool:
    return value > best + _TIE_REL * abs(best)


def exact_Ak(
    matrix: SampleMatrix, k: int, *, enumeration_cap: int = ENUMERATION_CAP
) -> SparseExtremum:
    """A_k = max over size-k supports of the largest singular value of A restricted.

    Equals the square root of the largest eigenvalue of the restricted
    Gram matrix, maximized by full lexicographic enumeration.
    """
    _check_enumeration(matrix.N, k, enumeration_cap)
    gram = matrix.entries.T @ matrix.entries
    best, best_support = -math.inf, None
    for support in itertools.combinations(range(matrix.N), k):
        idx = np.array(support)
        _, top = symmetric_extreme_eigs(gram[np.ix_(idx, idx)])
        value = math.sqrt(max(0.0, top))
        if best_support is None or _improves(value, best):
            best, best_support = value, support
    return SparseExtremum("Ak", best, best_support)


def exact_Bk_sq(
    matrix: SampleMatrix, k: int, *, enumeration_cap: int = ENUMERATION_CAP
) -> SparseExtremum:
    """B_k^2 = max over size-k supports of the spectral norm of the hollow Gram matrix."""
    _check_enumeration(matrix.N, k, enumeration_cap)
    gram = matrix.entries.T @ matrix.entries
    hollow = gram - np.diag(np.diag(gram))
    best, best_support = -math.inf, None
    for support in itertools.combinations(range(matrix.N), k):
        idx = np.array(support)
        value = operator_norm(hollow[np.ix_(idx, idx)])
        if best_support is None or _improves(value, best):
            best, best_support = value, support
    return SparseExtremum("BkSq", best, best_support)


def exact_delta_m(
    matrix: SampleMatrix,
    m: int,
    *,
    normalize: bool = True,
    enumeration_cap: int = ENUMERATION_CAP,
) -> SparseExtremum:
    """Restricted isometry constant at sparsity m, by enumeration.

    delta_m = max over size-m supports of max(lambda_max - 1, 1 - lambda_min)
    of the restricted Gram of T, where T = A/sqrt(n) when ``normalize`` is
    set and T = A otherwise.  ``rip_violated`` flags values >= 1 (T then
    annihilates some m-sparse vector or doubles its energy).
    """
    _check_enumeration(matrix.N, m, enumeration_cap)
    t = matrix.entries / math.sqrt(matrix.n) if normalize else matrix.entries
    gram = t.T @ t
    best, best_support = -math.inf, None
    for support in itertools.combinations(range(matrix.N), m):
        idx = np.array(support)
        lo, hi = symmetric_extreme_eigs(gram[np.ix_(idx, idx)])
        value = max(hi - 1.0, 1.0 - lo)
        if best_support is None or _improves(value, best):
            best, best_support = value, support
    return SparseExtremum("DeltaM", best, best_support, rip_violated=best >= 1.0)


def exact_Qk(
    matrix: SampleMatrix,
    index_set: set[int] | tuple[int, ...] | list[int],
    k: int,
    *,
    enumeration_cap: int = ENUMERATION_CAP,
) -> SparseExtremum:
    """Q_k(I): extremal bilinear coupling across the column split (I, I^c).

    Maximizes, over supports E of size exactly k, half the largest
    singular value of the cross Gram block between E's columns inside I
    and outside I (the supremum over unit vectors a supported on E of
    |<sum_{i in E cap I} a_i X_i, sum_{j in E \\ I} a_j X_j>| subject to
    ||a||_2 = 1).  Supports entirely inside or outside I contribute 0.
    """
    _check_enumeration(matrix.N, k, enumeration_cap)
    inside = set(int(i) for i in index_set)
    if inside and (min(inside) < 0 or max(inside) >= matrix.N):
        raise ValueError("index_set contains out-of-range column indices")
    gram = matrix.entries.T @ matrix.entries
    best, best_support = -math.inf, None
    for support in itertools.combinations(range(matrix.N), k):
        left = [i for i in support if i in inside]
        right = [i for i in support if i not in inside]
        if not left or not right:
            value = 0.0
        else:
            cross = gram[np.ix_(left, right)]
            square = cross @ cross.T if len(left) <= len(right) else cross.T @ cross
            _, top = symmetric_extreme_eigs(square)
            value = 0.5 * math.sqrt(max(0.0, top))
        if best_support is None or _improves(value, best):
            best, best_support = value, support
    return SparseExtremum("QkI", best, best_support)


def bilinear_Q(
    matrix: SampleMatrix,
    coefficients: np.ndarray,
    left_set: set[int] | tuple[int, ...] | list[int],
    right_set: set[int] | tuple[int, ...] | list[int],
) -> float:
    """Q(a, T, S) = |<sum_{i in T} a_i X_i, sum_{j in S} a_j X_j>| for disjoint T, S.

    Either side empty gives 0; overlapping sides are a domain error.
    """
    left = sorted(int(i) for i in left_set)
    right = sorted(int(i) for i in right_set)
    if set(left) & set(right):
        raise ValueError("left_set and right_set must be disjoint")
    for i in itertools.chain(left, right):
        if not 0 <= i < matrix.N:
            raise ValueError("column index out of range")
    a = np.asarray(coefficients, dtype=np.float64)
    if a.shape != (matrix.N,):
        raise ValueError(f"coefficients must have shape ({matrix.N},)")
    if not left or not right:
        return 0.0
    u = matrix.entries[:, left] @ a[left]
    w = matrix.entries[:, right] @ a[right]
    return float(abs(np.dot(u, w)))


def covariance_deviation_S(matrix: SampleMatrix, sigma: np.ndarray | None = None) -> float:
    """S = || (1/N) A A^T - Sigma ||_op; ``sigma=None`` means the identity."""
    n = matrix.n
    if sigma is None:
        sigma_arr = np.eye(n)
    else:
        sigma_arr = np.asarray(sigma, dtype=np.float64)
        if sigma_arr.shape != (n, n):
            raise ValueError(f"sigma must have shape ({n}, {n})")
    deviation = matrix.entries @ matrix.entries.T / matrix.N - sigma_arr
    return operator_norm(deviation)


def net_norm_estimate(matrix_sym: np.ndarray, eps: float, net: np.ndarray) -> float:
    """Certified upper bound (1 - 2 eps)^-1 max over net points x of |x^T G x|.

    ``net`` holds one point per row and must be an eps-net of the unit
    sphere for the bound to dominate the true norm (caller guarantee);
    requires 0 < eps < 1/2.
    """
    if not 0.0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    g = np.asarray(matrix_sym, dtype=np.float64)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError("matrix must be square")
    pts = np.asarray(net, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != g.shape[0]:
        raise ValueError("net points must match the matrix dimension")
    if pts.shape[0] == 0:
        raise ValueError("net must contain at least one point")
    vals = np.einsum("pi,ij,pj->p", pts, g, pts)
    return float(np.max(np.abs(vals))) / (1.0 - 2.0 * eps)


def decomposition_identity_check(vectors: list[np.ndarray]) -> tuple[float, float]:
    """Evaluate both sides of the random-split decoupling identity, exactly.

    For vectors x_1..x_N (2 <= N <= 20) returns

    * lhs: sum over ordered pairs i != j of <x_i, x_j>,
    * rhs: 2^(2-N) times the sum over all subsets I of the cross terms
      sum_{i in I} sum_{j not in I} <x_i, x_j>.

    The two agree identically; callers compare them to confirm it.
    """
    count = len(vectors)
    if count < 2:
        raise ValueError("need at least 2 vectors")
    if count > DECOMPOSITION_CAP:
        raise ResourceCapError(f"family size {count} exceeds the 2^N enumeration cap {DECOMPOSITION_CAP}")
    x = np.asarray(vectors, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError("vectors must share a common dimension")
    gram = x @ x.T
    lhs = float(np.sum(gram) - np.trace(gram))
    row_sums = np.sum(gram, axis=1)
    total = 0.0
    for mask in range(1 << count):
        idx = [i for i in range(count) if (mask >> i) & 1]
        if not idx or len(idx) == count:
            continue
        inside = gram[np.ix_(idx, idx)].sum()
        total += float(row_sums[idx].sum() - inside)
    rhs = 2.0 ** (2 - count) * total
    return lhs, rhs


def randomized_lower_estimate(
    matrix: SampleMatrix,
    statistic: str,
    k: int,
    samples: int,
    master_seed: int,
    *,
    index_set: set[int] | tuple[int, ...] | list[int] = (),
    normalize: bool = True,
) -> SparseExtremum:
    """Best value over randomly sampled supports: a lower estimate, flagged inexact.

    ``statistic`` is one of ``"Ak"``, ``"BkSq"``, ``"DeltaM"``, ``"QkI"``.
    This is the only sanctioned fallback when enumeration would blow the
    cap; results always carry ``exact=False``.
    """
    if statistic not in ("Ak", "BkSq", "DeltaM", "QkI"):
        raise ValueError(f"unknown statistic {statistic!r}")
    if not 1 <= k <= matrix.N:
        raise ValueError("support size out of range")
    if samples < 1:
        raise ValueError("samples must be at least 1")
    inside = set(int(i) for i in index_set)
    t = matrix.entries / math.sqrt(matrix.n) if (normalize and statistic == "DeltaM") else matrix.entries
    gram = t.T @ t
    hollow = gram - np.diag(np.diag(gram))
    rng = stream(master_seed, 0)
    # Uniform k-subsets via the argsort trick, then deduplicated: the value
    # depends only on the support, so the max over samples equals the max
    # over the distinct supports drawn (visited in lexicographic order,
    # matching the exact enumerator's tie rule).
    drawn = np.argsort(rng.random((samples, matrix.N)), axis=1)[:, :k]
    drawn.sort(axis=1)
    best, best_support = -math.inf, None
    for row in np.unique(drawn, axis=0):
        support = tuple(int(i) for i in row)
        idx = np.asarray(row)
        if statistic == "Ak":
            _, top = symmetric_extreme_eigs(gram[np.ix_(idx, idx)])
            value = math.sqrt(max(0.0, top))
        elif statistic == "BkSq":
            value = operator_norm(hollow[np.ix_(idx, idx)])
        elif statistic == "DeltaM":
            lo, hi = symmetric_extreme_eigs(gram[np.ix_(idx, idx)])
            value = max(hi - 1.0, 1.0 - lo)
        else:
            left = [i for i in support if i in inside]
            right = [i for i in support if i not in inside]
            if not left or not right:
                value = 0.0
            else:
                cross = gram[np.ix_(left, right)]
                square = cross @ cross.T if len(left) <= len(right) else cross.T @ cross
                _, top = symmetric_extreme_eigs(square)
                value = 0.5 * math.sqrt(max(0.0, top))
        if best_support is None or _improves(value, best):
            best, best_support = value, support
    rip = (best >= 1.0) if statistic == "DeltaM" else None
    return SparseExtremum(statistic, best, best_support, exact=False, rip_violated=rip)
