"""L1-penalized least squares over a feature network.

The objective is

    (1/n) * sum_k ||x_k - X beta_k||^2  +  lam * sum_jk |beta_jk|

with one linear model per feature. The candidate parents of each feature are
given by a 0/1 matrix, so the problem separates by column once candidates are
fixed. Columns are solved by cyclic coordinate descent on cached inner
products; with standardized data every coordinate update is an exact scalar
soft-threshold step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import graphs

MAX_SWEEPS = 10_000
SWEEP_TOL = 1e-9
_REFRESH_EVERY = 200


@dataclass
class Dataset:
    """An n x m observation matrix with column names.

    ``standardized`` records whether columns have mean zero and unit
    population standard deviation, the convention every solver here expects.
    """

    values: np.ndarray
    feature_names: list[str] = field(default_factory=list)
    standardized: bool = False

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2:
            raise ValueError("data must be a two-dimensional matrix")
        n, m = self.values.shape
        if n < 2 or m < 2:
            raise ValueError("need at least 2 observations and 2 features")
        if not self.feature_names:
            self.feature_names = [f"f{k + 1}" for k in range(m)]
        if len(self.feature_names) != m:
            raise ValueError("feature name count must match column count")
        self._gram = None

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    def gram(self) -> np.ndarray:
        """X^T X, computed once and cached."""
        if self._gram is None:
            self._gram = self.values.T @ self.values
        return self._gram


class ConvergenceError(RuntimeError):
    """Coordinate descent exhausted its sweep budget.

    The last iterate is kept on the ``coefficients`` attribute.
    """

    def __init__(self, message: str, coefficients: np.ndarray):
        super().__init__(message)
        self.coefficients = coefficients


def _soft(values, threshold):
    return np.sign(values) * np.maximum(np.abs(values) - threshold, 0.0)


def _check_beta(y, m: int) -> np.ndarray:
    beta = np.asarray(y, dtype=float)
    if beta.shape != (m, m):
        raise ValueError(f"coefficient matrix must be {m} x {m}, got {beta.shape}")
    if np.diagonal(beta).any():
        raise ValueError("coefficient diagonal must be zero")
    return beta


def objective(y, x: Dataset, lam: float) -> float:
    """Penalized error (1/n)||X - X Y||_F^2 + lam * sum |Y_jk|."""
    if lam < 0:
        raise ValueError("penalty must be nonnegative")
    beta = _check_beta(y, x.m)
    resid = x.values - x.values @ beta
    return float(np.sum(resid * resid)) / x.n + lam * float(np.abs(beta).sum())


def _column_objectives(gram, n, beta, lam, cols) -> np.ndarray:
    """Per-column objective values from the Gram matrix (beta is m x len(cols))."""
    gb = gram @ beta
    sse = (
        np.diagonal(gram)[cols]
        - 2.0 * np.einsum("jc,jc->c", beta, gram[:, cols])
        + np.einsum("jc,jc->c", beta, gb)
    )
    return sse / n + lam * np.abs(beta).sum(axis=0)


def _cd_columns(gram, n, mask, lam, cols, max_sweeps=MAX_SWEEPS, tol=SWEEP_TOL,
                history=None) -> np.ndarray:
    """Cyclic coordinate descent for the selected columns under a row mask.

    Returns the m x len(cols) coefficient block. Each coordinate update
    solves its one-dimensional subproblem exactly, so the objective never
    increases within a sweep; ``history`` (if given) collects the objective
    of the selected columns after every sweep.
    """
    m = gram.shape[0]
    cols = np.asarray(cols, dtype=np.int64)
    sub = np.asarray(mask, dtype=bool)[:, cols]
    beta = np.zeros((m, cols.size))
    inner = gram[:, cols].copy()  # x_j^T (x_k - X beta_k), starting from beta = 0
    thr = 0.5 * n * lam
    diag = np.diagonal(gram)
    rows = np.flatnonzero(sub.any(axis=1))
    for sweep in range(1, max_sweeps + 1):
        biggest = 0.0
        for j in rows:
            active = sub[j]
            z = inner[j, active] + diag[j] * beta[j, active]
            bnew = _soft(z, thr) / diag[j]
            delta = bnew - beta[j, active]
            if np.any(delta != 0.0):
                beta[j, active] = bnew
                full = np.zeros(cols.size)
                full[active] = delta
                inner -= np.outer(gram[:, j], full)
                step = float(np.max(np.abs(delta)))
                if step > biggest:
                    biggest = step
        if history is not None:
            history.append(float(np.sum(_column_objectives(gram, n, beta, lam, cols))))
        if biggest < tol:
            return beta
        if sweep % _REFRESH_EVERY == 0:
            # recompute the inner products to shed accumulated rounding
            inner = gram[:, cols] - gram @ beta
    raise ConvergenceError(f"coordinate descent did not converge in {max_sweeps} sweeps", beta)


def solve_column(x: Dataset, k: int, candidates, lam: float, *, gram=None,
                 max_sweeps=MAX_SWEEPS, tol=SWEEP_TOL, history=None) -> np.ndarray:
    """Lasso coefficients for feature k over the given candidate parents.

    Returns a length-m vector that is zero off the candidate set. With a
    single candidate j the result equals soft(x_j^T x_k / n, lam/2) exactly.
    """
    if lam < 0:
        raise ValueError("penalty must be nonnegative")
    m = x.m
    if not 0 <= k < m:
        raise ValueError(f"column index {k} out of range")
    cand = sorted({int(c) for c in candidates})
    if any(c < 0 or c >= m for c in cand):
        raise ValueError("candidate index out of range")
    if k in cand:
        raise ValueError("a feature cannot be its own candidate")
    if not cand:
        return np.zeros(m)
    mask = np.zeros((m, m), dtype=bool)
    mask[cand, k] = True
    if gram is None:
        gram = x.gram()
    block = _cd_columns(gram, x.n, mask, lam, [k], max_sweeps, tol, history)
    return block[:, 0]


def solve_columns(x: Dataset, r, lam: float, columns, *, gram=None,
                  max_sweeps=MAX_SWEEPS, tol=SWEEP_TOL) -> np.ndarray:
    """Solve a subset of columns under candidate matrix r; no acyclicity check.

    Returns an m x len(columns) block. Useful when only a few columns change
    between two candidate matrices.
    """
    if lam < 0:
        raise ValueError("penalty must be nonnegative")
    a = graphs.check_adjacency(r)
    if a.shape[0] != x.m:
        raise ValueError("candidate matrix size must match the data")
    if gram is None:
        gram = x.gram()
    return _cd_columns(gram, x.n, a.astype(bool), lam, np.asarray(columns, np.int64),
                       max_sweeps, tol)


def solve_restricted(x: Dataset, r, lam: float, *, gram=None,
                     max_sweeps=MAX_SWEEPS, tol=SWEEP_TOL) -> np.ndarray:
    """Solve every per-feature subproblem with candidates taken from r.

    r must be acyclic (CycleError otherwise); the support of the result is
    contained in r, so the result is itself acyclic.
    """
    if lam < 0:
        raise ValueError("penalty must be nonnegative")
    a = graphs.check_adjacency(r)
    if a.shape[0] != x.m:
        raise ValueError("candidate matrix size must match the data")
    graphs.topological_order_of(a)
    if gram is None:
        gram = x.gram()
    return _cd_columns(gram, x.n, a.astype(bool), lam, np.arange(x.m),
                       max_sweeps, tol)


def solve_unconstrained(x: Dataset, lam: float, *, gram=None) -> np.ndarray:
    """Every feature regressed on all others, ignoring acyclicity."""
    if lam < 0:
        raise ValueError("penalty must be nonnegative")
    mask = ~np.eye(x.m, dtype=bool)
    if gram is None:
        gram = x.gram()
    return _cd_columns(gram, x.n, mask, lam, np.arange(x.m))


def gradient_smooth(y, x: Dataset) -> np.ndarray:
    """Gradient of the squared-error part at y; the penalty is excluded.

    Entry (j, k) is -(2/n) x_j^T (x_k - X beta_k); the diagonal is zero.
    """
    beta = _check_beta(y, x.m)
    resid = x.values - x.values @ beta
    g = -(2.0 / x.n) * (x.values.T @ resid)
    np.fill_diagonal(g, 0.0)
    return g


def kkt_residual(x: Dataset, k: int, candidates, lam: float, beta_col) -> float:
    """Largest stationarity violation of a column solution, for verification.

    For zero coordinates the correlation |(2/n) x_j^T r| may exceed lam by at
    most the returned amount; nonzero coordinates must match lam * sign within
    the same amount.
    """
    beta_col = np.asarray(beta_col, dtype=float)
    r = x.values[:, k] - x.values @ beta_col
    worst = 0.0
    for j in candidates:
        corr = 2.0 / x.n * float(x.values[:, j] @ r)
        if beta_col[j] == 0.0:
            worst = max(worst, abs(corr) - lam)
        else:
            worst = max(worst, abs(corr - lam * np.sign(beta_col[j])))
    return worst
