"""Search over topological orders for the penalized network objective.

Three strategies share one building block, solving the order-restricted
problem for a fixed order:

* ``swap_search``: local search over adjacent-position swaps in the order.
* ``iterative_reordering``: rank nodes by perturbed, weighted merit sums and
  re-solve; arc weights accumulate over rounds and steer later rankings.
* ``gradient_descent``: step along a weighted error gradient, project the
  step target back onto the acyclic set with a greedy order builder, and
  re-solve for the projected order.

``multi_start`` wraps the latter two over a list of seeds and keeps the best
run. All randomness flows through seeded generators, so every entry point is
deterministic given its inputs.
"""

from __future__ import annotations

import dataclasses
import hashlib
import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import graphs, lasso

Y_NORM_GUARD = 1e-8
Y_CONVERGENCE_TOL = 1e-9


@dataclass
class Solution:
    """State of a search: coefficients, candidate matrix, order, objective."""

    y: np.ndarray
    r: np.ndarray
    order: np.ndarray
    objective: float

    def arc_count(self, tol: float = graphs.DEFAULT_SUPPORT_TOL) -> int:
        return int(graphs.support(self.y, tol).sum())

    def order_hash(self) -> str:
        pos = np.ascontiguousarray(self.order, dtype="<i8")
        return hashlib.sha1(pos.tobytes()).hexdigest()[:12]


@dataclass(frozen=True)
class IrParams:
    """Knobs for iterative_reordering."""

    t_star: int = 10
    alpha: float = 0.01
    nu_lb: float = 0.8
    nu_ub: float = 1.2
    seed: int = 0

    def __post_init__(self):
        if self.t_star < 1:
            raise ValueError("t_star must be positive")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if not 0 < self.nu_lb <= self.nu_ub:
            raise ValueError("need 0 < nu_lb <= nu_ub")


@dataclass(frozen=True)
class GdParams:
    """Knobs for gradient_descent."""

    t1_star: int = 10
    t2_star: int = 5
    alpha: float = 0.01
    max_iters: int = 500
    seed: int = 0

    def __post_init__(self):
        if self.t1_star < 1 or self.t2_star < 1:
            raise ValueError("patience limits must be positive")
        if self.t2_star > self.t1_star:
            raise ValueError("t2_star must not exceed t1_star")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")


@dataclass
class ArcScores:
    """Static per-arc merit plus the accumulating per-arc weights."""

    merit: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.merit = np.asarray(self.merit, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        if self.merit.shape != self.weights.shape or self.merit.ndim != 2:
            raise ValueError("merit and weights must be square matrices of equal shape")
        if np.any(self.merit < 0) or np.any(self.weights < 0):
            raise ValueError("scores must be nonnegative")

    @classmethod
    def fresh(cls, merit) -> "ArcScores":
        w = np.ones_like(np.asarray(merit, dtype=float))
        np.fill_diagonal(w, 0.0)
        return cls(merit=merit, weights=w)


def random_order(m: int, rng: np.random.Generator) -> np.ndarray:
    """Uniformly random position vector over 1..m."""
    return rng.permutation(m).astype(np.int64) + 1


def solve_for_order(x: lasso.Dataset, order, lam: float, *, gram=None) -> Solution:
    """Restricted solve for one topological order."""
    pos = graphs.check_order(order)
    r = graphs.adj(pos)
    if gram is None:
        gram = x.gram()
    y = lasso.solve_restricted(x, r, lam, gram=gram)
    return Solution(y=y, r=r, order=pos, objective=lasso.objective(y, x, lam))


def _trace_row(t: int, sol: Solution, best: Solution, **extra) -> dict:
    row = {
        "t": t,
        "objective": sol.objective,
        "best_objective": best.objective,
        "nnz": sol.arc_count(),
        "order_hash": sol.order_hash(),
    }
    row.update(extra)
    return row


def swap_search(start: Solution, x: lasso.Dataset, lam: float, *, gram=None,
                trace=None) -> Solution:
    """Local search over adjacent-position swaps of the order.

    Iteration i looks at the nodes occupying positions s and s + 1 where s
    cycles through 1..m-1. A swap can only change the solution when the arc
    from the later node into the earlier one carries a nonzero coefficient,
    so it is skipped otherwise. Evaluating a swap re-solves just the two
    columns whose candidate sets change. Stops after m consecutive
    iterations without improvement.
    """
    pos = graphs.check_order(start.order).copy()
    m = pos.size
    best_y = start.y
    best_obj = start.objective
    if gram is None:
        gram = x.gram()
    node_at = np.zeros(m + 1, dtype=np.int64)
    node_at[pos] = np.arange(m)
    since_improve = 0
    it = 0
    while since_improve < m:
        it += 1
        s1 = (it - 1) % (m - 1) + 1
        s2 = s1 + 1
        k1 = int(node_at[s1])
        k2 = int(node_at[s2])
        improved = False
        evaluated = False
        if abs(best_y[k2, k1]) > 0.0:
            evaluated = True
            cand_pos = pos.copy()
            cand_pos[k1] = s2
            cand_pos[k2] = s1
            cand_r = graphs.adj(cand_pos)
            block = lasso.solve_columns(x, cand_r, lam, [k1, k2], gram=gram)
            cand_y = best_y.copy()
            cand_y[:, k1] = block[:, 0]
            cand_y[:, k2] = block[:, 1]
            cand_obj = lasso.objective(cand_y, x, lam)
            if cand_obj < best_obj:
                best_y = cand_y
                best_obj = cand_obj
                pos = cand_pos
                node_at[pos] = np.arange(m)
                improved = True
        if trace is not None:
            trace.append({"iteration": it, "s1": s1, "s2": s2, "k1": k1, "k2": k2,
                          "evaluated": evaluated, "improved": improved,
                          "best_objective": best_obj})
        since_improve = 0 if improved else since_improve + 1
    return Solution(y=best_y, r=graphs.adj(pos), order=pos, objective=best_obj)


def merit_scores(x: lasso.Dataset) -> np.ndarray:
    """Arc attractiveness: absolute sample correlation between endpoints."""
    if not x.standardized:
        raise ValueError("merit scores need standardized data")
    rho = np.abs(x.gram()) / x.n
    np.fill_diagonal(rho, 0.0)
    return rho


def node_scores(scores: ArcScores, rng: np.random.Generator | None = None,
                nu_lb: float = 0.8, nu_ub: float = 1.2, nu=None) -> np.ndarray:
    """Perturbed weighted column sums of the merit matrix.

    Score of node k is nu_k * sum_j weights[j, k] * merit[j, k], with one
    independent nu draw per node (or an explicit ``nu`` vector).
    """
    base = np.einsum("jk,jk->k", scores.weights, scores.merit)
    if nu is None:
        if rng is None:
            raise ValueError("need either a generator or an explicit nu vector")
        nu = rng.uniform(nu_lb, nu_ub, size=base.size)
    nu = np.asarray(nu, dtype=float)
    if nu.shape != base.shape:
        raise ValueError("nu must have one entry per node")
    return nu * base


def order_from_scores(c) -> np.ndarray:
    """Highest score takes position 1; ties go to the smaller node index."""
    c = np.asarray(c, dtype=float)
    ranked = np.argsort(-c, kind="stable")
    pos = np.empty(c.size, dtype=np.int64)
    pos[ranked] = np.arange(1, c.size + 1)
    return pos


def update_weights(scores: ArcScores, r) -> ArcScores:
    """Bump the weight of every arc offered by the candidate matrix."""
    a = graphs.check_adjacency(r)
    if a.shape != scores.weights.shape:
        raise ValueError("candidate matrix size must match the scores")
    return ArcScores(merit=scores.merit, weights=scores.weights + a)


def iterative_reordering(x: lasso.Dataset, lam: float,
                         params: IrParams | None = None, *, trace=None) -> Solution:
    """Score-driven reordering with arc-weight memory.

    Each round draws per-node perturbations, ranks nodes by weighted merit
    sums, solves the restricted problem for that order, and refines with the
    swap search whenever the round lands within a factor (1 + alpha) of the
    best objective. Weights grow along the round's candidate arcs. Stops
    when the round order repeats consecutively or the best solution has not
    improved for t_star rounds; the first round never counts as a repeat.
    """
    params = params or IrParams()
    rng = np.random.default_rng(params.seed)
    gram = x.gram()
    scores = ArcScores.fresh(merit_scores(x))
    best = solve_for_order(x, random_order(x.m, rng), lam, gram=gram)
    if trace is not None:
        trace.append(_trace_row(0, best, best))
    prev_pos = None
    tbar = 0
    t = 0
    while True:
        t += 1
        nu = rng.uniform(params.nu_lb, params.nu_ub, size=x.m)
        pos = order_from_scores(node_scores(scores, nu=nu))
        cur = solve_for_order(x, pos, lam, gram=gram)
        updated = False
        if cur.objective < best.objective:
            best = cur
            updated = True
        if cur.objective < best.objective * (1.0 + params.alpha):
            refined = swap_search(cur, x, lam, gram=gram)
            if refined.objective < best.objective:
                best = refined
                updated = True
        tbar = 0 if updated else tbar + 1
        scores = update_weights(scores, cur.r)
        if trace is not None:
            trace.append(_trace_row(t, cur, best, tbar=tbar))
        converged = prev_pos is not None and np.array_equal(pos, prev_pos)
        prev_pos = pos
        if converged or tbar >= params.t_star:
            return best


def greedy_project(u) -> tuple[np.ndarray, np.ndarray]:
    """Project a dense matrix onto the acyclic set by fixing an order greedily.

    Positions are assigned from the last place upward; each step keeps the
    node whose remaining column mass sum_j u[j, k]^2 is smallest (ties to the
    smaller index), which minimizes the squared entries given up at that
    step. Returns (order, projection): the projection keeps u exactly on
    arcs compatible with the order and is zero elsewhere. The diagonal is
    ignored and comes back zero.
    """
    mat = np.asarray(u, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("matrix must be square")
    m = mat.shape[0]
    sq = mat * mat
    np.fill_diagonal(sq, 0.0)
    active = np.ones(m, dtype=bool)
    pos = np.zeros(m, dtype=np.int64)
    for q in range(m, 0, -1):
        idx = np.flatnonzero(active)
        col_mass = sq[np.ix_(idx, idx)].sum(axis=0)
        k = int(idx[int(np.argmin(col_mass))])
        pos[k] = q
        active[k] = False
    proj = np.where(pos[:, None] > pos[None, :], mat, 0.0)
    np.fill_diagonal(proj, 0.0)
    return pos, proj


def grad_weights(order) -> np.ndarray:
    """Per-column step weights (1 + 1/pos_k)^pos_k, zero on the diagonal.

    Grows from 2 at position 1 toward e, compensating columns whose low
    positions admit few candidate arcs.
    """
    pos = graphs.check_order(order)
    col = (1.0 + 1.0 / pos) ** pos
    w = np.tile(col, (pos.size, 1))
    np.fill_diagonal(w, 0.0)
    return w


def gradient_descent(x: lasso.Dataset, lam: float,
                     params: GdParams | None = None, *, trace=None) -> Solution:
    """Weighted gradient steps with greedy projection back to an order.

    Each iteration forms H = gradient of the error term (penalty excluded)
    times the position weights, takes a step of size
    (||H||_inf / ||Y||_inf) / sqrt(t) (falling back to 1/sqrt(t) when the
    iterate is essentially zero), projects the step target greedily to get
    the next order, and re-solves. The swap search refines near-best
    iterations; after t2_star stale iterations the iterate snaps back to the
    best solution. Terminates when the projected order and solution repeat,
    when the best has not improved for t1_star iterations, or at max_iters.
    """
    params = params or GdParams()
    rng = np.random.default_rng(params.seed)
    gram = x.gram()
    cur = solve_for_order(x, random_order(x.m, rng), lam, gram=gram)
    best = cur
    if trace is not None:
        trace.append(_trace_row(0, cur, best, tbar=0, converged=False))
    tbar = 0
    for t in range(1, params.max_iters + 1):
        h = lasso.gradient_smooth(cur.y, x) * grad_weights(cur.order)
        ymax = float(np.max(np.abs(cur.y)))
        hmax = float(np.max(np.abs(h)))
        gamma = (hmax / ymax if ymax >= Y_NORM_GUARD else 1.0) / math.sqrt(t)
        u = cur.y - gamma * h
        nxt = solve_for_order(x, greedy_project(u)[0], lam, gram=gram)
        # convergence is judged on the raw projected iterate, before any
        # refinement or reset below rewrites it
        converged = (np.array_equal(nxt.order, cur.order)
                     and float(np.max(np.abs(nxt.y - cur.y))) < Y_CONVERGENCE_TOL)
        updated = False
        if nxt.objective < best.objective:
            best = nxt
            updated = True
        if nxt.objective < best.objective * (1.0 + params.alpha):
            refined = swap_search(nxt, x, lam, gram=gram)
            if refined.objective < best.objective:
                # an improving refinement replaces the iterate as well
                best = refined
                nxt = refined
                updated = True
        tbar = 0 if updated else tbar + 1
        if tbar >= params.t2_star:
            nxt = best
        if trace is not None:
            trace.append(_trace_row(t, nxt, best, tbar=tbar, converged=converged))
        cur = nxt
        if converged or tbar >= params.t1_star:
            break
    return best


def multi_start(algo: str, x: lasso.Dataset, lam: float, seeds,
                params=None, *, per_seed=None) -> Solution:
    """Best solution over several seeded runs of one algorithm.

    ``algo`` is "ir" or "gd". Runs are independent; a run that fails to
    converge is recorded and skipped, and only if every run fails does the
    call raise. Ties keep the earliest seed, so the result is deterministic
    for a fixed seed list.
    """
    name = algo.lower()
    if name not in ("ir", "gd"):
        raise ValueError(f"unknown algorithm {algo!r}")
    seeds = list(seeds)
    if not seeds:
        raise ValueError("need at least one seed")
    best = None
    first_error = None
    for seed in seeds:
        if name == "ir":
            p = dataclasses.replace(params or IrParams(), seed=int(seed))
            runner = iterative_reordering
        else:
            p = dataclasses.replace(params or GdParams(), seed=int(seed))
            runner = gradient_descent
        try:
            sol = runner(x, lam, p)
        except lasso.ConvergenceError as exc:
            if per_seed is not None:
                per_seed.append({"seed": int(seed), "objective": None,
                                 "error": str(exc)})
            if first_error is None:
                first_error = exc
            continue
        if per_seed is not None:
            per_seed.append({"seed": int(seed), "objective": sol.objective,
                             "error": None})
        if best is None or sol.objective < best.objective:
            best = sol
    if best is None:
        raise RuntimeError(f"all {len(seeds)} runs failed") from first_error
    return best


def enumerate_orders(x: lasso.Dataset, lam: float, *, gram=None,
                     max_nodes: int = 6) -> Solution:
    """Exact minimum over every topological order; factorial cost, small m only."""
    if x.m > max_nodes:
        raise ValueError(f"order enumeration is limited to m <= {max_nodes}")
    if gram is None:
        gram = x.gram()
    best = None
    for perm in itertools.permutations(range(1, x.m + 1)):
        sol = solve_for_order(x, np.array(perm, dtype=np.int64), lam, gram=gram)
        if best is None or sol.objective < best.objective:
            best = sol
    return best
