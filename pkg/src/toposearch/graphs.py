"""Topological orders, candidate arc matrices, and cycle detection.

Conventions used throughout the package: nodes are 0-based indices into an
m x m matrix, while order positions are 1-based (``positions[k]`` is the rank
of node k, somewhere in 1..m). An arc (j, k) means "j explains k" and is
admissible under an order exactly when ``positions[j] > positions[k]``. A
0/1 matrix is acyclic precisely when such an order exists.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_MAX_CYCLES = 10_000
DEFAULT_SUPPORT_TOL = 1e-8


@dataclass(frozen=True)
class Cycle:
    """Elementary directed cycle, stored as the node sequence of one loop."""

    nodes: tuple[int, ...]

    def __post_init__(self):
        if len(self.nodes) < 2:
            raise ValueError("a directed cycle needs at least two nodes")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("cycle nodes must be distinct")

    @property
    def arcs(self) -> list[tuple[int, int]]:
        """Arc list (tail, head), closing back to the first node."""
        ns = self.nodes
        return [(ns[i], ns[(i + 1) % len(ns)]) for i in range(len(ns))]

    def canonical(self) -> "Cycle":
        """The rotation of this cycle that starts at its smallest node."""
        i = self.nodes.index(min(self.nodes))
        return Cycle(self.nodes[i:] + self.nodes[:i])

    def __str__(self):
        return "->".join(str(v) for v in self.nodes + (self.nodes[0],))


class CycleError(ValueError):
    """An operation that needs an acyclic graph found a cycle (kept as .cycle)."""

    def __init__(self, cycle: Cycle):
        self.cycle = cycle
        super().__init__(f"graph contains a directed cycle: {cycle}")


def check_order(order) -> np.ndarray:
    """Validate and return an order as an int64 position vector."""
    pos = np.asarray(order, dtype=np.int64)
    if pos.ndim != 1:
        raise ValueError("order must be a one-dimensional vector of positions")
    m = pos.shape[0]
    if sorted(pos.tolist()) != list(range(1, m + 1)):
        raise ValueError("positions must be a permutation of 1..m")
    return pos


def check_adjacency(z) -> np.ndarray:
    """Validate and return a square 0/1 matrix with a zero diagonal."""
    a = np.asarray(z)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("adjacency must be a square matrix")
    if not np.isin(a, (0, 1)).all():
        raise ValueError("adjacency entries must be 0 or 1")
    a = a.astype(np.int64)
    if np.diagonal(a).any():
        raise ValueError("adjacency diagonal must be zero")
    return a


def adj(order) -> np.ndarray:
    """Candidate matrix of an order: entry (j, k) is 1 iff j may explain k.

    The result always has exactly m*(m-1)/2 ones, one per ordered pair of
    distinct positions.
    """
    pos = check_order(order)
    return (pos[:, None] > pos[None, :]).astype(np.int64)


def topological_order_of(z) -> np.ndarray:
    """A position vector consistent with z, or CycleError with a witness.

    Consistency means z[j, k] == 1 implies positions[j] > positions[k].
    Positions are assigned from m downward; each step takes the node with no
    incoming arcs from the still-unplaced set, smallest node index first, so
    the result is deterministic.
    """
    a = check_adjacency(z)
    m = a.shape[0]
    indeg = a.sum(axis=0)
    remaining = np.ones(m, dtype=bool)
    pos = np.zeros(m, dtype=np.int64)
    for q in range(m, 0, -1):
        ready = np.flatnonzero(remaining & (indeg == 0))
        if ready.size == 0:
            sub = a.copy()
            sub[~remaining, :] = 0
            sub[:, ~remaining] = 0
            cycles, _ = find_cycles(sub, max_cycles=1)
            raise CycleError(cycles[0])
        k = int(ready[0])
        pos[k] = q
        remaining[k] = False
        indeg = indeg - a[k, :]
    return pos


def _elementary_cycles(a: np.ndarray):
    """Yield node tuples of elementary cycles in lexicographic canonical order.

    Each cycle is reported once, rotated to start at its smallest node; for a
    fixed start node the depth-first search visits successors in ascending
    order, which makes the overall emission order lexicographic.
    """
    m = a.shape[0]
    succ = [np.flatnonzero(a[j]).tolist() for j in range(m)]
    for s in range(m):
        path = [s]
        onpath = [False] * m
        onpath[s] = True
        stack = [iter(succ[s])]
        while stack:
            try:
                v = next(stack[-1])
            except StopIteration:
                stack.pop()
                onpath[path.pop()] = False
                continue
            if v == s:
                if len(path) >= 2:
                    yield tuple(path)
                continue
            if v < s or onpath[v]:
                # nodes below the start belong to earlier start nodes
                continue
            path.append(v)
            onpath[v] = True
            stack.append(iter(succ[v]))


def find_cycles(z, max_cycles: int = DEFAULT_MAX_CYCLES) -> tuple[list[Cycle], bool]:
    """Enumerate elementary cycles of z in a deterministic order.

    Returns (cycles, truncated). The list is empty iff z is acyclic; it is
    ordered lexicographically by the smallest-node rotation of each cycle.
    ``truncated`` is True when the search was stopped at ``max_cycles`` with
    at least one further cycle unreported.
    """
    a = check_adjacency(z)
    if max_cycles < 1:
        raise ValueError("max_cycles must be at least 1")
    out: list[Cycle] = []
    truncated = False
    for nodes in _elementary_cycles(a):
        if len(out) == max_cycles:
            truncated = True
            break
        out.append(Cycle(nodes))
    return out, truncated


def support(y, tol: float = DEFAULT_SUPPORT_TOL) -> np.ndarray:
    """0/1 pattern of entries of y larger than tol in magnitude; diagonal 0."""
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    mat = np.asarray(y, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("coefficient matrix must be square")
    z = (np.abs(mat) > tol).astype(np.int64)
    np.fill_diagonal(z, 0)
    return z
