import itertools

import numpy as np
import pytest

from toposearch import graphs


def brute_acyclic(a):
    """Acyclicity by checking every permutation, for cross-validation."""
    m = a.shape[0]
    for perm in itertools.permutations(range(m)):
        pos = np.empty(m, dtype=np.int64)
        pos[list(perm)] = np.arange(m, 0, -1)
        if np.all(a <= (pos[:, None] > pos[None, :])):
            return True
    return False


class TestOrders:
    def test_check_order_accepts_permutation(self):
        pos = graphs.check_order([2, 3, 1])
        assert pos.dtype == np.int64
        assert pos.tolist() == [2, 3, 1]

    @pytest.mark.parametrize("bad", [[1, 1, 2], [0, 1, 2], [2, 3, 4], [[1, 2], [3, 4]]])
    def test_check_order_rejects_non_permutations(self, bad):
        with pytest.raises(ValueError):
            graphs.check_order(bad)

    def test_adj_marks_descending_positions(self):
        r = graphs.adj([2, 3, 1])
        # j explains k exactly when j sits at a larger position
        assert r.tolist() == [[0, 0, 1], [1, 0, 1], [0, 0, 0]]

    def test_adj_always_half_full(self):
        rng = np.random.default_rng(0)
        for m in (2, 3, 5, 8):
            for _ in range(5):
                pos = rng.permutation(m) + 1
                assert graphs.adj(pos).sum() == m * (m - 1) // 2

    def test_last_position_gets_no_parents(self):
        pos = np.array([3, 1, 2])
        r = graphs.adj(pos)
        k = int(np.argmax(pos == 1))
        assert r[:, k].sum() == 2  # every other node may explain it
        k_first = int(np.argmax(pos == 3))
        assert r[:, k_first].sum() == 0


class TestAdjacencyChecks:
    def test_rejects_nonbinary(self):
        with pytest.raises(ValueError):
            graphs.check_adjacency([[0, 2], [0, 0]])

    def test_rejects_diagonal(self):
        with pytest.raises(ValueError):
            graphs.check_adjacency([[1, 0], [0, 0]])

    def test_rejects_rectangular(self):
        with pytest.raises(ValueError):
            graphs.check_adjacency(np.zeros((2, 3)))


class TestTopologicalOrder:
    def test_consistent_with_input(self):
        rng = np.random.default_rng(1)
        for _ in range(25):
            m = int(rng.integers(2, 8))
            pos = rng.permutation(m) + 1
            keep = rng.random((m, m)) < 0.5
            a = graphs.adj(pos) * keep
            np.fill_diagonal(a, 0)
            got = graphs.topological_order_of(a)
            assert np.all(a <= graphs.adj(got))

    def test_deterministic_smallest_index_first(self):
        # empty graph: node 0 takes the highest position, then 1, ...
        got = graphs.topological_order_of(np.zeros((4, 4), dtype=int))
        assert got.tolist() == [4, 3, 2, 1]

    def test_cycle_raises_with_witness(self):
        a = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
        with pytest.raises(graphs.CycleError) as err:
            graphs.topological_order_of(a)
        cyc = err.value.cycle
        for j, k in cyc.arcs:
            assert a[j, k] == 1

    def test_matches_brute_force(self):
        rng = np.random.default_rng(2)
        for _ in range(60):
            m = int(rng.integers(2, 5))
            a = (rng.random((m, m)) < 0.4).astype(int)
            np.fill_diagonal(a, 0)
            try:
                graphs.topological_order_of(a)
                ok = True
            except graphs.CycleError:
                ok = False
            assert ok == brute_acyclic(a)


class TestCycles:
    def test_acyclic_graph_has_none(self):
        cycles, truncated = graphs.find_cycles(np.zeros((3, 3), dtype=int))
        assert cycles == [] and not truncated

    def test_two_cycle(self):
        a = np.array([[0, 1], [1, 0]])
        cycles, _ = graphs.find_cycles(a)
        assert [c.nodes for c in cycles] == [(0, 1)]
        assert str(cycles[0]) == "0->1->0"

    def test_complete_graph_count(self):
        # elementary cycle count of K_m: sum over lengths l of C(m,l)*(l-1)!/... ;
        # for m=3 it is 5 (three 2-cycles and two 3-cycles)
        a = (1 - np.eye(3)).astype(int)
        cycles, truncated = graphs.find_cycles(a)
        assert len(cycles) == 5 and not truncated
        lens = sorted(len(c.nodes) for c in cycles)
        assert lens == [2, 2, 2, 3, 3]

    def test_truncation_flag(self):
        a = (1 - np.eye(4)).astype(int)
        cycles, truncated = graphs.find_cycles(a, max_cycles=3)
        assert len(cycles) == 3 and truncated

    def test_canonical_rotation(self):
        c = graphs.Cycle((4, 2, 7))
        assert c.canonical().nodes == (2, 7, 4)

    def test_cycle_validation(self):
        with pytest.raises(ValueError):
            graphs.Cycle((3,))
        with pytest.raises(ValueError):
            graphs.Cycle((1, 2, 1))


class TestSupport:
    def test_threshold_and_diagonal(self):
        y = np.array([[0.5, 1e-12], [0.2, 0.9]])
        z = graphs.support(y)
        assert z.tolist() == [[0, 0], [1, 0]]

    def test_negative_tol_rejected(self):
        with pytest.raises(ValueError):
            graphs.support(np.zeros((2, 2)), tol=-1.0)
