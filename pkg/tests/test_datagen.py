"""Instance generation, suite grids, and the on-disk formats."""

import json

import numpy as np
import pytest

from toposearch import datagen, graphs, lasso

from conftest import acyclic


# ---------------------------------------------------------------------------
# suite grids


def test_suite_sizes():
    assert len(datagen.suite_specs("sparse")) == 360
    assert len(datagen.suite_specs("dense")) == 360
    assert len(datagen.suite_specs("highdim")) == 90


def test_suite_specs_enumeration_order():
    specs = datagen.suite_specs("sparse")
    assert [s.index for s in specs] == list(range(1, 361))
    # replicate is the innermost loop, then degree, then m, then n
    assert specs[0].replicate == 1 and specs[9].replicate == 10
    assert specs[0].degree == 1.0 and specs[10].degree == 2.0
    assert specs[0].m == 20 and specs[30].m == 30
    assert specs[0].n == 100 and specs[120].n == 200


def test_suite_specs_limit_and_unknown():
    assert len(datagen.suite_specs("highdim", limit=7)) == 7
    with pytest.raises(ValueError):
        datagen.suite_specs("nope")


def test_highdim_pushes_m_past_n():
    for spec in datagen.suite_specs("highdim"):
        assert spec.n == 100
        assert spec.m >= spec.n


def test_arc_probability_formulas():
    assert datagen.arc_probability("sparse", 21, 2.0) == pytest.approx(0.1)
    assert datagen.arc_probability("highdim", 101, 0.5) == pytest.approx(0.005)
    # dense: 2*d*m/(m-1), capped at one
    assert datagen.arc_probability("dense", 20, 0.3) == pytest.approx(
        2.0 * 0.3 * 20 / 19)
    assert datagen.arc_probability("dense", 20, 0.5) == 1.0
    with pytest.raises(ValueError):
        datagen.arc_probability("nope", 10, 1.0)


def test_lambda_grids():
    assert datagen.lambda_grid("sparse", 2.0) == (1.0, 0.5, 0.1, 0.05)
    assert datagen.lambda_grid("highdim", 1.0) == (1.0, 0.8, 0.6, 0.4)
    dense = datagen.lambda_grid("dense", 0.3)
    assert dense == pytest.approx((1e-2, 1e-3, 1e-4, 1e-5))
    assert datagen.lambda_grid("dense", 0.1) == pytest.approx(
        (1.0, 0.1, 0.01, 0.001))
    with pytest.raises(ValueError):
        datagen.lambda_grid("nope", 1.0)


# ---------------------------------------------------------------------------
# InstanceSpec


def test_spec_name_and_lambdas():
    spec = datagen.suite_specs("dense")[20]
    assert spec.name == "dense_021"
    assert spec.lambdas() == datagen.lambda_grid("dense", spec.degree)
    assert spec.arc_probability() == datagen.arc_probability(
        "dense", spec.m, spec.degree)


def test_spec_round_trip():
    spec = datagen.suite_specs("sparse", master_seed=5)[17]
    again = datagen.InstanceSpec.from_dict(spec.to_dict())
    assert again == spec


def test_spec_rejects_unknown_suite():
    with pytest.raises(ValueError):
        datagen.InstanceSpec(suite="nope", index=1, n=10, m=5,
                             degree=1.0, replicate=1, master_seed=0)


def test_spec_rng_is_keyed_on_seed_and_index():
    spec = datagen.suite_specs("sparse", master_seed=3)[4]
    a = spec.rng().random(8)
    b = spec.rng().random(8)
    assert np.array_equal(a, b)
    other = datagen.suite_specs("sparse", master_seed=3)[5]
    assert not np.array_equal(a, other.rng().random(8))
    reseeded = datagen.suite_specs("sparse", master_seed=4)[4]
    assert not np.array_equal(a, reseeded.rng().random(8))


# ---------------------------------------------------------------------------
# random graphs and sampling


def test_random_dag_support_is_admissible():
    for seed in range(10):
        rng = np.random.default_rng(seed)
        truth = datagen.random_dag(8, 0.4, rng)
        b = truth.coefficients
        assert b.shape == (8, 8)
        pos = graphs.check_order(truth.order)
        for j in range(8):
            for k in range(8):
                if b[j, k] != 0.0:
                    assert pos[j] > pos[k]
        nz = np.abs(b[b != 0.0])
        if nz.size:
            assert nz.min() >= datagen.COEF_LOW
            assert nz.max() <= datagen.COEF_HIGH
        assert acyclic(truth.adjacency())


def test_random_dag_fixed_draw_shapes():
    # masking happens after the draws, so the stream position after the call
    # does not depend on p
    tail_low = None
    for p in (0.0, 0.3, 1.0):
        rng = np.random.default_rng(77)
        datagen.random_dag(6, p, rng)
        tail = rng.random(4)
        if tail_low is None:
            tail_low = tail
        assert np.array_equal(tail, tail_low)


def test_random_dag_extremes_and_guards():
    rng = np.random.default_rng(0)
    empty = datagen.random_dag(5, 0.0, rng)
    assert empty.arc_count() == 0
    full = datagen.random_dag(5, 1.0, np.random.default_rng(1))
    assert full.arc_count() == 10
    with pytest.raises(ValueError):
        datagen.random_dag(1, 0.5, rng)
    with pytest.raises(ValueError):
        datagen.random_dag(5, 1.5, rng)


def test_ground_truth_adjacency():
    b = np.zeros((3, 3))
    b[2, 0] = 0.5
    b[2, 1] = -0.25
    truth = datagen.GroundTruth(coefficients=b,
                                order=np.array([1, 2, 3], dtype=np.int64))
    assert truth.arc_count() == 2
    assert np.array_equal(truth.adjacency(),
                          (b != 0.0).astype(np.int8))


def test_sample_data_matches_manual_propagation():
    # two-node chain: node 0 explains node 1, so column 1 is
    # 0.7 * column 0 plus its own noise
    b = np.zeros((2, 2))
    b[0, 1] = 0.7
    truth = datagen.GroundTruth(coefficients=b,
                                order=np.array([2, 1], dtype=np.int64))
    values = datagen.sample_data(truth, 50, np.random.default_rng(9))
    noise = np.random.default_rng(9).standard_normal((50, 2))
    assert np.allclose(values[:, 0], noise[:, 0])
    assert np.allclose(values[:, 1], 0.7 * noise[:, 0] + noise[:, 1])


def test_sample_data_is_deterministic():
    truth = datagen.random_dag(6, 0.5, np.random.default_rng(2))
    a = datagen.sample_data(truth, 30, np.random.default_rng(3))
    b = datagen.sample_data(truth, 30, np.random.default_rng(3))
    assert np.array_equal(a, b)


def test_standardize_moments_and_guards():
    rng = np.random.default_rng(4)
    raw = rng.normal(loc=3.0, scale=2.5, size=(40, 5))
    x = datagen.standardize(raw)
    assert x.standardized
    assert np.allclose(x.values.mean(axis=0), 0.0, atol=1e-12)
    assert np.allclose(x.values.std(axis=0, ddof=0), 1.0, atol=1e-12)
    bad = raw.copy()
    bad[:, 2] = 7.0
    with pytest.raises(ValueError, match="column 3"):
        datagen.standardize(bad)
    with pytest.raises(ValueError):
        datagen.standardize(raw[:, 0])


def test_make_instance_is_reproducible():
    spec = datagen.suite_specs("sparse", master_seed=1)[0]
    x1, truth1 = datagen.make_instance(spec)
    x2, truth2 = datagen.make_instance(spec)
    assert np.array_equal(x1.values, x2.values)
    assert np.array_equal(truth1.coefficients, truth2.coefficients)
    assert x1.values.shape == (spec.n, spec.m)
    assert np.allclose(x1.values.std(axis=0, ddof=0), 1.0)


# ---------------------------------------------------------------------------
# files


def test_fmt_float_round_trips():
    for v in (0.1, 1.0, -2.5e-17, 3.0, 1e300):
        assert float(datagen.fmt_float(v)) == float(v)
    assert datagen.fmt_float(3.0) == "3.0"


def test_data_csv_round_trip(tmp_path):
    rng = np.random.default_rng(6)
    x = datagen.standardize(rng.normal(size=(12, 4)))
    path = tmp_path / "t.data.csv"
    datagen.save_data_csv(path, x)
    back = datagen.load_csv(path)
    assert back.standardized
    assert back.feature_names == x.feature_names
    assert np.array_equal(back.values, x.values)


def test_edges_csv_round_trip(tmp_path):
    truth = datagen.random_dag(7, 0.4, np.random.default_rng(8))
    path = tmp_path / "t.edges.csv"
    datagen.save_edges_csv(path, truth.coefficients)
    back = datagen.load_edges_csv(path, m=7)
    assert np.array_equal(back, truth.coefficients)
    # size inference needs every trailing node to appear in some arc;
    # check it on a matrix whose last node has an arc
    b = np.zeros((4, 4))
    b[3, 0] = 1.25
    datagen.save_edges_csv(path, b)
    assert np.array_equal(datagen.load_edges_csv(path), b)


def test_edges_csv_rejects_bad_rows(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("from,to,weight\n2,2,1.0\n")
    with pytest.raises(ValueError, match="self-loop"):
        datagen.load_edges_csv(path)
    path.write_text("from,to,weight\n5,1,1.0\n")
    with pytest.raises(ValueError, match="endpoint"):
        datagen.load_edges_csv(path, m=3)
    path.write_text("a,b,weight\n1,2,1.0\n")
    with pytest.raises(ValueError, match="header"):
        datagen.load_edges_csv(path)


def test_instance_files_round_trip(tmp_path):
    spec = datagen.suite_specs("dense", master_seed=2)[3]
    x, truth = datagen.make_instance(spec)
    paths = datagen.save_instance(tmp_path, spec, x, truth)
    assert set(paths) == {"data", "edges", "spec"}
    payload = json.loads((tmp_path / f"{spec.name}.json").read_text())
    assert payload["suite"] == "dense"
    assert payload["arcs"] == truth.arc_count()
    assert [float(v) for v in payload["lambdas"]] == list(spec.lambdas())
    spec2, x2, truth2 = datagen.load_instance(tmp_path, spec.name)
    assert spec2 == spec
    assert np.array_equal(x2.values, x.values)
    assert np.array_equal(truth2.coefficients, truth.coefficients)
    assert np.array_equal(truth2.order, truth.order)


def test_saved_instance_solves_like_the_original(tmp_path):
    # the files are the hand-off format, so a fit on the reloaded data must
    # match a fit on the generated data exactly
    spec = datagen.suite_specs("sparse", master_seed=9)[1]
    x, truth = datagen.make_instance(spec)
    datagen.save_instance(tmp_path, spec, x, truth)
    _, x2, _ = datagen.load_instance(tmp_path, spec.name)
    y1 = lasso.solve_unconstrained(x, 0.5)
    y2 = lasso.solve_unconstrained(x2, 0.5)
    assert np.array_equal(y1, y2)
