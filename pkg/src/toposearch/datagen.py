"""Synthetic acyclic-network instances and the benchmark suites.

An instance is a random directed acyclic graph with signed uniform
coefficients, sampled into n observations by propagating unit-variance noise
through the arcs, then standardized column by column. Three named suites fix
the grids used throughout the experiments: "sparse" and "dense" share the
n and m grids and differ in how the arc probability and penalty grid are
derived, "highdim" pushes m past n.

Suite layout (degree is the per-suite density knob):

* sparse: n in {100, 200, 300}, m in {20, 30, 40, 50}, degree s in
  {1, 2, 3}, 10 replicates, 360 instances, penalties {1, 0.5, 0.1, 0.05}.
* dense: same n and m, degree d in {0.1, 0.2, 0.3}, 10 replicates,
  360 instances, penalties 10^-(10 d - 1) * {1, 0.1, 0.01, 0.001}.
* highdim: n = 100, m in {100, 150, 200}, degree s in {0.5, 1, 1.5},
  10 replicates, 90 instances, penalties {1, 0.8, 0.6, 0.4}.

Instance randomness comes from a seed sequence keyed on
(master_seed, instance index), so any instance can be regenerated alone.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import graphs, lasso

SUITE_NAMES = ("sparse", "dense", "highdim")
COEF_LOW = 0.1
COEF_HIGH = 1.0

_GRIDS = {
    "sparse": {"n": (100, 200, 300), "m": (20, 30, 40, 50),
               "degree": (1.0, 2.0, 3.0), "replicates": 10},
    "dense": {"n": (100, 200, 300), "m": (20, 30, 40, 50),
              "degree": (0.1, 0.2, 0.3), "replicates": 10},
    "highdim": {"n": (100,), "m": (100, 150, 200),
                "degree": (0.5, 1.0, 1.5), "replicates": 10},
}


@dataclass(frozen=True)
class InstanceSpec:
    """Coordinates of one instance inside a suite."""

    suite: str
    index: int
    n: int
    m: int
    degree: float
    replicate: int
    master_seed: int

    def __post_init__(self):
        if self.suite not in SUITE_NAMES:
            raise ValueError(f"unknown suite {self.suite!r}")

    @property
    def name(self) -> str:
        return f"{self.suite}_{self.index:03d}"

    def lambdas(self) -> tuple[float, ...]:
        return lambda_grid(self.suite, self.degree)

    def arc_probability(self) -> float:
        return arc_probability(self.suite, self.m, self.degree)

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(
            np.random.SeedSequence((self.master_seed, self.index)))

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "index": self.index,
            "n": self.n,
            "m": self.m,
            "degree": self.degree,
            "replicate": self.replicate,
            "master_seed": self.master_seed,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "InstanceSpec":
        return cls(suite=payload["suite"], index=int(payload["index"]),
                   n=int(payload["n"]), m=int(payload["m"]),
                   degree=float(payload["degree"]),
                   replicate=int(payload["replicate"]),
                   master_seed=int(payload["master_seed"]))


@dataclass(frozen=True)
class GroundTruth:
    """Generating coefficients and the order they were laid out in."""

    coefficients: np.ndarray
    order: np.ndarray

    def adjacency(self) -> np.ndarray:
        return graphs.support(self.coefficients, tol=0.0)

    def arc_count(self) -> int:
        return int(self.adjacency().sum())


def arc_probability(suite: str, m: int, degree: float) -> float:
    """Per-admissible-arc inclusion probability for a suite's density knob."""
    if suite in ("sparse", "highdim"):
        return degree / (m - 1)
    if suite == "dense":
        return min(1.0, 2.0 * degree * m / (m - 1))
    raise ValueError(f"unknown suite {suite!r}")


def lambda_grid(suite: str, degree: float) -> tuple[float, ...]:
    if suite == "sparse":
        return (1.0, 0.5, 0.1, 0.05)
    if suite == "highdim":
        return (1.0, 0.8, 0.6, 0.4)
    if suite == "dense":
        scale = 10.0 ** -(10.0 * degree - 1.0)
        return tuple(base * scale for base in (1.0, 0.1, 0.01, 0.001))
    raise ValueError(f"unknown suite {suite!r}")


def random_dag(m: int, p: float, rng: np.random.Generator) -> GroundTruth:
    """Random coefficients over a random order with arc probability p.

    Draw shapes are fixed (full m x m tables masked afterwards) so the
    stream consumed per call does not depend on which arcs land.
    """
    if m < 2:
        raise ValueError("need at least two nodes")
    if not 0.0 <= p <= 1.0:
        raise ValueError("arc probability must lie in [0, 1]")
    order = rng.permutation(m) + 1
    admissible = (order[:, None] > order[None, :])
    keep = rng.random((m, m)) < p
    magnitude = rng.uniform(COEF_LOW, COEF_HIGH, size=(m, m))
    sign = np.where(rng.random((m, m)) < 0.5, -1.0, 1.0)
    coefficients = np.where(admissible & keep, sign * magnitude, 0.0)
    return GroundTruth(coefficients=coefficients, order=order.astype(np.int64))


def sample_data(truth: GroundTruth, n: int, rng: np.random.Generator) -> np.ndarray:
    """Propagate unit-variance noise through the arcs, sources first.

    Nodes are filled in descending position order so every parent is ready
    when its children are formed.
    """
    b = truth.coefficients
    m = b.shape[0]
    values = np.empty((n, m), dtype=np.float64)
    noise = rng.standard_normal((n, m))
    position_of = np.asarray(truth.order, dtype=np.int64)
    node_at = np.empty(m, dtype=np.int64)
    node_at[position_of - 1] = np.arange(m)
    for q in range(m, 0, -1):
        k = node_at[q - 1]
        parents = np.flatnonzero(b[:, k])
        values[:, k] = noise[:, k]
        if parents.size:
            values[:, k] += values[:, parents] @ b[parents, k]
    return values


def standardize(values: np.ndarray, feature_names=None) -> lasso.Dataset:
    """Center and scale each column by its population standard deviation."""
    raw = np.asarray(values, dtype=np.float64)
    if raw.ndim != 2:
        raise ValueError("expected a 2-D array of observations")
    sd = raw.std(axis=0, ddof=0)
    if np.any(sd <= 0.0):
        bad = int(np.flatnonzero(sd <= 0.0)[0])
        raise ValueError(f"column {bad + 1} is constant and cannot be scaled")
    scaled = (raw - raw.mean(axis=0)) / sd
    return lasso.Dataset(values=scaled, feature_names=feature_names, standardized=True)


def make_instance(spec: InstanceSpec) -> tuple[lasso.Dataset, GroundTruth]:
    rng = spec.rng()
    truth = random_dag(spec.m, spec.arc_probability(), rng)
    raw = sample_data(truth, spec.n, rng)
    return standardize(raw), truth


def suite_specs(suite: str, master_seed: int = 0, limit: int | None = None):
    """All instance specs of a suite in enumeration order."""
    if suite not in _GRIDS:
        raise ValueError(f"unknown suite {suite!r}")
    grid = _GRIDS[suite]
    specs = []
    index = 0
    for n in grid["n"]:
        for m in grid["m"]:
            for degree in grid["degree"]:
                for rep in range(1, grid["replicates"] + 1):
                    index += 1
                    specs.append(InstanceSpec(
                        suite=suite, index=index, n=n, m=m,
                        degree=degree, replicate=rep, master_seed=master_seed))
    if limit is not None:
        specs = specs[:limit]
    return specs


# ---------------------------------------------------------------------------
# on-disk formats


def _write_rows(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def fmt_float(value) -> str:
    """Canonical float rendering used by every file the package writes."""
    return repr(float(value))


def save_data_csv(path, x: lasso.Dataset) -> None:
    _write_rows(Path(path), x.feature_names,
                ([fmt_float(v) for v in row] for row in x.values))


def load_csv(path) -> lasso.Dataset:
    """Read an observation table; assumes columns were standardized already."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        values = np.array([[float(cell) for cell in row] for row in reader],
                          dtype=np.float64)
    if values.ndim != 2 or values.shape[1] != len(header):
        raise ValueError(f"malformed data table {path}")
    return lasso.Dataset(values=values, feature_names=list(header), standardized=True)


def save_edges_csv(path, coefficients: np.ndarray, tol: float = 0.0) -> None:
    """Arc list with weights, 1-based endpoints, row-major order."""
    b = np.asarray(coefficients, dtype=np.float64)
    rows = []
    for j in range(b.shape[0]):
        for k in range(b.shape[1]):
            if j != k and abs(b[j, k]) > tol:
                rows.append((j + 1, k + 1, fmt_float(b[j, k])))
    _write_rows(Path(path), ("from", "to", "weight"), rows)


def load_edges_csv(path, m: int | None = None) -> np.ndarray:
    """Weighted adjacency from an arc list; size inferred unless m is given."""
    entries = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip().lower() for h in header[:2]] != ["from", "to"]:
            raise ValueError(f"{path}: expected a from,to[,weight] header")
        for row in reader:
            j, k = int(row[0]), int(row[1])
            w = float(row[2]) if len(row) > 2 else 1.0
            entries.append((j - 1, k - 1, w))
    if m is None:
        m = max((max(j, k) for j, k, _w in entries), default=-1) + 1
    b = np.zeros((m, m), dtype=np.float64)
    for j, k, w in entries:
        if not (0 <= j < m and 0 <= k < m):
            raise ValueError(f"{path}: endpoint outside 1..{m}")
        if j == k:
            raise ValueError(f"{path}: self-loop on node {j + 1}")
        b[j, k] = w
    return b


def save_instance(out_dir, spec: InstanceSpec, x: lasso.Dataset,
                  truth: GroundTruth) -> dict:
    """Write data, truth arcs, and the spec next to each other; returns paths."""
    base = Path(out_dir)
    base.mkdir(parents=True, exist_ok=True)
    paths = {
        "data": base / f"{spec.name}.data.csv",
        "edges": base / f"{spec.name}.edges.csv",
        "spec": base / f"{spec.name}.json",
    }
    save_data_csv(paths["data"], x)
    save_edges_csv(paths["edges"], truth.coefficients)
    payload = spec.to_dict()
    payload["lambdas"] = [fmt_float(v) for v in spec.lambdas()]
    payload["order"] = [int(q) for q in truth.order]
    payload["arcs"] = truth.arc_count()
    paths["spec"].write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return {key: str(value) for key, value in paths.items()}


def load_instance(out_dir, name: str):
    """Reload a saved instance triple by its ``<suite>_<index>`` name."""
    base = Path(out_dir)
    payload = json.loads((base / f"{name}.json").read_text())
    spec = InstanceSpec.from_dict(payload)
    x = load_csv(base / f"{name}.data.csv")
    b = load_edges_csv(base / f"{name}.edges.csv", m=spec.m)
    truth = GroundTruth(coefficients=b,
                        order=np.asarray(payload["order"], dtype=np.int64))
    return spec, x, truth
