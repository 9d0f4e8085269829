"""Benchmark orchestration: metrics, experiment runs, and result tables.

A bench run takes a config (a suite name or explicit data files, the method
list, penalty grid, seeds, parallelism) and produces:

* ``runs.csv``: one record per (instance, penalty, method),
* ``agg_<key>.csv``: per-method means grouped by each grid dimension,
* ``scatter.csv``: per-parameter-combination averages with the
  log-transform columns used for density-versus-gap plots,
* ``bigm.csv`` (optional): the coefficient-bound validation table.

Method tokens: GD, IR, GD10, IR10 (the order-search algorithms), oracle
(exhaustive order enumeration, small m only), and MIPto-export,
MIPin-export, MIPcp-export, which build and export the integer models and
report their sizes; export rows never carry objectives and are excluded
from gap comparisons and aggregate means.

All tables are deterministic for a fixed config apart from the columns and
keys that carry wall-clock time (every such name contains "seconds").
"""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import algorithms, datagen, graphs, lasso, mip

ALGO_METHODS = ("GD", "IR", "GD10", "IR10", "oracle")
EXPORT_METHODS = ("MIPto-export", "MIPin-export", "MIPcp-export")
METHOD_TOKENS = ALGO_METHODS + EXPORT_METHODS
MULTI_START_WIDTH = 10

_EXPORT_KINDS = {"MIPto-export": mip.KIND_ORDER,
                 "MIPin-export": mip.KIND_TRIANGLE,
                 "MIPcp-export": mip.KIND_CYCLE}

RUNS_COLUMNS = ("instance", "suite", "n", "m", "degree", "replicate", "method",
                "lambda", "seed", "status", "objective", "arc_count",
                "delta_sol", "dtp", "utp", "order_hash", "detail",
                "wall_time_seconds")


def delta_sol(objectives):
    """Percent gaps to the best finite objective of one instance.

    None or non-finite entries count as failed runs and map to inf. When the
    best objective is zero the gap degrades to an absolute one (times 100).
    """
    values = list(objectives)
    finite = [v for v in values if v is not None and math.isfinite(v)]
    if not finite:
        raise ValueError("no finite objective to compare against")
    fmin = min(finite)
    gaps = []
    for v in values:
        if v is None or not math.isfinite(v):
            gaps.append(math.inf)
        elif fmin == 0.0:
            gaps.append(100.0 * (v - fmin))
        else:
            gaps.append(100.0 * (v - fmin) / fmin)
    return gaps


def true_positive(z_hat, z_true) -> tuple[float, float]:
    """Directed and undirected true-positive ratios against a known structure.

    The undirected ratio credits an arc of the truth when the estimate
    contains it in either direction, so it never falls below the directed
    one.
    """
    a_hat = graphs.check_adjacency(z_hat)
    a_true = graphs.check_adjacency(z_true)
    if a_hat.shape != a_true.shape:
        raise ValueError("adjacency shapes differ")
    total = int(a_true.sum())
    if total == 0:
        raise ValueError("the true arc set is empty")
    directed = int((a_hat & a_true).sum())
    either = int((np.maximum(a_hat, a_hat.T) & a_true).sum())
    return directed / total, either / total


@dataclass
class RunRecord:
    """One row of runs.csv."""

    instance: str
    suite: str
    n: int
    m: int
    degree: float | None
    replicate: int | None
    method: str
    lam: float
    seed: int | None
    status: str
    objective: float | None
    arc_count: int | None
    delta_sol: float | None
    dtp: float | None
    utp: float | None
    order_hash: str
    detail: str
    wall_time_seconds: float

    def to_row(self) -> list[str]:
        return [
            self.instance, self.suite, str(self.n), str(self.m),
            _cell(self.degree), _cell(self.replicate), self.method,
            datagen.fmt_float(self.lam), _cell(self.seed), self.status,
            _cell(self.objective), _cell(self.arc_count),
            _cell(self.delta_sol), _cell(self.dtp), _cell(self.utp),
            self.order_hash, self.detail,
            datagen.fmt_float(self.wall_time_seconds),
        ]


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return datagen.fmt_float(value)


@dataclass(frozen=True)
class BenchConfig:
    """Validated bench configuration; built from a JSON file or dict."""

    methods: tuple[str, ...]
    suite: str | None = None
    data: tuple[str, ...] = ()
    lambdas: tuple[float, ...] | None = None
    master_seed: int = 0
    algo_seed: int = 0
    jobs: int = 1
    limit: int | None = None
    subset: tuple[int, ...] | None = None
    bigm: bool = False
    support_tol: float = graphs.DEFAULT_SUPPORT_TOL

    def __post_init__(self):
        if (self.suite is None) == (len(self.data) == 0):
            raise ValueError("config needs exactly one of 'suite' or 'data'")
        if self.suite is not None and self.suite not in datagen.SUITE_NAMES:
            raise ValueError(f"unknown suite {self.suite!r}")
        if not self.methods:
            raise ValueError("config lists no methods")
        for token in self.methods:
            if token not in METHOD_TOKENS:
                raise ValueError(f"unknown method {token!r}")
        if self.data and self.lambdas is None:
            raise ValueError("explicit data files need an explicit lambda grid")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")

    @classmethod
    def from_dict(cls, payload: dict) -> "BenchConfig":
        known = {"suite", "data", "methods", "lambdas", "master_seed",
                 "algo_seed", "jobs", "limit", "subset", "bigm", "support_tol"}
        unknown = set(payload) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        data = payload.get("data") or ()
        if isinstance(data, str):
            data = (data,)
        return cls(
            methods=tuple(payload["methods"]),
            suite=payload.get("suite"),
            data=tuple(data),
            lambdas=None if payload.get("lambdas") is None
            else tuple(float(v) for v in payload["lambdas"]),
            master_seed=int(payload.get("master_seed", 0)),
            algo_seed=int(payload.get("algo_seed", 0)),
            jobs=int(payload.get("jobs", 1)),
            limit=payload.get("limit"),
            subset=None if payload.get("subset") is None
            else tuple(int(i) for i in payload["subset"]),
            bigm=bool(payload.get("bigm", False)),
            support_tol=float(payload.get("support_tol",
                                          graphs.DEFAULT_SUPPORT_TOL)),
        )

    @classmethod
    def from_file(cls, path) -> "BenchConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))


def run_method(method: str, x: lasso.Dataset, lam: float, *, seed: int = 0,
               lp_dir=None, name: str = "data") -> dict:
    """Execute one method on one dataset; failures become failed payloads."""
    if method not in METHOD_TOKENS:
        raise ValueError(f"unknown method {method!r}")
    start = time.monotonic()
    out = {"method": method, "status": "ok", "objective": None, "y": None,
           "order_hash": "", "seed": None, "detail": ""}
    try:
        if method in _EXPORT_KINDS:
            kind = _EXPORT_KINDS[method]
            big_m = mip.estimate_big_m(x, lam)
            builder = {mip.KIND_ORDER: mip.build_order_mip,
                       mip.KIND_TRIANGLE: mip.build_triangle_mip,
                       mip.KIND_CYCLE: mip.build_cycle_mip}[kind]
            model = builder(x, lam, big_m)
            counts = model.counts()
            detail = (f"vars={counts['variables']};binaries={counts['binaries']};"
                      f"rows={counts['rows']};bigM={datagen.fmt_float(big_m)}")
            if lp_dir is not None:
                lp_path = Path(lp_dir) / f"{name}_lam{datagen.fmt_float(lam)}_{kind}.lp"
                mip.export_lp(model, lp_path)
                detail += f";lp={lp_path.name}"
            out["detail"] = detail
        elif method == "oracle":
            sol = algorithms.enumerate_orders(x, lam)
            out.update(objective=sol.objective, y=sol.y,
                       order_hash=sol.order_hash())
        elif method in ("GD", "IR"):
            out["seed"] = seed
            if method == "GD":
                sol = algorithms.gradient_descent(
                    x, lam, algorithms.GdParams(seed=seed))
            else:
                sol = algorithms.iterative_reordering(
                    x, lam, algorithms.IrParams(seed=seed))
            out.update(objective=sol.objective, y=sol.y,
                       order_hash=sol.order_hash())
        else:
            out["seed"] = seed
            algo = "gd" if method == "GD10" else "ir"
            sol = algorithms.multi_start(
                algo, x, lam, range(seed, seed + MULTI_START_WIDTH))
            out.update(objective=sol.objective, y=sol.y,
                       order_hash=sol.order_hash())
    except (ValueError, RuntimeError) as exc:
        # RuntimeError covers solver non-convergence and all-seed failures
        out.update(status="failed", detail=str(exc), objective=None, y=None)
    out["seconds"] = time.monotonic() - start
    return out


def implanted_fit_bound(x: lasso.Dataset, truth: datagen.GroundTruth,
                        lam: float, *, gram=None) -> float:
    """Largest coefficient magnitude when fitting on the generating arcs only."""
    beta = lasso.solve_restricted(x, truth.adjacency(), lam, gram=gram)
    return float(np.max(np.abs(beta)))


def validate_big_m(entries, degree_key: str = "s") -> list[dict]:
    """Min/avg/max of the implanted-fit bound and the big-M estimate.

    Entries carry m, degree, lam, b_hat, big_m; the table reports the three
    marginal groupings (by m, by degree, by penalty) plus a violation count
    of entries with b_hat >= big_m, which a valid estimate keeps at zero.
    """
    rows = []
    groupings = (("m", lambda e: e["m"]),
                 (degree_key, lambda e: e["degree"]),
                 ("lambda", lambda e: e["lam"]))
    for key, getter in groupings:
        for value in sorted({getter(e) for e in entries}):
            sub = [e for e in entries if getter(e) == value]
            b = [e["b_hat"] for e in sub]
            mm = [e["big_m"] for e in sub]
            rows.append({
                "group": key,
                "value": value,
                "b_hat_min": min(b), "b_hat_avg": sum(b) / len(b),
                "b_hat_max": max(b),
                "big_m_min": min(mm), "big_m_avg": sum(mm) / len(mm),
                "big_m_max": max(mm),
                "violations": sum(1 for e in sub if e["b_hat"] >= e["big_m"]),
            })
    return rows


# ---------------------------------------------------------------------------
# experiment execution


def _instance_records(task: dict) -> dict:
    """All rows for one instance: every (penalty, method) pair plus big-M data.

    Shaped as a single top-level callable so a process pool can run it.
    """
    spec: datagen.InstanceSpec | None = task["spec"]
    if spec is not None:
        x, truth = datagen.make_instance(spec)
        name = spec.name
        base = {"suite": spec.suite, "n": spec.n, "m": spec.m,
                "degree": spec.degree, "replicate": spec.replicate}
        lambdas = task["lambdas"] or spec.lambdas()
    else:
        x = datagen.load_csv(task["path"])
        truth = None
        name = Path(task["path"]).stem
        base = {"suite": "data", "n": x.n, "m": x.m,
                "degree": None, "replicate": None}
        lambdas = task["lambdas"]
    tol = task["support_tol"]
    truth_adj = truth.adjacency() if truth is not None else None
    truth_nonempty = truth_adj is not None and truth_adj.sum() > 0
    records: list[RunRecord] = []
    bigm_entries: list[dict] = []
    for lam in lambdas:
        payloads = [run_method(method, x, lam, seed=task["algo_seed"],
                               lp_dir=task["lp_dir"], name=name)
                    for method in task["methods"]]
        algo_idx = [i for i, p in enumerate(payloads)
                    if p["method"] in ALGO_METHODS]
        gaps: dict[int, float] = {}
        objectives = [payloads[i]["objective"] for i in algo_idx]
        if any(v is not None for v in objectives):
            for i, gap in zip(algo_idx, delta_sol(objectives)):
                gaps[i] = gap
        for i, p in enumerate(payloads):
            dtp = utp = None
            arcs = None
            if p["y"] is not None:
                pred = graphs.support(p["y"], tol)
                arcs = int(pred.sum())
                if truth_nonempty:
                    dtp, utp = true_positive(pred, truth_adj)
            records.append(RunRecord(
                instance=name, method=p["method"], lam=lam,
                seed=p["seed"], status=p["status"], objective=p["objective"],
                arc_count=arcs, delta_sol=gaps.get(i), dtp=dtp, utp=utp,
                order_hash=p["order_hash"], detail=p["detail"],
                wall_time_seconds=p["seconds"], **base))
        if task["bigm"] and truth_nonempty:
            gram = x.gram()
            bigm_entries.append({
                "m": x.m, "degree": base["degree"], "lam": lam,
                "b_hat": implanted_fit_bound(x, truth, lam, gram=gram),
                "big_m": mip.estimate_big_m(x, lam, gram=gram),
            })
    return {"index": task["index"], "records": records, "bigm": bigm_entries}


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _aggregate(records: list[RunRecord], key: str, value_of) -> list[list[str]]:
    """Per-method means of time, gap, and arc count for one grouping key."""
    ok = [r for r in records
          if r.method in ALGO_METHODS and r.status == "ok"]
    values = sorted({value_of(r) for r in ok})
    methods = []
    for r in ok:
        if r.method not in methods:
            methods.append(r.method)
    rows = []
    for value in values:
        for method in methods:
            sub = [r for r in ok if value_of(r) == value and r.method == method]
            if not sub:
                continue
            gaps = [r.delta_sol for r in sub if r.delta_sol is not None]
            rows.append([
                key, _cell(value), method, str(len(sub)),
                _cell(sum(r.wall_time_seconds for r in sub) / len(sub)),
                _cell(sum(gaps) / len(gaps)) if gaps else "",
                _cell(sum(r.arc_count for r in sub) / len(sub)),
            ])
    return rows


def _scatter_rows(records: list[RunRecord]) -> list[list[str]]:
    """Plot-ready averages per parameter combination.

    The density of a run is arc_count / m^2; avg_den pools every algorithm
    and replicate of the combination while the gap column stays per-method.
    """
    ok = [r for r in records
          if r.method in ALGO_METHODS and r.status == "ok"
          and r.delta_sol is not None and math.isfinite(r.delta_sol)]
    combos = sorted({(r.n, r.m, r.degree, r.lam) for r in ok},
                    key=lambda c: (c[0], c[1], c[2] if c[2] is not None else -1.0,
                                   c[3]))
    rows = []
    for n, m, degree, lam in combos:
        pool = [r for r in ok
                if (r.n, r.m, r.degree, r.lam) == (n, m, degree, lam)]
        avg_den = sum(r.arc_count / (r.m * r.m) for r in pool) / len(pool)
        methods = []
        for r in pool:
            if r.method not in methods:
                methods.append(r.method)
        for method in methods:
            gaps = [r.delta_sol for r in pool if r.method == method]
            gap = sum(gaps) / len(gaps)
            rows.append([
                str(n), str(m), _cell(degree), datagen.fmt_float(lam), method,
                _cell(gap), _cell(avg_den),
                _cell(math.log1p(avg_den)),
                _cell(math.log1p(100.0 * gap)),
            ])
    return rows


def run_experiment(config: BenchConfig, out_dir, jobs: int | None = None) -> dict:
    """Execute the config and write the result tables under out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lp_dir = None
    if any(m in EXPORT_METHODS for m in config.methods):
        lp_dir = out / "lp"
        lp_dir.mkdir(exist_ok=True)
    width = config.jobs if jobs is None else jobs
    tasks = []
    if config.suite is not None:
        specs = datagen.suite_specs(config.suite, config.master_seed,
                                    limit=config.limit)
        if config.subset is not None:
            wanted = set(config.subset)
            specs = [s for s in specs if s.index in wanted]
        for spec in specs:
            tasks.append({"index": spec.index, "spec": spec, "path": None})
    else:
        for i, path in enumerate(config.data, start=1):
            tasks.append({"index": i, "spec": None, "path": str(path)})
    shared = {"methods": config.methods, "lambdas": config.lambdas,
              "algo_seed": config.algo_seed, "support_tol": config.support_tol,
              "lp_dir": None if lp_dir is None else str(lp_dir),
              "bigm": config.bigm}
    for task in tasks:
        task.update(shared)

    started = time.monotonic()
    if width > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=width) as pool:
            results = list(pool.map(_instance_records, tasks))
    else:
        results = [_instance_records(task) for task in tasks]
    results.sort(key=lambda r: r["index"])
    records = [rec for r in results for rec in r["records"]]
    bigm_entries = [e for r in results for e in r["bigm"]]

    _write_csv(out / "runs.csv", RUNS_COLUMNS, (r.to_row() for r in records))

    agg_header = ("key", "value", "method", "runs", "mean_time_seconds",
                  "mean_delta_sol", "mean_arc_count")
    groupings = [("lambda", lambda r: r.lam)]
    if config.suite is not None:
        degree_key = "d" if config.suite == "dense" else "s"
        groupings += [("n", lambda r: r.n), ("m", lambda r: r.m),
                      (degree_key, lambda r: r.degree)]
    written = {}
    for key, value_of in groupings:
        path = out / f"agg_{key}.csv"
        _write_csv(path, agg_header, _aggregate(records, key, value_of))
        written[f"agg_{key}"] = str(path)

    scatter_header = ("n", "m", "degree", "lambda", "method", "delta_sol",
                      "avg_den", "ln1p_avg_den", "ln1p_delta_sol")
    _write_csv(out / "scatter.csv", scatter_header, _scatter_rows(records))

    if config.bigm and bigm_entries:
        degree_key = "d" if config.suite == "dense" else "s"
        bigm_header = ("group", "value", "b_hat_min", "b_hat_avg", "b_hat_max",
                       "big_m_min", "big_m_avg", "big_m_max", "violations")
        bigm_rows = [[row["group"], _cell(row["value"]),
                      _cell(row["b_hat_min"]), _cell(row["b_hat_avg"]),
                      _cell(row["b_hat_max"]), _cell(row["big_m_min"]),
                      _cell(row["big_m_avg"]), _cell(row["big_m_max"]),
                      str(row["violations"])]
                     for row in validate_big_m(bigm_entries, degree_key)]
        _write_csv(out / "bigm.csv", bigm_header, bigm_rows)
        written["bigm"] = str(out / "bigm.csv")

    failed = sum(1 for r in records if r.status == "failed")
    return {
        "instances": len(tasks),
        "records": len(records),
        "failed": failed,
        "runs_csv": str(out / "runs.csv"),
        "scatter_csv": str(out / "scatter.csv"),
        "tables": written,
        "elapsed_seconds": time.monotonic() - started,
    }
