"""Mixed-integer model builders and LP export for the acyclic network problem.

Three acyclicity encodings over arc indicator binaries:

* kind "to": C(m,2) pairwise order binaries plus an m x m position
  assignment; order rows tie the two together.
* kind "in": C(m,2) pairwise order binaries with triangle rows, two per
  node triple.
* kind "cp": one binary per ordered arc and no acyclicity rows in the base
  model; elementary-cycle cuts are supplied separately through a CutPool.

Every model couples coefficients to the binaries with big-M rows, writes the
L1 penalty through a nonnegative split bp - bn of each coefficient, and
carries the squared error expanded over the Gram matrix as a quadratic
objective. Models are built, counted, and exported; solving is left to an
external solver.

Canonical variable names are ``bp_j_k`` / ``bn_j_k`` (coefficient split of
b_j_k), ``z_j_k`` (arc indicators), and ``o_k_q`` (node k at position q),
all 1-based. Row families: ``ord_j_k``, ``tri_pos_q_j_k`` / ``tri_neg_q_j_k``,
``asg_node_k``, ``asg_pos_q``, ``bigm_pos_j_k`` / ``bigm_neg_j_k``, and
``cyc_<i>`` for cuts. ``excl_j_k`` names pairwise-exclusivity rows, which the
pairwise-binary reductions make redundant; the family is reserved but unused
by the shipped builders.
"""

from __future__ import annotations

import itertools
import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import graphs, lasso

KIND_ORDER = "to"
KIND_TRIANGLE = "in"
KIND_CYCLE = "cp"
MODEL_KINDS = (KIND_CYCLE, KIND_TRIANGLE, KIND_ORDER)

ENCODING_MAX_NODES = 8
_ROW_EVAL_TOL = 1e-9
# full cycle closures get large quickly; above this the cp check uses the
# equivalent direct cycle search on the pattern itself
_CLOSURE_MAX_NODES = 5

Row = tuple[str, list[tuple[float, str]], str, float]


@dataclass
class MipModel:
    """A quadratic mixed-binary model as plain term lists.

    ``obj_quad`` entries (coef, a, b) mean coef * a * b in the true
    objective, with a == b for squares and each unordered pair listed once.
    """

    variables: list[tuple[str, str, float, float]]
    rows: list[Row]
    obj_linear: list[tuple[float, str]]
    obj_quad: list[tuple[float, str, str]]
    obj_constant: float
    metadata: dict

    def variable_names(self) -> list[str]:
        return [v[0] for v in self.variables]

    def validate(self) -> None:
        names = self.variable_names()
        declared = set(names)
        if len(declared) != len(names):
            raise ValueError("duplicate variable names")
        row_names = [r[0] for r in self.rows]
        if len(set(row_names)) != len(row_names):
            raise ValueError("duplicate row names")
        for name, terms, sense, _rhs in self.rows:
            if sense not in ("<=", ">=", "="):
                raise ValueError(f"row {name}: bad sense {sense!r}")
            for _c, var in terms:
                if var not in declared:
                    raise ValueError(f"row {name} references undeclared variable {var}")
        for _c, var in self.obj_linear:
            if var not in declared:
                raise ValueError(f"objective references undeclared variable {var}")
        for _c, a, b in self.obj_quad:
            if a not in declared or b not in declared:
                raise ValueError("quadratic objective references an undeclared variable")

    def counts(self) -> dict:
        families: dict[str, int] = {}
        for name, _t, _s, _r in self.rows:
            fam = name.split("_")[0] if not name.startswith(("bigm", "tri", "asg")) else (
                "_".join(name.split("_")[:2]))
            families[fam] = families.get(fam, 0) + 1
        return {
            "variables": len(self.variables),
            "binaries": sum(1 for v in self.variables if v[1] == "binary"),
            "continuous": sum(1 for v in self.variables if v[1] == "continuous"),
            "rows": len(self.rows),
            "rows_by_family": dict(sorted(families.items())),
        }


@dataclass
class CutPool:
    """Deduplicated elementary-cycle cuts for the arc-binary model."""

    cycles: list[graphs.Cycle] = field(default_factory=list)
    rows: list[Row] = field(default_factory=list)

    def __post_init__(self):
        seeded = self.cycles
        self.cycles = []
        self.rows = []
        self._seen: set[tuple[int, ...]] = set()
        for cycle in seeded:
            self.add(cycle)

    def add(self, cycle: graphs.Cycle) -> Row | None:
        """Record a cycle cut; returns the new row, or None if already present."""
        key = cycle.canonical().nodes
        if key in self._seen:
            return None
        self._seen.add(key)
        row = cycle_cut(cycle, index=len(self.rows) + 1)
        self.cycles.append(cycle)
        self.rows.append(row)
        return row


def _bp(j: int, k: int) -> str:
    return f"bp_{j + 1}_{k + 1}"


def _bn(j: int, k: int) -> str:
    return f"bn_{j + 1}_{k + 1}"


def _z(j: int, k: int) -> str:
    return f"z_{j + 1}_{k + 1}"


def _o(k: int, q: int) -> str:
    # position index is already 1-based
    return f"o_{k + 1}_{q}"


def cycle_cut(cycle: graphs.Cycle, index: int = 1) -> Row:
    """Row forbidding simultaneous selection of every arc on the cycle."""
    terms = [(1.0, _z(j, k)) for j, k in cycle.arcs]
    return (f"cyc_{index}", terms, "<=", float(len(cycle.arcs) - 1))


def _arc_indicator(kind: str, j: int, k: int) -> tuple[list[tuple[float, str]], float]:
    """Terms and constant expressing the indicator of arc (j, k) in a kind.

    The pairwise encodings keep one binary per unordered pair and represent
    the opposite direction as its complement.
    """
    if kind == KIND_CYCLE:
        return [(1.0, _z(j, k))], 0.0
    if kind == KIND_ORDER:
        if j > k:
            return [(1.0, _z(j, k))], 0.0
        return [(-1.0, _z(k, j))], 1.0
    if kind == KIND_TRIANGLE:
        if j < k:
            return [(1.0, _z(j, k))], 0.0
        return [(-1.0, _z(k, j))], 1.0
    raise ValueError(f"unknown model kind {kind!r}")


def _coefficient_variables(m: int) -> list[tuple[str, str, float, float]]:
    out = []
    for k in range(m):
        for j in range(m):
            if j == k:
                continue
            out.append((_bp(j, k), "continuous", 0.0, math.inf))
            out.append((_bn(j, k), "continuous", 0.0, math.inf))
    return out


def _objective_terms(x: lasso.Dataset, lam: float):
    """Expanded objective over the split coefficients.

    (1/n)||x_k - X beta_k||^2 with beta = bp - bn gives a constant
    sum_k x_k^T x_k / n, linear Gram cross terms, and a quadratic Gram form;
    the penalty adds lam * (bp + bn).
    """
    gram = x.gram()
    n = x.n
    m = x.m
    linear: list[tuple[float, str]] = []
    quad: list[tuple[float, str, str]] = []
    for k in range(m):
        others = [j for j in range(m) if j != k]
        for j in others:
            c = -2.0 * gram[j, k] / n
            linear.append((c + lam, _bp(j, k)))
            linear.append((-c + lam, _bn(j, k)))
        for a_i, j in enumerate(others):
            for l in others[a_i:]:
                g = gram[j, l] / n
                if j == l:
                    quad.append((g, _bp(j, k), _bp(j, k)))
                    quad.append((-2.0 * g, _bp(j, k), _bn(j, k)))
                    quad.append((g, _bn(j, k), _bn(j, k)))
                else:
                    c2 = 2.0 * g
                    quad.append((c2, _bp(j, k), _bp(l, k)))
                    quad.append((-c2, _bp(j, k), _bn(l, k)))
                    quad.append((-c2, _bn(j, k), _bp(l, k)))
                    quad.append((c2, _bn(j, k), _bn(l, k)))
    constant = float(np.sum(np.diagonal(gram)) / n)
    return linear, quad, constant


def _bigm_rows(kind: str, m: int, big_m: float) -> list[Row]:
    rows: list[Row] = []
    for k in range(m):
        for j in range(m):
            if j == k:
                continue
            zt, zc = _arc_indicator(kind, j, k)
            scaled = [(-big_m * c, v) for c, v in zt]
            rhs = big_m * zc
            rows.append((f"bigm_pos_{j + 1}_{k + 1}", [(1.0, _bp(j, k))] + scaled, "<=", rhs))
            rows.append((f"bigm_neg_{j + 1}_{k + 1}", [(1.0, _bn(j, k))] + scaled, "<=", rhs))
    return rows


def _merge_terms(terms) -> list[tuple[float, str]]:
    acc: dict[str, float] = {}
    order: list[str] = []
    for c, v in terms:
        if v not in acc:
            acc[v] = 0.0
            order.append(v)
        acc[v] += c
    return [(acc[v], v) for v in order if acc[v] != 0.0]


def _order_acyclicity_rows(m: int) -> list[Row]:
    """Order rows plus the position assignment rows of the "to" encoding.

    For each ordered pair the row Z_jk - m Z_kj <= pos_k - pos_j (written
    over the assignment binaries) pins the pair binary to the positions;
    pairwise exclusivity is implicit in keeping a single binary per pair.
    """
    rows: list[Row] = []
    for j in range(m):
        for k in range(m):
            if j == k:
                continue
            zt_jk, zc_jk = _arc_indicator(KIND_ORDER, j, k)
            zt_kj, zc_kj = _arc_indicator(KIND_ORDER, k, j)
            terms = [(c, v) for c, v in zt_jk]
            terms += [(-m * c, v) for c, v in zt_kj]
            terms += [(float(q), _o(j, q)) for q in range(1, m + 1)]
            terms += [(-float(q), _o(k, q)) for q in range(1, m + 1)]
            rhs = -zc_jk + m * zc_kj
            rows.append((f"ord_{j + 1}_{k + 1}", _merge_terms(terms), "<=", rhs))
    for k in range(m):
        rows.append((f"asg_node_{k + 1}",
                     [(1.0, _o(k, q)) for q in range(1, m + 1)], "=", 1.0))
    for q in range(1, m + 1):
        rows.append((f"asg_pos_{q}",
                     [(1.0, _o(k, q)) for k in range(m)], "=", 1.0))
    return rows


def _triangle_rows(m: int) -> list[Row]:
    """Two rows per node triple forcing the pair binaries to a total order."""
    rows: list[Row] = []
    for q, j, k in itertools.combinations(range(m), 3):
        name = f"{q + 1}_{j + 1}_{k + 1}"
        rows.append((f"tri_pos_{name}",
                     [(1.0, _z(q, j)), (1.0, _z(j, k)), (-1.0, _z(q, k))], "<=", 1.0))
        rows.append((f"tri_neg_{name}",
                     [(-1.0, _z(q, j)), (-1.0, _z(j, k)), (1.0, _z(q, k))], "<=", 0.0))
    return rows


def _base_model(kind: str, x: lasso.Dataset, lam: float, big_m: float) -> MipModel:
    if lam < 0:
        raise ValueError("penalty must be nonnegative")
    if not (big_m > 0 and math.isfinite(big_m)):
        raise ValueError("big-M must be positive and finite")
    m = x.m
    variables = _coefficient_variables(m)
    if kind == KIND_CYCLE:
        pair_vars = [(j, k) for j in range(m) for k in range(m) if j != k]
    elif kind == KIND_ORDER:
        pair_vars = [(j, k) for j in range(m) for k in range(m) if j > k]
    else:
        pair_vars = [(j, k) for j in range(m) for k in range(m) if j < k]
    variables += [(_z(j, k), "binary", 0.0, 1.0) for j, k in pair_vars]
    rows: list[Row] = []
    if kind == KIND_ORDER:
        variables += [(_o(k, q), "binary", 0.0, 1.0)
                      for k in range(m) for q in range(1, m + 1)]
        rows += _order_acyclicity_rows(m)
    elif kind == KIND_TRIANGLE:
        rows += _triangle_rows(m)
    rows += _bigm_rows(kind, m, big_m)
    linear, quad, constant = _objective_terms(x, lam)
    model = MipModel(
        variables=variables,
        rows=rows,
        obj_linear=linear,
        obj_quad=quad,
        obj_constant=constant,
        metadata={
            "model_kind": kind,
            "m": m,
            "n": x.n,
            "lambda": float(lam),
            "big_m": float(big_m),
        },
    )
    model.metadata["counts"] = model.counts()
    model.validate()
    return model


def build_order_mip(x: lasso.Dataset, lam: float, big_m: float) -> MipModel:
    """Pairwise order binaries tied to a position assignment (kind "to")."""
    return _base_model(KIND_ORDER, x, lam, big_m)


def build_triangle_mip(x: lasso.Dataset, lam: float, big_m: float) -> MipModel:
    """Pairwise order binaries with triangle rows (kind "in")."""
    return _base_model(KIND_TRIANGLE, x, lam, big_m)


def build_cycle_mip(x: lasso.Dataset, lam: float, big_m: float) -> MipModel:
    """Arc binaries with no acyclicity rows (kind "cp"); cuts come later.

    The base model admits cyclic integer solutions by construction; pair it
    with a CutPool and apply_cuts to tighten it.
    """
    return _base_model(KIND_CYCLE, x, lam, big_m)


def apply_cuts(model: MipModel, pool: CutPool, cycles) -> int:
    """Add cycle cuts to an arc-binary model through the pool; returns #added."""
    if model.metadata.get("model_kind") != KIND_CYCLE:
        raise ValueError("cycle cuts only apply to the arc-binary model")
    added = 0
    for cycle in cycles:
        row = pool.add(cycle)
        if row is not None:
            model.rows.append(row)
            added += 1
    model.metadata["counts"] = model.counts()
    return added


def estimate_big_m(x: lasso.Dataset, lam: float, *, gram=None) -> float:
    """Coefficient bound from the acyclicity-free fit: twice the largest magnitude.

    Falls back to 1.0 when the unrestricted fit is identically zero. The
    bound is invariant to positive rescaling of the raw data because the
    solver sees standardized columns.
    """
    beta = lasso.solve_unconstrained(x, lam, gram=gram)
    top = float(np.max(np.abs(beta)))
    return 2.0 * top if top > 0.0 else 1.0


# ---------------------------------------------------------------------------
# feasibility checking


def _satisfies(rows: list[Row], values: dict, tol: float = _ROW_EVAL_TOL) -> bool:
    for _name, terms, sense, rhs in rows:
        lhs = sum(c * values.get(v, 0.0) for c, v in terms)
        if sense == "<=" and lhs > rhs + tol:
            return False
        if sense == ">=" and lhs < rhs - tol:
            return False
        if sense == "=" and abs(lhs - rhs) > tol:
            return False
    return True


_PERMS_CACHE: dict[int, np.ndarray] = {}


def _all_positions(m: int) -> np.ndarray:
    """Every position vector of length m, one row per permutation."""
    if m not in _PERMS_CACHE:
        _PERMS_CACHE[m] = np.array(list(itertools.permutations(range(1, m + 1))),
                                   dtype=np.int64)
    return _PERMS_CACHE[m]


def _consistent_positions(a: np.ndarray) -> np.ndarray:
    """Rows of position vectors under which every arc of ``a`` is selectable.

    The pairwise encodings let arc (j, k) be selected exactly when node k
    sits later in the assignment than node j, so consistency means
    pos[k] > pos[j] for every arc.
    """
    m = a.shape[0]
    perms = _all_positions(m)
    ok = np.ones(perms.shape[0], dtype=bool)
    for j, k in zip(*np.nonzero(a)):
        ok &= perms[:, k] > perms[:, j]
    return perms[ok]


def check_encoding(model_kind: str, z, *, max_nodes: int = ENCODING_MAX_NODES) -> bool:
    """Whether a support pattern extends to a feasible binary assignment.

    Enumerates completions of the encoding's binaries: position assignments
    for kinds "to" and "in" (their rows force every pair binary once the
    positions are fixed), and the pattern itself against the full
    elementary-cycle closure for kind "cp". True iff some completion selects
    every arc of z and satisfies all acyclicity rows, which holds exactly
    when z is acyclic. Guarded to m <= max_nodes.
    """
    if model_kind not in MODEL_KINDS:
        raise ValueError(f"unknown model kind {model_kind!r}")
    a = graphs.check_adjacency(z)
    m = a.shape[0]
    if m > max_nodes:
        raise ValueError(f"encoding check is limited to m <= {max_nodes}")

    if model_kind == KIND_CYCLE:
        # cuts only lose slack as arcs are added, so the tightest completion
        # is the pattern itself
        if m <= _CLOSURE_MAX_NODES:
            complete = np.ones((m, m), dtype=np.int64)
            np.fill_diagonal(complete, 0)
            closure, truncated = graphs.find_cycles(complete, max_cycles=10 ** 6)
            assert not truncated
            values = {_z(j, k): float(a[j, k]) for j in range(m) for k in range(m) if j != k}
            rows = [cycle_cut(c, i + 1) for i, c in enumerate(closure)]
            return _satisfies(rows, values)
        cycles, _ = graphs.find_cycles(a, max_cycles=1)
        return not cycles

    if model_kind == KIND_ORDER:
        rows = _order_acyclicity_rows(m)
    else:
        rows = _triangle_rows(m)
    for pos in _consistent_positions(a):
        values: dict[str, float] = {}
        if model_kind == KIND_ORDER:
            for k in range(m):
                values[_o(k, int(pos[k]))] = 1.0
            for j in range(m):
                for k in range(j):
                    values[_z(j, k)] = 1.0 if pos[k] > pos[j] else 0.0
        else:
            for j in range(m):
                for k in range(j + 1, m):
                    values[_z(j, k)] = 1.0 if pos[k] > pos[j] else 0.0
        if _satisfies(rows, values):
            return True
    return False


# ---------------------------------------------------------------------------
# LP writing and reading


def _fmt(value: float) -> str:
    text = repr(float(value))
    return text[:-2] if text.endswith(".0") else text


def _terms_tokens(terms) -> list[str]:
    tokens = []
    for coef, var in terms:
        sign = "-" if coef < 0 else "+"
        tokens.append(f"{sign} {_fmt(abs(coef))} {var}")
    return tokens


def _emit(lines: list[str], head: str, tokens: list[str], tail: str = "",
          width: int = 240) -> None:
    cur = head
    for tok in tokens:
        if len(cur) + len(tok) + 1 > width:
            lines.append(cur)
            cur = "   " + tok
        else:
            cur = f"{cur} {tok}" if cur else tok
    if tail:
        cur = f"{cur} {tail}"
    lines.append(cur)


def export_lp(model: MipModel, destination) -> Path:
    """Write the model in LP format with a JSON metadata sidecar.

    The quadratic objective uses the ``[ ... ] / 2`` bracket, so bracket
    coefficients are twice the true ones. Continuous variables keep the LP
    default bounds of [0, inf); binaries are listed in the Binary section.
    The sidecar lands next to the file with ``.json`` appended.
    """
    model.validate()
    path = Path(destination)
    lines: list[str] = ["Minimize"]
    obj_tokens = _terms_tokens(model.obj_linear)
    if model.obj_quad:
        obj_tokens.append("+ [")
        for coef, a, b in model.obj_quad:
            c2 = 2.0 * coef
            sign = "-" if c2 < 0 else "+"
            if a == b:
                obj_tokens.append(f"{sign} {_fmt(abs(c2))} {a} ^ 2")
            else:
                obj_tokens.append(f"{sign} {_fmt(abs(c2))} {a} * {b}")
        obj_tokens.append("] / 2")
    _emit(lines, " obj:", obj_tokens)
    lines.append("Subject To")
    for name, terms, sense, rhs in model.rows:
        _emit(lines, f" {name}:", _terms_tokens(terms), tail=f"{sense} {_fmt(rhs)}")
    bound_lines = []
    for name, kind, lb, ub in model.variables:
        if kind == "binary":
            continue
        if lb != 0.0 or ub != math.inf:
            bound_lines.append(f" {_fmt(lb)} <= {name} <= {_fmt(ub)}")
    if bound_lines:
        lines.append("Bounds")
        lines.extend(bound_lines)
    binaries = [v[0] for v in model.variables if v[1] == "binary"]
    if binaries:
        lines.append("Binary")
        _emit(lines, "", binaries)
    lines.append("End")
    path.write_text("\n".join(lines) + "\n")
    sidecar = {
        "model_kind": model.metadata.get("model_kind"),
        "m": model.metadata.get("m"),
        "n": model.metadata.get("n"),
        "lambda": model.metadata.get("lambda"),
        "big_m": model.metadata.get("big_m"),
        "objective_constant": model.obj_constant,
        "counts": model.counts(),
    }
    Path(str(path) + ".json").write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    return path


_NUM_RE = re.compile(r"[-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?$")


def _tokenize(text: str) -> list[str]:
    out = []
    for raw in text.replace("[", " [ ").replace("]", " ] ").split():
        if raw in ("<=", ">=", "=", "+", "-", "*", "[", "]", "/", "^", "/2"):
            out.append(raw)
        elif raw.startswith("<=") or raw.startswith(">="):
            out.append(raw[:2])
            out.append(raw[2:])
        else:
            out.append(raw)
    return out


def _parse_terms(tokens: list[str]):
    """Linear and quadratic terms from an LP expression token stream.

    Quadratic coefficients are rescaled back from the bracket convention to
    true objective scale.
    """
    linear: dict[str, float] = {}
    quad: dict[tuple[str, str], float] = {}
    sign = 1.0
    in_bracket = False
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok == "+":
            sign = 1.0
            i += 1
            continue
        if tok == "-":
            sign = -1.0
            i += 1
            continue
        if tok == "[":
            in_bracket = True
            sign = 1.0
            i += 1
            continue
        if tok == "]":
            # the writer always divides the bracket by 2
            if i + 2 <= len(tokens) and tokens[i + 1:i + 3] == ["/", "2"]:
                i += 3
            elif i + 1 < len(tokens) and tokens[i + 1] == "/2":
                i += 2
            else:
                raise ValueError("quadratic bracket must end with / 2")
            in_bracket = False
            sign = 1.0
            continue
        if _NUM_RE.match(tok):
            coef = sign * float(tok)
            i += 1
        else:
            coef = sign
        name = tokens[i]
        i += 1
        if in_bracket:
            if i < len(tokens) and tokens[i] == "^":
                if tokens[i + 1] != "2":
                    raise ValueError("only squares are supported")
                key = (name, name)
                i += 2
            elif i < len(tokens) and tokens[i] == "*":
                other = tokens[i + 1]
                key = tuple(sorted((name, other)))
                i += 2
            else:
                raise ValueError("bracket terms must be quadratic")
            quad[key] = quad.get(key, 0.0) + coef / 2.0
        else:
            linear[name] = linear.get(name, 0.0) + coef
        sign = 1.0
    return linear, quad


def read_lp(path) -> dict:
    """Parse a file written by export_lp, enough for round-trip checks.

    Returns objective terms (quadratics at true scale), rows as
    (name, {var: coef}, sense, rhs), declared bounds, and the binary set.
    """
    text = Path(path).read_text()
    section = None
    obj_tokens: list[str] = []
    row_chunks: list[tuple[str, list[str]]] = []
    bound_lines: list[str] = []
    binary_tokens: list[str] = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("\\"):
            continue
        keyword = stripped.lower()
        if keyword in ("minimize", "maximize"):
            section = "objective"
            continue
        if keyword == "subject to":
            section = "rows"
            continue
        if keyword == "bounds":
            section = "bounds"
            continue
        if keyword == "binary":
            section = "binary"
            continue
        if keyword == "end":
            break
        label = None
        body = stripped
        if section in ("objective", "rows"):
            head = re.match(r"([A-Za-z_][\w]*)\s*:\s*(.*)", stripped)
            if head:
                label = head.group(1)
                body = head.group(2)
        if section == "objective":
            obj_tokens.extend(_tokenize(body))
        elif section == "rows":
            if label is not None:
                row_chunks.append((label, _tokenize(body)))
            else:
                row_chunks[-1][1].extend(_tokenize(body))
        elif section == "bounds":
            bound_lines.append(stripped)
        elif section == "binary":
            binary_tokens.extend(stripped.split())
    obj_linear, obj_quad = _parse_terms(obj_tokens)
    rows = []
    for name, tokens in row_chunks:
        sense_at = next(i for i, t in enumerate(tokens) if t in ("<=", ">=", "="))
        terms, _ = _parse_terms(tokens[:sense_at])
        rhs = float(tokens[sense_at + 1])
        rows.append((name, terms, tokens[sense_at], rhs))
    bounds = {}
    for line in bound_lines:
        parts = line.split()
        if len(parts) == 5 and parts[1] == "<=" and parts[3] == "<=":
            bounds[parts[2]] = (float(parts[0]), float(parts[4]))
    return {
        "objective_linear": obj_linear,
        "objective_quad": obj_quad,
        "rows": rows,
        "bounds": bounds,
        "binaries": set(binary_tokens),
    }
