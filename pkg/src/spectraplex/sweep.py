"""Budget sweeps with regime-transition detection, plus the centrality
correlation study for optimal weight vectors.

A sweep solves the chosen design problem on a budget grid, records the
multiplicity of the optimal eigenvalue and the certificate's embedding
dimension at every point, and refines any multiplicity change between
neighbouring grid points by bisection.  Consecutive solves are warm-started
from the previous optimum (rescaled), which short-circuits entire flat
regimes to a single certificate check.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, replace

import numpy as np

from .embedding import embedding_from_result
from .errors import InputError
from .graphs import LayerGraph, MultiplexSpec, assemble_supra_laplacian
from .optimize import ObjectiveKind, OptimizationResult, SolverOptions, solve
from .spectral import BoundsReport, default_cluster_tol, spectral_bounds

__all__ = [
    "SweepPoint",
    "Transition",
    "SweepResult",
    "sweep_budget",
    "correlate_centralities",
    "CorrelationTable",
    "degree_centrality",
    "eigenvector_centrality",
    "pagerank",
    "fiedler_vector",
]

#: clustering tolerance for multiplicity bookkeeping during sweeps is looser
#: than the solver's internal one: borderline coalescing eigenvalues should
#: count as one cluster when regimes are reported
_SWEEP_TOL_FACTOR = 100.0


@dataclass(frozen=True, eq=False)
class SweepPoint:
    budget: float
    objective_value: float | None
    uniform_value: float | None
    weights: np.ndarray | None
    eig_head: tuple[float, ...]
    eig_tail: tuple[float, ...]
    multiplicity: int | None
    embedding_dimension: int | None
    lambda2: float | None
    lambda_n: float | None
    duality_gap: float | None
    status: str
    bounds: BoundsReport | None
    error: str | None = None


@dataclass(frozen=True)
class Transition:
    budget: float
    kind: str
    before: int
    after: int


@dataclass(frozen=True, eq=False)
class SweepResult:
    objective: ObjectiveKind
    budgets: np.ndarray
    points: tuple[SweepPoint, ...]
    transitions: tuple[Transition, ...]

    def to_csv(self, path=None) -> str | None:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(
            ["c", "objective_opt", "objective_uniform", "multiplicity",
             "emb_dim", "lambda2", "lambda_n", "gap", "status",
             "lambda2_linear_cap", "lambda2_ave_cap", "lambdan_lower",
             "lambdan_upper_large_c", "width_lower",
             "width_bracket_lo", "width_bracket_hi"]
        )
        for p in self.points:
            bounds = p.bounds
            writer.writerow([
                p.budget, p.objective_value, p.uniform_value, p.multiplicity,
                p.embedding_dimension, p.lambda2, p.lambda_n, p.duality_gap,
                p.status,
                bounds.lambda2_linear_cap if bounds else "",
                bounds.lambda2_ave_cap if bounds else "",
                bounds.lambdan_lower if bounds else "",
                bounds.lambdan_upper_large_c if bounds else "",
                bounds.width_lower if bounds else "",
                bounds.width_bracket_large_c[0] if bounds else "",
                bounds.width_bracket_large_c[1] if bounds else "",
            ])
        text = buf.getvalue()
        if path is None:
            return text
        with open(path, "w") as fh:
            fh.write(text)
        return None

    def to_dict(self) -> dict:
        return {
            "objective": self.objective.value,
            "budgets": [float(c) for c in self.budgets],
            "transitions": [
                {"c": t.budget, "kind": t.kind, "before": t.before, "after": t.after}
                for t in self.transitions
            ],
            "points": [
                {
                    "c": p.budget,
                    "objective_opt": p.objective_value,
                    "objective_uniform": p.uniform_value,
                    "weights": None if p.weights is None else [float(w) for w in p.weights],
                    "multiplicity": p.multiplicity,
                    "emb_dim": p.embedding_dimension,
                    "lambda2": p.lambda2,
                    "lambda_n": p.lambda_n,
                    "gap": p.duality_gap,
                    "status": p.status,
                    "error": p.error,
                }
                for p in self.points
            ],
        }

    def to_json(self, path=None) -> str | None:
        text = json.dumps(self.to_dict(), indent=2)
        if path is None:
            return text
        with open(path, "w") as fh:
            fh.write(text)
        return None


def _optimal_eig_stats(spec: MultiplexSpec, result: OptimizationResult,
                       kind: ObjectiveKind) -> tuple[int, int]:
    """(multiplicity of the optimal eigenvalue, certificate embedding dim)."""
    L = assemble_supra_laplacian(spec, result.weights.weights)
    vals = np.linalg.eigvalsh(L)
    tol = _SWEEP_TOL_FACTOR * default_cluster_tol(vals)
    if kind is ObjectiveKind.MIN_LAMBDA_N:
        mult = int(np.sum(np.abs(vals - vals[-1]) <= tol))
    else:
        mult = int(np.sum(np.abs(vals[1:] - vals[1]) <= tol))
    try:
        emb = embedding_from_result(result)
        dim = emb.effective_dimension
    except Exception:
        dim = None
    return mult, dim


def _uniform_value(spec: MultiplexSpec, c: float, kind: ObjectiveKind) -> float:
    N = spec.num_nodes_per_layer
    vals = np.linalg.eigvalsh(
        assemble_supra_laplacian(spec, np.full(N, c / N))
    )
    if kind is ObjectiveKind.MAX_LAMBDA2:
        return float(vals[1])
    if kind is ObjectiveKind.MIN_LAMBDA_N:
        return float(vals[-1])
    return float(vals[-1] - vals[1])


def _solve_point(spec: MultiplexSpec, kind: ObjectiveKind, c: float,
                 opts: SolverOptions, warm: np.ndarray | None) -> SweepPoint:
    point_opts = replace(opts, warm_start=warm)
    try:
        result = solve(spec, kind, c, point_opts)
    except Exception as exc:  # record and continue per sweep contract
        return SweepPoint(
            budget=c, objective_value=None, uniform_value=None, weights=None,
            eig_head=(), eig_tail=(), multiplicity=None,
            embedding_dimension=None, lambda2=None, lambda_n=None,
            duality_gap=None, status="error", bounds=None, error=str(exc),
        )
    mult, dim = _optimal_eig_stats(spec, result, kind)
    vals = np.linalg.eigvalsh(assemble_supra_laplacian(spec, result.weights.weights))
    return SweepPoint(
        budget=c,
        objective_value=result.objective_value,
        uniform_value=_uniform_value(spec, c, kind),
        weights=result.weights.weights,
        eig_head=tuple(float(v) for v in vals[:3]),
        eig_tail=tuple(float(v) for v in vals[-3:]),
        multiplicity=mult,
        embedding_dimension=dim,
        lambda2=result.lambda2,
        lambda_n=result.lambda_n,
        duality_gap=result.duality_gap,
        status=result.status,
        bounds=spectral_bounds(spec, c),
    )


def sweep_budget(spec: MultiplexSpec, objective, c_min: float, c_max: float,
                 points: int, opts: SolverOptions | None = None,
                 log: bool = False, refine_transitions: bool = True,
                 refine_tol: float = 1e-3) -> SweepResult:
    """Solve across a budget grid and report regime transitions.

    Transitions are multiplicity changes of the optimal eigenvalue between
    consecutive grid points, located by bisection to `refine_tol`.
    """
    kind = ObjectiveKind.from_name(objective)
    opts = opts or SolverOptions()
    if not (0 <= c_min < c_max):
        raise InputError("need 0 <= c_min < c_max")
    if points < 2:
        raise InputError("need at least 2 sweep points")
    if log:
        if c_min == 0.0:
            budgets = np.concatenate(
                [[0.0], np.geomspace(1e-6 * c_max, c_max, points - 1)]
            )
        else:
            budgets = np.geomspace(c_min, c_max, points)
    else:
        budgets = np.linspace(c_min, c_max, points)

    out: list[SweepPoint] = []
    warm = None
    for c in budgets:
        pt = _solve_point(spec, kind, float(c), opts, warm)
        out.append(pt)
        if pt.weights is not None and float(c) > 0:
            warm = pt.weights

    transitions: list[Transition] = []
    for left, right in zip(out[:-1], out[1:]):
        if left.multiplicity is None or right.multiplicity is None:
            continue
        if left.multiplicity == right.multiplicity:
            continue
        lo, hi = left.budget, right.budget
        m_lo, m_hi = left.multiplicity, right.multiplicity
        warm_ref = left.weights
        if refine_transitions:
            while hi - lo > refine_tol:
                mid = 0.5 * (lo + hi)
                pt = _solve_point(spec, kind, mid, opts, warm_ref)
                if pt.multiplicity is None:
                    break
                if pt.multiplicity == m_lo:
                    lo = mid
                    warm_ref = pt.weights
                else:
                    hi = mid
        transitions.append(
            Transition(budget=0.5 * (lo + hi), kind="multiplicity",
                       before=m_lo, after=m_hi)
        )
    return SweepResult(
        objective=kind,
        budgets=budgets,
        points=tuple(out),
        transitions=tuple(transitions),
    )


# ---------------------------------------------------------------------------
# centralities and the correlation study


def degree_centrality(layer: LayerGraph) -> np.ndarray:
    return layer.degrees(weighted=True)


def eigenvector_centrality(layer: LayerGraph) -> np.ndarray:
    """Perron vector of the weighted adjacency matrix, normalized to unit
    max and nonnegative orientation."""
    A = layer.adjacency
    vals, vecs = np.linalg.eigh(A)
    v = vecs[:, -1]
    if v.sum() < 0:
        v = -v
    v = np.abs(v)
    return v / v.max()


def pagerank(layer: LayerGraph, damping: float = 0.85) -> np.ndarray:
    """Dense PageRank on the weighted layer (uniform teleport)."""
    A = layer.adjacency
    n = layer.node_count
    strength = A.sum(axis=1)
    strength[strength == 0] = 1.0
    M = A / strength[:, None]          # row-stochastic
    b = np.full(n, (1.0 - damping) / n)
    x = np.linalg.solve(np.eye(n) - damping * M.T, b)
    return x / x.sum()


def fiedler_vector(layer: LayerGraph) -> np.ndarray:
    return np.linalg.eigh(layer.laplacian)[1][:, 1]


def _pearson(x: np.ndarray, y: np.ndarray) -> float | None:
    sx, sy = x.std(), y.std()
    if sx <= 1e-14 * max(1.0, np.abs(x).max()) or sy <= 1e-14 * max(1.0, np.abs(y).max()):
        return None
    return float(np.corrcoef(x, y)[0, 1])


@dataclass(frozen=True, eq=False)
class CorrelationTable:
    """Pearson correlations of the optimal weights against per-layer node
    centralities; None marks an undefined correlation (constant input)."""

    rows: tuple[tuple[str, int, float | None], ...]   # (measure, layer, r)

    def as_dict(self) -> dict[str, float | None]:
        return {f"{measure}_layer{layer}": r for measure, layer, r in self.rows}


def correlate_centralities(spec: MultiplexSpec,
                           result: OptimizationResult) -> CorrelationTable:
    """Correlate the optimal pair weights with degree, eigenvector
    centrality, PageRank and |Fiedler| of each layer.  Weight k is aligned
    with the layer-1 endpoint a_k and the layer-2 endpoint b_k of its pair."""
    w = result.weights.weights
    a, b = spec.pair_endpoints
    N = spec.num_nodes_per_layer
    idx1 = a
    idx2 = b - N
    measures = (
        ("degree", degree_centrality),
        ("eigenvector", eigenvector_centrality),
        ("pagerank", pagerank),
        ("fiedler_abs", lambda layer: np.abs(fiedler_vector(layer))),
    )
    rows = []
    for name, fn in measures:
        rows.append((name, 1, _pearson(w, fn(spec.layer1)[idx1])))
        rows.append((name, 2, _pearson(w, fn(spec.layer2)[idx2])))
    return CorrelationTable(rows=tuple(rows))
