"""Geometric realizations extracted from dual certificates.

A PSD dual solution factors as a Gram matrix, placing every node at a
coordinate vector.  The checks in this module verify the structural
predictions for those point sets: eigenvector projections, layer clumping
below the uniform threshold, one-sided line embeddings below the nodal
threshold, antipodal matched pairs at large budgets, the separator-shadow
property of the scaled embedding, and the static force balance.
All checks are rotation-invariant (distances, norms and projections only).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog, nnls

from .conic import ConicProblem, smat, svec, svec_dim
from .errors import DomainError, InputError
from .graphs import MultiplexSpec, WeightAllocation
from .optimize import ObjectiveKind, OptimizationResult, _eperp_basis

__all__ = [
    "EmbeddingRealization",
    "ScaledEmbedding",
    "SeparatorSpec",
    "TensionReport",
    "gram_embed",
    "embedding_from_result",
    "projection_residual",
    "clump_check",
    "antipodal_check",
    "small_budget_embedding_check",
    "scaled_embedding",
    "separator_shadow_check",
    "fiedler_band_separator",
    "solve_tensions",
]


@dataclass(frozen=True, eq=False)
class EmbeddingRealization:
    """Per-node coordinates from a Gram factorization, dominant axis first."""

    points: np.ndarray            # n rows, d columns
    effective_dimension: int
    source: str                   # lambda2-dual | lambdan-dual | width-dual-u | width-dual-v | scaled
    rank_tol: float
    visual_dimension: int         # axes needed for 99% of the trace
    gram_trace: float


def gram_embed(X: np.ndarray, rank_tol: float = 1e-6,
               source: str = "lambda2-dual") -> EmbeddingRealization:
    """Factor a PSD matrix X = U U^T and keep the numerically relevant axes."""
    X = np.asarray(X, dtype=float)
    vals, vecs = np.linalg.eigh(X)
    lam_max = float(vals[-1])
    if vals[0] < -1e-9 * max(1.0, lam_max):
        raise InputError(f"matrix is indefinite (min eigenvalue {vals[0]:.3e})")
    if lam_max <= 0.0:
        raise InputError("matrix is numerically zero; nothing to embed")
    order = np.argsort(vals)[::-1]
    vals = np.clip(vals[order], 0.0, None)
    vecs = vecs[:, order]
    keep = vals >= rank_tol * lam_max
    points = vecs[:, keep] * np.sqrt(vals[keep])
    trace = float(vals.sum())
    cum = np.cumsum(vals)
    visual = int(np.searchsorted(cum, 0.99 * trace) + 1)
    return EmbeddingRealization(
        points=points,
        effective_dimension=int(keep.sum()),
        source=source,
        rank_tol=rank_tol,
        visual_dimension=visual,
        gram_trace=trace,
    )


_SOURCE_BY_OBJECTIVE = {
    (ObjectiveKind.MAX_LAMBDA2, "u"): "lambda2-dual",
    (ObjectiveKind.MIN_LAMBDA_N, "v"): "lambdan-dual",
    (ObjectiveKind.MIN_WIDTH, "u"): "width-dual-u",
    (ObjectiveKind.MIN_WIDTH, "v"): "width-dual-v",
}


def embedding_from_result(result: OptimizationResult, which: str = "auto",
                          rank_tol: float = 1e-6) -> EmbeddingRealization:
    """Realize the dual certificate of a solve.  ``which`` picks the u-side
    (X, algebraic-connectivity type) or v-side (Y, spectral-radius type);
    'auto' takes whichever the objective provides."""
    if which == "auto":
        which = "v" if result.objective is ObjectiveKind.MIN_LAMBDA_N else "u"
    mat = result.dual.X if which == "u" else result.dual.Y
    if mat is None:
        raise InputError(f"certificate has no {which}-side matrix")
    source = _SOURCE_BY_OBJECTIVE.get((result.objective, which))
    if source is None:
        source = "lambda2-dual" if which == "u" else "lambdan-dual"
    return gram_embed(mat, rank_tol, source)


def projection_residual(emb: EmbeddingRealization, L: np.ndarray, lam: float,
                        trials: int = 20, seed: int = 0) -> float:
    """Worst eigen-residual ||(L - lam I) y|| / ||y|| over random 1-d
    projections y of the embedding.  Small at optimality: every projection
    of an optimal realization is an eigenvector of the optimal eigenvalue."""
    pts = emb.points
    rng = np.random.default_rng(seed)
    scale = float(np.abs(pts).max())
    worst = 0.0
    used = 0
    for _ in range(trials):
        p = rng.normal(size=pts.shape[1])
        p /= np.linalg.norm(p)
        y = pts @ p
        ny = float(np.linalg.norm(y))
        if ny <= 1e-12 * max(1.0, scale):
            continue
        worst = max(worst, float(np.linalg.norm(L @ y - lam * y)) / ny)
        used += 1
    if used == 0:
        raise DomainError("all projections vanished; embedding is degenerate")
    return worst


def clump_check(emb: EmbeddingRealization, spec: MultiplexSpec,
                tol: float = 1e-5) -> tuple[bool, float]:
    """True when the realization is one-dimensional with layer 1 at +h and
    layer 2 at -h.  Returns (flag, h)."""
    N = spec.num_nodes_per_layer
    if emb.effective_dimension != 1:
        return False, float("nan")
    x = emb.points[:, 0]
    h = float(x[:N].mean())
    ok = (
        float(np.abs(x[:N] - h).max()) <= tol
        and float(np.abs(x[N:] + h).max()) <= tol
        and abs(h) > tol
    )
    return ok, h


def antipodal_check(emb: EmbeddingRealization, spec: MultiplexSpec,
                    tol: float) -> bool:
    """True when every matched pair sits (approximately) symmetric about the
    origin: v_i ~ -v_{pair(i)}."""
    a, b = spec.pair_endpoints
    pts = emb.points
    norms = np.linalg.norm(pts, axis=1)
    mismatch = np.linalg.norm(pts[a] + pts[b], axis=1)
    return bool(mismatch.max() <= tol * norms.max())


def small_budget_embedding_check(emb: EmbeddingRealization, spec: MultiplexSpec,
                                 tol: float = 1e-5) -> bool:
    """True when the realization is the small-budget line pattern: the layer
    with the larger spectral radius spreads along one axis proportionally to
    its top eigenvector while the other layer collapses at the origin."""
    if emb.effective_dimension != 1:
        return False
    N = spec.num_nodes_per_layer
    lam1 = float(np.linalg.eigvalsh(spec.layer1.laplacian)[-1])
    lam2 = float(np.linalg.eigvalsh(spec.layer2.laplacian)[-1])
    if lam1 >= lam2:
        dom, other = slice(0, N), slice(N, 2 * N)
        L_dom = spec.layer1.laplacian
    else:
        dom, other = slice(N, 2 * N), slice(0, N)
        L_dom = spec.layer2.laplacian
    x = emb.points[:, 0]
    if float(np.abs(x[other]).max()) > tol:
        return False
    v = np.linalg.eigh(L_dom)[1][:, -1]
    xd = x[dom]
    gamma = float(np.linalg.norm(xd))
    if gamma <= tol:
        return False
    sign = 1.0 if float(xd @ v) >= 0 else -1.0
    return bool(float(np.abs(xd - sign * gamma * v).max()) <= tol)


# ---------------------------------------------------------------------------
# scaled embedding problem


@dataclass(frozen=True, eq=False)
class ScaledEmbedding:
    """Optimum of the budget-scaled realization problem together with the
    scaled weights recovered from its dual."""

    embedding: EmbeddingRealization
    scaled_weights: np.ndarray      # feasible for the scaled weight problem
    objective_value: float          # total squared spread of the points
    primal_value: float             # sum of feasible scaled weights
    duality_gap: float
    mu_hat: float
    iterations: int


def scaled_embedding(spec: MultiplexSpec, c: float, gap_tol: float = 1e-6,
                     rank_tol: float = 1e-6, conic_tol: float = 1e-10) -> ScaledEmbedding:
    """Maximize the spread of node positions subject to the per-pair budget
    constraints; the inequality duals are the scaled interlayer weights."""
    if c <= 0:
        raise DomainError("scaled embedding needs a positive budget")
    n = spec.total_nodes
    N = spec.num_nodes_per_layer
    P = _eperp_basis(n)
    L0 = spec.layer0_laplacian
    B0 = P.T @ L0 @ P
    a, b = spec.pair_endpoints
    d = P[a] - P[b]
    m = n - 1
    nsv = svec_dim(m)

    prob = ConicProblem(nsv)
    prob.set_objective(-svec(np.eye(m)))
    pair_mats = [B0 + c * np.outer(d[k], d[k]) for k in range(N)]
    for M in pair_mats:
        prob.add_inequality(svec(M), 1.0)
    terms = []
    basis = np.zeros(nsv)
    for var in range(nsv):
        basis[:] = 0.0
        basis[var] = 1.0
        terms.append((var, smat(basis, m)))
    prob.add_psd_block(terms, np.zeros((m, m)))
    sol = prob.solve(tol=conic_tol)

    S_hat = smat(sol.x, m)
    # clip in eigenbasis so the Gram factorization is clean
    vals, vecs = np.linalg.eigh(S_hat)
    S_hat = (vecs * np.clip(vals, 0.0, None)) @ vecs.T
    X_hat = P @ S_hat @ P.T
    emb = gram_embed(X_hat, rank_tol, source="scaled")

    w_hat = np.clip(sol.nonneg_duals, 0.0, None)
    # repair the dual weights into an exactly feasible scaled-primal point
    G = sum(w_hat[k] * pair_mats[k] for k in range(N))
    lam_min = float(np.linalg.eigvalsh(G)[0]) if w_hat.sum() > 0 else 0.0
    if lam_min <= 0:
        raise DomainError("scaled dual weights are degenerate; cannot certify")
    w_hat = w_hat / lam_min
    primal = float(w_hat.sum())
    dual = float(np.trace(S_hat))
    gap = abs(primal - dual) / max(1.0, abs(dual))
    return ScaledEmbedding(
        embedding=emb,
        scaled_weights=w_hat,
        objective_value=dual,
        primal_value=primal,
        duality_gap=gap,
        mu_hat=1.0 / n,
        iterations=sol.iterations,
    )


# ---------------------------------------------------------------------------
# separators and the shadow property


@dataclass(frozen=True)
class SeparatorSpec:
    separator_nodes: frozenset[int]
    component1: frozenset[int]
    component2: frozenset[int]

    def __init__(self, separator_nodes, component1, component2):
        object.__setattr__(self, "separator_nodes", frozenset(int(i) for i in separator_nodes))
        object.__setattr__(self, "component1", frozenset(int(i) for i in component1))
        object.__setattr__(self, "component2", frozenset(int(i) for i in component2))

    def validate(self, n: int, edges: list[tuple[int, int]]) -> None:
        S, C1, C2 = self.separator_nodes, self.component1, self.component2
        if S & C1 or S & C2 or C1 & C2:
            raise InputError("separator parts overlap")
        if S | C1 | C2 != set(range(n)):
            raise InputError("separator parts do not cover the node set")
        for i, j in edges:
            if (i in C1 and j in C2) or (i in C2 and j in C1):
                raise InputError(f"edge ({i},{j}) crosses the separator")


def _min_hull_violation(targets: np.ndarray, hull_pts: np.ndarray,
                        segment: bool) -> float:
    """Smallest sup-norm violation for expressing the target (or a point of
    the segment [0, target]) as a convex combination of hull points."""
    m, dim = hull_pts.shape
    # variables: theta (m), t (only for segment mode), s
    # feasibility as min s with |hull^T theta - t*u| <= s componentwise
    nt = m + (1 if segment else 0) + 1
    c = np.zeros(nt)
    c[-1] = 1.0
    A_ub = []
    b_ub = []
    for r in range(dim):
        pos = np.zeros(nt)
        pos[:m] = hull_pts[:, r]
        if segment:
            pos[m] = -targets[r]
            rhs = 0.0
        else:
            rhs = targets[r]
        pos[-1] = -1.0
        neg = -pos.copy()
        neg[-1] = -1.0
        A_ub.append(pos)
        b_ub.append(rhs)
        A_ub.append(neg)
        b_ub.append(-rhs)
    A_eq = np.zeros((1, nt))
    A_eq[0, :m] = 1.0
    bounds = [(0, None)] * m + ([(0.0, 1.0)] if segment else []) + [(0, None)]
    res = linprog(c, A_ub=np.array(A_ub), b_ub=np.array(b_ub),
                  A_eq=A_eq, b_eq=[1.0], bounds=bounds, method="highs")
    if not res.success:
        return float("inf")
    return float(res.fun)


def separator_shadow_check(emb: EmbeddingRealization, sep: SeparatorSpec,
                           tol: float = 1e-7) -> tuple[bool, str | None]:
    """Shadow property: for at least one component, every node's segment to
    the origin meets the convex hull of the separator's points.  Returns
    (holds, witness) with witness in {'origin', 'component1', 'component2'}."""
    pts = emb.points
    scale = max(1.0, float(np.abs(pts).max()))
    hull = pts[sorted(sep.separator_nodes)]
    if _min_hull_violation(np.zeros(pts.shape[1]), hull, segment=False) <= tol * scale:
        return True, "origin"
    for name, comp in (("component1", sep.component1), ("component2", sep.component2)):
        if all(
            _min_hull_violation(pts[i], hull, segment=True) <= tol * scale
            for i in sorted(comp)
        ):
            return True, name
    return False, None


def fiedler_band_separator(spec: MultiplexSpec, weights: np.ndarray | WeightAllocation,
                           quantile: float = 0.5, band_frac: float = 0.02
                           ) -> SeparatorSpec | None:
    """Build a separator of the positive-weight supra graph from a band of
    the Fiedler valuation around a cut value.

    Test-harness helper: a band of nodes around the cut seeds the separator;
    any edge still crossing it is repaired by absorbing the endpoint closer
    to the cut value, so the result is valid for every cut placement as long
    as both sides stay populated."""
    from .graphs import assemble_supra_laplacian

    w = weights.weights if isinstance(weights, WeightAllocation) else np.asarray(weights)
    n = spec.total_nodes
    N = spec.num_nodes_per_layer
    edges = [(i, j) for i, j, _ in spec.layer1.edges]
    edges += [(N + i, N + j) for i, j, _ in spec.layer2.edges]
    a, b = spec.pair_endpoints
    edges += [(int(a[k]), int(b[k])) for k in range(N) if w[k] > 1e-12]

    L = assemble_supra_laplacian(spec, w)
    y = np.linalg.eigh(L)[1][:, 1]
    alpha = float(np.quantile(y, quantile))
    spread = float(y.max() - y.min())
    band = band_frac * spread
    side = np.where(y < alpha - band, 1, np.where(y > alpha + band, 2, 0))
    for _ in range(n):
        crossing = [(i, j) for i, j in edges
                    if side[i] * side[j] == 2]      # one endpoint per component
        if not crossing:
            break
        counts = {1: int(np.sum(side == 1)), 2: int(np.sum(side == 2))}
        i, j = crossing[0]
        # absorb from the more populous side so neither component dies out
        if counts[side[i]] > counts[side[j]]:
            mover = i
        elif counts[side[i]] < counts[side[j]]:
            mover = j
        else:
            mover = i if abs(y[i] - alpha) <= abs(y[j] - alpha) else j
        side[mover] = 0
    S = {i for i in range(n) if side[i] == 0}
    C1 = {i for i in range(n) if side[i] == 1}
    C2 = {i for i in range(n) if side[i] == 2}
    if not (S and C1 and C2):
        return None
    sep = SeparatorSpec(S, C1, C2)
    sep.validate(n, edges)
    return sep


# ---------------------------------------------------------------------------
# mechanical interpretation


@dataclass(frozen=True, eq=False)
class TensionReport:
    """Nonnegative edge tensions balancing each node against the restoring
    pull toward the origin, with per-node force residuals."""

    edges: tuple[tuple[int, int], ...]
    tensions: np.ndarray
    spring_constants: np.ndarray       # tension per unit length
    node_residuals: np.ndarray
    excluded_edges: tuple[tuple[int, int], ...]

    def max_residual(self) -> float:
        return float(self.node_residuals.max())

    def interlayer_tension(self, spec: MultiplexSpec) -> dict[int, float]:
        """Map pair index -> recovered tension for edges that survived."""
        a, b = spec.pair_endpoints
        lookup = {tuple(sorted(e)): t for e, t in zip(self.edges, self.tensions)}
        out = {}
        for k in range(spec.num_nodes_per_layer):
            key = tuple(sorted((int(a[k]), int(b[k]))))
            if key in lookup:
                out[k] = float(lookup[key])
        return out


def solve_tensions(emb: EmbeddingRealization, spec: MultiplexSpec,
                   alloc: WeightAllocation, coincident_tol: float = 1e-9) -> TensionReport:
    """Nonnegative least squares for the static balance
    sum_j T_ij (u_i - u_j)/||u_i - u_j|| = u_i at every node.

    Edges with coincident endpoints carry no direction and are excluded
    (reported).  Raises if the whole realization is collapsed at one point.
    """
    pts = emb.points
    n, dim = pts.shape
    N = spec.num_nodes_per_layer
    scale = float(np.abs(pts).max())
    if scale <= 0.0:
        raise DomainError("all points coincide; force balance is degenerate")

    edges = [(i, j) for i, j, _ in spec.layer1.edges]
    edges += [(N + i, N + j) for i, j, _ in spec.layer2.edges]
    a, b = spec.pair_endpoints
    edges += [
        (int(a[k]), int(b[k]))
        for k in range(N)
        if alloc.weights[k] > 1e-12
    ]

    kept, lengths, excluded = [], [], []
    for i, j in edges:
        ell = float(np.linalg.norm(pts[i] - pts[j]))
        if ell <= coincident_tol * scale:
            excluded.append((i, j))
        else:
            kept.append((i, j))
            lengths.append(ell)
    if not kept:
        raise DomainError("every edge has coincident endpoints; degenerate")

    A = np.zeros((n * dim, len(kept)))
    for col, ((i, j), ell) in enumerate(zip(kept, lengths)):
        u = (pts[i] - pts[j]) / ell
        A[i * dim:(i + 1) * dim, col] = u
        A[j * dim:(j + 1) * dim, col] = -u
    target = pts.reshape(-1)
    T, _ = nnls(A, target)
    residual = (A @ T - target).reshape(n, dim)
    return TensionReport(
        edges=tuple(kept),
        tensions=T,
        spring_constants=T / np.array(lengths),
        node_residuals=np.linalg.norm(residual, axis=1),
        excluded_edges=tuple(excluded),
    )
