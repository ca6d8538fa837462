"""Independent brute-force and perturbation oracles for desk-scale checks.

These deliberately avoid the solver path: objectives are evaluated by full
eigendecomposition over an exhaustive simplex grid, so optimizer results can
be validated against an implementation that shares no code with them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .graphs import MultiplexSpec, WeightAllocation, assemble_supra_laplacian
from .optimize import ObjectiveKind, OptimizationResult

__all__ = [
    "GridSearchReport",
    "KktReport",
    "grid_search_simplex",
    "kkt_check",
    "monotonicity_probe",
    "LIPSCHITZ_CONSTANT",
]

#: Moving one unit of weight between interlayer pairs changes any Rayleigh
#: quotient v^T L v by at most (v_i - v_j)^2 - (v_k - v_l)^2 <= 4 for unit v,
#: so every eigenvalue is 4-Lipschitz in the simplex 1-norm geometry.
LIPSCHITZ_CONSTANT = 4.0

_GRID_NODE_CAP = 5
_CHUNK = 1 << 15


@dataclass(frozen=True, eq=False)
class GridSearchReport:
    best_weights: WeightAllocation
    best_value: float
    grid_step: float
    evaluations: int


def _compositions(total: int, parts: int):
    """Lexicographic compositions of `total` into `parts` nonnegative ints."""
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        counts = []
        for bar in bars:
            counts.append(bar - prev - 1)
            prev = bar
        counts.append(total + parts - 1 - prev - 1)
        yield counts


def _objective_values(kind: ObjectiveKind, eigs: np.ndarray) -> np.ndarray:
    if kind is ObjectiveKind.MAX_LAMBDA2:
        return eigs[:, 1]
    if kind is ObjectiveKind.MIN_LAMBDA_N:
        return eigs[:, -1]
    return eigs[:, -1] - eigs[:, 1]


def grid_search_simplex(spec: MultiplexSpec, c: float, objective,
                        step: float) -> GridSearchReport:
    """Exhaustive evaluation of the objective over the simplex grid of
    resolution `step`.  Guarded to N <= 5 interlayer pairs: the composition
    count grows like (c/step)^(N-1)."""
    kind = ObjectiveKind.from_name(objective)
    N = spec.num_nodes_per_layer
    if N > _GRID_NODE_CAP:
        raise InputError(
            f"grid search over {N} pairs is combinatorial; restrict to "
            f"N <= {_GRID_NODE_CAP} or use the certified solver instead"
        )
    if c < 0:
        raise InputError("budget must be nonnegative")
    if c == 0:
        units = 0
    else:
        ratio = c / step
        units = int(round(ratio))
        if units < 1 or abs(ratio - units) > 1e-9 * max(1.0, ratio):
            raise InputError(f"step {step} does not divide budget {c}")

    L0 = np.asarray(spec.layer0_laplacian)
    a, b = spec.pair_endpoints
    n = spec.total_nodes
    pair_mats = np.zeros((N, n, n))
    for k in range(N):
        i, j = a[k], b[k]
        pair_mats[k, i, i] = pair_mats[k, j, j] = 1.0
        pair_mats[k, i, j] = pair_mats[k, j, i] = -1.0

    sign = -1.0 if kind is ObjectiveKind.MAX_LAMBDA2 else 1.0  # minimize sign*obj
    best_value = np.inf
    best_counts = None
    evaluations = 0
    gen = _compositions(units, N)
    while True:
        chunk = list(itertools.islice(gen, _CHUNK))
        if not chunk:
            break
        counts = np.asarray(chunk, dtype=float)
        W = counts * (0.0 if units == 0 else c / units)
        mats = L0[None, :, :] + np.einsum("bk,kij->bij", W, pair_mats)
        eigs = np.linalg.eigvalsh(mats)
        vals = sign * _objective_values(kind, eigs)
        idx = int(np.argmin(vals))
        if vals[idx] < best_value:
            best_value = float(vals[idx])
            best_counts = counts[idx]
        evaluations += len(chunk)

    w = best_counts * (0.0 if units == 0 else c / units)
    # snap the last coordinate so the grid point sits exactly on the simplex
    if units > 0:
        w = w.copy()
        w[-1] = max(0.0, c - float(w[:-1].sum()))
    return GridSearchReport(
        best_weights=WeightAllocation(w, c),
        best_value=sign * best_value,
        grid_step=step,
        evaluations=evaluations,
    )


@dataclass(frozen=True, eq=False)
class KktReport:
    objective: ObjectiveKind
    complementarity: dict[str, float]
    pair_slacks: np.ndarray
    active_pairs: np.ndarray
    active_slack_max: float
    dual_feasibility: dict[str, float]


def kkt_check(spec: MultiplexSpec, c: float, result: OptimizationResult,
              weight_threshold: float = 1e-8) -> KktReport:
    """Complementary-slackness and dual-feasibility residuals at a solution.

    An optimal pair must satisfy <X, L(w) + mu ee^T - lambda_2 I> = 0 (and
    the mirrored identity for Y), and every pair carrying weight must sit on
    an active interlayer constraint of the dual.
    """
    w = result.weights.weights
    L = assemble_supra_laplacian(spec, w)
    n = spec.total_nodes
    e = np.ones(n)
    a, b = spec.pair_endpoints
    # re-derive the eigenvalues from the weights: the check must not trust
    # the solver's own bookkeeping
    vals = np.linalg.eigvalsh(L)
    lam2, lamn = float(vals[1]), float(vals[-1])

    def pair_values(M: np.ndarray) -> np.ndarray:
        return M[a, a] + M[b, b] - 2.0 * M[a, b]

    comp: dict[str, float] = {}
    X, Y = result.dual.X, result.dual.Y
    if X is not None:
        mu = result.shift_mu if result.shift_mu is not None else lam2
        M = L + mu * np.outer(e, e) - lam2 * np.eye(n)
        comp["x"] = abs(float(np.sum(X * M)))
    if Y is not None:
        M = lamn * np.eye(n) - L
        comp["y"] = abs(float(np.sum(Y * M)))

    kind = result.objective
    if kind is ObjectiveKind.MAX_LAMBDA2:
        slacks = pair_values(X) + result.dual.xi
    elif kind is ObjectiveKind.MIN_LAMBDA_N:
        slacks = pair_values(Y) - result.dual.xi
    else:
        slacks = pair_values(Y) - pair_values(X) - result.dual.xi
    active = np.flatnonzero(w > weight_threshold)
    active_max = float(np.abs(slacks[active]).max()) if active.size else 0.0
    return KktReport(
        objective=kind,
        complementarity=comp,
        pair_slacks=slacks,
        active_pairs=active,
        active_slack_max=active_max,
        dual_feasibility=dict(result.dual.feasibility_residuals),
    )


def monotonicity_probe(spec: MultiplexSpec, trials: int = 100,
                       seed: int = 0, slack: float = 1e-9) -> bool:
    """Every sorted eigenvalue of the supra-Laplacian must be nondecreasing
    under any single-coordinate weight increase (PSD perturbation)."""
    rng = np.random.default_rng(seed)
    N = spec.num_nodes_per_layer
    for _ in range(trials):
        w = rng.exponential(scale=1.0, size=N) * rng.uniform(0.1, 3.0)
        k = int(rng.integers(N))
        delta = float(rng.uniform(1e-6, 1.0))
        before = np.linalg.eigvalsh(assemble_supra_laplacian(spec, w))
        bumped = w.copy()
        bumped[k] += delta
        after = np.linalg.eigvalsh(assemble_supra_laplacian(spec, bumped))
        if np.any(after < before - slack):
            return False
    return True
