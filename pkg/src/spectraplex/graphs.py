"""Layer graphs, multiplex specifications and supra-Laplacian assembly.

Node ordering convention: layer 1 occupies global indices 0..N-1, layer 2
occupies N..2N-1.  Interlayer pair k couples layer-1 node a_k with layer-2
node b_k (local index), i.e. global indices a_k and N + b_k.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError

__all__ = [
    "LayerGraph",
    "MultiplexSpec",
    "WeightAllocation",
    "ValidationReport",
    "build_layer_laplacian",
    "assemble_supra_laplacian",
    "validate_multiplex",
    "validate_multiplex_data",
    "check_symmetric",
    "check_laplacian",
    "connected_component_count",
    "layer_to_dict",
    "layer_from_dict",
    "multiplex_to_dict",
    "multiplex_from_dict",
    "load_multiplex",
    "save_multiplex",
]

#: relative tolerance for the budget-sum invariant of WeightAllocation
BUDGET_RTOL = 1e-12


@dataclass(frozen=True)
class LayerGraph:
    """One weighted undirected layer: node count plus weighted edge list."""

    node_count: int
    edges: tuple[tuple[int, int, float], ...]

    def __init__(self, node_count: int, edges: Iterable[Sequence]) -> None:
        object.__setattr__(self, "node_count", int(node_count))
        norm = tuple((int(i), int(j), float(w)) for i, j, w in edges)
        object.__setattr__(self, "edges", norm)
        self._validate()

    def _validate(self) -> None:
        n = self.node_count
        if n <= 0:
            raise InputError(f"node_count must be positive, got {n}")
        seen = set()
        for i, j, w in self.edges:
            if not (0 <= i < n and 0 <= j < n):
                raise InputError(f"edge ({i},{j}) out of range for {n} nodes")
            if i == j:
                raise InputError(f"self-loop at node {i} not allowed")
            if w <= 0:
                raise InputError(f"edge ({i},{j}) has non-positive weight {w}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise InputError(f"duplicate edge {key}")
            seen.add(key)

    @cached_property
    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.node_count, self.node_count))
        for i, j, w in self.edges:
            A[i, j] += w
            A[j, i] += w
        A.flags.writeable = False
        return A

    @cached_property
    def laplacian(self) -> np.ndarray:
        return build_layer_laplacian(self)

    def is_connected(self) -> bool:
        return connected_component_count(self.node_count, [(i, j) for i, j, _ in self.edges]) == 1

    def degrees(self, weighted: bool = True) -> np.ndarray:
        if weighted:
            return self.adjacency.sum(axis=1)
        d = np.zeros(self.node_count)
        for i, j, _ in self.edges:
            d[i] += 1
            d[j] += 1
        return d


@dataclass(frozen=True)
class MultiplexSpec:
    """Two equally sized layers joined by a perfect interlayer matching."""

    layer1: LayerGraph
    layer2: LayerGraph
    interlayer_pairs: tuple[tuple[int, int], ...] = field(default=())

    def __init__(
        self,
        layer1: LayerGraph,
        layer2: LayerGraph,
        interlayer_pairs: Iterable[Sequence[int]] | None = None,
    ) -> None:
        object.__setattr__(self, "layer1", layer1)
        object.__setattr__(self, "layer2", layer2)
        if interlayer_pairs is None:
            pairs = tuple((i, i) for i in range(layer1.node_count))
        else:
            pairs = tuple((int(i), int(j)) for i, j in interlayer_pairs)
        object.__setattr__(self, "interlayer_pairs", pairs)
        self._validate()

    def _validate(self) -> None:
        if self.layer1.node_count != self.layer2.node_count:
            raise InputError(
                f"layers must have equal node counts "
                f"({self.layer1.node_count} != {self.layer2.node_count})"
            )
        N = self.layer1.node_count
        if len(self.interlayer_pairs) != N:
            raise InputError(f"matching must contain exactly {N} pairs")
        left = [i for i, _ in self.interlayer_pairs]
        right = [j for _, j in self.interlayer_pairs]
        if sorted(left) != list(range(N)) or sorted(right) != list(range(N)):
            raise InputError("interlayer pairs do not form a perfect matching")

    @property
    def num_nodes_per_layer(self) -> int:
        return self.layer1.node_count

    @property
    def total_nodes(self) -> int:
        return 2 * self.layer1.node_count

    @cached_property
    def pair_endpoints(self) -> tuple[np.ndarray, np.ndarray]:
        """Global endpoint indices (a_k, N + b_k) for each interlayer pair."""
        N = self.num_nodes_per_layer
        a = np.array([i for i, _ in self.interlayer_pairs], dtype=int)
        b = np.array([N + j for _, j in self.interlayer_pairs], dtype=int)
        return a, b

    @cached_property
    def layer0_laplacian(self) -> np.ndarray:
        """Laplacian of the disjoint union of the two layers (zero coupling)."""
        N = self.num_nodes_per_layer
        L0 = np.zeros((2 * N, 2 * N))
        L0[:N, :N] = self.layer1.laplacian
        L0[N:, N:] = self.layer2.laplacian
        L0.flags.writeable = False
        return L0


@dataclass(frozen=True, eq=False)
class WeightAllocation:
    """Nonnegative interlayer weights summing to the budget."""

    weights: np.ndarray
    budget: float

    def __init__(self, weights, budget: float | None = None) -> None:
        w = np.asarray(weights, dtype=float).copy()
        if w.ndim != 1:
            raise InputError("weights must be a 1-d vector")
        if np.any(w < 0):
            raise InputError("weights must be nonnegative")
        total = float(w.sum())
        if budget is None:
            budget = total
        budget = float(budget)
        if abs(total - budget) > BUDGET_RTOL * max(1.0, abs(budget)):
            raise InputError(f"weights sum to {total}, budget is {budget}")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "budget", budget)

    def __len__(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    reasons: tuple[str, ...]
    num_nodes_per_layer: int
    total_nodes: int
    layer1_connected: bool
    layer2_connected: bool
    matching_perfect: bool


def connected_component_count(n: int, edges: Iterable[tuple[int, int]]) -> int:
    """Number of connected components of an undirected graph (union-find)."""
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = n
    for i, j in edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            count -= 1
    return count


def check_symmetric(A: np.ndarray, rtol: float = 1e-12) -> bool:
    """True if A is symmetric: |A - A^T| <= rtol * max|A| entrywise."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        return False
    scale = max(1e-300, float(np.abs(A).max())) if A.size else 1.0
    return bool(np.abs(A - A.T).max() <= rtol * scale) if A.size else True


def check_laplacian(A: np.ndarray, row_tol: float = 1e-10) -> bool:
    """True if A is a combinatorial Laplacian: symmetric, zero row sums,
    nonpositive off-diagonal entries."""
    if not check_symmetric(A):
        return False
    scale = max(1.0, float(np.abs(A).max()))
    if np.abs(A.sum(axis=1)).max() > row_tol * scale:
        return False
    off = A - np.diag(np.diag(A))
    return bool(off.max() <= 1e-12 * scale)


def build_layer_laplacian(layer: LayerGraph) -> np.ndarray:
    """Weighted Laplacian D - W of one layer."""
    n = layer.node_count
    L = np.zeros((n, n))
    for i, j, w in layer.edges:
        L[i, i] += w
        L[j, j] += w
        L[i, j] -= w
        L[j, i] -= w
    return L


def assemble_supra_laplacian(spec: MultiplexSpec, alloc: WeightAllocation | np.ndarray) -> np.ndarray:
    """Supra-Laplacian [[L1 + D1, -C], [-C^T, L2 + D2]] for the given
    interlayer weights, where C carries weight w_k at (a_k, b_k) and
    D1, D2 are the corresponding row/column sum diagonals."""
    w = alloc.weights if isinstance(alloc, WeightAllocation) else np.asarray(alloc, dtype=float)
    N = spec.num_nodes_per_layer
    if w.shape != (N,):
        raise InputError(f"expected {N} interlayer weights, got shape {w.shape}")
    if np.any(w < 0):
        raise InputError("interlayer weights must be nonnegative")
    L = np.zeros((2 * N, 2 * N))
    L[:N, :N] = spec.layer1.laplacian
    L[N:, N:] = spec.layer2.laplacian
    a, b = spec.pair_endpoints
    L[a, a] += w
    L[b, b] += w
    L[a, b] -= w
    L[b, a] -= w
    return L


def validate_multiplex(spec: MultiplexSpec) -> ValidationReport:
    """Structural validity report; never raises, failures are recorded."""
    reasons = []
    c1 = spec.layer1.is_connected()
    c2 = spec.layer2.is_connected()
    if not c1:
        reasons.append("layer 1 not connected")
    if not c2:
        reasons.append("layer 2 not connected")
    # MultiplexSpec construction already enforces a perfect matching; reports
    # over raw interchange data go through validate_multiplex_data instead.
    matching = len(spec.interlayer_pairs) == spec.num_nodes_per_layer
    if not matching:
        reasons.append("matching not perfect")
    return ValidationReport(
        valid=not reasons,
        reasons=tuple(reasons),
        num_nodes_per_layer=spec.num_nodes_per_layer,
        total_nodes=spec.total_nodes,
        layer1_connected=c1,
        layer2_connected=c2,
        matching_perfect=matching,
    )


def validate_multiplex_data(
    layer1: LayerGraph,
    layer2: LayerGraph,
    interlayer_pairs: Iterable[Sequence[int]] | None = None,
) -> ValidationReport:
    """Validation report over raw parts that may not form a perfect matching.

    Unlike the MultiplexSpec constructor this never raises; it is the entry
    point for checking deserialized interchange data.
    """
    reasons = []
    c1 = layer1.is_connected()
    c2 = layer2.is_connected()
    if not c1:
        reasons.append("layer 1 not connected")
    if not c2:
        reasons.append("layer 2 not connected")
    N = layer1.node_count
    matching = layer1.node_count == layer2.node_count
    if not matching:
        reasons.append("layers differ in node count")
    else:
        if interlayer_pairs is None:
            pairs = [(i, i) for i in range(N)]
        else:
            pairs = [(int(i), int(j)) for i, j in interlayer_pairs]
        left = sorted(i for i, _ in pairs)
        right = sorted(j for _, j in pairs)
        matching = left == list(range(N)) and right == list(range(N))
        if not matching:
            reasons.append("matching not perfect")
    return ValidationReport(
        valid=not reasons,
        reasons=tuple(reasons),
        num_nodes_per_layer=N,
        total_nodes=2 * N,
        layer1_connected=c1,
        layer2_connected=c2,
        matching_perfect=matching,
    )


# ---------------------------------------------------------------------------
# JSON interchange


def layer_to_dict(layer: LayerGraph) -> dict:
    return {"n": layer.node_count, "edges": [[i, j, w] for i, j, w in layer.edges]}


def layer_from_dict(d: dict) -> LayerGraph:
    try:
        return LayerGraph(d["n"], d["edges"])
    except KeyError as exc:
        raise InputError(f"layer JSON missing field {exc}") from exc


def multiplex_to_dict(spec: MultiplexSpec) -> dict:
    return {
        "layer1": layer_to_dict(spec.layer1),
        "layer2": layer_to_dict(spec.layer2),
        "matching": [[i, j] for i, j in spec.interlayer_pairs],
    }


def multiplex_from_dict(d: dict) -> MultiplexSpec:
    try:
        l1 = layer_from_dict(d["layer1"])
        l2 = layer_from_dict(d["layer2"])
    except KeyError as exc:
        raise InputError(f"multiplex JSON missing field {exc}") from exc
    matching = d.get("matching")
    return MultiplexSpec(l1, l2, matching)


def load_multiplex(path) -> MultiplexSpec:
    with open(path) as fh:
        return multiplex_from_dict(json.load(fh))


def save_multiplex(spec: MultiplexSpec, path) -> None:
    with open(path, "w") as fh:
        json.dump(multiplex_to_dict(spec), fh, indent=2)
