"""Seeded random layer generators (BA, ER, geometric, Watts-Strogatz).

Connectivity is enforced by regenerating with an incremented sub-seed up to
a retry cap; this keeps generation reproducible for a fixed base seed.
"""

from __future__ import annotations

import networkx as nx

from .errors import GenerationError, InputError
from .graphs import LayerGraph

__all__ = ["generate_layer", "MODELS"]

MODELS = ("barabasi_albert", "erdos_renyi", "geometric", "watts_strogatz")

_ALIASES = {
    "ba": "barabasi_albert",
    "er": "erdos_renyi",
    "geo": "geometric",
    "ws": "watts_strogatz",
}

RETRY_CAP = 100


def _build(model: str, n: int, seed: int, params: dict) -> nx.Graph:
    if model == "barabasi_albert":
        m = params.get("m")
        if m is None or not (1 <= int(m) < n):
            raise InputError(f"barabasi_albert requires attachment count 1 <= m < n, got {m}")
        return nx.barabasi_albert_graph(n, int(m), seed=seed)
    if model == "erdos_renyi":
        p = params.get("p")
        if p is None or not (0.0 <= float(p) <= 1.0):
            raise InputError(f"erdos_renyi requires edge probability p in [0,1], got {p}")
        return nx.gnp_random_graph(n, float(p), seed=seed)
    if model == "geometric":
        r = params.get("r")
        if r is None or float(r) <= 0:
            raise InputError(f"geometric requires radius r > 0, got {r}")
        # points uniform in the unit square, Euclidean threshold r
        return nx.random_geometric_graph(n, float(r), seed=seed)
    if model == "watts_strogatz":
        k = params.get("k")
        p = params.get("p")
        if k is None or not (2 <= int(k) < n):
            raise InputError(f"watts_strogatz requires ring degree 2 <= k < n, got {k}")
        if p is None or not (0.0 <= float(p) <= 1.0):
            raise InputError(f"watts_strogatz requires rewire probability p in [0,1], got {p}")
        return nx.watts_strogatz_graph(n, int(k), float(p), seed=seed)
    raise InputError(f"unknown model {model!r}; choose from {MODELS}")


def generate_layer(model: str, n: int, seed: int, **params) -> LayerGraph:
    """Generate a connected layer with unit edge weights.

    Parameters are model specific: ``m`` (barabasi_albert), ``p``
    (erdos_renyi), ``r`` (geometric), ``k`` and ``p`` (watts_strogatz).
    Short model aliases ba/er/geo/ws are accepted.  Raises GenerationError
    if no connected graph is produced within the retry cap.
    """
    model = _ALIASES.get(model, model)
    if n < 2:
        raise InputError(f"need at least 2 nodes, got {n}")
    for attempt in range(RETRY_CAP):
        g = _build(model, n, int(seed) + attempt, params)
        if g.number_of_nodes() == n and nx.is_connected(g):
            edges = tuple((int(i), int(j), 1.0) for i, j in sorted(g.edges()))
            return LayerGraph(n, edges)
    raise GenerationError(
        f"{model} with n={n}, params={params} produced no connected graph "
        f"in {RETRY_CAP} attempts from seed {seed}"
    )
