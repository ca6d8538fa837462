import numpy as np
import pytest

from spectraplex import LayerGraph, MultiplexSpec, generate_layer


@pytest.fixture(scope="session")
def single_edge_spec():
    """Two identical single-edge layers (N=2): the exact lambda_2 fixture."""
    edge = LayerGraph(2, [(0, 1, 1.0)])
    return MultiplexSpec(edge, edge)


@pytest.fixture(scope="session")
def triangle_spec():
    """Weighted triangle (1,1,2) over an unweighted triangle: the exact
    lambda_n fixture with top eigenvalue 5 and nodal set {1}."""
    tri_w = LayerGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 2.0)])
    tri_u = LayerGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
    return MultiplexSpec(tri_w, tri_u)


@pytest.fixture(scope="session")
def triangle_c1_star():
    # analytic root of det[[ -4, -sqrt(2)], [-sqrt(2), -3+2c]] = 0
    return 1.25


def random_multiplex(index: int, size: int | None = None) -> MultiplexSpec:
    """Seeded multiplex from the four layer models, N in [5, 15]."""
    models = [
        ("erdos_renyi", dict(p=0.4)),
        ("watts_strogatz", dict(k=4, p=0.3)),
        ("geometric", dict(r=0.5)),
        ("barabasi_albert", dict(m=2)),
    ]
    model, params = models[index % 4]
    N = size if size is not None else 5 + (index * 7) % 11
    l1 = generate_layer(model, N, seed=index, **params)
    l2 = generate_layer(model, N, seed=index + 100, **params)
    return MultiplexSpec(l1, l2)


def random_simplex_weights(rng: np.random.Generator, N: int, c: float) -> np.ndarray:
    w = rng.dirichlet(np.ones(N))
    return w * c
