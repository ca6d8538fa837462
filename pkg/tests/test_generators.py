import itertools

import pytest

from spectraplex import GenerationError, InputError, generate_layer


def test_er_p1_is_complete():
    layer = generate_layer("erdos_renyi", 5, seed=0, p=1.0)
    pairs = {(i, j) for i, j, _ in layer.edges}
    assert pairs == set(itertools.combinations(range(5), 2))


def test_ws_no_rewiring_is_cycle():
    layer = generate_layer("watts_strogatz", 6, seed=0, k=2, p=0.0)
    pairs = {tuple(sorted((i, j))) for i, j, _ in layer.edges}
    cycle = {tuple(sorted((i, (i + 1) % 6))) for i in range(6)}
    assert pairs == cycle


def test_ba_edge_count():
    # preferential attachment emits m(n-m) edges total
    layer = generate_layer("barabasi_albert", 10, seed=7, m=2)
    assert layer.node_count == 10
    assert len(layer.edges) == 2 * (10 - 2)
    assert layer.is_connected()


def test_seed_reproducibility():
    a = generate_layer("geo", 15, seed=3, r=0.5)
    b = generate_layer("geo", 15, seed=3, r=0.5)
    assert a.edges == b.edges
    c = generate_layer("geo", 15, seed=4, r=0.5)
    assert c.edges != a.edges


def test_connectivity_retry_and_failure():
    with pytest.raises(GenerationError):
        generate_layer("geometric", 20, seed=0, r=0.005)


def test_model_aliases():
    assert generate_layer("ws", 8, seed=1, k=2, p=0.1).node_count == 8


@pytest.mark.parametrize(
    "model,params",
    [
        ("barabasi_albert", {}),
        ("barabasi_albert", {"m": 0}),
        ("erdos_renyi", {"p": 1.5}),
        ("geometric", {"r": -1.0}),
        ("watts_strogatz", {"k": 1, "p": 0.1}),
        ("watts_strogatz", {"k": 4}),
        ("nonsense", {"p": 0.5}),
    ],
)
def test_invalid_params(model, params):
    with pytest.raises(InputError):
        generate_layer(model, 8, seed=0, **params)
