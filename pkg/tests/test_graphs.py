import json

import numpy as np
import pytest

from spectraplex import (
    InputError,
    LayerGraph,
    MultiplexSpec,
    WeightAllocation,
    assemble_supra_laplacian,
    build_layer_laplacian,
    validate_multiplex,
)
from spectraplex.graphs import (
    check_laplacian,
    check_symmetric,
    connected_component_count,
    layer_from_dict,
    layer_to_dict,
    multiplex_from_dict,
    multiplex_to_dict,
    validate_multiplex_data,
)
from conftest import random_simplex_weights


def test_single_edge_laplacian():
    layer = LayerGraph(2, [(0, 1, 1.0)])
    np.testing.assert_allclose(build_layer_laplacian(layer), [[1, -1], [-1, 1]])


def test_weighted_triangle_laplacian():
    layer = LayerGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 2.0)])
    expected = [[3, -1, -2], [-1, 2, -1], [-2, -1, 3]]
    np.testing.assert_allclose(build_layer_laplacian(layer), expected)


def test_empty_layer_laplacian_is_zero():
    layer = LayerGraph(3, [])
    np.testing.assert_allclose(build_layer_laplacian(layer), np.zeros((3, 3)))


@pytest.mark.parametrize(
    "edges",
    [
        [(0, 3, 1.0)],            # index out of range
        [(1, 1, 1.0)],            # self loop
        [(0, 1, 0.0)],            # nonpositive weight
        [(0, 1, 1.0), (1, 0, 2.0)],  # duplicate unordered pair
    ],
)
def test_invalid_layer_edges(edges):
    with pytest.raises(InputError):
        LayerGraph(2, edges)


def test_supra_eigenvalues_single_edge_pair(single_edge_spec):
    L = assemble_supra_laplacian(single_edge_spec, np.array([1.0, 1.0]))
    vals = np.linalg.eigvalsh(L)
    np.testing.assert_allclose(vals, [0.0, 2.0, 2.0, 4.0], atol=1e-12)


def test_supra_zero_coupling_is_block_diagonal(triangle_spec):
    L = assemble_supra_laplacian(triangle_spec, np.zeros(3))
    np.testing.assert_allclose(L[:3, 3:], 0.0)
    np.testing.assert_allclose(L[:3, :3], triangle_spec.layer1.laplacian)
    np.testing.assert_allclose(L[3:, 3:], triangle_spec.layer2.laplacian)


def test_supra_preserves_nodal_eigenvector(triangle_spec):
    # weight on the nodal node keeps (1,0,-1,0,0,0)/sqrt(2) at eigenvalue 5
    v = np.array([1.0, 0.0, -1.0, 0.0, 0.0, 0.0]) / np.sqrt(2)
    for c in (0.1, 0.7, 1.2):
        L = assemble_supra_laplacian(triangle_spec, np.array([0.0, c, 0.0]))
        np.testing.assert_allclose(L @ v, 5.0 * v, atol=1e-12)


def test_supra_is_laplacian_and_psd(triangle_spec):
    rng = np.random.default_rng(1)
    w = random_simplex_weights(rng, 3, 2.5)
    L = assemble_supra_laplacian(triangle_spec, w)
    assert check_laplacian(L)
    assert np.linalg.eigvalsh(L)[0] > -1e-10


def test_two_assembly_paths_agree(triangle_spec):
    # block assembly must match the rank-one sum L0 + sum_k w_k L_pair(k)
    rng = np.random.default_rng(7)
    n = triangle_spec.total_nodes
    a, b = triangle_spec.pair_endpoints
    for _ in range(5):
        w = random_simplex_weights(rng, 3, rng.uniform(0.5, 8.0))
        L_naive = np.array(triangle_spec.layer0_laplacian)
        for k in range(3):
            e = np.zeros(n)
            e[a[k]] = 1.0
            e[b[k]] = -1.0
            L_naive += w[k] * np.outer(e, e)
        L = assemble_supra_laplacian(triangle_spec, w)
        assert np.abs(L - L_naive).max() <= 1e-12 * max(1.0, np.abs(L).max())


def test_eigenvalue_monotonicity_under_bump(triangle_spec):
    rng = np.random.default_rng(3)
    for _ in range(20):
        w = random_simplex_weights(rng, 3, rng.uniform(0.2, 5.0))
        k = int(rng.integers(3))
        delta = float(rng.uniform(0.01, 1.0))
        before = np.linalg.eigvalsh(assemble_supra_laplacian(triangle_spec, w))
        w2 = w.copy()
        w2[k] += delta
        after = np.linalg.eigvalsh(assemble_supra_laplacian(triangle_spec, w2))
        assert np.all(after >= before - 1e-9)


def test_permuted_matching_couples_right_nodes():
    edge = LayerGraph(2, [(0, 1, 1.0)])
    spec = MultiplexSpec(edge, edge, [(0, 1), (1, 0)])
    L = assemble_supra_laplacian(spec, np.array([3.0, 5.0]))
    # pair 0 couples global nodes 0 and 3, pair 1 couples 1 and 2
    assert L[0, 3] == -3.0 and L[1, 2] == -5.0 and L[0, 2] == 0.0


def test_assemble_rejects_bad_weights(triangle_spec):
    with pytest.raises(InputError):
        assemble_supra_laplacian(triangle_spec, np.array([1.0, 2.0]))  # wrong length
    with pytest.raises(InputError):
        assemble_supra_laplacian(triangle_spec, np.array([1.0, -0.5, 0.5]))


def test_weight_allocation_invariants():
    WeightAllocation([0.25, 0.75], 1.0)
    with pytest.raises(InputError):
        WeightAllocation([-0.1, 1.1], 1.0)
    with pytest.raises(InputError):
        WeightAllocation([0.3, 0.3], 1.0)


def test_validate_multiplex_report(triangle_spec):
    report = validate_multiplex(triangle_spec)
    assert report.valid
    assert report.num_nodes_per_layer == 3 and report.total_nodes == 6

    disconnected = LayerGraph(3, [(0, 1, 1.0)])
    bad = MultiplexSpec(triangle_spec.layer1, disconnected)
    report = validate_multiplex(bad)
    assert not report.valid
    assert "layer 2 not connected" in report.reasons


def test_validate_multiplex_data_matching():
    tri = LayerGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
    report = validate_multiplex_data(tri, tri, [(0, 0), (1, 1)])
    assert not report.valid
    assert "matching not perfect" in report.reasons


def test_multiplex_constructor_rejects_bad_matching():
    tri = LayerGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
    with pytest.raises(InputError):
        MultiplexSpec(tri, tri, [(0, 0), (1, 1), (2, 1)])
    with pytest.raises(InputError):
        MultiplexSpec(tri, LayerGraph(2, [(0, 1, 1.0)]))


def test_json_round_trip(triangle_spec, tmp_path):
    d = multiplex_to_dict(triangle_spec)
    text = json.dumps(d)
    again = multiplex_from_dict(json.loads(text))
    assert again == triangle_spec

    layer_d = layer_to_dict(triangle_spec.layer1)
    assert layer_from_dict(layer_d) == triangle_spec.layer1


def test_json_matching_defaults_to_identity():
    tri = layer_to_dict(LayerGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]))
    spec = multiplex_from_dict({"layer1": tri, "layer2": tri})
    assert spec.interlayer_pairs == ((0, 0), (1, 1), (2, 2))


def test_connected_component_count():
    assert connected_component_count(4, [(0, 1), (1, 2), (2, 3)]) == 1
    assert connected_component_count(4, [(0, 1), (2, 3)]) == 2
    assert connected_component_count(3, []) == 3


def test_check_symmetric():
    assert check_symmetric(np.array([[1.0, 2.0], [2.0, 3.0]]))
    assert not check_symmetric(np.array([[1.0, 2.0], [2.1, 3.0]]))
