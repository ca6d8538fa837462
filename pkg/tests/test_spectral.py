import numpy as np
import pytest

from spectraplex import (
    DomainError,
    InputError,
    LayerGraph,
    MultiplexSpec,
    eig_symmetric_clustered,
    pseudoinverse,
    spectral_bounds,
    threshold_c1_star,
    threshold_c_star,
)
from spectraplex.graphs import connected_component_count
from spectraplex.spectral import nodal_set, q_matrix


def test_clustered_spectrum_single_edge():
    s = eig_symmetric_clustered(np.array([[1.0, -1.0], [-1.0, 1.0]]))
    np.testing.assert_allclose(s.eigenvalues, [0.0, 2.0], atol=1e-12)
    assert [c.stop - c.start for c in s.clusters] == [1, 1]


def test_clustered_spectrum_k3():
    L = np.array([[2.0, -1, -1], [-1, 2, -1], [-1, -1, 2]])
    s = eig_symmetric_clustered(L)
    np.testing.assert_allclose(s.eigenvalues, [0.0, 3.0, 3.0], atol=1e-12)
    assert [c.stop - c.start for c in s.clusters] == [1, 2]
    assert s.multiplicity_of(1) == 2


def test_clustered_spectrum_weighted_triangle():
    L = LayerGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 2.0)]).laplacian
    s = eig_symmetric_clustered(L)
    # characteristic polynomial -x(x-3)(x-5)
    np.testing.assert_allclose(s.eigenvalues, [0.0, 3.0, 5.0], atol=1e-12)
    assert all(c.stop - c.start == 1 for c in s.clusters)


def test_spectrum_reconstruction_and_orthonormality():
    rng = np.random.default_rng(11)
    A = rng.normal(size=(12, 12))
    A = 0.5 * (A + A.T)
    s = eig_symmetric_clustered(A)
    V, lam = s.eigenvectors, s.eigenvalues
    recon_err = np.linalg.norm(A - (V * lam) @ V.T)
    assert recon_err <= 1e-8 * max(1.0, np.linalg.norm(A))
    assert np.abs(V.T @ V - np.eye(12)).max() <= 1e-10


def test_non_symmetric_rejected():
    with pytest.raises(InputError):
        eig_symmetric_clustered(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_pseudoinverse_single_edge():
    L = np.array([[1.0, -1.0], [-1.0, 1.0]])
    np.testing.assert_allclose(
        pseudoinverse(L), [[0.25, -0.25], [-0.25, 0.25]], atol=1e-12
    )


def test_pseudoinverse_identity_and_zero():
    np.testing.assert_allclose(pseudoinverse(np.eye(4)), np.eye(4), atol=1e-12)
    np.testing.assert_allclose(pseudoinverse(np.zeros((3, 3))), np.zeros((3, 3)))


def test_pseudoinverse_properties():
    rng = np.random.default_rng(5)
    for _ in range(5):
        n = 8
        A = rng.normal(size=(n, n))
        A = 0.5 * (A + A.T)
        # project to a random-rank PSD-ish matrix with a kernel
        vals, vecs = np.linalg.eigh(A)
        vals[:3] = 0.0
        A = (vecs * vals) @ vecs.T
        Ap = pseudoinverse(A)
        assert np.abs(A @ Ap @ A - A).max() <= 1e-8 * max(1.0, np.abs(A).max())
        assert np.abs(pseudoinverse(Ap) - A).max() <= 1e-7 * max(1.0, np.abs(A).max())


def test_c_star_single_edge_fixture(single_edge_spec):
    L = single_edge_spec.layer1.laplacian
    assert abs(threshold_c_star(L, L) - 2.0) <= 1e-9


def test_c_star_identical_layers_reduction():
    # for identical layers c* = (n/4) lambda_2(L); K3 gives 6*3/4
    L = LayerGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).laplacian
    assert abs(threshold_c_star(L, L) - 6 * 3 / 4.0) <= 1e-9


def test_c_star_symmetry_and_scaling(triangle_spec):
    L1 = triangle_spec.layer1.laplacian
    L2 = triangle_spec.layer2.laplacian
    a = threshold_c_star(L1, L2)
    b = threshold_c_star(L2, L1)
    assert abs(a - b) <= 1e-9 * max(1.0, a)
    scaled = threshold_c_star(3.0 * L1, 3.0 * L2)
    assert abs(scaled - 3.0 * a) <= 1e-9 * max(1.0, scaled)


def test_c_star_disconnected_rejected():
    L_disc = LayerGraph(3, [(0, 1, 1.0)]).laplacian
    L_ok = LayerGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).laplacian
    with pytest.raises(DomainError):
        threshold_c_star(L_disc, L_ok)


def test_q_matrix_triangle_fixture(triangle_spec):
    expected = np.array([[-2.0, -1.0, -2.0], [-1.0, -3.0, -1.0], [-2.0, -1.0, -2.0]])
    np.testing.assert_allclose(q_matrix(triangle_spec), expected, atol=1e-10)


def test_c1_star_triangle_fixture(triangle_spec, triangle_c1_star):
    c1, Q = threshold_c1_star(triangle_spec)
    assert abs(c1 - triangle_c1_star) <= 1e-6
    # bisection needs a strictly negative start
    assert np.linalg.eigvalsh(Q)[0] < 0


def test_c1_star_homogeneity(triangle_spec, triangle_c1_star):
    double = MultiplexSpec(
        LayerGraph(3, [(i, j, 2 * w) for i, j, w in triangle_spec.layer1.edges]),
        LayerGraph(3, [(i, j, 2 * w) for i, j, w in triangle_spec.layer2.edges]),
    )
    c1, _ = threshold_c1_star(double)
    assert abs(c1 - 2.0 * triangle_c1_star) <= 1e-6


def test_c1_star_tie_rejected():
    tri = LayerGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
    with pytest.raises(DomainError):
        threshold_c1_star(MultiplexSpec(tri, tri))


def test_c1_star_empty_nodal_set_rejected():
    # path P3 has top eigenvector (1,-2,1)/sqrt(6): nowhere zero
    path = LayerGraph(3, [(0, 1, 1.0), (1, 2, 1.0)])
    weak = LayerGraph(3, [(0, 1, 0.5), (1, 2, 0.5), (0, 2, 0.5)])
    with pytest.raises(DomainError, match="nodal set empty"):
        threshold_c1_star(MultiplexSpec(path, weak))


def test_c1_star_bad_pattern_rejected(triangle_spec):
    with pytest.raises(InputError):
        threshold_c1_star(triangle_spec, np.array([0.5, 0.5, 0.0]))  # off nodal set
    with pytest.raises(InputError):
        threshold_c1_star(triangle_spec, np.array([0.0, 0.5, 0.0]))  # not unit sum


def test_c1_star_matching_permutation_invariant():
    tri_w = LayerGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 2.0)])
    path = LayerGraph(3, [(0, 1, 0.5), (1, 2, 0.5)])
    base, _ = threshold_c1_star(MultiplexSpec(tri_w, path))
    rho = [1, 2, 0]
    path_perm = LayerGraph(3, [(rho[i], rho[j], w) for i, j, w in path.edges])
    perm_spec = MultiplexSpec(tri_w, path_perm, [(i, rho[i]) for i in range(3)])
    permuted, _ = threshold_c1_star(perm_spec)
    assert abs(base - permuted) <= 1e-8


def test_nodal_set_tolerance():
    v = np.array([0.7, 1e-10, -0.7])
    assert list(nodal_set(v)) == [1]
    # a not-quite-zero entry at 1e-3 of the max is not a nodal point
    v = np.array([0.7, 0.0013, -0.7])
    assert list(nodal_set(v)) == []


def test_bounds_triangle_pair(triangle_spec):
    b = spectral_bounds(triangle_spec, 3.0)
    assert abs(b.lambda2_ave_cap - 3.0) <= 1e-9       # L_ave spectrum {0,3,4}
    assert abs(b.lambdan_lower - max(5.0, 2.0)) <= 1e-9
    assert abs(b.lambdan_upper_large_c - (4.0 + 2.0)) <= 1e-9
    assert abs(b.width_lower - (5.0 - 2.0)) <= 1e-9
    lo, hi = b.width_bracket_large_c
    assert abs(lo - (2.0 - 3.0)) <= 1e-9 and abs(hi - (4.0 - 3.0 + 2.0)) <= 1e-9


def test_bounds_zero_budget_width(triangle_spec):
    b = spectral_bounds(triangle_spec, 0.0)
    assert abs(b.width_lower - 5.0) <= 1e-12


def test_bounds_linear_cap(single_edge_spec):
    assert abs(spectral_bounds(single_edge_spec, 1.0).lambda2_linear_cap - 1.0) <= 1e-12


def test_zero_eigenvalues_count_components():
    rng = np.random.default_rng(2)
    layer = LayerGraph(4, [(0, 1, 1.0), (2, 3, 1.0)])  # two components
    vals = np.linalg.eigvalsh(layer.laplacian)
    n_zero = int(np.sum(np.abs(vals) <= 1e-9))
    assert n_zero == connected_component_count(4, [(0, 1), (2, 3)]) == 2
