import csv
import io
import json

import numpy as np
import pytest
import scipy.stats

from spectraplex import (
    WeightAllocation,
    correlate_centralities,
    maximize_lambda2,
    solve,
    sweep_budget,
    threshold_c1_star,
    threshold_c_star,
)
from spectraplex.sweep import (
    degree_centrality,
    eigenvector_centrality,
    fiedler_vector,
    pagerank,
)
import dataclasses

from conftest import random_multiplex


def test_sweep_single_edge_curve_and_transition(single_edge_spec):
    sw = sweep_budget(single_edge_spec, "lambda2", 0.0, 4.0, 21)
    for p in sw.points:
        assert p.status == "optimal"
        assert abs(p.objective_value - min(p.budget, 2.0)) <= 1e-6
    c_star = threshold_c_star(single_edge_spec.layer1.laplacian,
                              single_edge_spec.layer2.laplacian)
    ups = [t for t in sw.transitions if t.after > t.before]
    assert ups and abs(ups[0].budget - c_star) <= 1e-3


def test_sweep_triangle_lambdan_flat_then_transition(triangle_spec, triangle_c1_star):
    sw = sweep_budget(triangle_spec, "lambdan", 0.0, 3.0, 16)
    c1, _ = threshold_c1_star(triangle_spec)
    for p in sw.points:
        if p.budget < c1 - 1e-3:
            assert abs(p.objective_value - 5.0) <= 1e-6
    assert sw.transitions
    assert abs(sw.transitions[0].budget - c1) <= 1e-3
    assert abs(c1 - triangle_c1_star) <= 1e-6


def test_sweep_confirms_c_star_on_triangle_pair(triangle_spec):
    # the analytic uniform threshold must coincide with the empirically
    # detected lambda_2 multiplicity transition
    c_star = threshold_c_star(triangle_spec.layer1.laplacian,
                              triangle_spec.layer2.laplacian)
    sw = sweep_budget(triangle_spec, "lambda2", 0.5 * c_star, 1.5 * c_star, 11)
    assert sw.transitions
    assert min(abs(t.budget - c_star) for t in sw.transitions) <= 1e-3


def test_sweep_width_small_c_slope(triangle_spec):
    c_star = threshold_c_star(triangle_spec.layer1.laplacian,
                              triangle_spec.layer2.laplacian)
    sw = sweep_budget(triangle_spec, "width", 0.0, 0.02 * c_star, 3,
                      refine_transitions=False)
    p0, p1 = sw.points[0], sw.points[1]
    slope = (p1.objective_value - p0.objective_value) / (p1.budget - p0.budget)
    assert abs(slope - (-2.0 / 3.0)) <= 0.05 * (2.0 / 3.0)


def test_sweep_bounds_hold_everywhere(triangle_spec):
    sw = sweep_budget(triangle_spec, "lambdan", 0.0, 20.0, 9,
                      refine_transitions=False)
    for p in sw.points:
        b = p.bounds
        assert p.lambda2 <= min(b.lambda2_linear_cap, b.lambda2_ave_cap) + 1e-6
        assert p.lambda_n >= b.lambdan_lower - 1e-6
        assert (p.lambda_n - p.lambda2) >= b.width_lower - 1e-6


def test_sweep_dominates_uniform(triangle_spec):
    for objective, sense in (("lambda2", +1), ("lambdan", -1), ("width", -1)):
        sw = sweep_budget(triangle_spec, objective, 0.0, 5.0, 6,
                          refine_transitions=False)
        for p in sw.points:
            assert sense * (p.objective_value - p.uniform_value) >= -1e-7


def test_sweep_csv_and_json_round_trip(single_edge_spec, tmp_path):
    sw = sweep_budget(single_edge_spec, "lambda2", 0.0, 3.0, 4,
                      refine_transitions=False)
    text = sw.to_csv()
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0][0] == "c" and len(rows) == 5
    path = tmp_path / "sweep.json"
    sw.to_json(path)
    data = json.loads(path.read_text())
    assert data["objective"] == "lambda2"
    assert len(data["points"]) == 4


def test_sweep_log_grid(single_edge_spec):
    sw = sweep_budget(single_edge_spec, "lambda2", 0.0, 8.0, 5, log=True,
                      refine_transitions=False)
    assert sw.budgets[0] == 0.0
    assert sw.budgets[-1] == 8.0
    ratios = np.diff(np.log(sw.budgets[1:]))
    assert np.allclose(ratios, ratios[0])


def test_sweep_records_per_point_failures():
    # a disconnected layer makes every solve fail; the sweep must record the
    # errors and keep going rather than raise
    from spectraplex import LayerGraph, MultiplexSpec

    tri = LayerGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
    broken = LayerGraph(3, [(0, 1, 1.0)])
    sw = sweep_budget(MultiplexSpec(tri, broken), "lambda2", 0.0, 2.0, 4,
                      refine_transitions=False)
    assert len(sw.points) == 4
    assert all(p.status == "error" and p.error for p in sw.points)
    assert sw.transitions == ()


def test_sweep_budget_validation(single_edge_spec):
    with pytest.raises(Exception):
        sweep_budget(single_edge_spec, "lambda2", 2.0, 1.0, 5)
    with pytest.raises(Exception):
        sweep_budget(single_edge_spec, "lambda2", 0.0, 1.0, 1)


# ---------------------------------------------------------------------------
# centralities


def test_correlations_undefined_for_uniform_weights(single_edge_spec):
    r = maximize_lambda2(single_edge_spec, 1.0)
    table = correlate_centralities(single_edge_spec, r)
    assert all(v is None for v in table.as_dict().values())


def test_correlations_finite_on_random_instance():
    spec = random_multiplex(6)
    c_star = threshold_c_star(spec.layer1.laplacian, spec.layer2.laplacian)
    r = solve(spec, "lambda2", 2.0 * c_star)
    table = correlate_centralities(spec, r)
    values = table.as_dict()
    assert len(values) == 8
    finite = {k: v for k, v in values.items() if v is not None}
    assert finite, "expected at least some defined correlations"
    for v in finite.values():
        assert -1.0 - 1e-12 <= v <= 1.0 + 1e-12
    # cross-check against an independent correlation implementation
    w = r.weights.weights
    a, b = spec.pair_endpoints
    deg1 = degree_centrality(spec.layer1)[a]
    if values["degree_layer1"] is not None:
        ref = scipy.stats.pearsonr(w, deg1).statistic
        assert abs(values["degree_layer1"] - ref) <= 1e-9


def test_correlation_exact_for_constructed_weights(triangle_spec):
    r = solve(triangle_spec, "lambda2", 1.0)
    fied = np.abs(fiedler_vector(triangle_spec.layer1))
    w = fied / fied.sum()
    rigged = dataclasses.replace(r, weights=WeightAllocation(w, 1.0))
    table = correlate_centralities(triangle_spec, rigged)
    assert table.as_dict()["fiedler_abs_layer1"] == pytest.approx(1.0, abs=1e-9)


def test_centrality_helpers_basic(triangle_spec):
    layer = triangle_spec.layer1
    deg = degree_centrality(layer)
    np.testing.assert_allclose(deg, [3.0, 2.0, 3.0])
    ec = eigenvector_centrality(layer)
    assert ec.max() == pytest.approx(1.0)
    pr = pagerank(layer)
    assert pr.sum() == pytest.approx(1.0)
    assert np.all(pr > 0)
