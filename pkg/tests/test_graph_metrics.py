"""Graph signature tests against explicit double-loop oracles."""

from __future__ import annotations

import numpy as np
import pytest

from cellgraph.graph_metrics import (
    DEFAULT_EPSILON,
    WeightedGraph,
    adaptive_threshold,
    binarize,
    compute_metrics,
    node_strengths,
)


def oracle_connectivity(weights):
    """Count entries strictly above the mean, one comparison at a time."""
    n_rows = len(weights)
    n_cols = len(weights[0])
    total = 0.0
    for row in weights:
        for value in row:
            total += value
    mu = total / (n_rows * n_cols)
    edges = 0
    for row in weights:
        for value in row:
            if value > mu:
                edges += 1
    return mu, edges, edges / (n_rows * n_cols)


def oracle_q_proxy(weights, epsilon=DEFAULT_EPSILON):
    """Coefficient of variation of row sums with a population denominator."""
    strengths = [sum(row) for row in weights]
    n = len(strengths)
    mean_s = sum(strengths) / n
    var = sum((s - mean_s) ** 2 for s in strengths) / n
    return var**0.5 / (mean_s + epsilon)


# --- oracle agreement ---------------------------------------------------------


def test_random_matrices_match_oracles(rng):
    for _ in range(100):
        n_rows = int(rng.integers(1, 21))
        n_cols = int(rng.integers(1, 21))
        weights = rng.uniform(0.0, 5.0, size=(n_rows, n_cols))
        metrics = compute_metrics(WeightedGraph(weights))
        mu, edges, rho = oracle_connectivity(weights.tolist())
        assert metrics.mu == pytest.approx(mu, abs=1e-12)
        assert metrics.edges == edges
        assert metrics.connectivity == pytest.approx(rho, abs=1e-12)
        assert metrics.q_proxy == pytest.approx(
            oracle_q_proxy(weights.tolist()), abs=1e-12
        )


def test_hand_worked_two_by_two():
    # mean = 1, both 2s exceed it: 2 of 4 possible edges.
    metrics = compute_metrics(WeightedGraph(np.array([[0.0, 2.0], [0.0, 2.0]])))
    assert metrics.mu == 1.0
    assert metrics.edges == 2
    assert metrics.connectivity == 0.5
    # Strengths [2, 2]: perfectly even rows, no heterogeneity.
    assert metrics.q_proxy == pytest.approx(0.0, abs=1e-12)


def test_single_dominant_entry():
    metrics = compute_metrics(WeightedGraph(np.array([[0.0, 0.0], [0.0, 4.0]])))
    assert metrics.mu == 1.0
    assert metrics.edges == 1
    assert metrics.connectivity == 0.25
    # Strengths [0, 4]: mean 2, population std 2, ratio 1.
    assert metrics.q_proxy == pytest.approx(1.0, rel=1e-9)


def test_hand_worked_strength_inequality():
    metrics = compute_metrics(WeightedGraph(np.array([[1.0, 1.0], [3.0, 3.0]])))
    np.testing.assert_array_equal(metrics.strengths, [2.0, 6.0])
    assert metrics.mean_strength == 4.0
    assert metrics.std_strength == 2.0
    assert metrics.q_proxy == pytest.approx(0.5, rel=1e-9)


# --- degenerate and boundary cases ----------------------------------------------


def test_uniform_matrix_has_no_edges():
    for value in (0.0, 1.0, 3.25):
        metrics = compute_metrics(WeightedGraph(np.full((4, 6), value)))
        assert metrics.edges == 0
        assert metrics.connectivity == 0.0
        assert metrics.q_proxy == pytest.approx(0.0, abs=1e-12)


def test_threshold_is_strict_on_ties():
    # Mean is exactly 1; the two entries equal to it must not count.
    metrics = compute_metrics(WeightedGraph(np.array([[0.0, 1.0], [2.0, 1.0]])))
    assert metrics.mu == 1.0
    assert metrics.edges == 1
    assert metrics.connectivity == 0.25


def test_single_entry_matrix():
    metrics = compute_metrics(WeightedGraph(np.array([[2.0]])))
    assert metrics.edges == 0 and metrics.connectivity == 0.0
    assert metrics.q_proxy == pytest.approx(0.0, abs=1e-12)


def test_rectangular_denominator():
    weights = np.zeros((3, 5))
    weights[0, 0] = 1.0
    metrics = compute_metrics(WeightedGraph(weights))
    assert metrics.n_rows == 3 and metrics.n_cols == 5
    assert metrics.connectivity == pytest.approx(1.0 / 15.0, rel=1e-12)


# --- invariances ------------------------------------------------------------------


def test_connectivity_invariant_under_positive_scaling(rng):
    weights = rng.uniform(0.0, 2.0, size=(8, 8))
    base = compute_metrics(WeightedGraph(weights))
    for scale in (2.0, 0.25, 3.7, 1e-3):
        scaled = compute_metrics(WeightedGraph(weights * scale))
        assert scaled.edges == base.edges
        assert scaled.connectivity == base.connectivity


def test_metrics_exactly_invariant_on_integer_weights(rng):
    # Integer weights keep every partial sum exactly representable, so the
    # permuted computation reproduces each metric bit for bit.
    weights = rng.integers(0, 10, size=(9, 9)).astype(float)
    base = compute_metrics(WeightedGraph(weights))
    perm = rng.permutation(9)
    permuted = compute_metrics(WeightedGraph(weights[np.ix_(perm, perm)]))
    assert permuted.mu == base.mu
    assert permuted.edges == base.edges
    assert permuted.connectivity == base.connectivity
    assert permuted.q_proxy == base.q_proxy
    np.testing.assert_array_equal(np.sort(permuted.strengths), np.sort(base.strengths))


def test_metrics_invariant_under_permutation(rng):
    # Generic floats reorder the summations, so the strength statistics are
    # only reproduced to rounding; the edge count itself stays exact.
    weights = rng.uniform(0.0, 2.0, size=(9, 9))
    base = compute_metrics(WeightedGraph(weights))
    perm = rng.permutation(9)
    permuted = compute_metrics(WeightedGraph(weights[np.ix_(perm, perm)]))
    assert permuted.edges == base.edges
    assert permuted.connectivity == base.connectivity
    assert permuted.q_proxy == pytest.approx(base.q_proxy, rel=1e-12)
    np.testing.assert_allclose(
        np.sort(permuted.strengths), np.sort(base.strengths), rtol=1e-14
    )


def test_bounds(rng):
    for _ in range(25):
        weights = rng.uniform(0.0, 1.0, size=(6, 6))
        metrics = compute_metrics(WeightedGraph(weights))
        assert 0.0 <= metrics.connectivity < 1.0
        assert metrics.q_proxy >= 0.0
        assert metrics.mu >= 0.0


def test_connectivity_strictly_below_one():
    # At least one entry (a maximal one) can never strictly exceed the mean,
    # so full density is unreachable.
    weights = np.arange(1.0, 10.0).reshape(3, 3)
    metrics = compute_metrics(WeightedGraph(weights))
    assert metrics.edges < 9


# --- epsilon handling -------------------------------------------------------------


def test_epsilon_barely_perturbs_healthy_ratio(rng):
    weights = rng.uniform(1.0, 2.0, size=(10, 10))
    metrics = compute_metrics(WeightedGraph(weights))
    raw_ratio = metrics.std_strength / metrics.mean_strength
    assert metrics.q_proxy == pytest.approx(raw_ratio, rel=1e-10)


def test_epsilon_passthrough_and_validation():
    graph = WeightedGraph(np.array([[1.0, 2.0]]))
    metrics = compute_metrics(graph, epsilon=1e-6)
    assert metrics.epsilon == 1e-6
    with pytest.raises(ValueError):
        compute_metrics(graph, epsilon=0.0)
    with pytest.raises(ValueError):
        compute_metrics(graph, epsilon=-1e-9)


def test_zero_matrix_is_guarded_by_epsilon():
    metrics = compute_metrics(WeightedGraph(np.zeros((5, 5))))
    assert metrics.q_proxy == 0.0
    assert metrics.connectivity == 0.0


# --- helpers and validation ---------------------------------------------------------


def test_binarize_and_strength_helpers():
    graph = WeightedGraph(np.array([[0.5, 1.5], [2.5, 0.0]]))
    assert adaptive_threshold(graph) == pytest.approx(1.125)
    binary = binarize(graph, 1.0)
    np.testing.assert_array_equal(binary, [[0, 1], [1, 0]])
    assert binary.dtype == np.int64
    np.testing.assert_array_equal(node_strengths(graph), [2.0, 2.5])
    with pytest.raises(ValueError):
        binarize(graph, -0.5)


def test_graph_validation():
    with pytest.raises(ValueError):
        WeightedGraph(np.zeros((0, 3)))
    with pytest.raises(ValueError):
        WeightedGraph(np.zeros(4))
    with pytest.raises(ValueError):
        WeightedGraph(np.array([[1.0, -0.1]]))
    with pytest.raises(ValueError):
        WeightedGraph(np.array([[1.0, np.nan]]))
    with pytest.raises(ValueError):
        WeightedGraph(np.array([[np.inf, 1.0]]))
