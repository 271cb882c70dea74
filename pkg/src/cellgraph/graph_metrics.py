"""Network measures over the mode-magnitude matrix.

The entrywise modulus of the mode matrix is read as a weighted adjacency
matrix: embedded coordinates are nodes, entry (i, j) the coupling strength
node j exerts on node i. Two scalar signatures summarize its structure:

* connectivity: the fraction of entries strictly exceeding the matrix mean,
  i.e. the density of the mean-thresholded binary graph;
* a modularity proxy: the coefficient of variation of the node strengths
  (row sums), a heterogeneity measure that is zero for perfectly uniform
  networks and grows as coupling concentrates on few nodes.

For rectangular matrices the "possible connections" denominator generalizes
from n^2 to n_rows * n_cols. The diagonal participates like any entry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_EPSILON = 1e-12


@dataclass(frozen=True)
class WeightedGraph:
    """Nonnegative weight matrix interpreted as a dense weighted digraph."""

    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 2 or w.size == 0:
            raise ValueError("weights must be a nonempty 2-D matrix")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative")
        object.__setattr__(self, "weights", w)

    @property
    def n_rows(self) -> int:
        return self.weights.shape[0]

    @property
    def n_cols(self) -> int:
        return self.weights.shape[1]


@dataclass(frozen=True)
class GraphMetrics:
    """All per-stage graph signatures; every field is always populated.

    ``edges / (n_rows * n_cols) == connectivity`` and
    ``q_proxy == std_strength / (mean_strength + epsilon)`` hold exactly.
    """

    mu: float
    edges: int
    connectivity: float
    strengths: np.ndarray
    mean_strength: float
    std_strength: float
    q_proxy: float
    epsilon: float
    n_rows: int
    n_cols: int


def adaptive_threshold(g: WeightedGraph) -> float:
    """Mean entry weight, used as the data-adaptive binarization threshold."""
    return float(g.weights.mean())


def binarize(g: WeightedGraph, mu: float) -> np.ndarray:
    """0/1 matrix keeping entries strictly above ``mu``.

    Strictness matters: a perfectly uniform matrix keeps no edges.
    """
    if mu < 0:
        raise ValueError("threshold must be >= 0")
    return (g.weights > mu).astype(np.int64)


def node_strengths(g: WeightedGraph) -> np.ndarray:
    """Total outgoing weight per node (row sums)."""
    return g.weights.sum(axis=1)


def compute_metrics(g: WeightedGraph, epsilon: float = DEFAULT_EPSILON) -> GraphMetrics:
    """Evaluate every graph signature of one stage in a single pass."""
    if epsilon <= 0:
        raise ValueError("epsilon must be > 0")
    mu = adaptive_threshold(g)
    edges = int(binarize(g, mu).sum())
    rho = edges / (g.n_rows * g.n_cols)
    s = node_strengths(g)
    # Reduce over sorted strengths so node order cannot perturb the statistics.
    s_ordered = np.sort(s)
    mean_s = float(s_ordered.mean())
    std_s = float(np.sqrt(np.mean((s_ordered - mean_s) ** 2)))  # population, not sample
    return GraphMetrics(
        mu=mu,
        edges=edges,
        connectivity=rho,
        strengths=s,
        mean_strength=mean_s,
        std_strength=std_s,
        q_proxy=std_s / (mean_s + epsilon),
        epsilon=epsilon,
        n_rows=g.n_rows,
        n_cols=g.n_cols,
    )


def connectivity(g: WeightedGraph) -> GraphMetrics:
    """Metrics of ``g`` with the default epsilon; see :func:`compute_metrics`."""
    return compute_metrics(g)


def modularity_proxy(g: WeightedGraph, epsilon: float = DEFAULT_EPSILON) -> GraphMetrics:
    """Metrics of ``g`` with an explicit epsilon guard for the strength ratio."""
    return compute_metrics(g, epsilon=epsilon)
