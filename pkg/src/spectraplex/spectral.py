"""Symmetric eigenanalysis, multiplicity clustering, and the analytic
thresholds / bounds that govern the three design problems.

Threshold nomenclature:

* ``c_star`` -- largest budget for which uniform interlayer weights maximize
  the algebraic connectivity; equals N * lambda_2[(L1^+ + L2^+)^+].
* ``c1_star`` -- largest budget for which the optimal spectral radius stays
  pinned at the dominant layer's top eigenvalue; detected as the first budget
  where Q + 2cD gains an extra zero eigenvalue, with Q built from the layer
  Laplacians and D the diagonal of the nodal weight pattern.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError, InputError
from .graphs import MultiplexSpec, check_symmetric

__all__ = [
    "Cluster",
    "SpectrumSummary",
    "BoundsReport",
    "ThresholdReport",
    "default_cluster_tol",
    "eig_symmetric_clustered",
    "pseudoinverse",
    "nodal_set",
    "threshold_c_star",
    "threshold_c1_star",
    "threshold_report",
    "spectral_bounds",
]

#: relative tolerance used to decide that an eigenvector entry vanishes
NODAL_RTOL = 1e-8

#: connectivity test threshold on lambda_2 relative to matrix scale
_CONNECTIVITY_RTOL = 1e-10


class Cluster(NamedTuple):
    value: float        # representative (mean) eigenvalue of the cluster
    start: int          # first index in ascending eigenvalue order
    stop: int           # one past the last index


@dataclass(frozen=True, eq=False)
class SpectrumSummary:
    """Full eigendecomposition with multiplicity clusters."""

    eigenvalues: np.ndarray           # ascending
    eigenvectors: np.ndarray          # orthonormal columns, aligned
    clusters: tuple[Cluster, ...]
    tol: float

    def cluster_of(self, index: int) -> Cluster:
        for cl in self.clusters:
            if cl.start <= index < cl.stop:
                return cl
        raise IndexError(index)

    def multiplicity_of(self, index: int) -> int:
        cl = self.cluster_of(index)
        return cl.stop - cl.start


def default_cluster_tol(eigenvalues: np.ndarray) -> float:
    lam_max = float(np.abs(eigenvalues).max()) if len(eigenvalues) else 0.0
    return max(1e-8, 1e-7 * lam_max)


def _cluster_indices(values: np.ndarray, tol: float) -> tuple[Cluster, ...]:
    clusters = []
    start = 0
    for i in range(1, len(values) + 1):
        # close the cluster when adding index i would exceed the spread budget
        if i == len(values) or values[i] - values[start] > tol:
            clusters.append(Cluster(float(values[start:i].mean()), start, i))
            start = i
    return tuple(clusters)


def eig_symmetric_clustered(A: np.ndarray, tol: float | None = None) -> SpectrumSummary:
    """Eigendecomposition of a symmetric matrix with eigenvalues grouped
    into multiplicity clusters of spread <= tol."""
    A = np.asarray(A, dtype=float)
    if not check_symmetric(A):
        raise InputError("matrix is not symmetric")
    vals, vecs = np.linalg.eigh(A)
    if tol is None:
        tol = default_cluster_tol(vals)
    return SpectrumSummary(vals, vecs, _cluster_indices(vals, float(tol)), float(tol))


def pseudoinverse(A: np.ndarray, rank_tol: float = 1e-10) -> np.ndarray:
    """Moore-Penrose pseudoinverse of a symmetric matrix via eigendecomposition.

    Eigenvalues below rank_tol * |lambda|_max in magnitude are treated as zero.
    """
    A = np.asarray(A, dtype=float)
    if not check_symmetric(A):
        raise InputError("matrix is not symmetric")
    vals, vecs = np.linalg.eigh(A)
    scale = float(np.abs(vals).max()) if len(vals) else 0.0
    if scale == 0.0:
        return np.zeros_like(A)
    inv = np.where(np.abs(vals) > rank_tol * scale, 1.0 / np.where(vals == 0, 1.0, vals), 0.0)
    return (vecs * inv) @ vecs.T


def _require_connected(L: np.ndarray, which: str) -> None:
    vals = np.linalg.eigvalsh(L)
    scale = max(1.0, float(np.abs(vals).max()))
    if len(vals) < 2 or vals[1] <= _CONNECTIVITY_RTOL * scale:
        raise DomainError(f"{which} is not connected (lambda_2 ~ 0)")


def threshold_c_star(L1: np.ndarray, L2: np.ndarray) -> float:
    """Budget threshold below which uniform interlayer weights are optimal
    for the algebraic connectivity: N * lambda_2[(L1^+ + L2^+)^+]."""
    L1 = np.asarray(L1, dtype=float)
    L2 = np.asarray(L2, dtype=float)
    if L1.shape != L2.shape or L1.ndim != 2:
        raise InputError("layer Laplacians must share one square shape")
    _require_connected(L1, "layer 1")
    _require_connected(L2, "layer 2")
    N = L1.shape[0]
    series = pseudoinverse(pseudoinverse(L1) + pseudoinverse(L2))
    vals = np.linalg.eigvalsh(series)
    return float(N * vals[1])


def nodal_set(v: np.ndarray, rtol: float = NODAL_RTOL) -> np.ndarray:
    """Indices where the eigenvector entry vanishes (relative to its max)."""
    v = np.asarray(v, dtype=float)
    return np.flatnonzero(np.abs(v) <= rtol * np.abs(v).max())


def _dominant_layer_data(spec: MultiplexSpec, cluster_tol: float | None = None):
    """(lambda_N1, v_N1, dominant_index) requiring a strict, simple maximum."""
    L1 = spec.layer1.laplacian
    L2 = spec.layer2.laplacian
    s1 = eig_symmetric_clustered(L1, cluster_tol)
    s2 = eig_symmetric_clustered(L2, cluster_tol)
    top1 = float(s1.eigenvalues[-1])
    top2 = float(s2.eigenvalues[-1])
    tie_tol = max(s1.tol, s2.tol)
    if abs(top1 - top2) <= tie_tol:
        raise DomainError(
            "layer spectral radii are tied; the nodal-line theorem requires "
            "a strictly dominant layer"
        )
    dominant, summary = (1, s1) if top1 > top2 else (2, s2)
    if summary.multiplicity_of(len(summary.eigenvalues) - 1) != 1:
        raise DomainError("dominant layer's top eigenvalue is not simple")
    lam = float(summary.eigenvalues[-1])
    vec = summary.eigenvectors[:, -1].copy()
    return lam, vec, dominant


def _aligned_layer2_laplacian(spec: MultiplexSpec) -> np.ndarray:
    """Layer-2 Laplacian relabeled so pair k couples equal indices: entry
    (i, j) of the result refers to the layer-2 partners of layer-1 nodes
    i and j.  Identity matchings return the Laplacian unchanged."""
    N = spec.num_nodes_per_layer
    partner = np.empty(N, dtype=int)
    for i, j in spec.interlayer_pairs:
        partner[i] = j
    L2 = spec.layer2.laplacian
    return L2[np.ix_(partner, partner)]


def q_matrix(spec: MultiplexSpec, rank_tol: float = 1e-10) -> np.ndarray:
    """Q = Lbar - Ltil Lbar^+ Ltil with Lbar = (L1+L2)/2 - lambda_N1 I and
    Ltil = (L1-L2)/2, in matching-aligned node coordinates.  Assumes layer 1
    is dominant."""
    L1 = spec.layer1.laplacian
    L2 = _aligned_layer2_laplacian(spec)
    lam_n1 = float(np.linalg.eigvalsh(L1)[-1])
    Lbar = 0.5 * (L1 + L2) - lam_n1 * np.eye(L1.shape[0])
    Ltil = 0.5 * (L1 - L2)
    return Lbar - Ltil @ pseudoinverse(Lbar, rank_tol) @ Ltil


def threshold_c1_star(
    spec: MultiplexSpec,
    nodal_pattern: np.ndarray | Sequence[float] | None = None,
    *,
    bisection_tol: float = 1e-9,
    bracket_cap: float = 1e6,
) -> tuple[float, np.ndarray]:
    """Smallest budget at which the optimal spectral radius leaves the
    dominant layer's top eigenvalue, for weight directions supported on the
    nodal set.  Returns (c1_star, Q).

    The singularity of Q + 2cD is tracked through the largest eigenvalue of
    Q that starts out negative: tracking the minimum eigenvalue alone can
    miss the crossing because Q may carry budget-independent kernel
    directions (the dominant eigenvector itself, whenever it is shared by
    both layers).
    """
    lam_n1, v_n1, dominant = _dominant_layer_data(spec)
    if dominant != 1:
        raise DomainError(
            "layer 2 is dominant; swap the layers before computing c1_star"
        )
    nodes = nodal_set(v_n1)
    if nodes.size == 0:
        raise DomainError("nodal set empty; theorem inapplicable")
    N = spec.num_nodes_per_layer
    if nodal_pattern is None:
        pattern = np.zeros(N)
        pattern[nodes] = 1.0 / nodes.size
    else:
        pattern = np.asarray(nodal_pattern, dtype=float)
        if pattern.shape != (N,):
            raise InputError(f"nodal pattern must have length {N}")
        if np.any(pattern < 0) or abs(pattern.sum() - 1.0) > 1e-9:
            raise InputError("nodal pattern must be nonnegative with unit sum")
        if np.any(pattern[np.setdiff1d(np.arange(N), nodes)] > 1e-12):
            raise InputError("nodal pattern must be supported on the nodal set")

    Q = q_matrix(spec)
    D = np.diag(pattern)
    q_vals = np.linalg.eigvalsh(Q)
    zero_tol = max(1e-10, 1e-10 * float(np.abs(q_vals).max()))
    m = int(np.sum(q_vals < -zero_tol))
    if m == 0:
        raise DomainError("Q has no negative eigenvalue at c=0; no positive root")

    def g(c: float) -> float:
        # m-th smallest eigenvalue: the largest of the initially-negative ones
        return float(np.linalg.eigvalsh(Q + 2.0 * c * D)[m - 1])

    lo, hi = 0.0, 1.0
    while g(hi) < 0.0:
        lo = hi
        hi *= 2.0
        if hi > bracket_cap:
            raise DomainError(
                f"no singular budget below cap {bracket_cap}; the nodal "
                "pattern never lifts the tracked eigenvalue to zero"
            )
    while hi - lo > bisection_tol:
        mid = 0.5 * (lo + hi)
        if g(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), Q


@dataclass(frozen=True)
class BoundsReport:
    """Closed-form bounds evaluated from the layer spectra at budget c."""

    lambda2_linear_cap: float          # 4c/n
    lambda2_ave_cap: float             # lambda_2(L_ave)
    lambdan_lower: float               # max(lambda_N1, 2c/N)
    lambdan_upper_large_c: float       # lambda_max(L_ave) + 2c/N
    width_lower: float                 # lambda_N1 - 2c/N
    width_bracket_large_c: tuple[float, float]


@dataclass(frozen=True, eq=False)
class ThresholdReport:
    c_star: float
    c1_star: float | None
    c1_star_reason: str | None
    # sweep-detected transition records (budget, multiplicity before/after);
    # this is where the empirically-known-only second transitions live
    transition_list: tuple
    q_matrix: np.ndarray | None = None


def threshold_report(spec: MultiplexSpec, transitions: Sequence = ()) -> ThresholdReport:
    """Analytic thresholds plus any sweep-detected transition records
    (e.g. SweepResult.transitions).  c1* is reported as absent (with the
    reason) when the nodal-line theorem does not apply to the instance."""
    c_star = threshold_c_star(spec.layer1.laplacian, spec.layer2.laplacian)
    try:
        c1, Q = threshold_c1_star(spec)
        return ThresholdReport(c_star, c1, None, tuple(transitions), Q)
    except DomainError as exc:
        return ThresholdReport(c_star, None, str(exc), tuple(transitions), None)


def spectral_bounds(spec: MultiplexSpec, c: float) -> BoundsReport:
    if c < 0:
        raise InputError(f"budget must be nonnegative, got {c}")
    N = spec.num_nodes_per_layer
    n = spec.total_nodes
    L_ave = 0.5 * (spec.layer1.laplacian + spec.layer2.laplacian)
    ave_vals = np.linalg.eigvalsh(L_ave)
    lam_n1 = max(
        float(np.linalg.eigvalsh(spec.layer1.laplacian)[-1]),
        float(np.linalg.eigvalsh(spec.layer2.laplacian)[-1]),
    )
    linear = 2.0 * c / N
    return BoundsReport(
        lambda2_linear_cap=4.0 * c / n,
        lambda2_ave_cap=float(ave_vals[1]),
        lambdan_lower=max(lam_n1, linear),
        lambdan_upper_large_c=float(ave_vals[-1]) + linear,
        width_lower=lam_n1 - linear,
        width_bracket_large_c=(
            linear - float(ave_vals[1]),
            float(ave_vals[-1]) - float(ave_vals[1]) + linear,
        ),
    )
