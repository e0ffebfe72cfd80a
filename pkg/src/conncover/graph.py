"""Sigmoid-weighted proximity graphs and their reduced Laplacian.

Sensors within (roughly) communication radius ``epsilon`` of each other are
joined by edges whose weight is a smooth sigmoid of the distance gap, so
connectivity becomes a differentiable quantity. Projecting the weighted
Laplacian off the all-ones direction gives a reduced matrix M whose
determinant is positive exactly when the graph at strictly positive
weights is connected; that determinant and its gradient with respect to
sensor positions are the quantities the solver constrains.

A single node is treated as trivially connected: the reduced matrix is
empty, its determinant is 1 by convention, and the gradient is zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.spatial.distance import cdist
from scipy.special import expit

from .domain import COINCIDENT_TOL, check_positions
from .errors import SingularConfigurationError

# Conditioning threshold above which the adjugate falls back to the
# eigendecomposition form (finite even at a singular matrix).
_ADJUGATE_COND_LIMIT = 1e12


@dataclass(frozen=True)
class EdgeWeightParams:
    """Sigmoid edge-weight profile: weight = expit(w * (epsilon - distance)).

    ``w`` controls the steepness of the transition and ``epsilon`` the
    distance at which a pair's weight crosses 1/2.
    """

    w: float
    epsilon: float

    def __post_init__(self):
        if not self.w > 0:
            raise ValueError(f"w must be positive, got {self.w}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")


def sigmoid(y, w):
    """Numerically safe logistic function of ``w * y``.

    Vectorized; never overflows for finite input.
    """
    return expit(w * np.asarray(y, dtype=float))


def sigmoid_prime(y, w):
    """Derivative of :func:`sigmoid` with respect to ``y``: w*s*(1-s)."""
    s = sigmoid(y, w)
    return w * s * (1.0 - s)


def adjacency(x, params):
    """Symmetric weighted adjacency matrix with zero diagonal."""
    x = check_positions(x)
    dist = cdist(x, x)
    a = expit(params.w * (params.epsilon - dist))
    np.fill_diagonal(a, 0.0)
    return a


def laplacian(x, params):
    """Weighted graph Laplacian: row-sum diagonal minus adjacency.

    Symmetric, positive semidefinite, rows sum to zero.
    """
    a = adjacency(x, params)
    return np.diag(a.sum(axis=1)) - a


@lru_cache(maxsize=None)
def projection_matrix(n):
    """Orthonormal (n, n-1) basis of the subspace orthogonal to all-ones.

    Built by Gram-Schmidt over the columns of I - (1/n) * ones, in index
    order, discarding the final dependent column. Deterministic for fixed
    n; cached and returned read-only, so callers must not mutate it.
    """
    if n < 2:
        raise ValueError(f"projection basis needs n >= 2, got {n}")
    base = np.eye(n) - np.full((n, n), 1.0 / n)
    cols = []
    for j in range(n):
        v = base[:, j].copy()
        # Two orthogonalization passes keep the basis orthonormal to
        # machine precision even as n grows.
        for _ in range(2):
            for p in cols:
                v -= (p @ v) * p
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            cols.append(v / norm)
    P = np.column_stack(cols)
    if P.shape != (n, n - 1):
        raise AssertionError(f"projection basis rank mismatch for n={n}")
    P.flags.writeable = False
    return P


def _empty_projection(n):
    # n == 1: the orthogonal complement of the ones vector is trivial.
    return np.zeros((n, 0))


@dataclass(frozen=True)
class ReducedLaplacian:
    """Laplacian compressed onto the complement of the ones direction.

    Attributes
    ----------
    M : ndarray of shape (n-1, n-1)
        Symmetric positive semidefinite reduced matrix.
    det : float
        Determinant of M, computed from a pivoted LU factorization.
    P : ndarray of shape (n, n-1)
        The orthonormal basis used for the compression.
    """

    M: np.ndarray
    det: float
    P: np.ndarray


def reduced_laplacian(x, params):
    """Compress the weighted Laplacian of ``x`` off the ones direction."""
    x = check_positions(x)
    n = x.shape[0]
    if n == 1:
        P = _empty_projection(1)
        return ReducedLaplacian(M=np.zeros((0, 0)), det=1.0, P=P)
    L = laplacian(x, params)
    P = projection_matrix(n)
    M = P.T @ L @ P
    M = 0.5 * (M + M.T)  # kill matmul roundoff asymmetry
    det = float(np.linalg.det(M))
    return ReducedLaplacian(M=M, det=det, P=P)


def algebraic_connectivity(x, params):
    """Second-smallest Laplacian eigenvalue. Diagnostic only: it is not
    differentiable at repeated eigenvalues, so the solver never uses it."""
    x = check_positions(x)
    if x.shape[0] == 1:
        return np.inf
    evals = np.linalg.eigvalsh(laplacian(x, params))
    return float(evals[1])


def _pairwise_geometry(x, params):
    """Distances, unit difference directions, and weight slopes.

    Returns (dist, unit, slope) where ``unit[l, j]`` is the unit vector
    from sensor j toward sensor l and ``slope[l, j]`` is the derivative of
    the weight of edge (l, j) with respect to the gap epsilon - distance.
    Diagonals are zeroed.
    """
    n = x.shape[0]
    diff = x[:, None, :] - x[None, :, :]
    dist = cdist(x, x)
    off = ~np.eye(n, dtype=bool)
    if np.any(dist[off] < COINCIDENT_TOL):
        raise SingularConfigurationError(
            "two sensors coincide; distance derivatives are undefined"
        )
    s = expit(params.w * (params.epsilon - dist))
    slope = params.w * s * (1.0 - s)
    np.fill_diagonal(slope, 0.0)
    safe = np.where(dist > 0, dist, 1.0)
    unit = diff / safe[:, :, None]
    return dist, unit, slope


def partial_laplacian(x, params, l, k):
    """Entrywise derivative of the Laplacian in coordinate k of sensor l.

    Only row/column l of the adjacency respond to moving sensor l; the
    diagonal follows from the row sums.
    """
    x = check_positions(x)
    n, d = x.shape
    if not 0 <= l < n:
        raise ValueError(f"sensor index {l} out of range for n={n}")
    if not 0 <= k < d:
        raise ValueError(f"coordinate index {k} out of range for d={d}")
    _, unit, slope = _pairwise_geometry(x, params)
    # d a_{lj} / d x_l^{(k)} = -slope * (x_l - x_j)_k / dist
    da = -slope[l] * unit[l, :, k]
    dA = np.zeros((n, n))
    dA[l, :] = da
    dA[:, l] = da
    dA[l, l] = 0.0
    return np.diag(dA.sum(axis=1)) - dA


def _adjugate_symmetric(M):
    """Adjugate of a symmetric matrix.

    Uses det(M) * inv(M) while M is comfortably invertible and falls back
    to the eigendecomposition form adj = Q diag(prod of other eigenvalues)
    Q^T when it is not; the fallback stays finite at det(M) = 0, which is
    exactly where the solver needs the gradient most.
    """
    m = M.shape[0]
    if m == 0:
        return np.zeros((0, 0))
    if m == 1:
        return np.array([[1.0]])
    det = np.linalg.det(M)
    if np.isfinite(det) and det != 0.0 and np.linalg.cond(M) < _ADJUGATE_COND_LIMIT:
        return det * np.linalg.inv(M)
    evals, vecs = np.linalg.eigh(M)
    prods = np.array([np.prod(np.delete(evals, i)) for i in range(m)])
    return (vecs * prods) @ vecs.T


def grad_det_m(x, params):
    """Gradient of det(reduced Laplacian) with respect to positions.

    Implements the cofactor form tr(adj(M) * P^T dL P) rather than the
    det * inv based identity, which degrades as M nears singularity. With
    G = P adj(M) P^T the trace collapses to

        d det / d x_l^{(k)} = sum_{j != l} da_{lj}^{(k)} *
                              (G_ll + G_jj - 2 G_lj),

    costing O(n^2 d) after one adjugate.
    """
    x = check_positions(x)
    n, d = x.shape
    if n == 1:
        return np.zeros((1, d))
    red = reduced_laplacian(x, params)
    G = red.P @ _adjugate_symmetric(red.M) @ red.P.T
    _, unit, slope = _pairwise_geometry(x, params)
    gdiag = np.diag(G)
    coef = gdiag[:, None] + gdiag[None, :] - 2.0 * G
    np.fill_diagonal(coef, 0.0)
    dA = -slope[:, :, None] * unit  # dA[l, j, k] = da_{lj}/dx_l^{(k)}
    return np.einsum("lj,ljk->lk", coef, dA)


def connected_components(x, params, threshold=0.5):
    """Component labels of the boolean graph at the given weight threshold.

    An edge is kept when its sigmoid weight is at least ``threshold``;
    with the default 1/2 this keeps exactly the pairs within distance
    epsilon of each other.
    """
    x = check_positions(x)
    n = x.shape[0]
    a = adjacency(x, params) >= threshold
    labels = np.full(n, -1, dtype=int)
    current = 0
    for start in range(n):
        if labels[start] != -1:
            continue
        stack = [start]
        labels[start] = current
        while stack:
            i = stack.pop()
            for j in np.flatnonzero(a[i]):
                if labels[j] == -1:
                    labels[j] = current
                    stack.append(j)
        current += 1
    return labels


def is_connected(x, params, threshold=0.5):
    """True when the thresholded boolean graph has one component."""
    return int(connected_components(x, params, threshold).max()) == 0
