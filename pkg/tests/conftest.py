"""Shared numerical helpers for the test-suite."""

import numpy as np


def fd_gradient(fun, x, h=1e-5):
    """Central finite-difference gradient of a scalar function of (n, d)."""
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    grad = np.zeros_like(flat)
    for i in range(flat.size):
        bump = np.zeros_like(flat)
        bump[i] = h
        grad[i] = (
            fun((flat + bump).reshape(x.shape)) - fun((flat - bump).reshape(x.shape))
        ) / (2.0 * h)
    return grad.reshape(x.shape)


def rel_error(approx, ref, floor=1e-12):
    """Normwise relative error of ``approx`` against reference ``ref``."""
    approx = np.asarray(approx, dtype=float)
    ref = np.asarray(ref, dtype=float)
    return float(np.linalg.norm(approx - ref) / max(np.linalg.norm(ref), floor))


def spread_positions(rng, n, low=0.0, high=1.0, min_gap=0.05):
    """Uniform random positions resampled until pairwise gaps exceed
    ``min_gap``; keeps distance-based derivatives well-conditioned."""
    while True:
        x = rng.uniform(low, high, size=(n, 2))
        diff = x[:, None, :] - x[None, :, :]
        dist = np.sqrt((diff**2).sum(-1))
        dist[np.arange(n), np.arange(n)] = np.inf
        if dist.min() > min_gap:
            return x
