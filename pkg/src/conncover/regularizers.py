"""Position regularization and the proximal model step.

The only non-trivial regularizer pulls sensors toward a reference point
(usually the domain centroid) with strength alpha, averaged over sensors.
Because it is a separable quadratic, the proximal model step that the
solver uses has a closed form followed by projection onto the box.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import check_positions, project_to_domain


@dataclass(frozen=True)
class Regularizer:
    """Either no regularization or a centroid-anchored quadratic.

    Value: (alpha / n) * sum_i |x_i - centroid|^2.
    """

    kind: str = "none"
    alpha: float = 0.0
    centroid: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ("none", "centroid_quadratic"):
            raise ValueError(f"unknown regularizer kind {self.kind!r}")
        if self.kind == "centroid_quadratic":
            if self.alpha < 0:
                raise ValueError(f"alpha must be nonnegative, got {self.alpha}")
            if self.centroid is None:
                raise ValueError("centroid_quadratic requires a centroid")
            object.__setattr__(
                self, "centroid", np.atleast_1d(np.asarray(self.centroid, dtype=float))
            )

    @staticmethod
    def none():
        return Regularizer()

    @staticmethod
    def centroid_quadratic(alpha, centroid):
        return Regularizer(kind="centroid_quadratic", alpha=alpha, centroid=centroid)

    @property
    def is_active(self):
        return self.kind == "centroid_quadratic" and self.alpha > 0


def reg_value(x, reg):
    """Regularizer value at ``x``; zero when inactive."""
    if not reg.is_active:
        return 0.0
    x = check_positions(x)
    n = x.shape[0]
    return float(reg.alpha / n * np.sum((x - reg.centroid) ** 2))


def reg_gradient(x, reg):
    """Gradient of :func:`reg_value`: (2 alpha / n) * (x - centroid)."""
    x = check_positions(x)
    if not reg.is_active:
        return np.zeros_like(x)
    n = x.shape[0]
    return (2.0 * reg.alpha / n) * (x - reg.centroid)


def model_minimize(x_t, grad, eta, reg, domain):
    """Minimize the proximal model around ``x_t`` over the box.

    The model is grad . (x - x_t) + (1/2 eta) |x - x_t|^2 + reg(x); with
    the quadratic regularizer the unconstrained minimizer is closed form
    and the box constraint separates componentwise, so projection
    finishes the job. With no regularizer this is exactly a projected
    gradient step.
    """
    if not eta > 0:
        raise ValueError(f"eta must be positive, got {eta}")
    x_t = check_positions(x_t, dim=domain.dim)
    grad = np.asarray(grad, dtype=float)
    if grad.shape != x_t.shape:
        raise ValueError(f"gradient shape {grad.shape} does not match {x_t.shape}")
    if not reg.is_active:
        raw = x_t - eta * grad
    else:
        n = x_t.shape[0]
        coef = 2.0 * reg.alpha / n
        raw = (x_t / eta - grad + coef * reg.centroid) / (1.0 / eta + coef)
    if not np.all(np.isfinite(raw)):
        raise FloatingPointError("model step produced non-finite positions")
    return project_to_domain(raw, domain)
