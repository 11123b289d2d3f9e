"""Zeroth-order Takagi-Sugeno-Kang model with Gaussian antecedents.

Rule ``i`` fires with strength ``prod_j exp(-(x_j - m_ij)**2 / s_ij**2)``
(note: ``s**2``, not ``2*s**2``). The model output is the normalized
firing-strength average of the rule consequents. Training is plain
per-sample gradient descent on ``J = 0.5 * (y - y_hat)**2``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateActivation, DimensionMismatch, NonFiniteEntry

ACTIVATION_FLOOR = 1e-300
SIGMA_MIN = 1e-6


@dataclass(frozen=True)
class GaussianMF:
    center: float
    width: float

    def __post_init__(self):
        if not (np.isfinite(self.center) and np.isfinite(self.width)):
            raise NonFiniteEntry("membership parameters must be finite")
        if self.width <= 0:
            raise ValueError(f"width must be > 0, got {self.width}")

    def __call__(self, x):
        return np.exp(-((x - self.center) ** 2) / self.width**2)


@dataclass(frozen=True, eq=False)
class TSKModel:
    """M rules over S inputs.

    ``centers`` and ``widths`` are (M, S) arrays, ``consequents`` has length M.
    """

    centers: np.ndarray
    widths: np.ndarray
    consequents: np.ndarray

    def __post_init__(self):
        centers = np.array(self.centers, dtype=np.float64)
        widths = np.array(self.widths, dtype=np.float64)
        consequents = np.array(self.consequents, dtype=np.float64)
        if centers.ndim != 2 or centers.shape[0] < 1 or centers.shape[1] < 1:
            raise DimensionMismatch(f"centers must be a non-empty (M, S) grid, got {centers.shape}")
        if widths.shape != centers.shape:
            raise DimensionMismatch(f"widths shape {widths.shape} != centers shape {centers.shape}")
        if consequents.shape != (centers.shape[0],):
            raise DimensionMismatch(
                f"expected {centers.shape[0]} consequents, got shape {consequents.shape}"
            )
        for name, arr in (("centers", centers), ("widths", widths), ("consequents", consequents)):
            if not np.all(np.isfinite(arr)):
                raise NonFiniteEntry(f"{name} has non-finite entries")
            arr.setflags(write=False)
        if np.any(widths <= 0):
            raise ValueError("all widths must be strictly positive")
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "widths", widths)
        object.__setattr__(self, "consequents", consequents)

    @property
    def rule_count(self):
        return self.centers.shape[0]

    @property
    def input_count(self):
        return self.centers.shape[1]

    def membership(self, i, j):
        return GaussianMF(float(self.centers[i, j]), float(self.widths[i, j]))

    def replace(self, centers=None, widths=None, consequents=None):
        return TSKModel(
            self.centers if centers is None else centers,
            self.widths if widths is None else widths,
            self.consequents if consequents is None else consequents,
        )

    def __eq__(self, other):
        if not isinstance(other, TSKModel):
            return NotImplemented
        return (
            np.array_equal(self.centers, other.centers)
            and np.array_equal(self.widths, other.widths)
            and np.array_equal(self.consequents, other.consequents)
        )

    __hash__ = None

    # JSON form: {"S": int, "M": int, "centers": [[...]], "widths": [[...]], "consequents": [...]}
    def to_dict(self):
        return {
            "S": self.input_count,
            "M": self.rule_count,
            "centers": self.centers.tolist(),
            "widths": self.widths.tolist(),
            "consequents": self.consequents.tolist(),
        }

    @classmethod
    def from_dict(cls, data):
        try:
            S, M = int(data["S"]), int(data["M"])
            model = cls(data["centers"], data["widths"], data["consequents"])
        except KeyError as exc:
            raise ValueError(f"fuzzy model is missing key {exc}") from None
        if (model.rule_count, model.input_count) != (M, S):
            raise DimensionMismatch(
                f"declared M={M}, S={S} but arrays are {model.rule_count}x{model.input_count}"
            )
        return model

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class LearningRates:
    consequents: float = 0.01
    centers: float = 0.01
    widths: float = 0.01

    def __post_init__(self):
        # zero is tolerated so a parameter group can be frozen during training
        if min(self.consequents, self.centers, self.widths) < 0:
            raise ValueError("learning rates must be non-negative")


@dataclass(frozen=True)
class TrainingSample:
    x: np.ndarray
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=np.float64))
        object.__setattr__(self, "y", float(self.y))


def _check_input(model, x):
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.input_count,):
        raise DimensionMismatch(f"model takes {model.input_count} inputs, got shape {x.shape}")
    return x


def rule_activations(model, x):
    """Unnormalized rule strengths, each in [0, 1]."""
    x = _check_input(model, x)
    z = (x - model.centers) / model.widths
    return np.exp(-np.sum(z * z, axis=1))


def firing_strengths(model, x):
    a = rule_activations(model, x)
    total = a.sum()
    if total < ACTIVATION_FLOOR:
        raise DegenerateActivation("all rule activations underflowed; input is outside every rule's support")
    return a / total


def model_output(model, x):
    return float(firing_strengths(model, x) @ model.consequents)


def prediction_error(model, sample):
    return sample.y - model_output(model, sample.x)


def loss(model, sample):
    return 0.5 * prediction_error(model, sample) ** 2


def gradients(model, sample):
    """Exact partial derivatives of ``0.5 * e**2`` with ``e = y - y_hat``.

    Returns ``(grad_c, grad_m, grad_sigma)`` with shapes (M,), (M, S), (M, S).
    """
    x = _check_input(model, sample.x)
    v = firing_strengths(model, x)
    y_hat = float(v @ model.consequents)
    e = sample.y - y_hat

    grad_c = -e * v
    diff = x - model.centers
    # d y_hat / d a_i, scaled by a_i: v_i * (c_i - y_hat)
    sens = (-e * v * (model.consequents - y_hat))[:, None]
    grad_m = 2.0 * sens * diff / model.widths**2
    grad_sigma = 2.0 * sens * diff**2 / model.widths**3
    return grad_c, grad_m, grad_sigma


def sgd_step(model, sample, rates, sigma_min=SIGMA_MIN):
    grad_c, grad_m, grad_s = gradients(model, sample)
    widths = model.widths - rates.widths * grad_s
    return TSKModel(
        model.centers - rates.centers * grad_m,
        np.maximum(widths, sigma_min),
        model.consequents - rates.consequents * grad_c,
    )


def mean_squared_error(model, samples):
    return float(np.mean([prediction_error(model, s) ** 2 for s in samples]))


def train(model, samples, rates, epochs):
    """Run ``epochs`` passes of per-sample updates in presentation order.

    Returns the final model and the mean squared error after each epoch.
    """
    if epochs < 0:
        raise ValueError("epochs must be non-negative")
    samples = list(samples)
    trace = []
    for _ in range(epochs):
        for idx, s in enumerate(samples):
            try:
                model = sgd_step(model, s, rates)
            except DegenerateActivation as exc:
                raise DegenerateActivation(f"sample {idx}: {exc}", sample_index=idx) from exc
        trace.append(mean_squared_error(model, samples))
    return model, trace


def initial_model(inputs, rule_count):
    """Spread centers uniformly over each input's observed range.

    Widths are range / M and consequents start at zero.
    """
    X = np.atleast_2d(np.asarray(inputs, dtype=np.float64))
    lo, hi = X.min(axis=0), X.max(axis=0)
    span = np.where(hi > lo, hi - lo, 1.0)
    t = np.linspace(0.0, 1.0, rule_count)[:, None] if rule_count > 1 else np.full((1, 1), 0.5)
    centers = lo + t * span
    widths = np.broadcast_to(span / rule_count, centers.shape)
    return TSKModel(centers, widths, np.zeros(rule_count))
