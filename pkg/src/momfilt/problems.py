"""Desk-scale optimization problems with exact analytic gradients.

Three stand-ins for large-scale trainings, each cheap enough to run in
seconds while still exercising every momentum property:

  quadratic  0.5*x'Ax - b'x with SPD A (d=20, condition number 100, b=0)
  logistic   binary logistic regression on two well-separated Gaussian blobs
  mlp        one-hidden-layer tanh network on a 3-class Gaussian mixture

All parameters live in a single flat float64 vector so the optimizer stays
architecture-agnostic.
"""

from __future__ import annotations

import numpy as np

PROBLEM_KINDS = ("quadratic", "logistic", "mlp")


class QuadraticProblem:
    """0.5*x'Ax - b'x; the gradient A x - b ignores the batch (full batch)."""

    kind = "quadratic"
    classification = False

    def __init__(self, dimension: int = 20, condition_number: float = 100.0,
                 data_seed: int = 7):
        if dimension < 1:
            raise ValueError("dimension must be >= 1")
        if condition_number < 1:
            raise ValueError("condition_number must be >= 1")
        self.dimension = dimension
        self.condition_number = condition_number
        self.data_seed = data_seed
        rng = np.random.default_rng(data_seed)
        q, _ = np.linalg.qr(rng.standard_normal((dimension, dimension)))
        eigs = np.geomspace(1.0 / condition_number, 1.0, dimension)
        a = q @ np.diag(eigs) @ q.T
        self.matrix = 0.5 * (a + a.T)
        self.offset = np.zeros(dimension)
        self.batch_size = 1
        self.n_train = 1

    @property
    def batches_per_epoch(self) -> int:
        return 1

    def init_params(self, rng: np.random.Generator) -> np.ndarray:
        return rng.standard_normal(self.dimension)

    def gradient(self, x: np.ndarray, batch=None) -> tuple[float, np.ndarray]:
        g = self.matrix @ x - self.offset
        loss = 0.5 * float(x @ self.matrix @ x) - float(self.offset @ x)
        return loss, g

    def manifest(self) -> dict:
        return {
            "kind": self.kind,
            "dimension": self.dimension,
            "condition_number": self.condition_number,
            "data_seed": self.data_seed,
        }


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-z))


class LogisticProblem:
    """Binary logistic regression on two Gaussian blobs at +/- separation/2.

    The blobs sit symmetrically around the origin so no bias term is
    needed; with the default separation the data is (effectively) linearly
    separable and every momentum variant should reach ~100% train accuracy.
    """

    kind = "logistic"
    classification = True

    def __init__(self, num_samples: int = 500, num_features: int = 10,
                 separation: float = 8.0, batch_size: int = 50,
                 train_fraction: float = 0.8, data_seed: int = 11):
        self.num_samples = num_samples
        self.num_features = num_features
        self.separation = separation
        self.batch_size = batch_size
        self.data_seed = data_seed
        rng = np.random.default_rng(data_seed)
        direction = rng.standard_normal(num_features)
        direction /= np.linalg.norm(direction)
        labels = (rng.random(num_samples) < 0.5).astype(np.float64)
        centers = np.outer(2.0 * labels - 1.0, 0.5 * separation * direction)
        features = rng.standard_normal((num_samples, num_features)) + centers
        order = rng.permutation(num_samples)
        n_train = int(train_fraction * num_samples)
        self.train_x = features[order[:n_train]]
        self.train_y = labels[order[:n_train]]
        self.test_x = features[order[n_train:]]
        self.test_y = labels[order[n_train:]]
        self.dimension = num_features
        self.n_train = n_train
        if batch_size < 1 or batch_size > n_train:
            raise ValueError(f"batch_size must be in [1, {n_train}]")

    @property
    def batches_per_epoch(self) -> int:
        return self.n_train // self.batch_size

    def init_params(self, rng: np.random.Generator) -> np.ndarray:
        return np.zeros(self.dimension)

    def gradient(self, x: np.ndarray, batch=None) -> tuple[float, np.ndarray]:
        xb = self.train_x if batch is None else self.train_x[batch]
        yb = self.train_y if batch is None else self.train_y[batch]
        z = xb @ x
        # log(1 + exp(-s*z)) with s = +/-1 avoids overflow and log(0).
        s = 2.0 * yb - 1.0
        loss = float(np.mean(np.logaddexp(0.0, -s * z)))
        g = xb.T @ (_sigmoid(z) - yb) / len(yb)
        return loss, g

    def accuracy(self, x: np.ndarray, split: str = "train") -> float:
        fx, fy = (self.train_x, self.train_y) if split == "train" else (
            self.test_x, self.test_y)
        return float(np.mean((fx @ x > 0) == (fy > 0.5)))

    def manifest(self) -> dict:
        return {
            "kind": self.kind,
            "num_samples": self.num_samples,
            "num_features": self.num_features,
            "separation": self.separation,
            "batch_size": self.batch_size,
            "data_seed": self.data_seed,
        }


class MlpProblem:
    """One-hidden-layer tanh classifier on a 3-class 2-d Gaussian mixture.

    Parameters are the flat concatenation [W1, b1, W2, b2]; the gradient is
    exact backpropagation through tanh and softmax cross-entropy.
    """

    kind = "mlp"
    classification = True
    activation = "tanh"

    def __init__(self, num_samples: int = 900, hidden_units: int = 32,
                 num_classes: int = 3, batch_size: int = 72,
                 train_fraction: float = 0.8, data_seed: int = 23):
        self.num_samples = num_samples
        self.hidden_units = hidden_units
        self.num_classes = num_classes
        self.batch_size = batch_size
        self.data_seed = data_seed
        self.in_features = 2
        rng = np.random.default_rng(data_seed)
        per = num_samples // num_classes
        angles = 2.0 * np.pi * np.arange(num_classes) / num_classes
        centers = 3.0 * np.column_stack([np.cos(angles), np.sin(angles)])
        xs, ys = [], []
        for cls in range(num_classes):
            # cluster spread leaves ~7% class overlap so optimizer choice
            # shows up in the final metric instead of saturating at 1.0
            xs.append(rng.standard_normal((per, 2)) * 1.5 + centers[cls])
            ys.append(np.full(per, cls))
        features = np.vstack(xs)
        labels = np.concatenate(ys)
        order = rng.permutation(len(labels))
        features, labels = features[order], labels[order]
        n_train = int(train_fraction * len(labels))
        self.train_x, self.train_y = features[:n_train], labels[:n_train]
        self.test_x, self.test_y = features[n_train:], labels[n_train:]
        self.n_train = n_train
        h, k, d = hidden_units, num_classes, self.in_features
        self._shapes = [(d, h), (h,), (h, k), (k,)]
        self.dimension = d * h + h + h * k + k
        if batch_size < 1 or batch_size > n_train:
            raise ValueError(f"batch_size must be in [1, {n_train}]")

    @property
    def batches_per_epoch(self) -> int:
        return self.n_train // self.batch_size

    def _unpack(self, x: np.ndarray):
        parts, pos = [], 0
        for shape in self._shapes:
            size = int(np.prod(shape))
            parts.append(x[pos:pos + size].reshape(shape))
            pos += size
        return parts

    def init_params(self, rng: np.random.Generator) -> np.ndarray:
        d, h, k = self.in_features, self.hidden_units, self.num_classes
        w1 = rng.standard_normal((d, h)) / np.sqrt(d)
        w2 = rng.standard_normal((h, k)) / np.sqrt(h)
        return np.concatenate([w1.ravel(), np.zeros(h), w2.ravel(), np.zeros(k)])

    def _forward(self, x: np.ndarray, xb: np.ndarray):
        w1, b1, w2, b2 = self._unpack(x)
        hidden = np.tanh(xb @ w1 + b1)
        logits = hidden @ w2 + b2
        return w1, w2, hidden, logits

    def gradient(self, x: np.ndarray, batch=None) -> tuple[float, np.ndarray]:
        xb = self.train_x if batch is None else self.train_x[batch]
        yb = self.train_y if batch is None else self.train_y[batch]
        n = len(yb)
        _, w2, hidden, logits = self._forward(x, xb)
        shifted = logits - logits.max(axis=1, keepdims=True)
        log_z = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
        log_probs = shifted - log_z
        loss = float(-np.mean(log_probs[np.arange(n), yb]))
        dlogits = np.exp(log_probs)
        dlogits[np.arange(n), yb] -= 1.0
        dlogits /= n
        g_w2 = hidden.T @ dlogits
        g_b2 = dlogits.sum(axis=0)
        dhidden = (dlogits @ w2.T) * (1.0 - hidden * hidden)
        g_w1 = xb.T @ dhidden
        g_b1 = dhidden.sum(axis=0)
        grad = np.concatenate([g_w1.ravel(), g_b1, g_w2.ravel(), g_b2])
        return loss, grad

    def accuracy(self, x: np.ndarray, split: str = "train") -> float:
        fx, fy = (self.train_x, self.train_y) if split == "train" else (
            self.test_x, self.test_y)
        _, _, _, logits = self._forward(x, fx)
        return float(np.mean(np.argmax(logits, axis=1) == fy))

    def manifest(self) -> dict:
        return {
            "kind": self.kind,
            "num_samples": self.num_samples,
            "hidden_units": self.hidden_units,
            "num_classes": self.num_classes,
            "batch_size": self.batch_size,
            "activation": self.activation,
            "data_seed": self.data_seed,
        }


Problem = QuadraticProblem | LogisticProblem | MlpProblem


def make_problem(kind: str, **params) -> Problem:
    if kind == "quadratic":
        return QuadraticProblem(**params)
    if kind == "logistic":
        return LogisticProblem(**params)
    if kind == "mlp":
        return MlpProblem(**params)
    raise ValueError(f"unknown problem kind {kind!r}; expected one of {PROBLEM_KINDS}")
