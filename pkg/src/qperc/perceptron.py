"""Classical step-activation perceptron and its mapping onto a phase.

Inputs are +/-1 vectors, weights live in [-1, 1). The net input
``h = sum_k w_k x_k`` is written into a phase ``phi = h / (2n) + 1/2`` so that
``h >= 0`` exactly when ``phi >= 1/2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, NamedTuple

import numpy as np

from .errors import InvalidArgumentError

# largest representable weight after a training update
WEIGHT_MAX = 1.0 - 2.0 ** -31
_BELOW_HALF = float(np.nextafter(0.5, 0.0))


def as_inputs(x) -> np.ndarray:
    arr = np.asarray(x)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidArgumentError("input vector must be a non-empty 1-d array")
    if not np.all((arr == 1) | (arr == -1)):
        raise InvalidArgumentError("input entries must be -1 or +1")
    return arr.astype(np.int8)


def as_weights(w) -> np.ndarray:
    arr = np.asarray(w, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidArgumentError("weight vector must be a non-empty 1-d array")
    if not np.all((arr >= -1.0) & (arr < 1.0)):
        raise InvalidArgumentError("weights must lie in [-1, 1)")
    return arr


def _pair(w, x):
    w, x = as_weights(w), as_inputs(x)
    if w.shape != x.shape:
        raise InvalidArgumentError(f"dimension mismatch: {w.size} weights vs {x.size} inputs")
    return w, x


def net_input(w, x) -> float:
    w, x = _pair(w, x)
    return float(np.dot(w, x))


def classical_activation(w, x) -> int:
    return 1 if net_input(w, x) >= 0.0 else -1


@dataclass(frozen=True)
class Phase:
    h: float
    phi: float
    delta_phi: float


def phase_of(h: float, n: int) -> float:
    """Normalised phase of net input ``h`` for ``n`` neurons, reduced into [0, 1).

    Only ``h == n`` (every weight -1 against every input -1) reaches 1, which
    wraps to 0: the encoded phase really is e^{2 pi i} there.
    """
    phi = h / (2 * n) + 0.5
    if h < 0.0 and phi >= 0.5:
        # |h| below half an ulp of 0.5 would otherwise round onto the threshold
        return _BELOW_HALF
    return phi - 1.0 if phi >= 1.0 else phi


def to_phase(w, x) -> Phase:
    w, x = _pair(w, x)
    h = float(np.dot(w, x))
    return Phase(h=h, phi=phase_of(h, w.size), delta_phi=1.0 / (2 * w.size))


def batch_phases(W: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Row-wise ``to_phase(...).phi`` for stacked weights and inputs."""
    n = W.shape[1]
    h = np.einsum("ij,ij->i", W, X)
    phi = h / (2 * n) + 0.5
    phi = np.where((h < 0.0) & (phi >= 0.5), _BELOW_HALF, phi)
    return np.where(phi >= 1.0, phi - 1.0, phi)


@dataclass(frozen=True)
class QuantizedWeights:
    """Sign plus truncated binary-fraction magnitude of each weight.

    ``digits[k, m - 1]`` is the m-th fractional digit of ``|w_k|`` (so column 0
    is worth 1/2); ``signs[k]`` is +1 or -1.
    """

    digits: np.ndarray
    signs: np.ndarray
    delta: int

    @property
    def n(self) -> int:
        return self.digits.shape[0]

    def magnitudes(self) -> np.ndarray:
        scale = 0.5 ** np.arange(1, self.delta + 1)
        return self.digits @ scale

    def reconstruct(self) -> np.ndarray:
        return self.signs * self.magnitudes()

    def with_sign_flipped(self, k: int) -> QuantizedWeights:
        signs = self.signs.copy()
        signs[k] = -signs[k]
        return QuantizedWeights(self.digits, signs, self.delta)


def quantize_weights(w, delta: int) -> QuantizedWeights:
    if int(delta) != delta or delta < 1:
        raise InvalidArgumentError("delta must be an integer >= 1")
    w = as_weights(w)
    delta = int(delta)
    levels = np.floor(np.abs(w) * 2.0 ** delta).astype(np.int64)
    # |w| = 1 only for w = -1; its magnitude must still fit in delta digits
    levels = np.minimum(levels, (1 << delta) - 1)
    bit_pos = np.arange(delta - 1, -1, -1)
    digits = ((levels[:, None] >> bit_pos[None, :]) & 1).astype(np.uint8)
    signs = np.where(w < 0.0, -1, 1).astype(np.int8)
    return QuantizedWeights(digits=digits, signs=signs, delta=delta)


def training_step(w, x, d: int, y: int, eta: float) -> np.ndarray:
    w, x = _pair(w, x)
    if not 0.0 <= eta <= 1.0:
        raise InvalidArgumentError("learning rate must lie in [0, 1]")
    if d not in (-1, 1) or y not in (-1, 1):
        raise InvalidArgumentError("target and output must be -1 or +1")
    updated = w + eta * (d - y) * x
    # only components that left [-1, 1) are touched
    updated = np.where(updated >= 1.0, WEIGHT_MAX, updated)
    return np.maximum(updated, -1.0)


@dataclass
class TrainingSet:
    inputs: np.ndarray   # (P, n) of +/-1
    targets: np.ndarray  # (P,) of +/-1

    def __post_init__(self):
        self.inputs = np.asarray(self.inputs)
        self.targets = np.asarray(self.targets)
        if self.inputs.ndim != 2 or self.inputs.shape[0] != self.targets.shape[0]:
            raise InvalidArgumentError("inputs must be (P, n) with one target per row")
        for row in self.inputs:
            as_inputs(row)
        if not np.all((self.targets == 1) | (self.targets == -1)):
            raise InvalidArgumentError("targets must be -1 or +1")
        self.inputs = self.inputs.astype(np.int8)
        self.targets = self.targets.astype(np.int8)

    def __len__(self):
        return self.inputs.shape[0]

    @property
    def n(self) -> int:
        return self.inputs.shape[1]

    @classmethod
    def from_csv(cls, path) -> TrainingSet:
        rows = []
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rows.append([int(v) for v in line.split(",")])
            except ValueError:
                raise InvalidArgumentError(f"{path}:{lineno}: non-integer field") from None
        if not rows:
            raise InvalidArgumentError(f"{path}: no examples")
        if len({len(r) for r in rows}) != 1 or len(rows[0]) < 2:
            raise InvalidArgumentError(f"{path}: rows must share n >= 1 inputs plus a target")
        data = np.array(rows)
        return cls(data[:, :-1], data[:, -1])

    def to_csv(self, path):
        lines = [",".join(str(int(v)) for v in (*x, d)) for x, d in zip(self.inputs, self.targets)]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


class TrainResult(NamedTuple):
    weights: np.ndarray
    epochs_used: int
    final_accuracy: float


def accuracy(w, training_set: TrainingSet, classifier: Callable = classical_activation) -> float:
    hits = sum(classifier(w, x) == d for x, d in zip(training_set.inputs, training_set.targets))
    return hits / len(training_set)


def train(training_set: TrainingSet, eta: float, max_epochs: int,
          classifier: Callable = classical_activation, rng_seed=0, w0=None) -> TrainResult:
    """Online perceptron training on randomly drawn examples.

    Each epoch checks the whole set with ``classifier`` and stops if every
    example is right; otherwise it performs ``P`` updates on examples drawn
    with replacement. ``epochs_used`` counts update epochs, so a set that is
    already separated by ``w0`` returns 0. Weights start at zero by default.
    """
    if len(training_set) == 0:
        raise InvalidArgumentError("training set is empty")
    if max_epochs < 0:
        raise InvalidArgumentError("max_epochs must be >= 0")
    rng = np.random.default_rng(rng_seed)
    w = np.zeros(training_set.n) if w0 is None else as_weights(w0).copy()
    P = len(training_set)
    epochs = 0
    while True:
        acc = accuracy(w, training_set, classifier)
        if acc == 1.0 or epochs >= max_epochs:
            return TrainResult(w, epochs, acc)
        for p in rng.integers(0, P, size=P):
            x, d = training_set.inputs[p], int(training_set.targets[p])
            y = classifier(w, x)
            if y != d:
                w = training_step(w, x, d, y, eta)
        epochs += 1

