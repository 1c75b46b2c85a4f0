"""Quantum perceptron circuits and their readout.

Register layout (qubit 0 is the most significant basis bit):

* variant A: ``[phase (tau)] [inputs (n)]``
* variant B: ``[phase (tau)] [inputs (n)] [weight digits (n * delta)] [signs (n)]``

An input ``x_k = +1`` is loaded as ``|1>``, ``-1`` as ``|0>``. Weight digit
``(k, m)`` sits at ``tau + n + k * delta + (m - 1)``; a sign qubit holds ``|1>``
for a non-negative weight so that its XNOR with ``x_k`` selects the direction
of the phase shift.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, ResourceLimitError
from .perceptron import (
    QuantizedWeights,
    _pair,
    as_inputs,
    as_weights,
    quantize_weights,
    to_phase,
)
from .qpe import analytic_distribution, inverse_qft_gates
from .sim import (
    MAX_QUBITS,
    Circuit,
    OutcomeDistribution,
    StateVector,
    apply_circuit,
    cphase_diag,
    global_phase,
    hadamard,
    phase_diag,
    register_distribution,
    sample,
    simulate,
)

VARIANTS = ("A", "B")
BACKENDS = ("analytic", "gate-level")


def _bits_to_index(bits) -> int:
    index = 0
    for b in bits:
        index = (index << 1) | int(b)
    return index


def input_bits(x) -> np.ndarray:
    return (as_inputs(x) > 0).astype(np.int64)


def qubit_count(n: int, tau: int, variant: str = "A", delta: int | None = None) -> int:
    if variant == "A":
        return tau + n
    return tau + n + n * delta + n


def _check_budget(total: int):
    if total > MAX_QUBITS:
        raise ResourceLimitError(f"circuit needs {total} qubits; the gate-level limit is {MAX_QUBITS}")


def _turns(value: float) -> float:
    # phases are periodic in whole turns; keep the stored angle small
    return value % 1.0


def _oracle_a_gates(w: np.ndarray, tau: int) -> list:
    n = w.size
    dphi = 1.0 / (2 * n)
    gates = [hadamard(t) for t in range(tau)]
    for t in range(tau):
        power = 1 << (tau - 1 - t)
        for k in range(n):
            gates.append(phase_diag(tau + k, _turns(w[k] * dphi * power), controls=(t,)))
        gates.append(global_phase(_turns(0.5 * power), controls=(t,)))
    return gates


def _oracle_b_gates(n: int, delta: int, tau: int) -> list:
    dphi = 1.0 / (2 * n)
    digit0 = tau + n
    sign0 = tau + n + n * delta
    gates = [hadamard(t) for t in range(tau)]
    for t in range(tau):
        power = 1 << (tau - 1 - t)
        for k in range(n):
            x_q, s_q = tau + k, sign0 + k
            for m in range(1, delta + 1):
                d_q = digit0 + k * delta + (m - 1)
                a = _turns(dphi / 2 ** m * power)
                # shift -a on x=1 unconditionally, then +2a when the sign qubit
                # is set: net +a iff sign and input agree (inverse XOR)
                gates.append(cphase_diag(d_q, x_q, (0.0, 0.0, a, -a), controls=(t,)))
                gates.append(cphase_diag(d_q, x_q, (0.0, 0.0, -2 * a, 2 * a), controls=(t, s_q)))
        gates.append(global_phase(_turns(0.5 * power), controls=(t,)))
    return gates


def build_variant_a(w, x, tau: int) -> Circuit:
    """Phase estimation of ``U(w) = U_n ... U_1 U_0`` on the basis input ``x``."""
    w, x = _pair(w, x)
    _check_tau(tau)
    total = qubit_count(w.size, tau)
    _check_budget(total)
    gates = _oracle_a_gates(w, tau) + inverse_qft_gates(tau)
    return Circuit(total, gates, initial_index=_bits_to_index(input_bits(x)))


def build_variant_b(qw: QuantizedWeights, x, tau: int) -> Circuit:
    """Phase estimation with weights loaded into digit and sign qubits."""
    x = as_inputs(x)
    if x.size != qw.n:
        raise InvalidArgumentError(f"dimension mismatch: {qw.n} weights vs {x.size} inputs")
    _check_tau(tau)
    n, delta = qw.n, qw.delta
    total = qubit_count(n, tau, "B", delta)
    _check_budget(total)
    gates = _oracle_b_gates(n, delta, tau) + inverse_qft_gates(tau)
    bits = np.concatenate([
        input_bits(x),
        qw.digits.reshape(-1).astype(np.int64),
        (qw.signs > 0).astype(np.int64),
    ])
    return Circuit(total, gates, initial_index=_bits_to_index(bits))


def _check_tau(tau):
    if int(tau) != tau or tau < 1:
        raise InvalidArgumentError(f"tau must be an integer >= 1, got {tau!r}")


@dataclass(frozen=True)
class QPerceptronConfig:
    n: int
    tau: int
    variant: str = "A"
    delta: int | None = None
    backend: str = "analytic"
    shots: int = 1

    def __post_init__(self):
        object.__setattr__(self, "variant", str(self.variant).upper())
        if self.n < 1:
            raise InvalidArgumentError("n must be >= 1")
        _check_tau(self.tau)
        if self.variant not in VARIANTS:
            raise InvalidArgumentError(f"variant must be one of {VARIANTS}")
        if self.variant == "B" and (self.delta is None or self.delta < 1):
            raise InvalidArgumentError("variant B needs a weight precision delta >= 1")
        if self.backend not in BACKENDS:
            raise InvalidArgumentError(f"backend must be one of {BACKENDS}")
        if self.shots < 1 or self.shots % 2 == 0:
            raise InvalidArgumentError("shots must be a positive odd number")
        if self.backend == "gate-level":
            _check_budget(self.num_qubits)

    @property
    def num_qubits(self) -> int:
        return qubit_count(self.n, self.tau, self.variant, self.delta)


@dataclass(frozen=True)
class RunResult:
    distribution: OutcomeDistribution
    output: int
    phi: float
    samples: np.ndarray

    @property
    def p_fire(self) -> float:
        """Probability that a single shot reads +1."""
        return self.distribution.first_bit_marginal()


def distribution_for(config: QPerceptronConfig, w, x) -> tuple[OutcomeDistribution, float]:
    """Phase-register law and the phase it estimates."""
    w, x = _pair(w, x)
    if w.size != config.n:
        raise InvalidArgumentError(f"config is for n={config.n}, got {w.size} weights")
    if config.variant == "B":
        qw = quantize_weights(w, config.delta)
        phi = to_phase(qw.reconstruct(), x).phi
        if config.backend == "gate-level":
            state = simulate(build_variant_b(qw, x, config.tau))
            return register_distribution(state, config.tau), phi
        return analytic_distribution(phi, config.tau), phi
    phi = to_phase(w, x).phi
    if config.backend == "gate-level":
        state = simulate(build_variant_a(w, x, config.tau))
        return register_distribution(state, config.tau), phi
    return analytic_distribution(phi, config.tau), phi


def readout(dist: OutcomeDistribution, shots: int, rng) -> tuple[int, np.ndarray]:
    """Majority vote of the leading digit over ``shots`` measurements."""
    samples = sample(dist, rng, shots)
    ones = int(np.count_nonzero(samples >> (dist.tau - 1)))
    return (1 if 2 * ones > shots else -1), samples


def run(config: QPerceptronConfig, w, x, rng_seed=0) -> RunResult:
    dist, phi = distribution_for(config, w, x)
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    output, samples = readout(dist, config.shots, rng)
    return RunResult(dist, output, phi, samples)


class QuantumClassifier:
    """Callable ``(w, x) -> +/-1`` backed by the quantum perceptron.

    Holds its own seeded generator so a training run is reproducible.
    """

    def __init__(self, tau: int, shots: int = 1, backend: str = "analytic",
                 variant: str = "A", delta: int | None = None, seed=0):
        self.tau, self.shots = tau, shots
        self.backend, self.variant, self.delta = backend, variant, delta
        self.rng = np.random.default_rng(seed)

    def __call__(self, w, x) -> int:
        config = QPerceptronConfig(n=len(w), tau=self.tau, variant=self.variant,
                                   delta=self.delta, backend=self.backend, shots=self.shots)
        return run(config, w, x, self.rng).output


@dataclass(frozen=True)
class JointDistribution:
    """Law of (phase outcome ``j``, input branch ``i``); rows are ``j``."""

    probabilities: np.ndarray

    @property
    def tau(self) -> int:
        return self.probabilities.shape[0].bit_length() - 1

    def input_marginal(self) -> np.ndarray:
        return self.probabilities.sum(axis=0)

    def outcome_marginal(self) -> OutcomeDistribution:
        return OutcomeDistribution(self.probabilities.sum(axis=1))

    def conditional(self, i: int) -> OutcomeDistribution:
        column = self.probabilities[:, i]
        return OutcomeDistribution(column / column.sum())


def superposition_state(inputs, amplitudes, tau: int) -> StateVector:
    """``|0...0> (sum_i a_i |x_i>)`` for the variant-A layout."""
    n = len(inputs[0])
    amps = np.zeros(1 << (tau + n), dtype=np.complex128)
    for x, a in zip(inputs, amplitudes):
        amps[_bits_to_index(input_bits(x))] = a
    return StateVector(tau + n, amps)


def run_superposition(w, inputs, tau: int, amplitudes=None) -> JointDistribution:
    """Run variant A on a superposition of basis inputs in one pass.

    ``amplitudes`` defaults to uniform. The oracle only touches the input
    register through diagonal gates, so every branch keeps its own label.
    """
    w = as_weights(w)
    inputs = [as_inputs(x) for x in inputs]
    if not inputs:
        raise InvalidArgumentError("need at least one input")
    if any(x.size != w.size for x in inputs):
        raise InvalidArgumentError("every input must match the weight dimension")
    labels = [_bits_to_index(input_bits(x)) for x in inputs]
    if len(set(labels)) != len(labels):
        raise InvalidArgumentError("superposed inputs must be distinct")
    m = len(inputs)
    if amplitudes is None:
        amplitudes = np.full(m, 1.0 / np.sqrt(m), dtype=np.complex128)
    amplitudes = np.asarray(amplitudes, dtype=np.complex128)
    if amplitudes.shape != (m,):
        raise InvalidArgumentError("one amplitude per input is required")
    if abs(np.sum(np.abs(amplitudes) ** 2) - 1.0) > 1e-10:
        raise InvalidArgumentError("amplitudes must be normalized")
    _check_tau(tau)
    total = qubit_count(w.size, tau)
    _check_budget(total)
    circuit = Circuit(total, _oracle_a_gates(w, tau) + inverse_qft_gates(tau))
    state = apply_circuit(superposition_state(inputs, amplitudes, tau), circuit)
    probs = state.probabilities().reshape(1 << tau, 1 << w.size)
    return JointDistribution(probs[:, labels].copy())


@dataclass(frozen=True)
class GateCountReport:
    n: int
    tau: int
    variant: str
    paper_oracle_count: int
    paper_qft_count: int | float
    constructed_oracle_count: int
    constructed_qft_count: int

    @property
    def constructed_count(self) -> int:
        return self.constructed_oracle_count + self.constructed_qft_count

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "tau": self.tau,
            "variant": self.variant,
            "paper_oracle_count": self.paper_oracle_count,
            "paper_qft_count": self.paper_qft_count,
            "constructed_oracle_count": self.constructed_oracle_count,
            "constructed_qft_count": self.constructed_qft_count,
            "constructed_count": self.constructed_count,
        }


def paper_oracle_count(n: int, tau: int) -> int:
    """``tau + (n + 1) * sum_{k=1}^{2^tau - 1} k``: U^j applied naively for every j."""
    top = (1 << tau) - 1
    return tau + (n + 1) * (top * (top + 1) // 2)


def paper_qft_count(tau: int) -> int | float:
    """``tau (tau + 1) / 2 + 3 tau / 2`` evaluated exactly.

    For odd tau the formula itself lands on a half integer, returned as a float.
    """
    twice = tau * (tau + 1) + 3 * tau
    return twice // 2 if twice % 2 == 0 else twice / 2


def gate_count_report(n: int, tau: int, variant: str = "A", delta: int = 1) -> GateCountReport:
    if n < 1 or tau < 1:
        raise InvalidArgumentError("n and tau must be >= 1")
    variant = variant.upper()
    if variant == "A":
        oracle = _oracle_a_gates(np.zeros(n), tau)
    elif variant == "B":
        oracle = _oracle_b_gates(n, delta, tau)
    else:
        raise InvalidArgumentError(f"variant must be one of {VARIANTS}")
    constructed_qft = sum(g.elementary_count for g in inverse_qft_gates(tau))
    return GateCountReport(
        n=n,
        tau=tau,
        variant=variant,
        paper_oracle_count=paper_oracle_count(n, tau),
        paper_qft_count=paper_qft_count(tau),
        constructed_oracle_count=sum(g.elementary_count for g in oracle),
        constructed_qft_count=constructed_qft,
    )

