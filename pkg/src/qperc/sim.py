"""Dense statevector simulator.

Qubit 0 is the most significant bit of the basis index, so a register
``q_0 q_1 ... q_{k-1}`` read as a binary integer gives the basis label.
Gate phases are kept in turns (fractions of 2*pi) and only converted to
radians when a gate is applied.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import kernels
from .errors import InvalidArgumentError, ResourceLimitError

MAX_QUBITS = 24
NORM_TOL = 1e-10


class GateKind(str, Enum):
    HADAMARD = "HADAMARD"
    PHASE_DIAG_1Q = "PHASE_DIAG_1Q"
    CPHASE_DIAG_2Q = "CPHASE_DIAG_2Q"
    SWAP = "SWAP"
    GLOBAL_PHASE = "GLOBAL_PHASE"


_ARITY = {
    GateKind.HADAMARD: (1, 0),
    GateKind.PHASE_DIAG_1Q: (1, 1),
    GateKind.CPHASE_DIAG_2Q: (2, 4),
    GateKind.SWAP: (2, 0),
    GateKind.GLOBAL_PHASE: (0, 1),
}
_DIAGONAL = {GateKind.PHASE_DIAG_1Q, GateKind.CPHASE_DIAG_2Q, GateKind.GLOBAL_PHASE}


@dataclass(frozen=True)
class Gate:
    """One gate: ``kind`` acting on ``targets``, optionally gated on ``controls``.

    Parameters are phases in turns:

    * ``PHASE_DIAG_1Q (a,)`` is ``diag(e^{-2 pi i a}, e^{2 pi i a})``.
    * ``CPHASE_DIAG_2Q (p00, p01, p10, p11)`` is ``diag(e^{2 pi i p_ab})`` with
      ``a`` the first target's bit.
    * ``GLOBAL_PHASE (b,)`` multiplies by ``e^{2 pi i b}``; with controls this is
      a phase on the all-ones control subspace.

    Controls are only allowed on the diagonal kinds.
    """

    kind: GateKind
    targets: tuple[int, ...]
    params: tuple[float, ...] = ()
    controls: tuple[int, ...] = ()

    def __post_init__(self):
        kind = GateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        object.__setattr__(self, "controls", tuple(int(c) for c in self.controls))
        n_targets, n_params = _ARITY[kind]
        if len(self.targets) != n_targets:
            raise InvalidArgumentError(f"{kind.value} takes {n_targets} target(s), got {len(self.targets)}")
        if len(self.params) != n_params:
            raise InvalidArgumentError(f"{kind.value} takes {n_params} parameter(s), got {len(self.params)}")
        if self.controls and kind not in _DIAGONAL:
            raise InvalidArgumentError(f"{kind.value} does not accept controls")
        qubits = self.targets + self.controls
        if len(set(qubits)) != len(qubits):
            raise InvalidArgumentError(f"repeated qubit in {qubits}")
        if any(q < 0 for q in qubits):
            raise InvalidArgumentError(f"negative qubit index in {qubits}")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.targets + self.controls

    @property
    def is_diagonal(self) -> bool:
        return self.kind in _DIAGONAL

    @property
    def elementary_count(self) -> int:
        # a swap is three CNOTs in the single-qubit + CNOT gate set
        return 3 if self.kind is GateKind.SWAP else 1

    def inverse(self) -> Gate:
        if self.is_diagonal:
            return Gate(self.kind, self.targets, tuple(-p for p in self.params), self.controls)
        return self

    def diagonal_factors(self) -> np.ndarray:
        """Unit-modulus diagonal over the targets (index = target bits, first target most significant)."""
        if self.kind is GateKind.PHASE_DIAG_1Q:
            turns = np.array([-self.params[0], self.params[0]])
        elif self.is_diagonal:
            turns = np.array(self.params)
        else:
            raise InvalidArgumentError(f"{self.kind.value} is not diagonal")
        return np.exp(2j * np.pi * turns)

    def matrix(self) -> np.ndarray:
        """Dense unitary on the targets alone (controls excluded)."""
        if self.kind is GateKind.HADAMARD:
            return np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)
        if self.kind is GateKind.SWAP:
            return np.eye(4, dtype=complex)[[0, 2, 1, 3]]
        return np.diag(self.diagonal_factors())

    def to_line(self) -> str:
        parts = [self.kind.value, *map(str, self.targets), *map(repr, self.params)]
        if self.controls:
            parts.append("ctrl=" + ",".join(map(str, self.controls)))
        return " ".join(parts)

    @classmethod
    def from_line(cls, line: str) -> Gate:
        tokens = line.split()
        kind = GateKind(tokens[0])
        controls: tuple[int, ...] = ()
        if tokens[-1].startswith("ctrl="):
            controls = tuple(int(c) for c in tokens.pop()[5:].split(","))
        n_targets, _ = _ARITY[kind]
        targets = tuple(int(t) for t in tokens[1:1 + n_targets])
        params = tuple(float(p) for p in tokens[1 + n_targets:])
        return cls(kind, targets, params, controls)


def hadamard(q: int) -> Gate:
    return Gate(GateKind.HADAMARD, (q,))


def phase_diag(q: int, alpha: float, controls=()) -> Gate:
    return Gate(GateKind.PHASE_DIAG_1Q, (q,), (alpha,), tuple(controls))


def cphase_diag(a: int, b: int, turns, controls=()) -> Gate:
    return Gate(GateKind.CPHASE_DIAG_2Q, (a, b), tuple(turns), tuple(controls))


def swap(a: int, b: int) -> Gate:
    return Gate(GateKind.SWAP, (a, b))


def global_phase(beta: float, controls=()) -> Gate:
    return Gate(GateKind.GLOBAL_PHASE, (), (beta,), tuple(controls))


@dataclass
class StateVector:
    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        _check_width(self.num_qubits)
        self.amplitudes = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (1 << self.num_qubits,):
            raise InvalidArgumentError(
                f"expected {1 << self.num_qubits} amplitudes, got shape {self.amplitudes.shape}"
            )

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def copy(self) -> StateVector:
        return StateVector(self.num_qubits, self.amplitudes.copy())


@dataclass
class OutcomeDistribution:
    """Probabilities over the ``2**tau`` labels ``j`` of a phase register."""

    probabilities: np.ndarray

    def __post_init__(self):
        self.probabilities = np.asarray(self.probabilities, dtype=np.float64)
        size = self.probabilities.shape[0]
        if self.probabilities.ndim != 1 or size < 2 or size & (size - 1):
            raise InvalidArgumentError("outcome count must be a power of two >= 2")

    @property
    def num_outcomes(self) -> int:
        return self.probabilities.shape[0]

    @property
    def tau(self) -> int:
        return self.num_outcomes.bit_length() - 1

    @property
    def labels(self) -> np.ndarray:
        return np.arange(self.num_outcomes)

    def theta(self, j: int) -> float:
        return j / self.num_outcomes

    def first_bit_marginal(self) -> float:
        """Probability that the leading phase digit reads 1."""
        return float(self.probabilities[self.num_outcomes // 2:].sum())

    def argmax(self) -> int:
        return int(np.argmax(self.probabilities))


@dataclass
class Circuit:
    num_qubits: int
    gates: list[Gate] = field(default_factory=list)
    # basis state the circuit starts from; registers are loaded classically
    initial_index: int = 0

    def __post_init__(self):
        if self.num_qubits < 1:
            raise InvalidArgumentError("a circuit needs at least one qubit")
        if not 0 <= self.initial_index < (1 << self.num_qubits):
            raise InvalidArgumentError(f"initial index {self.initial_index} out of range")
        for gate in self.gates:
            self._check(gate)

    def _check(self, gate: Gate):
        if any(q >= self.num_qubits for q in gate.qubits):
            raise InvalidArgumentError(f"{gate.to_line()!r} exceeds {self.num_qubits} qubits")

    def append(self, gate: Gate) -> Circuit:
        self._check(gate)
        self.gates.append(gate)
        return self

    def extend(self, gates) -> Circuit:
        for gate in gates:
            self.append(gate)
        return self

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def inverse(self) -> Circuit:
        return Circuit(self.num_qubits, [g.inverse() for g in reversed(self.gates)], self.initial_index)

    def elementary_count(self) -> int:
        return sum(g.elementary_count for g in self.gates)

    def initial_state(self) -> StateVector:
        return new_basis_state(self.num_qubits, self.initial_index)

    def dump(self) -> str:
        """Text form: a ``QUBITS``/``INIT`` header, then one gate per line."""
        lines = [f"QUBITS {self.num_qubits}", f"INIT {self.initial_index}"]
        lines.extend(g.to_line() for g in self.gates)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dump(cls, text: str) -> Circuit:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        num_qubits = int(lines[0].split()[1])
        initial = int(lines[1].split()[1])
        return cls(num_qubits, [Gate.from_line(ln) for ln in lines[2:]], initial)


def _check_width(num_qubits: int):
    if num_qubits < 1:
        raise InvalidArgumentError("num_qubits must be >= 1")
    if num_qubits > MAX_QUBITS:
        raise ResourceLimitError(
            f"{num_qubits} qubits exceeds the dense-statevector limit of {MAX_QUBITS}"
        )


def new_basis_state(num_qubits: int, index: int) -> StateVector:
    _check_width(num_qubits)
    if not 0 <= index < (1 << num_qubits):
        raise InvalidArgumentError(f"basis index {index} out of range for {num_qubits} qubits")
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(num_qubits, amps)


def _apply_in_place(amps: np.ndarray, nq: int, gate: Gate):
    shift = [nq - 1 - q for q in gate.targets]
    if gate.kind is GateKind.HADAMARD:
        kernels.hadamard(amps, shift[0])
    elif gate.kind is GateKind.SWAP:
        kernels.swap(amps, shift[0], shift[1])
    else:
        cmask = 0
        for c in gate.controls:
            cmask |= 1 << (nq - 1 - c)
        kernels.diagonal(amps, cmask, np.array(shift, dtype=np.int64), gate.diagonal_factors())


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    if any(q >= state.num_qubits for q in gate.qubits):
        raise InvalidArgumentError(f"{gate.to_line()!r} exceeds {state.num_qubits} qubits")
    out = state.copy()
    _apply_in_place(out.amplitudes, out.num_qubits, gate)
    return out


def apply_circuit(state: StateVector, circuit: Circuit) -> StateVector:
    if state.num_qubits != circuit.num_qubits:
        raise InvalidArgumentError(
            f"state has {state.num_qubits} qubits, circuit has {circuit.num_qubits}"
        )
    out = state.copy()
    for gate in circuit.gates:
        _apply_in_place(out.amplitudes, out.num_qubits, gate)
    return out


def simulate(circuit: Circuit) -> StateVector:
    """Run ``circuit`` from its own initial basis state."""
    return apply_circuit(circuit.initial_state(), circuit)


def register_distribution(state: StateVector, width: int) -> OutcomeDistribution:
    """Marginal distribution of the leading ``width`` qubits."""
    if not 1 <= width <= state.num_qubits:
        raise InvalidArgumentError(f"register width {width} out of range")
    probs = state.probabilities().reshape(1 << width, -1).sum(axis=1)
    return OutcomeDistribution(probs)


def marginal_probability(dist_or_state, qubit: int, value: int) -> float:
    """P(measuring ``qubit`` gives ``value``) for a state or an outcome distribution."""
    if isinstance(dist_or_state, StateVector):
        width, probs = dist_or_state.num_qubits, dist_or_state.probabilities()
    else:
        width, probs = dist_or_state.tau, dist_or_state.probabilities
    if not 0 <= qubit < width:
        raise InvalidArgumentError(f"qubit {qubit} out of range for {width} qubits")
    if value not in (0, 1):
        raise InvalidArgumentError("value must be 0 or 1")
    view = probs.reshape(1 << qubit, 2, -1)
    return float(min(1.0, view[:, value, :].sum()))


def sample(dist: OutcomeDistribution, rng_seed, count: int) -> np.ndarray:
    """Draw ``count`` i.i.d. outcome labels; identical seeds give identical draws."""
    if count < 1:
        raise InvalidArgumentError("count must be >= 1")
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    p = np.clip(dist.probabilities, 0.0, None)
    return rng.choice(dist.num_outcomes, size=count, p=p / p.sum())
