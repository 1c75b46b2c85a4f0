import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import dense_circuit_unitary, dense_unitary
from qperc.errors import InvalidArgumentError, ResourceLimitError
from qperc.sim import (
    Circuit,
    Gate,
    GateKind,
    OutcomeDistribution,
    StateVector,
    apply_circuit,
    apply_gate,
    cphase_diag,
    global_phase,
    hadamard,
    marginal_probability,
    new_basis_state,
    phase_diag,
    sample,
    swap,
)

SQRT2_INV = 1 / math.sqrt(2)


# ---------------------------------------------------------------------------
# basis states
# ---------------------------------------------------------------------------

def test_basis_state_zero():
    assert np.array_equal(new_basis_state(1, 0).amplitudes, [1, 0])


def test_basis_state_eleven():
    assert np.array_equal(new_basis_state(2, 3).amplitudes, [0, 0, 0, 1])


@pytest.mark.parametrize("nq, index", [(3, 8), (2, -1)])
def test_basis_state_out_of_range(nq, index):
    with pytest.raises(InvalidArgumentError):
        new_basis_state(nq, index)


def test_too_many_qubits_is_a_resource_error():
    with pytest.raises(ResourceLimitError):
        new_basis_state(25, 0)


# ---------------------------------------------------------------------------
# single gates
# ---------------------------------------------------------------------------

def test_hadamard_on_zero():
    out = apply_gate(new_basis_state(1, 0), hadamard(0))
    assert np.allclose(out.amplitudes, [SQRT2_INV, SQRT2_INV], atol=1e-15)


def test_phase_diag_on_zero_is_a_phase_only():
    alpha = 0.1234
    out = apply_gate(new_basis_state(1, 0), phase_diag(0, alpha))
    assert out.amplitudes[0] == pytest.approx(np.exp(-2j * np.pi * alpha), abs=1e-15)
    assert np.allclose(out.probabilities(), [1, 0])


def test_double_swap_is_identity():
    rng = np.random.default_rng(3)
    amps = rng.normal(size=8) + 1j * rng.normal(size=8)
    state = StateVector(3, amps / np.linalg.norm(amps))
    out = apply_gate(apply_gate(state, swap(0, 2)), swap(0, 2))
    assert np.max(np.abs(out.amplitudes - state.amplitudes)) <= 1e-12


def test_swap_moves_basis_state():
    # |100> -> |001>
    out = apply_gate(new_basis_state(3, 4), swap(0, 2))
    assert out.amplitudes[1] == 1


def test_gate_target_out_of_range():
    with pytest.raises(InvalidArgumentError):
        apply_gate(new_basis_state(2, 0), hadamard(2))


def test_apply_gate_does_not_mutate_input():
    state = new_basis_state(1, 0)
    apply_gate(state, hadamard(0))
    assert np.array_equal(state.amplitudes, [1, 0])


@pytest.mark.parametrize("bad", [
    lambda: Gate(GateKind.HADAMARD, (0, 1)),
    lambda: Gate(GateKind.SWAP, (1, 1)),
    lambda: Gate(GateKind.PHASE_DIAG_1Q, (0,), ()),
    lambda: Gate(GateKind.HADAMARD, (0,), (), (1,)),
    lambda: Gate(GateKind.CPHASE_DIAG_2Q, (0, 1), (0, 0, 0, 0.5), (1,)),
])
def test_malformed_gates_rejected(bad):
    with pytest.raises(InvalidArgumentError):
        bad()


def test_controlled_global_phase_is_phase_on_control():
    # e^{i pi} on the |1> branch of qubit 0 only
    state = StateVector(1, np.array([SQRT2_INV, SQRT2_INV]))
    out = apply_gate(state, global_phase(0.5, controls=(0,)))
    assert np.allclose(out.amplitudes, [SQRT2_INV, -SQRT2_INV], atol=1e-15)


def test_uncontrolled_global_phase():
    out = apply_gate(new_basis_state(2, 1), global_phase(0.25))
    assert out.amplitudes[1] == pytest.approx(1j, abs=1e-15)


# ---------------------------------------------------------------------------
# circuits
# ---------------------------------------------------------------------------

def test_empty_circuit_is_identity():
    state = new_basis_state(2, 2)
    out = apply_circuit(state, Circuit(2))
    assert np.array_equal(out.amplitudes, state.amplitudes)


def test_hh_is_identity():
    out = apply_circuit(new_basis_state(1, 0), Circuit(1, [hadamard(0), hadamard(0)]))
    assert np.max(np.abs(out.amplitudes - [1, 0])) <= 1e-12


def test_circuit_qubit_mismatch():
    with pytest.raises(InvalidArgumentError):
        apply_circuit(new_basis_state(2, 0), Circuit(3))


def test_circuit_rejects_out_of_range_gate():
    with pytest.raises(InvalidArgumentError):
        Circuit(2).append(swap(0, 2))


def test_dump_golden():
    circuit = Circuit(3, [
        hadamard(0),
        phase_diag(2, 0.125, controls=(0,)),
        cphase_diag(0, 1, (0.0, 0.0, 0.0, -0.25)),
        global_phase(0.5, controls=(1,)),
        swap(0, 1),
    ], initial_index=5)
    expected = (
        "QUBITS 3\n"
        "INIT 5\n"
        "HADAMARD 0\n"
        "PHASE_DIAG_1Q 2 0.125 ctrl=0\n"
        "CPHASE_DIAG_2Q 0 1 0.0 0.0 0.0 -0.25\n"
        "GLOBAL_PHASE 0.5 ctrl=1\n"
        "SWAP 0 1\n"
    )
    assert circuit.dump() == expected
    assert Circuit.from_dump(expected) == circuit


# ---------------------------------------------------------------------------
# random circuits against the dense-matrix oracle
# ---------------------------------------------------------------------------

@st.composite
def gates_on(draw, nq):
    kinds = [GateKind.HADAMARD, GateKind.PHASE_DIAG_1Q, GateKind.GLOBAL_PHASE]
    if nq >= 2:
        kinds += [GateKind.CPHASE_DIAG_2Q, GateKind.SWAP]
    kind = draw(st.sampled_from(kinds))
    qubits = draw(st.permutations(range(nq)))
    turns = st.floats(-1.0, 1.0, allow_nan=False)
    if kind is GateKind.HADAMARD:
        return hadamard(qubits[0])
    if kind is GateKind.SWAP:
        return swap(qubits[0], qubits[1])
    n_targets = {GateKind.PHASE_DIAG_1Q: 1, GateKind.CPHASE_DIAG_2Q: 2, GateKind.GLOBAL_PHASE: 0}[kind]
    n_params = {GateKind.PHASE_DIAG_1Q: 1, GateKind.CPHASE_DIAG_2Q: 4, GateKind.GLOBAL_PHASE: 1}[kind]
    n_controls = draw(st.integers(0, min(2, nq - n_targets)))
    targets = tuple(qubits[:n_targets])
    controls = tuple(qubits[n_targets:n_targets + n_controls])
    params = tuple(draw(turns) for _ in range(n_params))
    return Gate(kind, targets, params, controls)


@st.composite
def random_circuits(draw, max_qubits=10, max_gates=50):
    nq = draw(st.integers(1, max_qubits))
    gates = draw(st.lists(gates_on(nq), max_size=max_gates))
    return Circuit(nq, gates)


def random_state(nq, seed):
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=1 << nq) + 1j * rng.normal(size=1 << nq)
    return StateVector(nq, amps / np.linalg.norm(amps))


@settings(max_examples=60, deadline=None)
@given(random_circuits(max_qubits=5, max_gates=20), st.integers(0, 2 ** 32 - 1))
def test_matches_dense_matrix_oracle(circuit, seed):
    state = random_state(circuit.num_qubits, seed)
    out = apply_circuit(state, circuit)
    expected = dense_circuit_unitary(circuit) @ state.amplitudes
    assert np.max(np.abs(out.amplitudes - expected)) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(random_circuits(), st.integers(0, 2 ** 32 - 1))
def test_norm_preserved_and_inverse_restores(circuit, seed):
    state = random_state(circuit.num_qubits, seed)
    out = apply_circuit(state, circuit)
    assert abs(out.norm_squared() - 1.0) <= 1e-10
    back = apply_circuit(out, circuit.inverse())
    assert np.max(np.abs(back.amplitudes - state.amplitudes)) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(random_circuits(max_qubits=8), st.integers(0, 2 ** 32 - 1))
def test_diagonal_gates_keep_probabilities(circuit, seed):
    diagonal = Circuit(circuit.num_qubits, [g for g in circuit.gates if g.is_diagonal])
    state = random_state(circuit.num_qubits, seed)
    out = apply_circuit(state, diagonal)
    assert np.max(np.abs(out.probabilities() - state.probabilities())) <= 1e-12


@settings(max_examples=30, deadline=None)
@given(gates_on(3))
def test_gate_matrices_are_unitary(gate):
    U = dense_unitary(gate, 3)
    assert np.max(np.abs(U.conj().T @ U - np.eye(8))) <= 1e-12


# ---------------------------------------------------------------------------
# measurement
# ---------------------------------------------------------------------------

def test_marginal_uniform_two_qubits():
    state = StateVector(2, np.full(4, 0.5))
    assert marginal_probability(state, 0, 1) == pytest.approx(0.5)
    assert marginal_probability(state, 1, 0) == pytest.approx(0.5)


def test_marginal_basis_state_msb():
    assert marginal_probability(new_basis_state(2, 0b10), 0, 1) == 1.0
    assert marginal_probability(new_basis_state(2, 0b10), 1, 1) == 0.0


def test_marginal_of_distribution():
    dist = OutcomeDistribution(np.eye(8)[4])
    assert marginal_probability(dist, 0, 1) == 1.0


def test_marginal_bad_qubit():
    with pytest.raises(InvalidArgumentError):
        marginal_probability(new_basis_state(2, 0), 2, 0)


def test_sample_point_mass():
    dist = OutcomeDistribution(np.eye(4)[2])
    assert set(sample(dist, 11, 500).tolist()) == {2}


def test_sample_deterministic():
    dist = OutcomeDistribution(np.full(8, 1 / 8))
    assert np.array_equal(sample(dist, 99, 1000), sample(dist, 99, 1000))


def test_sample_uniform_frequencies():
    # 4 sigma of a Bernoulli(0.25) mean over 1e5 draws is ~0.0055 < 0.01
    draws = sample(OutcomeDistribution(np.full(4, 0.25)), 2024, 100_000)
    freq = np.bincount(draws, minlength=4) / draws.size
    assert np.all(np.abs(freq - 0.25) <= 0.01)


def test_sample_count_must_be_positive():
    with pytest.raises(InvalidArgumentError):
        sample(OutcomeDistribution(np.full(2, 0.5)), 0, 0)
