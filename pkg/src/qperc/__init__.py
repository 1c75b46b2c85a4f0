"""Quantum perceptron: a perceptron's net input written into a phase and
read back by phase estimation, simulated gate by gate or in closed form."""

__version__ = "0.1.0"

from .errors import InvalidArgumentError, QPercError, ResourceLimitError
from .perceptron import (
    QuantizedWeights,
    TrainingSet,
    classical_activation,
    net_input,
    quantize_weights,
    to_phase,
    train,
    training_step,
)
from .qpe import (
    analytic_distribution,
    build_inverse_qft,
    first_bit_success_probability,
    required_tau,
)
from .qperceptron import (
    QPerceptronConfig,
    QuantumClassifier,
    build_variant_a,
    build_variant_b,
    gate_count_report,
    run,
    run_superposition,
)
from .sim import (
    Circuit,
    Gate,
    OutcomeDistribution,
    StateVector,
    apply_circuit,
    apply_gate,
    marginal_probability,
    new_basis_state,
    sample,
)
