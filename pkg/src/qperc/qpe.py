"""Phase estimation on a tau-qubit register.

Conventions: the register holds ``sum_j e^{2 pi i j phi} |j>`` before the
inverse Fourier transform, with qubit 0 the most significant digit of ``j``.
Reading ``j`` gives the estimate ``theta = j / 2^tau``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InvalidArgumentError, ResourceLimitError
from .sim import Circuit, OutcomeDistribution, StateVector, cphase_diag, hadamard, swap

MAX_TAU = 62
MAX_MATERIALIZED_TAU = 24


def _check_tau(tau: int, upper: int = MAX_TAU):
    if int(tau) != tau or not 1 <= tau <= upper:
        raise InvalidArgumentError(f"tau must be an integer in [1, {upper}], got {tau!r}")


def _check_phi(phi: float):
    if not 0.0 <= phi < 1.0:
        raise InvalidArgumentError(f"phase must lie in [0, 1), got {phi!r}")


def inverse_qft_gates(tau: int, offset: int = 0) -> list:
    """Gates of QFT^-1 on qubits ``offset .. offset + tau - 1``.

    Swaps come first (undoing the bit reversal), then for each qubit from the
    least significant up: the controlled rotations back from lower digits and
    a Hadamard.
    """
    gates = [swap(offset + q, offset + tau - 1 - q) for q in range(tau // 2)]
    for q in range(tau - 1, -1, -1):
        for r in range(tau - 1, q, -1):
            turns = -1.0 / 2 ** (r - q + 1)
            gates.append(cphase_diag(offset + q, offset + r, (0.0, 0.0, 0.0, turns)))
        gates.append(hadamard(offset + q))
    return gates


def build_inverse_qft(tau: int) -> Circuit:
    _check_tau(tau, MAX_MATERIALIZED_TAU)
    return Circuit(tau, inverse_qft_gates(tau))


def qft_elementary_count(tau: int) -> int:
    """Elementary gates the inverse QFT above emits (a swap costs three)."""
    return tau * (tau + 1) // 2 + 3 * (tau // 2)


def fourier_state(phi: float, tau: int) -> StateVector:
    """The register state ``2^{-tau/2} sum_j e^{2 pi i j phi} |j>``."""
    _check_tau(tau, MAX_MATERIALIZED_TAU)
    j = np.arange(1 << tau)
    return StateVector(tau, np.exp(2j * np.pi * j * phi) / math.sqrt(1 << tau))


def analytic_distribution(phi: float, tau: int) -> OutcomeDistribution:
    """Exact outcome law of phase estimation for phase ``phi`` on ``tau`` qubits."""
    _check_phi(phi)
    _check_tau(tau)
    if tau > MAX_MATERIALIZED_TAU:
        raise ResourceLimitError(
            f"materializing 2^{tau} outcomes exceeds the tau <= {MAX_MATERIALIZED_TAU} limit;"
            " use first_bit_success_probability for large registers"
        )
    return OutcomeDistribution(kernels.outcome_probs(phi, tau))


def first_bit_success_probability(phi: float, tau: int) -> float:
    """Probability that the leading digit agrees with ``phi >= 1/2``.

    Works for any tau up to 62 without materializing the distribution.
    """
    _check_phi(phi)
    _check_tau(tau)
    return float(kernels.first_bit_success_batch(np.array([phi]), tau)[0])


def first_bit_success_batch(phis, tau: int) -> np.ndarray:
    phis = np.asarray(phis, dtype=np.float64)
    if phis.size and (phis.min() < 0.0 or phis.max() >= 1.0):
        raise InvalidArgumentError("phases must lie in [0, 1)")
    _check_tau(tau)
    return kernels.first_bit_success_batch(phis, tau)


def required_tau(m: int, epsilon: float) -> int:
    """Register size giving ``m`` correct bits with probability ``1 - epsilon``."""
    if int(m) != m or m < 1:
        raise InvalidArgumentError("m must be an integer >= 1")
    if not 0.0 < epsilon < 1.0:
        raise InvalidArgumentError("epsilon must lie in (0, 1)")
    bound = 2.0 + 1.0 / (2.0 * epsilon)
    extra = math.ceil(math.log2(bound))
    # guard log2 rounding at exact powers of two
    while 2.0 ** extra < bound:
        extra += 1
    while extra > 0 and 2.0 ** (extra - 1) >= bound:
        extra -= 1
    return int(m) + extra


@dataclass(frozen=True)
class SuccessSummary:
    tau: int
    average: float
    worst: float
    worst_phi: float


def success_summary(tau: int, grid_points: int = 1 << 14) -> SuccessSummary:
    """First-digit success averaged over a uniform phase, and its grid minimum.

    The grid uses bin midpoints, so the average is a midpoint-rule integral.
    """
    _check_tau(tau)
    phis = (np.arange(grid_points) + 0.5) / grid_points
    success = kernels.first_bit_success_batch(phis, tau)
    i = int(np.argmin(success))
    return SuccessSummary(tau, float(success.mean()), float(success[i]), float(phis[i]))


@dataclass(frozen=True)
class PhaseEstimate:
    phi: float
    tau: int
    distribution: OutcomeDistribution

    def theta_of(self, j: int) -> float:
        return j / (1 << self.tau)

    def first_bit_success(self) -> float:
        half = 1 << (self.tau - 1)
        p = self.distribution.probabilities
        return float(p[half:].sum() if self.phi >= 0.5 else p[:half].sum())


def estimate(phi: float, tau: int) -> PhaseEstimate:
    return PhaseEstimate(phi, tau, analytic_distribution(phi, tau))
