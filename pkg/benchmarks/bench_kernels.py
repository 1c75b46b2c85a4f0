"""Time the numba and numpy kernel backends side by side.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--qubits 20]

Each row is the best of ``--repeat`` runs after one warm-up call (which also
triggers compilation for the numba backend).
"""
import argparse
import time

import numpy as np

from qperc import kernels
from qperc.qpe import inverse_qft_gates
from qperc.qperceptron import _oracle_a_gates
from qperc.sim import Circuit, StateVector, apply_circuit


def best_of(func, repeat):
    func()
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        func()
        times.append(time.perf_counter() - start)
    return min(times)


def state(nq, seed=0):
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=1 << nq) + 1j * rng.normal(size=1 << nq)
    return amps / np.linalg.norm(amps)


def cases(nq):
    amps = state(nq)
    cmask = 1 << (nq - 1)
    shifts = np.array([3, 0], dtype=np.int64)
    factors = np.exp(2j * np.pi * np.array([0.0, 0.1, 0.2, 0.3]))
    phis = np.random.default_rng(1).uniform(0, 1, 100_000)
    yield f"hadamard ({nq} qubits)", lambda impl: impl("hadamard")(amps, nq // 2)
    yield f"controlled diagonal ({nq} qubits)", lambda impl: impl("diagonal")(amps, cmask, shifts, factors)
    yield f"swap ({nq} qubits)", lambda impl: impl("swap")(amps, 1, nq - 2)
    yield "outcome law (tau=20)", lambda impl: impl("outcome_probs")(0.3, 20, np.empty(1 << 20))
    for tau in (8, 16, 40):
        out = np.empty(phis.size)
        yield f"first-digit success, 1e5 phases (tau={tau})", \
            lambda impl, tau=tau, out=out: impl("first_bit_success")(phis, tau, out)


def circuit_case(backend, nq, repeat):
    tau = nq // 2
    n = nq - tau
    circuit = Circuit(nq, _oracle_a_gates(np.full(n, 0.3), tau) + inverse_qft_gates(tau))
    start_state = StateVector(nq, state(nq, 2))
    previous = kernels.set_backend(backend)
    try:
        return best_of(lambda: apply_circuit(start_state, circuit), repeat), len(circuit.gates)
    finally:
        kernels.set_backend(previous)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--qubits", type=int, default=20)
    args = parser.parse_args()

    print(f"{'kernel':46s} {'numba [ms]':>11s} {'numpy [ms]':>11s} {'speedup':>8s}")
    for label, call in cases(args.qubits):
        t_nb = best_of(lambda: call(lambda name: kernels.implementation(name, "numba")), args.repeat)
        t_np = best_of(lambda: call(lambda name: kernels.implementation(name, "numpy")), args.repeat)
        print(f"{label:46s} {1e3 * t_nb:11.2f} {1e3 * t_np:11.2f} {t_np / t_nb:8.2f}")
    t_nb, count = circuit_case("numba", args.qubits, args.repeat)
    t_np, _ = circuit_case("numpy", args.qubits, args.repeat)
    label = f"variant-A circuit, {count} gates ({args.qubits} qubits)"
    print(f"{label:46s} {1e3 * t_nb:11.2f} {1e3 * t_np:11.2f} {t_np / t_nb:8.2f}")


if __name__ == "__main__":
    main()
