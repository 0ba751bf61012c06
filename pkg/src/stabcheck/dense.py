"""Brute-force state-vector and density-matrix backend.

Only used to validate the exact engine at desk scale (n up to about 10);
verdicts never come from here.  Indexing matches the package convention:
qubit 0 is the most significant bit of an amplitude index.
"""

from __future__ import annotations

import functools
import math

import numpy as np

from .tableau import PauliString

TOL = 1e-9

_GATE_1Q = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2),
    "P": np.array([[1, 0], [0, 1j]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class ZeroProbabilityError(ValueError):
    """A measurement outcome with probability zero was requested."""


def zero_state(n: int) -> np.ndarray:
    state = np.zeros(1 << n, dtype=complex)
    state[0] = 1.0
    return state


def _apply_1q(state: np.ndarray, n: int, q: int, mat: np.ndarray) -> np.ndarray:
    psi = state.reshape((2,) * n)
    psi = np.tensordot(mat, psi, axes=([1], [q]))
    return np.moveaxis(psi, 0, q).reshape(-1)


def _apply_cnot(state: np.ndarray, n: int, c: int, t: int) -> np.ndarray:
    idx = np.arange(1 << n)
    cbit = (idx >> (n - 1 - c)) & 1
    return state[idx ^ (cbit << (n - 1 - t))]


def apply_gate_dense(state: np.ndarray, n: int, gate: str, *qubits: int) -> np.ndarray:
    if gate == "CNOT":
        if qubits[0] == qubits[1]:
            raise ValueError("CNOT control and target must differ")
        return _apply_cnot(state, n, *qubits)
    if gate not in _GATE_1Q:
        raise ValueError(f"unknown gate {gate!r}")
    return _apply_1q(state, n, qubits[0], _GATE_1Q[gate])


def project_z(state: np.ndarray, n: int, q: int, outcome: int) -> tuple[np.ndarray, float]:
    """Project qubit q onto |outcome> and renormalize; returns (state, prob)."""
    idx = np.arange(1 << n)
    mask = ((idx >> (n - 1 - q)) & 1) == outcome
    picked = np.where(mask, state, 0.0)
    prob = float(np.vdot(picked, picked).real)
    if prob < 1e-12:
        raise ZeroProbabilityError(f"outcome {outcome} on qubit {q} has probability zero")
    return picked / math.sqrt(prob), prob


def run_dense(n: int, trace, outcomes=(), initial_state: np.ndarray | None = None) -> tuple[np.ndarray, float]:
    """Replay a tableau trace on dense amplitudes.

    outcomes supplies one bit per ("M", q) entry, in trace order.  Returns
    the final state and the probability of the chosen branch.
    """
    if initial_state is None:
        state = zero_state(n)
    else:
        state = np.asarray(initial_state, dtype=complex).copy()
        if state.shape != (1 << n,):
            raise ValueError("initial state has the wrong dimension")
    prob = 1.0
    next_outcome = 0
    for op in trace:
        if op[0] == "M":
            if next_outcome >= len(outcomes):
                raise ValueError("outcome choices must cover every measurement")
            state, p = project_z(state, n, op[1], outcomes[next_outcome])
            prob *= p
            next_outcome += 1
        else:
            state = apply_gate_dense(state, n, op[0], *op[1:])
    if next_outcome != len(outcomes):
        raise ValueError("more outcome choices than measurements")
    return state, prob


def reduced_density(state: np.ndarray, keep) -> np.ndarray:
    """Partial trace of |state><state| keeping the given qubits, in order."""
    n = int(round(math.log2(len(state))))
    keep = list(keep)
    rest = [q for q in range(n) if q not in keep]
    psi = np.transpose(state.reshape((2,) * n), axes=keep + rest)
    block = psi.reshape(1 << len(keep), 1 << len(rest))
    return block @ block.conj().T


def density_from_branches(branches, keep) -> np.ndarray:
    """Mix per-branch pure states and trace out everything not kept.

    branches is an iterable of (probability, state); probabilities must sum
    to 1 within tolerance and all states must share one qubit count.
    """
    branches = list(branches)
    keep = list(keep)
    if not branches:
        raise ValueError("no branches supplied")
    dim = len(branches[0][1])
    total = 0.0
    acc = np.zeros((1 << len(keep), 1 << len(keep)), dtype=complex)
    for prob, state in branches:
        if len(state) != dim:
            raise ValueError("branch states disagree on qubit count")
        total += prob
        acc += prob * reduced_density(np.asarray(state, dtype=complex), keep)
    if abs(total - 1.0) > TOL:
        raise ValueError(f"branch probabilities sum to {total}, not 1")
    return acc


@functools.lru_cache(maxsize=None)
def pauli_matrix(obs: PauliString) -> np.ndarray:
    """Dense matrix of a PauliString (qubit 0 is the first kron factor)."""
    mat = np.array([[1]], dtype=complex)
    for q in range(obs.n):
        xb = (obs.x_bits >> q) & 1
        zb = (obs.z_bits >> q) & 1
        factor = np.eye(2, dtype=complex)
        if xb:
            factor = factor @ _GATE_1Q["X"]
        if zb:
            factor = factor @ _GATE_1Q["Z"]
        mat = np.kron(mat, factor)
    return (1j ** obs.phase_exp) * mat


def pauli_expect_dense(dm: np.ndarray, obs: PauliString) -> float:
    """trace(obs . dm); the imaginary part must vanish within tolerance."""
    if not obs.is_hermitian:
        raise ValueError("observable must be Hermitian")
    if dm.shape != (1 << obs.n, 1 << obs.n):
        raise ValueError("density matrix dimension mismatch")
    val = complex(np.trace(pauli_matrix(obs) @ dm))
    if abs(val.imag) >= TOL:
        raise ValueError("expectation has a non-negligible imaginary part")
    return val.real


def pauli_expect_state(state: np.ndarray, obs: PauliString) -> float:
    """<state|obs|state> for a pure state."""
    if not obs.is_hermitian:
        raise ValueError("observable must be Hermitian")
    val = complex(np.vdot(state, pauli_matrix(obs) @ state))
    if abs(val.imag) >= TOL:
        raise ValueError("expectation has a non-negligible imaginary part")
    return val.real
