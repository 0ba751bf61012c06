"""Shared test utilities: random circuits, branch walkers, exact matrices."""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from stabcheck import PauliString, apply_gate, measure_z
from stabcheck.basis import ExactComplex

GATE_POOL = ("H", "P", "X", "Y", "Z", "CNOT")


def random_circuit(rng: random.Random, n: int, n_gates: int, n_measurements: int = 0) -> list[tuple]:
    """A random Clifford op list, measurements sprinkled at random positions."""
    ops: list[tuple] = []
    for _ in range(n_gates):
        gate = rng.choice(GATE_POOL)
        if gate == "CNOT":
            if n < 2:
                gate = rng.choice(("H", "P", "X", "Y", "Z"))
                ops.append((gate, rng.randrange(n)))
                continue
            c, t = rng.sample(range(n), 2)
            ops.append(("CNOT", c, t))
        else:
            ops.append((gate, rng.randrange(n)))
    for _ in range(n_measurements):
        pos = rng.randrange(len(ops) + 1)
        ops.insert(pos, ("M", rng.randrange(n)))
    return ops


def enumerate_circuit_branches(tableau, ops):
    """Run a raw op list, forking random measurements; returns a list of
    (tableau, probability Fraction, outcome bits)."""
    branches = []

    def walk(t, index, halvings, outcomes):
        for i in range(index, len(ops)):
            op = ops[i]
            if op[0] == "M":
                resolution, collapse = measure_z(t, op[1])
                if resolution.deterministic:
                    t = collapse(resolution.outcome)
                    outcomes = outcomes + (resolution.outcome,)
                else:
                    for bit in (0, 1):
                        walk(collapse(bit), i + 1, halvings + 1, outcomes + (bit,))
                    return
            else:
                apply_gate(t, op[0], *op[1:])
        branches.append((t, Fraction(1, 2 ** halvings), outcomes))

    walk(tableau, 0, 0, ())
    return branches


def hermitian_paulis(n: int) -> list[PauliString]:
    """All 4^n sign-positive Hermitian Paulis on n qubits."""
    out = []
    for x in range(1 << n):
        for z in range(1 << n):
            out.append(PauliString(n, x, z, (x & z).bit_count() % 4))
    return out


def states_equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    return abs(abs(np.vdot(a, b)) - 1.0) < tol


def random_rational_hermitian(rng: random.Random, dim: int) -> list[list[ExactComplex]]:
    """Hermitian matrix with small dyadic-rational entries (not PSD)."""
    def frac() -> Fraction:
        return Fraction(rng.randint(-8, 8), rng.choice((1, 2, 4)))

    m = [[ExactComplex() for _ in range(dim)] for _ in range(dim)]
    for i in range(dim):
        m[i][i] = ExactComplex(frac())
        for j in range(i + 1, dim):
            entry = ExactComplex(frac(), frac())
            m[i][j] = entry
            m[j][i] = entry.conjugate()
    return m


def exact_to_numpy(matrix) -> np.ndarray:
    return np.array([[v.to_complex() for v in row] for row in matrix])
