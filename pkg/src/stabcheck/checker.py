"""Superoperator equality by exact fingerprinting over the stabilizer basis.

A protocol is run once per basis input.  Measurements fork the run into
branches of exact dyadic probability; discarded wires are handled by giving
output observables identity support everywhere else, so no density matrix is
ever built on the exact path.  Two protocols are equivalent exactly when
their fingerprint tables match entry for entry.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import dense
from .basis import BASIS_ORDER_TAG, BasisCircuit, BasisElement, enumerate_basis
from .protocol import (
    GateStmt,
    IfGateStmt,
    MeasureStmt,
    ProtocolAST,
    errors_of,
    validate,
)
from .tableau import PauliString, Tableau, apply_gate, expectation, measure_z, new_zero_state

DEFAULT_BUDGET = 4 ** 10

_LETTERS = "IXYZ"


class ArityMismatchError(ValueError):
    """The two protocols differ in input or output arity."""


class BudgetExceededError(ValueError):
    def __init__(self, work: int, budget: int):
        super().__init__(f"fingerprint needs {work} exact entries, over the budget of {budget}")
        self.work = work
        self.budget = budget


@dataclass(frozen=True)
class BranchOutcome:
    probability: Fraction
    state: Tableau
    outcomes: tuple[int, ...]
    cbits: dict[str, int]


@dataclass(frozen=True)
class SuperopFingerprint:
    n_in: int
    n_out: int
    basis_order: str
    table: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class Counterexample:
    basis_element: BasisElement
    observable: PauliString  # on the output wires only
    value_lhs: Fraction
    value_rhs: Fraction


@dataclass(frozen=True)
class Verdict:
    equivalent: bool
    counterexample: Counterexample | None = None


def _require_valid(ast: ProtocolAST) -> None:
    errs = errors_of(validate(ast))
    if errs:
        listing = "; ".join(d.message for d in errs)
        raise ValueError(f"protocol {ast.name!r} failed validation: {listing}")


def _wire_positions(ast: ProtocolAST) -> dict[str, int]:
    return {q.name: i for i, q in enumerate(ast.qubits)}


def run_protocol(ast: ProtocolAST, input_prep: BasisCircuit) -> list[BranchOutcome]:
    """Execute on one basis input, forking every random measurement.

    Branches come back depth first with outcome 0 explored before 1, so the
    order is deterministic.  Probabilities are exact powers of 1/2 and sum
    to exactly 1.
    """
    _require_valid(ast)
    positions = _wire_positions(ast)
    input_positions = [positions[name] for name in ast.input_names]
    if input_prep.element.n != len(input_positions):
        raise ValueError(
            f"input preparation is for {input_prep.element.n} qubit(s), protocol takes {len(input_positions)}"
        )

    t = new_zero_state(len(ast.qubits))
    for op in input_prep.gates:
        apply_gate(t, op[0], *(input_positions[q] for q in op[1:]))

    body = ast.body
    branches: list[BranchOutcome] = []

    def walk(state: Tableau, index: int, halvings: int, outcomes: tuple[int, ...], env: dict[str, int]) -> None:
        for i in range(index, len(body)):
            stmt = body[i]
            if isinstance(stmt, GateStmt):
                apply_gate(state, stmt.gate, *(positions[a.name] for a in stmt.args))
            elif isinstance(stmt, IfGateStmt):
                if env[stmt.cbit.name]:
                    apply_gate(state, stmt.gate, *(positions[a.name] for a in stmt.args))
            else:
                resolution, collapse = measure_z(state, positions[stmt.qubit.name])
                if resolution.deterministic:
                    bit = resolution.outcome
                    state = collapse(bit)
                    outcomes = outcomes + (bit,)
                    env = {**env, stmt.cbit.name: bit}
                else:
                    for bit in (0, 1):
                        walk(collapse(bit), i + 1, halvings + 1, outcomes + (bit,), {**env, stmt.cbit.name: bit})
                    return
        branches.append(BranchOutcome(Fraction(1, 2 ** halvings), state, outcomes, env))

    walk(t, 0, 0, (), {})
    return branches


def output_observable(ast: ProtocolAST, pauli_index: int, n_total: int, positions: dict[str, int]) -> PauliString:
    """Lift output-Pauli number pauli_index onto the full wire set."""
    n_out = ast.n_out
    x = z = phase = 0
    for j, out in enumerate(ast.outputs):
        digit = (pauli_index // 4 ** (n_out - 1 - j)) % 4
        letter = _LETTERS[digit]
        if letter == "I":
            continue
        pos = positions[out.name]
        xb = 1 if letter in ("X", "Y") else 0
        zb = 1 if letter in ("Z", "Y") else 0
        x |= xb << pos
        z |= zb << pos
        phase += xb & zb
    return PauliString(n_total, x, z, phase % 4)


def local_observable(n_out: int, pauli_index: int) -> PauliString:
    """The same Pauli expressed on the output wires alone."""
    x = z = phase = 0
    for j in range(n_out):
        digit = (pauli_index // 4 ** (n_out - 1 - j)) % 4
        letter = _LETTERS[digit]
        xb = 1 if letter in ("X", "Y") else 0
        zb = 1 if letter in ("Z", "Y") else 0
        x |= xb << j
        z |= zb << j
        phase += xb & zb
    return PauliString(n_out, x, z, phase % 4)


def fingerprint(ast: ProtocolAST, budget: int | None = DEFAULT_BUDGET, jobs: int = 1) -> SuperopFingerprint:
    """Exact table of output-Pauli expectations for every basis input."""
    _require_valid(ast)
    n_in, n_out = ast.n_in, ast.n_out
    work = 4 ** n_in * 4 ** n_out
    if budget is not None and work > budget:
        raise BudgetExceededError(work, budget)

    positions = _wire_positions(ast)
    n_total = len(ast.qubits)
    observables = [output_observable(ast, q, n_total, positions) for q in range(4 ** n_out)]
    circuits = enumerate_basis(n_in)

    def row(circ: BasisCircuit) -> tuple[Fraction, ...]:
        branches = run_protocol(ast, circ)
        entries = []
        for obs in observables:
            total = Fraction(0)
            for br in branches:
                total += br.probability * expectation(br.state, obs)
            entries.append(total)
        return tuple(entries)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            table = tuple(pool.map(row, circuits))
    else:
        table = tuple(row(c) for c in circuits)
    return SuperopFingerprint(n_in, n_out, BASIS_ORDER_TAG, table)


def check_equivalence(
    lhs: ProtocolAST,
    rhs: ProtocolAST,
    budget: int | None = DEFAULT_BUDGET,
    jobs: int = 1,
) -> Verdict:
    """Compare two protocols entry for entry; exact, no tolerance anywhere."""
    if lhs.n_in != rhs.n_in or lhs.n_out != rhs.n_out:
        raise ArityMismatchError(
            f"arity mismatch: {lhs.name} is {lhs.n_in}->{lhs.n_out}, {rhs.name} is {rhs.n_in}->{rhs.n_out}"
        )
    fp_l = fingerprint(lhs, budget=budget, jobs=jobs)
    fp_r = fingerprint(rhs, budget=budget, jobs=jobs)
    if fp_l == fp_r:
        return Verdict(True)
    elements = [c.element for c in enumerate_basis(lhs.n_in)]
    for k, (row_l, row_r) in enumerate(zip(fp_l.table, fp_r.table)):
        for q, (a, b) in enumerate(zip(row_l, row_r)):
            if a != b:
                return Verdict(False, Counterexample(elements[k], local_observable(lhs.n_out, q), a, b))
    raise AssertionError("fingerprints differ but no entry does")


# ---------------------------------------------------------------------------
# Dense cross-checks.  These mirror the exact pipeline with floating point
# and arbitrary input states; they validate, never decide.


def run_protocol_dense(ast: ProtocolAST, input_state: np.ndarray) -> list[tuple[float, np.ndarray]]:
    """Branch-complete dense execution from an arbitrary input-wire state."""
    _require_valid(ast)
    positions = _wire_positions(ast)
    input_positions = [positions[name] for name in ast.input_names]
    n_total = len(ast.qubits)
    n_in = len(input_positions)
    input_state = np.asarray(input_state, dtype=complex)
    if input_state.shape != (1 << n_in,):
        raise ValueError("input state dimension does not match the input arity")

    full = np.zeros(1 << n_total, dtype=complex)
    for part in range(1 << n_in):
        idx = 0
        for j, pos in enumerate(input_positions):
            if (part >> (n_in - 1 - j)) & 1:
                idx |= 1 << (n_total - 1 - pos)
        full[idx] = input_state[part]

    results: list[tuple[float, np.ndarray]] = []

    def walk(state: np.ndarray, index: int, prob: float, env: dict[str, int]) -> None:
        for i in range(index, len(ast.body)):
            stmt = ast.body[i]
            if isinstance(stmt, GateStmt):
                state = dense.apply_gate_dense(state, n_total, stmt.gate, *(positions[a.name] for a in stmt.args))
            elif isinstance(stmt, IfGateStmt):
                if env[stmt.cbit.name]:
                    state = dense.apply_gate_dense(state, n_total, stmt.gate, *(positions[a.name] for a in stmt.args))
            else:
                q = positions[stmt.qubit.name]
                for bit in (0, 1):
                    try:
                        nxt, p = dense.project_z(state, n_total, q, bit)
                    except dense.ZeroProbabilityError:
                        continue
                    walk(nxt, i + 1, prob * p, {**env, stmt.cbit.name: bit})
                return
        results.append((prob, state))

    walk(full, 0, 1.0, {})
    return results


def fingerprint_dense(ast: ProtocolAST) -> np.ndarray:
    """Floating-point fingerprint via full density matrices; oracle only."""
    _require_valid(ast)
    positions = _wire_positions(ast)
    output_positions = [positions[o.name] for o in ast.outputs]
    n_in, n_out = ast.n_in, ast.n_out
    table = np.zeros((4 ** n_in, 4 ** n_out))
    for k, circ in enumerate(enumerate_basis(n_in)):
        prep, _ = dense.run_dense(n_in, circ.gates)
        branches = run_protocol_dense(ast, prep)
        rho = dense.density_from_branches(branches, output_positions)
        for q in range(4 ** n_out):
            table[k, q] = dense.pauli_expect_dense(rho, local_observable(n_out, q))
    return table
