"""Acceptance suite: one test per release criterion, one PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines as they
print.  Every tolerance and time limit is pinned here; nothing is deferred
to later calibration.
"""

import io
import json
import random
import time
from contextlib import contextmanager, redirect_stderr, redirect_stdout

import numpy as np

from stabcheck import (
    builtin_identity,
    count_stabilizer_states,
    decompose,
    decompose_by_solve,
    enumerate_basis,
    expectation,
    fingerprint,
    new_zero_state,
    parse,
    pretty_print,
    recompose,
    run_dense,
    span_rank,
)
from stabcheck.basis import element_matrix
from stabcheck.cli import corpus_path, main
from stabcheck.dense import pauli_expect_state
from stabcheck.protocol import errors_of, validate

from helpers import (
    enumerate_circuit_branches,
    exact_to_numpy,
    hermitian_paulis,
    random_circuit,
    random_rational_hermitian,
)

from test_checker import superop_dense

CORPUS = [
    "teleport.qpr",
    "teleport_noX.qpr",
    "teleport_noZ.qpr",
    "identity.qpr",
    "identity_hh.qpr",
    "swap_cnot.qpr",
    "swap_wires.qpr",
]


@contextmanager
def criterion(number: int, name: str, time_limit: float | None = None):
    started = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number} ({name}): FAIL")
        raise
    elapsed = time.perf_counter() - started
    if time_limit is not None and elapsed > time_limit:
        print(f"ACCEPTANCE {number} ({name}): FAIL (took {elapsed:.2f}s, limit {time_limit}s)")
        raise AssertionError(f"criterion {number} exceeded its {time_limit}s budget: {elapsed:.2f}s")
    print(f"ACCEPTANCE {number} ({name}): PASS ({elapsed:.2f}s)")


def test_criterion_1_basis_spans_everything():
    with criterion(1, "basis existence: rank 4^n by exact elimination", time_limit=10.0):
        for n in (1, 2, 3):
            assert span_rank(n) == 4 ** n


def test_criterion_2_basis_circuits_are_correct():
    with criterion(2, "basis construction sweep", time_limit=30.0):
        for n in (1, 2, 3, 4):
            for circ in enumerate_basis(n):
                circ.prepare().assert_valid()
        for n in (1, 2, 3):
            for circ in enumerate_basis(n):
                state, _ = run_dense(n, circ.gates)
                want = exact_to_numpy(element_matrix(circ.element))
                got = np.outer(state, state.conj())
                assert np.max(np.abs(got - want)) <= 1e-9, circ.element.label()


def _run_cli(*argv: str) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


def test_criterion_3_teleport_equals_identity():
    with criterion(3, "teleport equals the identity; mutants are caught", time_limit=1.0):
        code, _, _ = _run_cli("check", str(corpus_path("teleport.qpr")), "--identity", "1")
        assert code == 0
        fp = fingerprint(parse(corpus_path("teleport.qpr").read_text()))
        assert fp == fingerprint(builtin_identity(1))
        assert len(fp.table) == 4 and len(fp.table[0]) == 4

        for mutant in ("teleport_noX.qpr", "teleport_noZ.qpr"):
            code, out, _ = _run_cli("check", str(corpus_path(mutant)), "--identity", "1", "--json")
            assert code == 1
            report = json.loads(out)
            family = report["counterexample"]["basis"].split(":")[0]
            assert family in ("plus", "iplus"), mutant


def test_criterion_4_census_versus_basis():
    with criterion(4, "stabilizer census by orbit enumeration"):
        counts = {n: count_stabilizer_states(n) for n in (1, 2, 3)}
        assert counts == {1: 6, 2: 60, 3: 1080}
        for n in (2, 3):
            assert 4 ** n < counts[n]


def test_criterion_5_simulator_matches_oracle():
    with criterion(5, "1000 random circuits against the dense oracle", time_limit=60.0):
        rng = random.Random(2024)
        observables = {n: hermitian_paulis(n) for n in (1, 2, 3)}
        for _ in range(1000):
            n = rng.randint(1, 3)
            ops = random_circuit(rng, n, rng.randint(1, 40), rng.randint(0, 3))
            branches = enumerate_circuit_branches(new_zero_state(n), ops)
            assert sum(p for _, p, _ in branches) == 1
            for t, prob, outcomes in branches:
                state, dense_prob = run_dense(n, t.trace, outcomes=outcomes)
                assert abs(dense_prob - float(prob)) < 1e-9
                for obs in observables[n]:
                    assert abs(pauli_expect_state(state, obs) - expectation(t, obs)) < 1e-9


def test_criterion_6_decomposition_is_exact():
    with criterion(6, "analytic decomposition equals solver and re-sums"):
        assert decompose([[0, 1], [1, 0]]) == [-1, -1, 2, 0]
        assert decompose([[0, -1j], [1j, 0]]) == [-1, -1, 0, 2]
        rng = random.Random(99)
        for trial in range(100):
            n = 1 if trial % 2 else 2
            m = random_rational_hermitian(rng, 1 << n)
            coeffs = decompose(m)
            assert coeffs == decompose_by_solve(m)
            assert recompose(coeffs, n) == m


def test_criterion_7_protocols_are_linear():
    with criterion(7, "superoperator linearity on mixed inputs"):
        rng = random.Random(365)
        one_wire = [name for name in CORPUS if parse(corpus_path(name).read_text()).n_in == 1]
        assert len(one_wire) == 5
        for name in one_wire:
            ast = parse(corpus_path(name).read_text())
            base_outputs = [
                superop_dense(ast, exact_to_numpy(element_matrix(circ.element)))
                for circ in enumerate_basis(1)
            ]
            for _ in range(100):
                m = random_rational_hermitian(rng, 2)
                coeffs = decompose(m)
                lhs = superop_dense(ast, exact_to_numpy(m))
                rhs = sum(float(c) * out for c, out in zip(coeffs, base_outputs))
                assert np.max(np.abs(lhs - rhs)) < 1e-9, name


def test_criterion_8_parser_round_trips_and_diagnoses():
    with criterion(8, "parser round-trips; diagnostics carry spans"):
        for name in CORPUS:
            source = corpus_path(name).read_text()
            ast = parse(source)
            assert errors_of(validate(ast)) == []
            assert parse(pretty_print(ast)) == ast

        import tempfile
        from pathlib import Path

        with tempfile.TemporaryDirectory() as tmp:
            non_clifford = Path(tmp) / "t_gate.qpr"
            non_clifford.write_text("protocol p { qubit a: input; T a; output a; }")
            code, _, err = _run_cli("check", str(non_clifford), "--identity", "1")
            assert code == 2
            assert "Clifford" in err and ":1:" in err

            malformed = Path(tmp) / "broken.qpr"
            malformed.write_text("protocol p { qubit a input; output a; }")
            code, _, err = _run_cli("check", str(malformed), "--identity", "1")
            assert code == 2
            assert ":1:" in err
