import json
from fractions import Fraction as F

import pytest

from mzv.errors import DomainError, TelescopingError
from mzv.index import dual, enumerate_admissible
from mzv.scalar import Params
from mzv.series import EvalConfig
from mzv.transport import (
    ConnectedState,
    ProofTrace,
    TransportMove,
    apply_move_A,
    apply_move_B,
    check_telescoping,
    invert_move_A,
    invert_move_B,
    invert_trace,
    prove_duality,
    verify_trace_numeric,
)

S = ConnectedState
A, B = TransportMove.A, TransportMove.B


def sweep(max_weight=12):
    for w in range(2, max_weight + 1):
        yield from enumerate_admissible(w)


@pytest.mark.parametrize(
    "before, after",
    [(S((1, 1), (1,)), S((1,), (2,))), (S((1,), (2,)), S((), (3,))), (S((2, 1), (5,)), S((2,), (6,)))],
)
def test_move_A(before, after):
    assert apply_move_A(before) == after
    assert invert_move_A(after) == before


@pytest.mark.parametrize(
    "before, after",
    [(S((1, 2), ()), S((1, 1), (1,))), (S((3,), ()), S((2,), (1,))), (S((2,), (1,)), S((1,), (1, 1)))],
)
def test_move_B(before, after):
    assert apply_move_B(before) == after
    assert invert_move_B(after) == before


@pytest.mark.parametrize("state", [S((1,), ()), S((2,), (1,)), S((), (1,))])
def test_move_A_preconditions(state):
    with pytest.raises(DomainError):
        apply_move_A(state)


@pytest.mark.parametrize("state", [S((1,), ()), S((), (2,)), S((2, 1), (1,))])
def test_move_B_preconditions(state):
    with pytest.raises(DomainError):
        apply_move_B(state)


@pytest.mark.parametrize(
    "k, states, moves",
    [
        ((1, 2), [S((1, 2), ()), S((1, 1), (1,)), S((1,), (2,)), S((), (3,))], [B, A, A]),
        ((2,), [S((2,), ()), S((1,), (1,)), S((), (2,))], [B, A]),
        ((3,), [S((3,), ()), S((2,), (1,)), S((1,), (1, 1)), S((), (1, 2))], [B, B, A]),
    ],
)
def test_prove_duality_examples(k, states, moves):
    trace = prove_duality(k)
    assert list(trace.states) == states
    assert list(trace.moves) == moves
    trace.validate()


def test_prove_duality_rejects_non_admissible():
    for k in [(), (1,), (2, 1)]:
        with pytest.raises(DomainError):
            prove_duality(k)


def test_trace_sweep_against_run_decomposition():
    for k in sweep():
        trace = prove_duality(k)
        trace.validate()
        assert len(trace.moves) == k.weight
        assert len(trace.states) == k.weight + 1
        assert trace.states[-1] == S((), dual(k))
        assert trace.moves[0] is B


def test_strategy_never_strands_a_trailing_one():
    # move A is only ever needed with a non-empty right side
    for k in sweep(10):
        for state, move in zip(prove_duality(k).states, prove_duality(k).moves):
            if move is A:
                assert state.right


def test_inverse_trace_reproduces_forward():
    for k in sweep(10):
        trace = prove_duality(k)
        assert invert_trace(trace) == list(reversed(trace.states))


def test_trace_json_schema_and_round_trip():
    trace = prove_duality((1, 2))
    data = json.loads(trace.dumps())
    assert list(data) == ["input", "dual", "moves", "states"]
    assert data == {
        "input": [1, 2],
        "dual": [3],
        "moves": ["B", "A", "A"],
        "states": [
            {"left": [1, 2], "right": []},
            {"left": [1, 1], "right": [1]},
            {"left": [1], "right": [2]},
            {"left": [], "right": [3]},
        ],
    }
    assert ProofTrace.from_json(trace.dumps()) == trace


def test_corrupt_trace_detected():
    trace = prove_duality((1, 2))
    bad = ProofTrace(trace.input, trace.states, (B, B, A))
    with pytest.raises(DomainError):
        bad.validate()
    data = trace.to_json()
    data["dual"] = [2, 1]
    with pytest.raises(DomainError):
        ProofTrace.from_json(data)


def test_telescoping_euler_case():
    res = check_telescoping(0, 1, Params(1, 0), 100)
    # sum 1/(a(a+1)) for a = 1..100
    assert res.partial_sum_value == F(100, 101)
    assert res.ok


def test_telescoping_smallest_case_by_hand():
    res = check_telescoping(0, 1, Params(1, 0), 1)
    assert res.partial_sum_value == F(1, 2)
    assert res.per_term == (0,)


def test_telescoping_generic_point():
    res = check_telescoping(2, 3, Params(F(1, 2), F(1, 3)), 20)
    assert len(res.per_term) == 18
    assert res.ok and res.max_abs == 0


def test_telescoping_domain():
    with pytest.raises(DomainError):
        check_telescoping(3, 1, Params(1, 0), 3)
    with pytest.raises(DomainError):
        check_telescoping(0, 0, Params(1, 0), 3)
    with pytest.raises(DomainError):
        check_telescoping(0, 1, Params(1, 0).to_real(), 3)


def test_telescoping_strict_raises_on_bug(monkeypatch):
    import mzv.transport as tr

    real = tr.q_integers
    monkeypatch.setattr(tr, "q_integers", lambda q, n: [v + 1 for v in real(q, n)])
    with pytest.raises(TelescopingError):
        check_telescoping(0, 2, Params(F(1, 2), 0), 5)
    assert not check_telescoping(0, 2, Params(F(1, 2), 0), 5, strict=False).ok


def test_verify_trace_examples():
    r = verify_trace_numeric(prove_duality((1, 2)), Params(1, 0), EvalConfig(trunc=2000))
    assert r.passed and float(r.max_deviation) < 1e-6
    r = verify_trace_numeric(prove_duality((2,)), Params(F(1, 2), 0), EvalConfig(trunc=200))
    assert r.passed and float(r.max_deviation) < 1e-20
    r = verify_trace_numeric(prove_duality((1, 2)), Params(1, F(1, 4)))
    assert r.passed and float(r.max_deviation) < 1e-4
    assert len(r.to_json()["states"]) == 4


def test_verify_trace_reports_failure_with_tight_tolerance():
    r = verify_trace_numeric(
        prove_duality((1, 2)), Params(1, 0), EvalConfig(trunc=100), tol=0.0
    )
    assert not r.passed


def test_sum_formula_chain_states():
    # ({1}^(r-1), 2; ∅) -> ({1}^r; 1) -> ... -> ({1}^(r-j); j+1) -> ... -> (∅; r+1)
    for r in range(1, 7):
        states = prove_duality((1,) * (r - 1) + (2,)).states
        assert states[0] == S((1,) * (r - 1) + (2,), ())
        for j in range(r + 1):
            assert states[j + 1] == S((1,) * (r - j), (j + 1,))


@pytest.mark.parametrize(
    "q, x, trunc",
    [(1, 0, 600), (F(1, 2), 0, 200), (1, F(1, 4), 600), (F(1, 2), F(-1, 2), 200)],
)
def test_numeric_invariance_up_to_weight_6(q, x, trunc):
    params = Params(q, x)
    failures = []
    for k in sweep(6):
        report = verify_trace_numeric(prove_duality(k), params, EvalConfig(trunc=trunc))
        if not report.passed:
            failures.append((k, float(report.max_deviation), report.tolerance))
    assert not failures
