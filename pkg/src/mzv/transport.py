"""Transport moves on connected sums and duality proof traces.

A state ``(left; right)`` stands for ``Z_q(left; right; x)``.  The two
moves shift one unit of weight from the left index to the right one
without changing the value of the connected sum:

* ``A``: ``(k_1..k_r, 1; l_1..l_s) -> (k_1..k_r; l_1..l_s + 1)``, needs ``s > 0``
* ``B``: ``(k_1..k_r + 1; l_1..l_s) -> (k_1..k_r; l_1..l_s, 1)``

Starting from ``(k; ())`` and applying ``B`` whenever the left index ends
in a part ``>= 2`` (``A`` otherwise) reaches ``((); dual(k))`` after
``weight(k)`` moves.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .errors import DomainError, TelescopingError
from .index import Index
from .scalar import Params, Scalar, shifted_q_integers, q_integers, q_powers
from .series import EvalConfig, EvalResult, eval_connected

__all__ = [
    "ConnectedState",
    "TransportMove",
    "ProofTrace",
    "apply_move_A",
    "apply_move_B",
    "apply_move",
    "invert_move_A",
    "invert_move_B",
    "invert_trace",
    "prove_duality",
    "check_telescoping",
    "TelescopingResiduals",
    "verify_trace_numeric",
    "TraceReport",
]


@dataclass(frozen=True)
class ConnectedState:
    left: Index
    right: Index

    def __post_init__(self):
        object.__setattr__(self, "left", Index(self.left))
        object.__setattr__(self, "right", Index(self.right))

    def to_json(self) -> dict:
        return {"left": list(self.left), "right": list(self.right)}

    @classmethod
    def from_json(cls, data: dict) -> ConnectedState:
        return cls(Index(data["left"]), Index(data["right"]))

    def __str__(self) -> str:
        return f"({self.left or '∅'}; {self.right or '∅'})"


class TransportMove(str, Enum):
    A = "A"
    B = "B"


def apply_move_A(s: ConnectedState) -> ConnectedState:
    if not s.left or s.left[-1] != 1:
        raise DomainError(f"move A needs a left index ending in 1, got {s}")
    if not s.right:
        raise DomainError(f"move A needs a non-empty right index, got {s}")
    return ConnectedState(s.left[:-1], s.right[:-1] + (s.right[-1] + 1,))


def apply_move_B(s: ConnectedState) -> ConnectedState:
    if not s.left or s.left[-1] < 2:
        raise DomainError(f"move B needs a left index ending in a part >= 2, got {s}")
    return ConnectedState(s.left[:-1] + (s.left[-1] - 1,), s.right + (1,))


def invert_move_A(s: ConnectedState) -> ConnectedState:
    if not s.right or s.right[-1] < 2:
        raise DomainError(f"inverse of A needs a right index ending in a part >= 2, got {s}")
    return ConnectedState(s.left + (1,), s.right[:-1] + (s.right[-1] - 1,))


def invert_move_B(s: ConnectedState) -> ConnectedState:
    if not s.left or not s.right or s.right[-1] != 1:
        raise DomainError(
            f"inverse of B needs a non-empty left index and a right index ending in 1, got {s}"
        )
    return ConnectedState(s.left[:-1] + (s.left[-1] + 1,), s.right[:-1])


_FORWARD = {TransportMove.A: apply_move_A, TransportMove.B: apply_move_B}
_BACKWARD = {TransportMove.A: invert_move_A, TransportMove.B: invert_move_B}


def apply_move(s: ConnectedState, move: TransportMove | str) -> ConnectedState:
    return _FORWARD[TransportMove(move)](s)


@dataclass(frozen=True)
class ProofTrace:
    input: Index
    states: tuple[ConnectedState, ...]
    moves: tuple[TransportMove, ...]

    @property
    def dual(self) -> Index:
        return self.states[-1].right

    def validate(self) -> None:
        """Raise :class:`DomainError` unless every trace invariant holds."""
        k = Index(self.input)
        if len(self.states) != len(self.moves) + 1:
            raise DomainError("a trace needs exactly one more state than moves")
        if self.states[0] != ConnectedState(k, ()):
            raise DomainError(f"trace must start at ({k}; ∅), got {self.states[0]}")
        if len(self.moves) != k.weight:
            raise DomainError(f"trace has {len(self.moves)} moves, expected weight {k.weight}")
        for i, move in enumerate(self.moves):
            if apply_move(self.states[i], move) != self.states[i + 1]:
                raise DomainError(f"step {i}: {self.states[i]} -{move.value}-> {self.states[i + 1]} is not a legal move")
        if self.states[-1].left:
            raise DomainError(f"trace must end with an empty left index, got {self.states[-1]}")

    def to_json(self) -> dict:
        return {
            "input": list(self.input),
            "dual": list(self.dual),
            "moves": [m.value for m in self.moves],
            "states": [s.to_json() for s in self.states],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(", ", ": "))

    @classmethod
    def from_json(cls, data: dict | str) -> ProofTrace:
        if isinstance(data, str):
            data = json.loads(data)
        trace = cls(
            Index(data["input"]),
            tuple(ConnectedState.from_json(s) for s in data["states"]),
            tuple(TransportMove(m) for m in data["moves"]),
        )
        if list(trace.dual) != list(data["dual"]):
            raise DomainError("recorded dual does not match the final state")
        return trace


def prove_duality(k) -> ProofTrace:
    """Transport ``(k; ())`` to ``((); dual(k))`` and record every step."""
    k = Index(k)
    if not k.admissible:
        raise DomainError(f"index ({k}) is not admissible")
    state = ConnectedState(k, ())
    states = [state]
    moves = []
    while state.left:
        move = TransportMove.B if state.left[-1] >= 2 else TransportMove.A
        state = apply_move(state, move)
        states.append(state)
        moves.append(move)
    return ProofTrace(k, tuple(states), tuple(moves))


def invert_trace(trace: ProofTrace) -> list[ConnectedState]:
    """Walk a trace backwards with the inverse moves; returns states last-to-first."""
    state = trace.states[-1]
    out = [state]
    for move in reversed(trace.moves):
        state = _BACKWARD[move](state)
        out.append(state)
    return out


@dataclass(frozen=True)
class TelescopingResiduals:
    per_term: tuple[Fraction, ...]
    partial_sum: Fraction
    partial_sum_value: Fraction

    @property
    def ok(self) -> bool:
        return self.partial_sum == 0 and not any(self.per_term)

    @property
    def max_abs(self) -> Fraction:
        return max([abs(r) for r in self.per_term] + [abs(self.partial_sum)])


def check_telescoping(m: int, n: int, params: Params, a_max: int, strict: bool = True) -> TelescopingResiduals:
    """Exactly verify the telescoping step behind move ``A``.

    With ``T(a) = q^(an) f_q(a) f_q(n) / f_q(a+n)`` checks, for every
    ``m < a <= a_max``, ::

        T(a) / ([a]_q - q^a x) == q^n / [n]_q * (T(a-1) - T(a))

    and that the sum of the left-hand sides equals
    ``q^n / [n]_q * (T(m) - T(a_max))``.  Raises
    :class:`~mzv.errors.TelescopingError` on a nonzero residual unless
    ``strict`` is false.
    """
    if params.prec is not None:
        raise DomainError("telescoping checks run in the exact regime only")
    if m < 0 or n < 1 or a_max <= m:
        raise DomainError(f"need m >= 0, n >= 1 and a_max > m, got m={m}, n={n}, a_max={a_max}")
    q, x = params.q.value, params.x.value
    top = a_max + n
    g = shifted_q_integers(q, x, top)
    pows = q_powers(q, top)
    # f_q(h) from its definition, independently of the connector recurrence
    f = [Fraction(1)]
    for h in range(1, top + 1):
        f.append(f[-1] * g[h])

    def T(a: int) -> Fraction:
        return q ** (a * n) * f[a] * f[n] / f[a + n]

    ratio = pows[n] / q_integers(q, n)[n]
    per_term = []
    total = Fraction(0)
    for a in range(m + 1, a_max + 1):
        lhs = T(a) / g[a]
        total += lhs
        per_term.append(lhs - ratio * (T(a - 1) - T(a)))
    partial = total - ratio * (T(m) - T(a_max))
    result = TelescopingResiduals(tuple(per_term), partial, total)
    if strict and not result.ok:
        raise TelescopingError(
            f"nonzero telescoping residual {result.max_abs} at m={m}, n={n}, {params}"
        )
    return result


@dataclass(frozen=True)
class TraceReport:
    input: Index
    params: Params
    results: tuple[EvalResult, ...]
    max_deviation: Scalar
    tolerance: float
    passed: bool
    states: tuple[ConnectedState, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "input": list(self.input),
            "q": str(self.params.q),
            "x": str(self.params.x),
            "max_deviation": float(self.max_deviation),
            "tolerance": self.tolerance,
            "passed": self.passed,
            "states": [
                {**s.to_json(), **r.to_dict()} for s, r in zip(self.states, self.results)
            ],
        }


def verify_trace_numeric(
    trace: ProofTrace,
    params: Params,
    cfg: EvalConfig = EvalConfig(),
    tol: float | None = None,
) -> TraceReport:
    """Evaluate every state of a trace and compare the values.

    States are compared through their :attr:`EvalResult.limit`.  Without
    an explicit ``tol`` the tolerance is ``10^3`` times the largest
    per-state uncertainty, floored at ``2^-(prec - 16)``.
    """
    trace.validate()
    results = tuple(eval_connected(s.left, s.right, params, cfg) for s in trace.states)
    limits = [r.limit for r in results]
    deviation = max(limits) - min(limits)
    if tol is None:
        floor = 0.0 if cfg.exact else 2.0 ** -(cfg.prec - 16)
        tol = max(1e3 * max(float(r.limit_error) for r in results), floor)
    return TraceReport(
        input=trace.input,
        params=params,
        results=results,
        max_deviation=deviation,
        tolerance=tol,
        passed=float(deviation) <= tol,
        states=trace.states,
    )
