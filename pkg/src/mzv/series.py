"""Truncated evaluation of (q-)MZVs, connected sums and Ohno sums.

Every summation variable runs over ``1..M`` for a single cutoff ``M``.
Each evaluator first builds the full list of partial sums ``S(0..M)``,
where ``S(N)`` is the sum with every variable cut off at ``N``; the reported
value is ``S(M)`` and the tail heuristics read off the earlier entries.

Iterated sums use the prefix-sum recursion::

    A_0(m) = 1,   A_i(m) = sum_{m' < m} A_{i-1}(m') w_i(m'),
    w_i(m) = q^((k_i - 1) m) / (([m]_q - q^m x) [m]_q^(k_i - 1)),

and the connected double sum adds ``W_L(m) W_R(n) C(m, n)`` in row-major
order, updating the connector ``C`` along each row with
``C(m, n) = C(m, n-1) q^m g(n) / g(m+n)``, ``g(h) = [h]_q - q^h x``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass, field

from .errors import ConvergenceError, DomainError
from .index import Index, compositions
from .scalar import (
    DEFAULT_PRECISION,
    Params,
    Scalar,
    q_integers,
    q_powers,
    working_context,
)
from .tail import extrapolate_limit, tail_from_partials

__all__ = [
    "EvalConfig",
    "EvalResult",
    "default_truncation",
    "eval_qmzv",
    "eval_mzv",
    "eval_connected",
    "eval_generating",
    "eval_ohno_sum",
    "connected_partial_sums",
]

# pruned float terms stay below 2^-(prec + _PRUNE_MARGIN) of the total
_PRUNE_MARGIN = 24


def default_truncation(q: Scalar, prec: int = DEFAULT_PRECISION) -> int:
    """2000 at ``q = 1`` and 200 for ``q <= 3/4``.

    In between, enough terms for ``q^M < 2^-prec`` (at most 2000).
    """
    if q == 1:
        return 2000
    if q <= Fraction(3, 4) if q.is_exact else float(q) <= 0.75:
        return 200
    qf = float(q)
    needed = math.ceil(prec * math.log(2) / -math.log(qf))
    return min(2000, max(200, needed))


@dataclass(frozen=True)
class EvalConfig:
    """Truncation and arithmetic regime.

    ``trunc=None`` picks :func:`default_truncation` from ``q``.  With
    ``exact=True`` all arithmetic is rational and ``prec`` is ignored.
    """

    trunc: int | None = None
    prec: int = DEFAULT_PRECISION
    exact: bool = False

    def __post_init__(self):
        if self.trunc is not None and self.trunc < 1:
            raise DomainError(f"truncation must be at least 1, got {self.trunc}")
        if self.prec < 53:
            raise DomainError(f"precision must be at least 53 bits, got {self.prec}")

    @property
    def regime(self) -> int | None:
        """Precision of the working regime (``None`` for exact)."""
        return None if self.exact else self.prec

    def truncation_for(self, q: Scalar) -> int:
        return self.trunc if self.trunc is not None else default_truncation(q, self.prec)


@dataclass(frozen=True)
class EvalResult:
    """A truncated series value with heuristic error information.

    ``value`` is the plain partial sum ``S(M)``.  ``limit`` is the best
    estimate of the full series: a fitted extrapolation of the partial
    sums for polynomially convergent float evaluations (when the fit is
    tighter than the tail estimate), ``value + tail_estimate`` otherwise.  ``limit_error`` is the matching heuristic
    uncertainty.
    """

    value: Scalar
    tail_estimate: Scalar
    truncation_used: int
    limit: Scalar
    limit_error: Scalar
    extrapolated: bool = False
    partials: tuple = field(default=(), repr=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "value": str(self.value),
            "tail_estimate": str(self.tail_estimate),
            "truncation_used": self.truncation_used,
            "limit": str(self.limit),
            "limit_error": str(self.limit_error),
            "extrapolated": self.extrapolated,
        }


def _finish(partials: list, prec: int | None, polynomial: bool, log_order: int) -> EvalResult:
    M = len(partials) - 1
    with working_context(prec):
        value = partials[M]
        tail = tail_from_partials(partials)
        fitted = None
        if polynomial and prec is not None:
            fitted = extrapolate_limit(partials, log_order, prec)
            # fast series: the plain tail beats the fit's own uncertainty
            if fitted is not None and not fitted[1] < abs(tail):
                fitted = None
        if fitted is None:
            limit, error = value + tail, tail
        else:
            limit, error = fitted
    return EvalResult(
        value=Scalar(value, prec),
        tail_estimate=Scalar(tail, prec),
        truncation_used=M,
        limit=Scalar(limit, prec),
        limit_error=Scalar(error, prec),
        extrapolated=fitted is not None,
        partials=tuple(partials),
    )


class _Tables:
    """Precomputed ``q^h``, ``[h]_q`` and ``g(h)`` for ``h = 0..upto``."""

    def __init__(self, q, x, upto: int):
        self.one = q**0
        self.zero = q * 0
        self.pows = q_powers(q, upto)
        self.ints = q_integers(q, upto)
        self.g = [self.ints[h] - self.pows[h] * x for h in range(upto + 1)]
        self._weights: dict[tuple[int, int], list] = {}

    def factor_weights(self, k: int, M: int) -> list:
        """``w(m)`` for one index part ``k``, ``m = 0..M`` (entry 0 unused)."""
        key = (k, M)
        if key not in self._weights:
            pows, ints, g = self.pows, self.ints, self.g
            if k == 1:
                w = [self.zero] + [1 / g[m] for m in range(1, M + 1)]
            else:
                w = [self.zero] + [
                    pows[m] ** (k - 1) / (g[m] * ints[m] ** (k - 1)) for m in range(1, M + 1)
                ]
            self._weights[key] = w
        return self._weights[key]


def _outer_weights(parts: Index, tables: _Tables, M: int) -> list:
    """``W(m) = A_{r-1}(m) w_r(m)`` for ``m = 0..M``; ``W = [1, 0, ...]`` for the empty index."""
    zero = tables.zero
    if not parts:
        return [tables.one] + [zero] * M
    prefix = None  # A_0 = 1
    for i, k in enumerate(parts):
        w = tables.factor_weights(k, M)
        if i == len(parts) - 1:
            if prefix is None:
                return [zero] + w[1:]
            return [zero] + [prefix[m] * w[m] for m in range(1, M + 1)]
        nxt = [zero] * (M + 1)
        acc = zero
        for m in range(1, M + 1):
            nxt[m] = acc
            acc = acc + (w[m] if prefix is None else prefix[m] * w[m])
        prefix = nxt
    raise AssertionError("unreachable")


def _cumulative(weights: list, start) -> list:
    out = [start]
    acc = start
    for w in weights[1:]:
        acc = acc + w
        out.append(acc)
    return out


def _double_sum_partials(WL: list, WR: list, tables: _Tables, M: int, prec: int | None) -> list:
    zero = tables.zero
    pows, g = tables.pows, tables.g
    shells = [zero] * (M + 1)
    prune = prec is not None
    if prune:
        eps = 2 ** -(prec + _PRUNE_MARGIN)
        scale = max(WR) * M
    lower = zero  # running lower bound on the total (positive terms)
    for m in range(1, M + 1):
        wl = WL[m]
        if not wl:
            continue
        qm = pows[m]
        # D = W_L(m) * C(m, n)
        D = wl
        row = zero
        threshold = eps * lower / scale if prune and lower else None
        for n in range(1, M + 1):
            D = D * qm * g[n] / g[m + n]
            wr = WR[n]
            if wr:
                t = D * wr
                if n <= m:
                    row = row + t
                else:
                    shells[n] = shells[n] + t
            if threshold is not None and D < threshold:
                break
        shells[m] = shells[m] + row
        lower = lower + row
    return _cumulative(shells, zero)


def connected_partial_sums(left, right, params: Params, M: int, prec: int | None = None) -> list:
    """Raw partial sums ``S(0..M)`` of ``Z_q(left; right; x)`` in regime ``prec``.

    No convergence check is made here.
    """
    left, right = Index(left), Index(right)
    params = params.in_regime(prec)
    with working_context(prec):
        q, x = params.q.value, params.x.value
        tables = _Tables(q, x, 2 * M if (left and right) else M)
        if not left and not right:
            return [tables.one] * (M + 1)
        WL = _outer_weights(left, tables, M)
        WR = _outer_weights(right, tables, M)
        if not right:
            return _cumulative(WL, tables.zero)
        if not left:
            return _cumulative(WR, tables.zero)
        return _double_sum_partials(WL, WR, tables, M, prec)


def _require_admissible(k: Index, what: str) -> None:
    if not k.admissible:
        raise ConvergenceError(f"{what} diverges: index ({k}) is not admissible")


def _as_q(q) -> Scalar:
    return q if isinstance(q, Scalar) else Scalar.exact(q)


def eval_qmzv(k, q, cfg: EvalConfig = EvalConfig()) -> EvalResult:
    """Truncated ``zeta_q(k)``; at ``q = 1`` the classical MZV."""
    k = Index(k)
    _require_admissible(k, "zeta_q")
    params = Params(_as_q(q), 0)
    M = cfg.truncation_for(params.q)
    partials = connected_partial_sums(k, (), params, M, cfg.regime)
    return _finish(partials, cfg.regime, params.q == 1, k.depth - 1)


def eval_mzv(k, cfg: EvalConfig = EvalConfig()) -> EvalResult:
    return eval_qmzv(k, 1, cfg)


def eval_connected(left, right, params: Params, cfg: EvalConfig = EvalConfig()) -> EvalResult:
    """Truncated connected sum ``Z_q(left; right; x)``.

    Both sides non-empty always converges; with one side empty the other
    must be admissible.  ``Z_q(();();x) = 1``.
    """
    left, right = Index(left), Index(right)
    if bool(left) != bool(right):
        _require_admissible(left or right, "one-sided connected sum")
    M = cfg.truncation_for(params.q)
    partials = connected_partial_sums(left, right, params, M, cfg.regime)
    log_order = max(left.depth + right.depth - 1, 0)
    return _finish(partials, cfg.regime, params.q == 1, log_order)


def eval_generating(k, params: Params, cfg: EvalConfig = EvalConfig()) -> EvalResult:
    """``Z_q(k; x)``, the generating series of the Ohno sums of ``k``."""
    k = Index(k)
    _require_admissible(k, "Z_q(k; x)")
    return eval_connected(k, (), params, cfg)


def eval_ohno_sum(k, c: int, q, cfg: EvalConfig = EvalConfig()) -> EvalResult:
    """``S_q(k; c)``: the sum of ``zeta_q(k + e)`` over all ``e`` with ``|e| = c``.

    The partial sums of the terms are added before the tail heuristics run.
    """
    k = Index(k)
    _require_admissible(k, "S_q(k; c)")
    if c < 0:
        raise DomainError(f"c must be non-negative, got {c}")
    params = Params(_as_q(q), 0)
    M = cfg.truncation_for(params.q)
    total = None
    for shift in compositions(c, k.depth):
        elevated = Index(a + b for a, b in zip(k, shift))
        partials = connected_partial_sums(elevated, (), params, M, cfg.regime)
        if total is None:
            total = partials
        else:
            with working_context(cfg.regime):
                total = [a + b for a, b in zip(total, partials)]
    return _finish(total, cfg.regime, params.q == 1, k.depth - 1)
