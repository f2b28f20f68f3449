"""Truncation-error heuristics for positive-term partial sums.

Two tools live here:

* :func:`estimate_tail` guesses the size of the neglected tail from the
  partial sums at ``M/8, M/4, M/2, M``.
* :func:`extrapolate_limit` fits the partial sums ``S(N)`` on
  ``[M/8, M]`` to ``L + sum c_ij (log N)^j / N^i`` and returns the fitted
  ``L``.  This is only meaningful for polynomially convergent series
  (``q = 1``); geometric series are already converged at the default
  truncation.

Neither result is a rigorous bound.
"""

from __future__ import annotations

from collections.abc import Sequence

import gmpy2
from gmpy2 import mpfr

from .scalar import working_context

__all__ = ["estimate_tail", "tail_from_partials", "extrapolate_limit", "MIN_FIT_TRUNCATION"]

MIN_FIT_TRUNCATION = 64
_FIT_POINTS = 48
_FIT_SPAN = 8
_POWER_ORDER = 4


def estimate_tail(s_quarter, s_half, s_full, M: int, s_eighth=None):
    """Heuristic size of ``S(inf) - S(M)`` from block differences.

    With ``d = S(M) - S(M/2)`` and ``rho = d / (S(M/2) - S(M/4))``:

    * geometric decay (``rho`` much smaller than the previous block ratio,
      which needs ``s_eighth``): ``d * rho^2 / (1 - rho^2)``, an upper
      bound for an exactly geometric series;
    * otherwise if ``rho < 1``: ``d * rho / (1 - rho)``, exact for tails
      decaying like a power of ``M``;
    * otherwise ``d * M``.

    Works on raw numbers and on :class:`~mzv.scalar.Scalar` alike.
    """
    d = s_full - s_half
    if d == 0:
        return d
    prev = s_half - s_quarter
    if not prev > 0 or not d < prev:
        return d * M
    rho = d / prev
    if s_eighth is not None:
        prev0 = s_quarter - s_eighth
        if prev0 > 0 and prev < prev0:
            rho0 = prev / prev0
            # power laws keep rho ~ rho0; geometric decay squares it
            if float(rho) <= float(rho0) ** 1.5:
                return d * rho * rho / (1 - rho * rho)
    return d * rho / (1 - rho)


def tail_from_partials(partials: Sequence):
    """:func:`estimate_tail` applied to a full list ``S(0..M)``."""
    M = len(partials) - 1
    return estimate_tail(
        partials[M // 4], partials[M // 2], partials[M], M, s_eighth=partials[M // 8]
    )


def _sample_points(M: int) -> list[int]:
    lo = M / _FIT_SPAN
    pts = {round(lo * _FIT_SPAN ** (t / (_FIT_POINTS - 1))) for t in range(_FIT_POINTS)}
    return sorted(p for p in pts if 1 <= p <= M)


def least_squares(rows: list[list], rhs: list) -> list:
    """Householder least-squares solve of ``rows @ x ~= rhs`` in the ambient precision."""
    m, n = len(rows), len(rows[0])
    if m < n:
        raise ValueError("underdetermined least-squares system")
    R = [list(r) + [b] for r, b in zip(rows, rhs)]
    for j in range(n):
        norm = gmpy2.sqrt(sum(R[i][j] * R[i][j] for i in range(j, m)))
        if norm == 0:
            raise ValueError("singular least-squares system")
        alpha = -norm if R[j][j] > 0 else norm
        v = [R[i][j] for i in range(j, m)]
        v[0] -= alpha
        vv = sum(t * t for t in v)
        for c in range(j, n + 1):
            f = 2 * sum(v[i - j] * R[i][c] for i in range(j, m)) / vv
            for i in range(j, m):
                R[i][c] -= f * v[i - j]
    x = [None] * n
    for i in reversed(range(n)):
        acc = R[i][n] - sum(R[i][c] * x[c] for c in range(i + 1, n))
        x[i] = acc / R[i][i]
    return x


def _fit(points, values, M, powers, logs):
    logM = gmpy2.log(M)
    rows = []
    for N in points:
        u = gmpy2.log(N) / logM
        t = mpfr(M) / N
        rows.append([mpfr(1)] + [u**j * t**i for i in range(1, powers + 1) for j in range(logs + 1)])
    return least_squares(rows, values)[0]


def extrapolate_limit(partials: Sequence, log_order: int, prec: int):
    """Fit the limit of float partial sums ``S(0..M)``.

    ``log_order`` is the highest power of ``log N`` expected in the tail
    expansion (depth minus one for an iterated sum).  Returns
    ``(limit, error)`` as mpfr values, or ``None`` when ``M`` is too small
    to fit.  ``error`` is the spread between the main fit and two
    perturbed fits (one extra power of ``1/N``; the upper half of the
    window only) and is a heuristic.
    """
    M = len(partials) - 1
    if M < MIN_FIT_TRUNCATION:
        return None
    logs = max(log_order, 1)
    points = _sample_points(M)
    with working_context(2 * prec + 32):
        values = [mpfr(partials[N]) for N in points]
        main = _fit(points, values, M, _POWER_ORDER, logs)
        alternatives = [_fit(points, values, M, _POWER_ORDER + 1, logs)]
        upper = [i for i, N in enumerate(points) if 2 * N >= M]
        if len(upper) > 1 + (_POWER_ORDER - 1) * (logs + 1):
            alternatives.append(
                _fit([points[i] for i in upper], [values[i] for i in upper], M,
                     _POWER_ORDER - 1, logs)
            )
        spread = max(abs(alt - main) for alt in alternatives)
    with working_context(prec):
        return mpfr(main), mpfr(spread)
