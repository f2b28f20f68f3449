"""Two-regime scalars and the q-analogue building blocks.

A :class:`Scalar` is either an exact rational (``prec is None``) or a
binary floating-point number carrying its own precision in bits.  Mixing
the two regimes raises :class:`~mzv.errors.RegimeError`; converting
between them is always explicit (:meth:`Scalar.to_real`).
"""

from __future__ import annotations

import math
from contextlib import nullcontext
from fractions import Fraction
from numbers import Rational

import gmpy2
from gmpy2 import mpfr

from .errors import DomainError, RegimeError

__all__ = [
    "DEFAULT_PRECISION",
    "Scalar",
    "Params",
    "working_context",
    "lift",
    "q_integer",
    "f_q",
    "connector",
]

DEFAULT_PRECISION = 128


def working_context(prec: int | None):
    """Context manager under which raw arithmetic runs at ``prec`` bits.

    ``None`` selects the exact regime and is a no-op.  The gmpy2 context
    is thread-local, so nothing leaks between concurrent evaluations.
    """
    if prec is None:
        return nullcontext()
    return gmpy2.context(gmpy2.get_context(), precision=prec)


def lift(value, prec: int | None):
    """Convert an int/Fraction/str into the raw type of a regime."""
    if prec is None:
        if isinstance(value, float):
            raise RegimeError("refusing to build an exact scalar from a binary float")
        return Fraction(value)
    with working_context(prec):
        if isinstance(value, Fraction):
            return mpfr(gmpy2.mpq(value.numerator, value.denominator))
        return mpfr(value)


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            raise DomainError(f"cannot parse rational {value!r}") from None
    raise DomainError(f"expected a rational value, got {value!r}")


class Scalar:
    __slots__ = ("value", "prec")

    def __init__(self, value, prec: int | None = None):
        if prec is None:
            if not isinstance(value, Fraction):
                value = _as_fraction(value)
        else:
            if prec < 2:
                raise DomainError(f"precision must be at least 2 bits, got {prec}")
            if isinstance(value, (int, Fraction, str)):
                value = lift(value, prec)
            elif not isinstance(value, type(mpfr(0))):
                raise RegimeError(f"float regime needs an mpfr value, got {type(value).__name__}")
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @classmethod
    def exact(cls, value) -> Scalar:
        return cls(_as_fraction(value))

    @classmethod
    def real(cls, value, prec: int = DEFAULT_PRECISION) -> Scalar:
        if isinstance(value, Scalar):
            return value.to_real(prec)
        return cls(value, prec)

    @classmethod
    def parse(cls, text: str, prec: int | None = None) -> Scalar:
        """Parse ``"p/q"``, an integer or a decimal string."""
        if prec is None:
            return cls.exact(text)
        with working_context(prec):
            try:
                value = mpfr(text.strip()) if "/" not in text else lift(_as_fraction(text), prec)
            except ValueError:
                raise DomainError(f"cannot parse number {text!r}") from None
        return cls(value, prec)

    @property
    def is_exact(self) -> bool:
        return self.prec is None

    def to_real(self, prec: int = DEFAULT_PRECISION) -> Scalar:
        """Explicit conversion to the float regime (re-rounds float values)."""
        if self.prec is None:
            return Scalar(lift(self.value, prec), prec)
        with working_context(prec):
            return Scalar(mpfr(self.value), prec)

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.prec != self.prec:
                raise RegimeError(
                    f"mixed regimes: {self._regime_name()} and {other._regime_name()}"
                )
            return other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return other
        if self.prec is None and isinstance(other, Fraction):
            return other
        raise RegimeError(f"cannot combine {self._regime_name()} scalar with {other!r}")

    def _regime_name(self) -> str:
        return "exact" if self.prec is None else f"{self.prec}-bit float"

    def _wrap(self, raw) -> Scalar:
        return Scalar(raw, self.prec)

    def _binary(self, other, op):
        rhs = self._coerce(other)
        with working_context(self.prec):
            return self._wrap(op(self.value, rhs))

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __radd__(self, other):
        return self._binary(other, lambda a, b: b + a)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    def __rmul__(self, other):
        return self._binary(other, lambda a, b: b * a)

    def __truediv__(self, other):
        rhs = self._coerce(other)
        if rhs == 0:
            raise ZeroDivisionError("Scalar division by zero")
        with working_context(self.prec):
            return self._wrap(self.value / rhs)

    def __rtruediv__(self, other):
        lhs = self._coerce(other)
        if self.value == 0:
            raise ZeroDivisionError("Scalar division by zero")
        with working_context(self.prec):
            return self._wrap(lhs / self.value)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            raise DomainError("only integer powers are supported")
        with working_context(self.prec):
            return self._wrap(self.value**exponent)

    def __neg__(self):
        return self._wrap(-self.value)

    def __abs__(self):
        return self._wrap(abs(self.value))

    def _cmp(self, other, op):
        return op(self.value, self._coerce(other))

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.prec == other.prec and self.value == other.value
        if isinstance(other, int) or (self.prec is None and isinstance(other, Fraction)):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.prec, self.value))

    def __lt__(self, other):
        return self._cmp(other, lambda a, b: a < b)

    def __le__(self, other):
        return self._cmp(other, lambda a, b: a <= b)

    def __gt__(self, other):
        return self._cmp(other, lambda a, b: a > b)

    def __ge__(self, other):
        return self._cmp(other, lambda a, b: a >= b)

    def __float__(self):
        return float(self.value)

    def __str__(self):
        if self.prec is None:
            v = self.value
            return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        # enough digits to round-trip at this precision
        digits = math.ceil(self.prec * math.log10(2)) + 1
        return format(self.value, f".{digits}g")

    def __repr__(self):
        if self.prec is None:
            return f"Scalar.exact('{self}')"
        return f"Scalar.parse('{self}', prec={self.prec})"


class Params:
    """The pair ``(q, x)`` with ``0 < q <= 1`` and ``-1 < x < 1``."""

    __slots__ = ("q", "x")

    def __init__(self, q, x=0):
        q = q if isinstance(q, Scalar) else Scalar.exact(q)
        x = x if isinstance(x, Scalar) else Scalar(x, q.prec) if q.prec else Scalar.exact(x)
        if q.prec != x.prec:
            raise RegimeError("q and x must share a regime")
        if not (0 < q <= 1):
            raise DomainError(f"q must lie in (0, 1], got {q}")
        if not (-1 < x < 1):
            raise DomainError(f"x must lie in (-1, 1), got {x}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "x", x)

    def __setattr__(self, name, value):
        raise AttributeError("Params is immutable")

    @property
    def prec(self) -> int | None:
        return self.q.prec

    def to_real(self, prec: int = DEFAULT_PRECISION) -> Params:
        return Params(self.q.to_real(prec), self.x.to_real(prec))

    def in_regime(self, prec: int | None) -> Params:
        """Return these parameters in the regime ``prec``.

        Exact parameters may be explicitly rounded into a float regime;
        float parameters can never become exact.
        """
        if prec == self.prec:
            return self
        if prec is None:
            raise RegimeError("float parameters cannot be used in the exact regime")
        return self.to_real(prec)

    def __eq__(self, other):
        return isinstance(other, Params) and self.q == other.q and self.x == other.x

    def __hash__(self):
        return hash((self.q, self.x))

    def __repr__(self):
        return f"Params(q={self.q}, x={self.x})"


# -- raw kernels shared with the series evaluator ----------------------------


def q_powers(q, upto: int) -> list:
    """``[q^0, q^1, ..., q^upto]`` in the raw type of ``q``."""
    out = [q**0]
    for _ in range(upto):
        out.append(out[-1] * q)
    return out


def q_integers(q, upto: int) -> list:
    """``[[0]_q, [1]_q, ..., [upto]_q]`` via the summed form ``1 + q + ... + q^(m-1)``."""
    out = [q * 0]
    power = q**0
    for _ in range(upto):
        out.append(out[-1] + power)
        power = power * q
    return out


def shifted_q_integers(q, x, upto: int) -> list:
    """``g[h] = [h]_q - q^h x`` for ``h = 0..upto``; ``f_q(m; x) = g[1]...g[m]``."""
    ints = q_integers(q, upto)
    pows = q_powers(q, upto)
    return [ints[h] - pows[h] * x for h in range(upto + 1)]


# -- public Scalar-level operations ------------------------------------------


def _check_q(q: Scalar) -> None:
    if not (0 < q <= 1):
        raise DomainError(f"q must lie in (0, 1], got {q}")


def q_integer(m: int, q: Scalar) -> Scalar:
    """``[m]_q = 1 + q + ... + q^(m-1)``, which equals ``m`` at ``q = 1``."""
    if m < 1:
        raise DomainError(f"q-integers need m >= 1, got {m}")
    q = q if isinstance(q, Scalar) else Scalar.exact(q)
    _check_q(q)
    with working_context(q.prec):
        return Scalar(q_integers(q.value, m)[m], q.prec)


def f_q(m: int, params: Params) -> Scalar:
    """``prod_{h=1}^m ([h]_q - q^h x)``; the empty product is 1."""
    if m < 0:
        raise DomainError(f"f_q needs m >= 0, got {m}")
    with working_context(params.prec):
        g = shifted_q_integers(params.q.value, params.x.value, m)
        out = params.q.value**0
        for h in range(1, m + 1):
            out = out * g[h]
        return Scalar(out, params.prec)


def connector(m: int, n: int, params: Params) -> Scalar:
    """The coupling factor ``q^(mn) f_q(m) f_q(n) / f_q(m+n)``.

    At ``q = 1, x = 0`` this is ``m! n! / (m+n)!``.
    """
    if m < 0 or n < 0:
        raise DomainError(f"connector needs m, n >= 0, got ({m}, {n})")
    q = params.q
    return q ** (m * n) * f_q(m, params) * f_q(n, params) / f_q(m + n, params)
