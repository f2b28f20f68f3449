"""Indices, their run decomposition and the dual index."""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from itertools import combinations

from .errors import DomainError

__all__ = [
    "Index",
    "weight",
    "depth",
    "is_admissible",
    "decompose",
    "compose",
    "dual",
    "enumerate_admissible",
    "compositions",
]


class Index(tuple):
    """An immutable tuple of positive integers ``(k_1, ..., k_r)``.

    The empty index is allowed. ``str(Index((1, 2)))`` gives ``"1,2"`` and
    the empty index serializes as ``""``.
    """

    __slots__ = ()

    def __new__(cls, parts: Iterable[int] = ()) -> Index:
        if isinstance(parts, Index):
            return parts
        if isinstance(parts, str):
            return cls.parse(parts)
        values = tuple(parts)
        for p in values:
            if isinstance(p, bool) or not isinstance(p, int):
                raise DomainError(f"index parts must be integers, got {p!r}")
            if p < 1:
                raise DomainError(f"index parts must be positive, got {p}")
        return super().__new__(cls, values)

    @classmethod
    def parse(cls, text: str) -> Index:
        text = text.strip()
        if not text:
            return cls(())
        try:
            parts = [int(tok) for tok in text.split(",")]
        except ValueError:
            raise DomainError(f"cannot parse index {text!r}") from None
        return cls(parts)

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def depth(self) -> int:
        return len(self)

    @property
    def admissible(self) -> bool:
        return len(self) > 0 and self[-1] >= 2

    def __str__(self) -> str:
        return ",".join(str(p) for p in self)

    def __repr__(self) -> str:
        return f"Index(({', '.join(map(str, self))}{',' if len(self) == 1 else ''}))"

    # tuple's own + and slicing return plain tuples
    def __add__(self, other):
        return Index(tuple(self) + tuple(other))

    def __getitem__(self, item):
        got = super().__getitem__(item)
        return Index(got) if isinstance(item, slice) else got


def weight(k: Iterable[int]) -> int:
    return Index(k).weight


def depth(k: Iterable[int]) -> int:
    return Index(k).depth


def is_admissible(k: Iterable[int]) -> bool:
    return Index(k).admissible


def _require_admissible(k: Iterable[int]) -> Index:
    k = Index(k)
    if not k.admissible:
        raise DomainError(f"index ({k}) is not admissible")
    return k


def decompose(k: Iterable[int]) -> list[tuple[int, int]]:
    """Split an admissible index into runs ``({1}^(a-1), b+1)``.

    Returns the pairs ``[(a_1, b_1), ..., (a_s, b_s)]``.

    >>> decompose((2, 3))
    [(1, 1), (1, 2)]
    """
    k = _require_admissible(k)
    pairs = []
    ones = 0
    for p in k:
        if p == 1:
            ones += 1
        else:
            pairs.append((ones + 1, p - 1))
            ones = 0
    return pairs


def compose(pairs: Iterable[tuple[int, int]]) -> Index:
    """Inverse of :func:`decompose`."""
    parts: list[int] = []
    for a, b in pairs:
        if a < 1 or b < 1:
            raise DomainError(f"run lengths must be positive, got ({a}, {b})")
        parts.extend([1] * (a - 1))
        parts.append(b + 1)
    return Index(parts)


def dual(k: Iterable[int]) -> Index:
    """The dual index: swap each run's ``a`` and ``b`` and reverse the runs.

    >>> dual((1, 2))
    Index((3,))
    """
    return compose((b, a) for a, b in reversed(decompose(k)))


def enumerate_admissible(w: int, d: int | None = None) -> list[Index]:
    """All admissible indices of weight ``w`` (and depth ``d``), lexicographic."""
    if w < 2:
        raise DomainError(f"weight must be at least 2, got {w}")
    if d is not None and not 1 <= d <= w - 1:
        raise DomainError(f"depth must lie in [1, {w - 1}], got {d}")
    depths = range(1, w) if d is None else (d,)
    out = [k for r in depths for k in _compositions_positive(w, r) if k[-1] >= 2]
    out.sort()
    return out


def _compositions_positive(w: int, r: int) -> Iterator[Index]:
    # stars and bars over the w-1 gaps
    for cuts in combinations(range(1, w), r - 1):
        bounds = (0, *cuts, w)
        yield Index(bounds[i + 1] - bounds[i] for i in range(r))


def compositions(c: int, r: int) -> list[tuple[int, ...]]:
    """All ``r``-tuples of non-negative integers summing to ``c``, lexicographic."""
    if c < 0:
        raise DomainError(f"c must be non-negative, got {c}")
    if r < 1:
        raise DomainError(f"r must be positive, got {r}")
    if r == 1:
        return [(c,)]
    return [(head, *rest) for head in range(c + 1) for rest in compositions(c - head, r - 1)]
