"""
Finitary permutations of the natural numbers.

A :class:`FinPerm` stores only the points it moves, so two permutations are
equal exactly when they are equal as maps of the whole of ``N``.  Products
follow the functional convention ``(p * q)(x) == p(q(x))``.

Also provides a computable bijection between ``N`` and the group of all
finitary permutations (:func:`sf_at`, :func:`sf_index`): permutations are
ordered by their largest moved point ``M``, and within one ``M`` by the
lexicographic order of their one-line form on ``{0, ..., M}``.  Index 0 is
the identity and the permutations with largest moved point ``M`` occupy
exactly the indices ``[M!, (M+1)!)``.
"""

from __future__ import annotations

import re
from functools import lru_cache
from itertools import permutations as _permutations
from math import factorial, gcd
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import DuplicatePoint, ParseError

__all__ = [
    "FinPerm",
    "IDENTITY",
    "compose",
    "inverse",
    "cycle_decomposition",
    "make_k_cycle",
    "transposition",
    "sf_at",
    "sf_index",
    "iter_sf",
]

Cycle = tuple  # rotation-normalised tuple of distinct points, minimum first


class FinPerm:
    """A permutation of ``N`` with finite support.

    Construct from a mapping of moved points, from cycles with
    :meth:`from_cycles`, or with :func:`make_k_cycle`.  Instances are
    immutable and hashable.

    >>> p = FinPerm.from_cycles([[0, 1], [2, 3, 4]])
    >>> p(2), p(7)
    (3, 7)
    >>> p
    FinPerm((0 1)(2 3 4))
    """

    __slots__ = ("_map", "_key", "_hash")

    def __init__(self, moves: Mapping[int, int] | None = None, *, check: bool = True):
        moves = {} if moves is None else moves
        m = {int(x): int(y) for x, y in moves.items() if x != y}
        if check:
            if any(x < 0 for x in m) or any(y < 0 for y in m.values()):
                raise ValueError("points must be non-negative integers")
            if set(m) != set(m.values()):
                raise ValueError(f"not a permutation of its support: {dict(moves)}")
        self._map = m
        self._key = tuple(sorted(m.items()))
        self._hash = hash(self._key)

    # construction -------------------------------------------------------

    @classmethod
    def _raw(cls, m: dict) -> "FinPerm":
        """Wrap a map already known to be a bijection of its support, without fixed points."""
        p = cls.__new__(cls)
        p._map = m
        p._key = tuple(sorted(m.items()))
        p._hash = hash(p._key)
        return p

    @classmethod
    def identity(cls) -> "FinPerm":
        return IDENTITY

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]]) -> "FinPerm":
        """Product of *disjoint* cycles.  Raises on overlap or repeats."""
        m: dict[int, int] = {}
        for cyc in cycles:
            cyc = [int(x) for x in cyc]
            if len(set(cyc)) != len(cyc):
                raise DuplicatePoint(f"repeated point in cycle {cyc}")
            if len(cyc) < 2:
                continue
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                if a in m:
                    raise DuplicatePoint(f"cycles are not disjoint at {a}")
                m[a] = b
        return cls(m)

    @classmethod
    def from_one_line(cls, images: Sequence[int]) -> "FinPerm":
        """``images[i]`` is the image of ``i``; points past the end are fixed."""
        return cls(dict(enumerate(images)))

    # mapping protocol ---------------------------------------------------

    def __call__(self, x: int) -> int:
        return self._map.get(x, x)

    @property
    def moves(self) -> dict[int, int]:
        return dict(self._map)

    def items(self):
        return self._key

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self._map)

    @property
    def max_point(self) -> int:
        """Largest moved point, or -1 for the identity."""
        return self._key[-1][0] if self._key else -1

    def is_identity(self) -> bool:
        return not self._map

    def __bool__(self) -> bool:
        return bool(self._map)

    def image(self, points: Iterable[int]) -> frozenset[int]:
        return frozenset(self(x) for x in points)

    def restrict(self, points: Iterable[int]) -> dict[int, int]:
        """The map ``x -> self(x)`` on ``points`` (fixed points included)."""
        return {x: self(x) for x in points}

    def one_line(self, n: int) -> tuple[int, ...]:
        return tuple(self(x) for x in range(n))

    # group structure ----------------------------------------------------

    def __mul__(self, other: "FinPerm") -> "FinPerm":
        if not isinstance(other, FinPerm):
            return NotImplemented
        if not other._map:
            return self
        if not self._map:
            return other
        a, b = self._map, other._map
        m = {}
        for x in a.keys() | b.keys():
            y = b.get(x, x)
            y = a.get(y, y)
            if y != x:
                m[x] = y
        return FinPerm._raw(m)

    def inverse(self) -> "FinPerm":
        return FinPerm({y: x for x, y in self._map.items()}, check=False)

    def __invert__(self) -> "FinPerm":
        return self.inverse()

    def __pow__(self, e: int) -> "FinPerm":
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        out = IDENTITY
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def conjugate(self, by: "FinPerm") -> "FinPerm":
        """``by * self * by^-1``."""
        return by * self * by.inverse()

    def cycles(self) -> list[Cycle]:
        return cycle_decomposition(self)

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted(len(c) for c in self.cycles()))

    def order(self) -> int:
        out = 1
        for c in self.cycles():
            out = out * len(c) // gcd(out, len(c))
        return out

    # comparison / display -----------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, FinPerm) and self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def sort_key(self):
        """Key realising the canonical enumeration order."""
        return (self.max_point, self.one_line(self.max_point + 1))

    def __lt__(self, other: "FinPerm") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        if not self._map:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles())

    def __repr__(self) -> str:
        return f"FinPerm({self})"

    def to_json(self) -> list[list[int]]:
        return [list(c) for c in self.cycles()]

    @classmethod
    def from_json(cls, doc) -> "FinPerm":
        """Inverse of :meth:`to_json`.  Any disjoint cycle list is accepted."""
        if not isinstance(doc, list):
            raise ParseError("permutation must be a list of cycles")
        cycles = []
        for i, cyc in enumerate(doc):
            if not isinstance(cyc, list) or not all(
                isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in cyc
            ):
                raise ParseError("cycle must be a list of naturals", f"cycle {i}")
            if len(cyc) < 2:
                raise ParseError("cycle must have length >= 2", f"cycle {i}")
            cycles.append(cyc)
        try:
            return cls.from_cycles(cycles)
        except (DuplicatePoint, ValueError) as exc:
            raise ParseError(str(exc)) from None


    @classmethod
    def parse(cls, text: str) -> "FinPerm":
        """Cycle notation such as ``"(0 1)(2 3 4)"``; ``"()"`` or ``""`` is the identity."""
        t = text.strip()
        if not _CYCLES_RE.fullmatch(t):
            raise ParseError(f"not in cycle notation: {text!r}")
        cycles = [[int(x) for x in body.replace(",", " ").split()]
                  for body in re.findall(r"\(([^()]*)\)", t)]
        return cls.from_json([c for c in cycles if c])


_CYCLES_RE = re.compile(r"(\(\s*(\d+([\s,]+\d+)*)?\s*\)\s*)*")

IDENTITY = FinPerm()


def compose(p: FinPerm, q: FinPerm) -> FinPerm:
    """``x -> p(q(x))``."""
    return p * q


def inverse(p: FinPerm) -> FinPerm:
    return p.inverse()


def cycle_decomposition(p: FinPerm) -> list[Cycle]:
    """Disjoint cycles of ``p``, each starting at its minimum, sorted by minimum."""
    seen = set()
    out = []
    for x, _ in p.items():
        if x in seen:
            continue
        cyc = [x]
        seen.add(x)
        y = p(x)
        while y != x:
            cyc.append(y)
            seen.add(y)
            y = p(y)
        out.append(tuple(cyc))
    return out


def make_k_cycle(points: Sequence[int]) -> FinPerm:
    """The cycle ``points[0] -> points[1] -> ... -> points[-1] -> points[0]``."""
    points = list(points)
    if len(set(points)) != len(points):
        raise DuplicatePoint(f"repeated point in {points}")
    if len(points) < 2:
        raise ValueError("a cycle needs at least two points")
    return FinPerm.from_cycles([points])


def transposition(a: int, b: int) -> FinPerm:
    return make_k_cycle([a, b])


# ---------------------------------------------------------------------------
# enumeration of SF(N)
#
# For largest moved point M the block of indices is [M!, (M+1)!) and inside
# it permutations of {0..M} with p(M) != M appear in lexicographic order of
# their one-line form.


def _count_moving(prefix_len: int, M: int, used_M: bool) -> int:
    """Completions of a length-``prefix_len`` prefix to a perm of {0..M} with p(M) != M."""
    rest = M + 1 - prefix_len
    total = factorial(rest)
    if used_M or rest == 0:
        return total
    # completions where the last slot holds M
    return total - factorial(rest - 1)


def sf_index(p: FinPerm) -> int:
    """Position of ``p`` in the canonical enumeration."""
    M = p.max_point
    if M < 0:
        return 0
    line = p.one_line(M + 1)
    remaining = sorted(range(M + 1))
    rank = 0
    used_M = False
    for i, v in enumerate(line):
        for u in remaining:
            if u >= v:
                break
            rank += _count_moving(i + 1, M, used_M or u == M)
        remaining.remove(v)
        used_M = used_M or v == M
    return factorial(M) + rank


@lru_cache(maxsize=None)
def _block_of(i: int) -> int:
    M = 1
    while factorial(M + 1) <= i:
        M += 1
    return M


def sf_at(i: int) -> FinPerm:
    """Inverse of :func:`sf_index`."""
    if i < 0:
        raise ValueError("index must be non-negative")
    if i == 0:
        return IDENTITY
    M = _block_of(i)
    rank = i - factorial(M)
    remaining = list(range(M + 1))
    line = []
    used_M = False
    for pos in range(M + 1):
        for u in remaining:
            c = _count_moving(pos + 1, M, used_M or u == M)
            if pos == M and u == M and not used_M:
                c = 0
            if rank < c:
                line.append(u)
                remaining.remove(u)
                used_M = used_M or u == M
                break
            rank -= c
        else:  # pragma: no cover - guarded by the block computation
            raise AssertionError("unranking overflow")
    return FinPerm.from_one_line(line)


def iter_sf(limit: int | None = None) -> Iterator[FinPerm]:
    """``sf_at(0), sf_at(1), ...`` generated block by block."""
    yield IDENTITY
    count = 1
    M = 1
    while True:
        for line in _permutations(range(M + 1)):
            if line[M] == M:
                continue
            if limit is not None and count >= limit:
                return
            yield FinPerm.from_one_line(line)
            count += 1
        M += 1
