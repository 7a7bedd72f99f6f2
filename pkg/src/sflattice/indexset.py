"""Eventually periodic subsets of N: a residue pattern plus a finite patch."""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Iterable, Iterator

from .errors import ParseError

__all__ = ["IndexSet"]


@dataclass(frozen=True, eq=False)
class IndexSet:
    """``{x : x % period in residues} | added - removed``.

    The patch is kept normalised: ``added`` only holds points the pattern
    excludes and ``removed`` only points it includes.
    """

    period: int = 1
    residues: frozenset = frozenset()
    added: frozenset = frozenset()
    removed: frozenset = frozenset()

    def __post_init__(self):
        if self.period < 1:
            raise ValueError("period must be positive")
        res = frozenset(r % self.period for r in self.residues)
        object.__setattr__(self, "residues", res)
        add = frozenset(x for x in self.added if x % self.period not in res)
        rem = frozenset(x for x in self.removed if x % self.period in res)
        object.__setattr__(self, "added", add)
        object.__setattr__(self, "removed", rem)

    # constructors -------------------------------------------------------

    @classmethod
    def finite(cls, points: Iterable[int]) -> "IndexSet":
        return cls(1, frozenset(), frozenset(points))

    @classmethod
    def everything(cls) -> "IndexSet":
        return cls(1, frozenset({0}))

    @classmethod
    def residue(cls, period: int, *residues: int) -> "IndexSet":
        return cls(period, frozenset(residues))

    @classmethod
    def from_bits(cls, bits: Iterable[bool], patch: Iterable[bool] = ()) -> "IndexSet":
        """Periodic pattern ``bits``; ``patch[i]`` overrides membership of ``i``."""
        bits = list(bits)
        period = len(bits)
        res = frozenset(i for i, b in enumerate(bits) if b)
        patch = list(patch)
        add = frozenset(i for i, b in enumerate(patch) if b)
        rem = frozenset(i for i, b in enumerate(patch) if not b)
        return cls(period, res, add, rem)

    # queries ------------------------------------------------------------

    def __contains__(self, x: int) -> bool:
        if x in self.added:
            return True
        if x in self.removed:
            return False
        return x % self.period in self.residues

    def is_finite(self) -> bool:
        return not self.residues

    def is_empty(self) -> bool:
        return not self.residues and not self.added

    def upto(self, n: int) -> list[int]:
        return [x for x in range(n) if x in self]

    def __iter__(self) -> Iterator[int]:
        if self.is_finite():
            yield from sorted(self.added)
            return
        x = 0
        while True:
            if x in self:
                yield x
            x += 1

    def patch_bound(self) -> int:
        """Every point at or above this follows the periodic pattern."""
        pts = self.added | self.removed
        return max(pts) + 1 if pts else 0

    # algebra ------------------------------------------------------------

    def _combine(self, other: "IndexSet", op) -> "IndexSet":
        L = lcm(self.period, other.period)
        res = frozenset(r for r in range(L) if op(r % self.period in self.residues,
                                                   r % other.period in other.residues))
        base = IndexSet(L, res)
        bound = max(self.patch_bound(), other.patch_bound())
        add, rem = set(), set()
        for x in range(bound):
            want = op(x in self, x in other)
            if want and x not in base:
                add.add(x)
            elif not want and x in base:
                rem.add(x)
        return IndexSet(L, res, frozenset(add), frozenset(rem)).reduced()

    def __and__(self, other):
        return self._combine(other, lambda a, b: a and b)

    def __or__(self, other):
        return self._combine(other, lambda a, b: a or b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a and not b)

    def __xor__(self, other):
        return self._combine(other, lambda a, b: a != b)

    def complement(self) -> "IndexSet":
        return IndexSet.everything() - self

    def issubset(self, other: "IndexSet") -> bool:
        return (self - other).is_empty()

    def almost_subset(self, other: "IndexSet") -> bool:
        return (self - other).is_finite()

    def reduced(self) -> "IndexSet":
        """Same set with the smallest period."""
        P = self.period
        for d in range(1, P + 1):
            if P % d:
                continue
            if all((r in self.residues) == (r % d in self.residues) for r in range(P)):
                if d == P:
                    return self
                res = frozenset(r for r in range(d) if r in self.residues)
                bound = self.patch_bound()
                add = frozenset(x for x in range(bound) if x in self and x % d not in res)
                rem = frozenset(x for x in range(bound) if x not in self and x % d in res)
                return IndexSet(d, res, add, rem)
        return self  # pragma: no cover

    def canonical(self):
        cached = self.__dict__.get("_canonical")
        if cached is None:
            r = self.reduced()
            cached = (r.period, tuple(sorted(r.residues)), tuple(sorted(r.added)),
                      tuple(sorted(r.removed)))
            object.__setattr__(self, "_canonical", cached)
        return cached

    def same_set(self, other: "IndexSet") -> bool:
        return self.canonical() == other.canonical()

    def __eq__(self, other) -> bool:
        return isinstance(other, IndexSet) and self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(self.canonical())

    # serialisation ------------------------------------------------------

    def to_json(self) -> dict:
        r = self.reduced()
        return {
            "period": r.period,
            "residues": sorted(r.residues),
            "added": sorted(r.added),
            "removed": sorted(r.removed),
        }

    @classmethod
    def from_json(cls, doc) -> "IndexSet":
        if isinstance(doc, str):
            return cls.parse(doc)
        try:
            return cls(int(doc.get("period", 1)), frozenset(doc.get("residues", ())),
                       frozenset(doc.get("added", ())), frozenset(doc.get("removed", ())))
        except (AttributeError, TypeError, ValueError) as exc:
            raise ParseError(f"bad index set: {exc}") from None

    @classmethod
    def parse(cls, text: str) -> "IndexSet":
        """Shorthands: ``all``, ``none``, ``evens``, ``odds``, ``modK:r,s``, ``ge:N``."""
        t = text.strip()
        if t == "all":
            return cls.everything()
        if t in ("none", "empty"):
            return cls()
        if t == "evens":
            return cls.residue(2, 0)
        if t == "odds":
            return cls.residue(2, 1)
        try:
            if t.startswith("mod"):
                head, _, tail = t.partition(":")
                k = int(head[3:])
                rs = [int(x) for x in tail.split(",") if x] if tail else [0]
                return cls.residue(k, *rs)
            if t.startswith("ge:"):
                n = int(t[3:])
                return cls(1, frozenset({0}), frozenset(), frozenset(range(n)))
        except ValueError:
            raise ParseError(f"bad index set shorthand {text!r}") from None
        raise ParseError(f"unknown index set shorthand {text!r}")

    def __repr__(self) -> str:
        r = self.reduced()
        parts = [f"period={r.period}", f"residues={sorted(r.residues)}"]
        if r.added:
            parts.append(f"added={sorted(r.added)}")
        if r.removed:
            parts.append(f"removed={sorted(r.removed)}")
        return "IndexSet(" + ", ".join(parts) + ")"
