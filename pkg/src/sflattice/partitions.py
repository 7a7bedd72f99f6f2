"""
Partitions of N with an exactly computable class labelling.

A :class:`PartitionDesc` is kept in a canonical form: a period ``P``, a
prefix length ``pre`` (a multiple of ``P``), an explicit entry for each
``x < pre`` and a table of ``P`` entries used for ``x >= pre`` through
``x % P``.  Periodic entries are

``("i", key)``
    ``x`` lies in the infinite class ``key``;
``("b", key, delta)``
    ``x`` lies in the finite class ``(key, x // P + delta)``, so a class is a
    fixed pattern of positions repeated once per window;
``("s",)``
    ``x`` is a singleton.

Prefix entries are ``("i", key)`` (an infinite class if ``key`` occurs in the
table, otherwise a finite class living in the prefix), ``("b", key, j)`` (the
explicit id of a periodic-pattern class that reaches below ``pre``) or
``("s",)``.

All constructions go through one builder that takes any eventually
periodic class function, and the result is normalised (minimal period,
shortest prefix, canonical names): structural equality is equality of
partitions.

"E is coarser than F" means every F-class lies inside an E-class.
"""

from __future__ import annotations

from collections import defaultdict
from itertools import count
from math import lcm
from typing import Callable, Iterable, Mapping, Sequence

from .errors import JoinNotFinitelyDescribable, NoSparePoint, ParseError
from .perm import FinPerm, transposition

__all__ = [
    "PartitionDesc",
    "partition_group",
    "meet",
    "join",
    "group_is_finite",
    "almost_coarser",
    "coarsen_by_perm",
    "coarsen_is_exact",
    "extract_transposition",
    "extract_transposition_word",
    "refines",
    "pairs_view",
    "orbit_partition",
    "partition_from_pairs",
    "residue_pair_example",
]

SINGLE = ("s",)
WINDOW_LIMIT = 1 << 15


def _ceil_to(n: int, P: int) -> int:
    return -(-n // P) * P


class PartitionDesc:
    """A partition of N in canonical periodic-plus-prefix form.

    Build one with :meth:`mod`, :meth:`blocks`, :meth:`singletons`,
    :meth:`one_class`, :meth:`from_labels` or :meth:`from_function`.
    """

    __slots__ = ("pre", "period", "prefix", "table", "_key", "_inf")

    def __init__(self, pre: int, period: int, prefix: Sequence, table: Sequence):
        if period < 1 or pre < 0 or pre % period:
            raise ValueError("pre must be a non-negative multiple of period >= 1")
        if len(prefix) != pre or len(table) != period:
            raise ValueError("table sizes do not match pre/period")
        self.pre = pre
        self.period = period
        self.prefix = tuple(prefix)
        self.table = tuple(table)
        self._key = (self.pre, self.period, self.prefix, self.table)
        self._inf = frozenset(e[1] for e in self.table if e[0] == "i")

    # constructors -------------------------------------------------------

    @classmethod
    def from_function(cls, class_of: Callable[[int], object], regime: int, period: int,
                      span: int) -> "PartitionDesc":
        """Partition whose class ids are ``class_of(x)`` (any hashables).

        ``class_of`` must be ``period``-periodic in structure from ``regime``
        on: shifting by ``period`` maps classes onto classes, infinite
        classes onto themselves, and finite classes have diameter below
        ``span``.
        """
        return _normalise(_build(class_of, regime, period, span))

    @classmethod
    def mod(cls, k: int) -> "PartitionDesc":
        """Residue classes modulo ``k``."""
        return cls.from_function(lambda x: x % k, 0, k, 1)

    @classmethod
    def blocks(cls, k: int) -> "PartitionDesc":
        """Consecutive blocks ``{kq, ..., kq+k-1}``; ``blocks(2)`` are the pairs."""
        return cls.from_function(lambda x: ("blk", x // k), 0, k, k)

    @classmethod
    def singletons(cls) -> "PartitionDesc":
        return cls(0, 1, (), (SINGLE,))

    @classmethod
    def one_class(cls) -> "PartitionDesc":
        return cls(0, 1, (), (("i", "c0"),))

    @classmethod
    def from_labels(cls, period: int, labels: Sequence, preperiod: int = 0,
                    patch: Mapping[int, object] | None = None) -> "PartitionDesc":
        """Periodic labels plus a finite patch.

        ``labels`` has ``preperiod + period`` items: the first ``preperiod``
        label ``0 .. preperiod-1`` and the rest label ``x >= preperiod`` through
        ``(x - preperiod) % period``.  A label is ``"inf:NAME"`` or a bare
        name (one shared class per name), ``"blk:NAME"`` (one class per name
        and period window) or ``"one"`` (singleton).  ``patch`` maps points to
        ``"one"`` or a class name; a name shared with an ``inf`` label joins
        that class, any other name forms a finite class.
        """
        labels = list(labels)
        if period < 1 or preperiod < 0 or len(labels) != preperiod + period:
            raise ParseError("labels must have preperiod + period entries")
        parsed = [_parse_label(lab, f"label {i}") for i, lab in enumerate(labels)]
        patch = {int(k): _parse_label(v, f"patch {k}") for k, v in dict(patch or {}).items()}
        for x, (kind, _) in patch.items():
            if kind == "b":
                raise ParseError("patch labels must be a class name or 'one'", f"patch {x}")
            if x < 0:
                raise ParseError("patch points must be natural numbers", f"patch {x}")

        def class_of(x):
            if x in patch:
                kind, key = patch[x]
                return ("s", x) if kind == "s" else ("i", key)
            if x < preperiod:
                kind, key = parsed[x]
                q = -1
            else:
                kind, key = parsed[preperiod + (x - preperiod) % period]
                q = (x - preperiod) // period
            if kind == "i":
                return ("i", key)
            if kind == "s":
                return ("s", x)
            return ("b", key, q)

        regime = max([preperiod] + [x + 1 + period for x in patch])
        return cls.from_function(class_of, regime, period, regime + 2 * period + 1)

    # labelling ----------------------------------------------------------

    def entry(self, x: int):
        return self.prefix[x] if x < self.pre else self.table[x % self.period]

    def class_of(self, x: int):
        """Hashable id of the class of ``x``."""
        if x < self.pre:
            e = self.prefix[x]
            return ("s", x) if e[0] == "s" else e
        e = self.table[x % self.period]
        if e[0] == "i":
            return e
        if e[0] == "s":
            return ("s", x)
        return ("b", e[1], x // self.period + e[2])

    def same_class(self, x: int, y: int) -> bool:
        return self.class_of(x) == self.class_of(y)

    def infinite_keys(self) -> frozenset:
        return self._inf

    def is_infinite_class(self, cid) -> bool:
        return cid[0] == "i" and cid[1] in self._inf

    def span(self) -> int:
        """Upper bound on the diameter of any finite class."""
        deltas = [e[2] for e in self.table if e[0] == "b"]
        spread = (max(deltas) - min(deltas) + 2) * self.period if deltas else self.period
        return self.pre + spread + 1

    def class_around(self, x: int) -> list[int]:
        """All points of the class of ``x`` if it is finite, else ``None``."""
        cid = self.class_of(x)
        if self.is_infinite_class(cid):
            return None
        if cid[0] == "s":
            return [x]
        s = self.span()
        return [y for y in range(max(0, x - s), x + s + 1) if self.class_of(y) == cid]

    def classes_upto(self, n: int) -> list[frozenset]:
        """The classes intersected with ``[0, n)``, ordered by minimum."""
        groups = defaultdict(list)
        for x in range(n):
            groups[self.class_of(x)].append(x)
        return sorted((frozenset(v) for v in groups.values()), key=min)

    def labels_upto(self, n: int) -> list[int]:
        """Labelling of ``0..n-1`` by order of first occurrence."""
        names = {}
        return [names.setdefault(self.class_of(x), len(names)) for x in range(n)]

    def least_point(self, cid) -> int:
        if cid[0] == "s":
            return cid[1]
        if self.is_infinite_class(cid):
            lo, hi = 0, self.pre + self.period
        elif cid[0] == "b":
            base = (cid[2] - 2) * self.period
            lo, hi = max(0, base - self.span()), max(0, base) + self.span() + 4 * self.period
            lo = 0 if lo < self.pre + self.period else lo
        else:
            lo, hi = 0, self.pre
        for x in range(lo, hi):
            if self.class_of(x) == cid:
                return x
        raise ValueError(f"empty class {cid!r}")

    def class_meta(self) -> list[dict]:
        """Per class name: infinite, finite (with extent) or a periodic block family."""
        out = []
        seen = set()
        for x, e in enumerate(self.prefix + self.table):
            if e[0] == "s" or (e[0], e[1]) in seen:
                continue
            seen.add((e[0], e[1]))
            if e[0] == "i" and e[1] in self._inf:
                out.append({"id": e[1], "kind": "infinite"})
            elif e[0] == "i":
                out.append({"id": e[1], "kind": "finite",
                            "extent": [y for y in range(self.pre) if self.prefix[y] == e]})
            else:
                out.append({"id": e[1], "kind": "block",
                            "extent": [r for r in range(self.period)
                                       if self.table[r][:2] == ("b", e[1])]})
        return out

    # comparison ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, PartitionDesc) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        n = max(12, min(self.pre + 2 * self.period, 24))
        body = " ".join("{" + ",".join(map(str, sorted(c))) + "}" for c in self.classes_upto(n))
        return f"PartitionDesc(pre={self.pre}, period={self.period}: {body} ...)"

    # serialisation ------------------------------------------------------

    def to_json(self) -> dict:
        """Labels in :meth:`from_labels` format.

        The label frame starts at the first offset where every block fits in
        one period window.  Partitions with blocks wider than a window fall
        back to an explicit ``block_offsets`` map.
        """
        P = self.period
        for s in range(self.pre, self.pre + P):
            doc = self._labels_doc(s)
            try:
                if PartitionDesc.from_json(doc) == self:
                    return doc
            except (ParseError, JoinNotFinitelyDescribable):
                pass
        return self._offset_doc()

    def _labels_doc(self, s: int) -> dict:
        P = self.period
        names = {}

        def name(cid, x):
            if cid[0] == "s":
                return "one"
            if self.is_infinite_class(cid):
                return f"inf:{cid[1]}"
            if cid[0] == "b" and x >= s:
                key = (cid[1], cid[2] - (x - s) // P - s // P)
                return "blk:" + names.setdefault(key, f"{cid[1]}" + _delta_tag(key[1]))
            return cid[1] if cid[0] == "i" else f"{cid[1]}@{cid[2]}"

        labels = [name(self.class_of(x), x) for x in range(s + P)]
        return {"period": P, "preperiod": s, "labels": labels, "patch": {},
                "classes": self.class_meta()}

    def _offset_doc(self) -> dict:
        """Prefix block ids ``("b", key, j)`` are written as patch names
        ``key@j``; such names are read back as finite-class names, which
        describes the same partition.
        """
        def label(e):
            if e[0] == "s":
                return "one"
            return f"inf:{e[1]}" if e[0] == "i" else f"blk:{e[1]}"

        labels = []
        P = self.period
        for r in range(P):
            e = self.table[r]
            labels.append(label(e))
        patch = {}
        for x, e in enumerate(self.prefix):
            if e[0] == "s":
                patch[str(x)] = "one"
            elif e[0] == "i":
                patch[str(x)] = e[1]
            else:
                patch[str(x)] = f"{e[1]}@{e[2]}"
        # every block must sit in one window for the label format; rebase
        # keys with a window offset onto fresh names
        blk_names = {}
        for r in range(P):
            e = self.table[r]
            if e[0] == "b":
                labels[r] = "blk:" + blk_names.setdefault((e[1], e[2]), f"{e[1]}{_delta_tag(e[2])}")
        return {
            "period": P,
            "preperiod": 0,
            "labels": labels,
            "patch": patch,
            "classes": self.class_meta(),
            **({"block_offsets": {r: self.table[r][2] for r in range(P)
                                  if self.table[r][0] == "b" and self.table[r][2]}}
               if any(e[0] == "b" and e[2] for e in self.table) else {}),
        }

    @classmethod
    def from_json(cls, doc) -> "PartitionDesc":
        if isinstance(doc, str):
            return cls.parse(doc)
        if not isinstance(doc, dict):
            raise ParseError("partition must be an object or a shorthand string")
        try:
            period = int(doc["period"])
            pre = int(doc.get("preperiod", 0))
            labels = list(doc["labels"])
            patch = {int(k): v for k, v in dict(doc.get("patch", {})).items()}
            offsets = {int(k): int(v) for k, v in dict(doc.get("block_offsets", {})).items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad partition document: {exc}") from None
        if offsets:
            if pre:
                raise ParseError("block_offsets require preperiod 0")
            return _from_offset_doc(period, labels, patch, offsets)
        return cls.from_labels(period, labels, pre, patch)

    @classmethod
    def parse(cls, text: str) -> "PartitionDesc":
        """Shorthands ``modK``, ``blocksK``, ``pairs``, ``singletons``, ``one``, ``e0``, ``e1``."""
        t = text.strip().lower()
        try:
            if t.startswith("mod"):
                return cls.mod(int(t[3:]))
            if t.startswith("blocks"):
                return cls.blocks(int(t[6:]))
        except ValueError:
            raise ParseError(f"bad partition shorthand {text!r}") from None
        if t == "pairs":
            return cls.blocks(2)
        if t == "singletons":
            return cls.singletons()
        if t in ("one", "all"):
            return cls.one_class()
        if t in ("e0", "e1"):
            e0, e1 = residue_pair_example()
            return e0 if t == "e0" else e1
        raise ParseError(f"unknown partition shorthand {text!r}")


def _delta_tag(d):
    return "" if d == 0 else f"~{d}"


def _from_offset_doc(period, labels, patch, offsets):
    if len(labels) != period:
        raise ParseError("labels must have period entries")
    parsed = [_parse_label(lab, f"label {i}") for i, lab in enumerate(labels)]
    patch = {x: _parse_label(v, f"patch {x}") for x, v in patch.items()}

    def class_of(x):
        if x in patch:
            kind, key = patch[x]
            return ("s", x) if kind == "s" else ("i", key)
        kind, key = parsed[x % period]
        if kind == "i":
            return ("i", key)
        if kind == "s":
            return ("s", x)
        base = key.split("~")[0]
        return ("i", f"{base}@{x // period + offsets.get(x % period, 0)}")

    # the patch spells prefix blocks as name@j; periodic blocks use the same spelling
    regime = max([0] + [x + 1 for x in patch])
    deltas = list(offsets.values()) + [0]
    span = (max(deltas) - min(deltas) + 2) * period + 1
    return PartitionDesc.from_function(class_of, regime, period, span)


def _parse_label(lab, where):
    if isinstance(lab, (list, tuple)) and lab:
        lab = lab[0] if len(lab) == 1 else f"{lab[0]}:{lab[1]}"
    if not isinstance(lab, str):
        if isinstance(lab, int) and not isinstance(lab, bool):
            return "i", str(lab)
        raise ParseError("label must be a string", where)
    if lab == "one":
        return "s", None
    if lab.startswith("inf:"):
        return "i", lab[4:]
    if lab.startswith("blk:"):
        return "b", lab[4:]
    if not lab:
        raise ParseError("empty label", where)
    return "i", lab


# ---------------------------------------------------------------------------
# builder and normal form


def _build(class_of, regime: int, P: int, span: int) -> PartitionDesc:
    pre = _ceil_to(max(regime, 0), P)
    if pre + 2 * P + span > WINDOW_LIMIT:
        raise JoinNotFinitelyDescribable(f"description needs a window of {pre + 2 * P + span}")
    cache = {}

    def cid(x):
        v = cache.get(x)
        if v is None:
            v = cache[x] = class_of(x)
        return v

    def members(x, lo_bound=0):
        c = cid(x)
        return [y for y in range(max(lo_bound, x - span), x + span + 1) if cid(y) == c]

    table = []
    infinite_ids = {}
    for r in range(P):
        x = pre + r
        c = cid(x)
        if cid(x + P) == c:
            infinite_ids[c] = True
            table.append(("i", ("I", c)))
            continue
        C = members(x)
        if len(C) == 1:
            table.append(SINGLE)
            continue
        m = min(C)
        table.append(("b", ("B", m % P), m // P - x // P))
    prefix = []
    for x in range(pre):
        c = cid(x)
        if c in infinite_ids:
            prefix.append(("i", ("I", c)))
            continue
        C = members(x)
        if len(C) == 1:
            prefix.append(SINGLE)
        elif max(C) >= pre:
            m = min(C)
            prefix.append(("b", ("B", m % P), m // P))
        else:
            prefix.append(("i", ("F", min(C))))
    return PartitionDesc(pre, P, prefix, table)


def _normalise(E: PartitionDesc) -> PartitionDesc:
    E = _reduce_period(E)
    E = _trim_prefix(E)
    return _rename(E)


def _shift_invariant(E: PartitionDesc, start: int, d: int) -> bool:
    """Whether the structure from ``start`` on is invariant under ``x -> x + d``."""
    s = E.span()
    for x in range(start, start + E.period + d):
        cx, cd = E.class_of(x), E.class_of(x + d)
        if E.is_infinite_class(cx) or E.is_infinite_class(cd):
            if cx != cd:
                return False
            continue
        for y in range(x - s - d, x + s + 1):
            left = y >= 0 and E.class_of(y) == cx
            right = y + d >= 0 and E.class_of(y + d) == cd
            if left != right:
                return False
    return True


def _reduce_period(E: PartitionDesc) -> PartitionDesc:
    P = E.period
    for d in range(1, P):
        if P % d:
            continue
        if _shift_invariant(E, E.pre, d):
            return _build(E.class_of, E.pre, d, E.span())
    return E


def _trim_prefix(E: PartitionDesc) -> PartitionDesc:
    P = E.period
    start = E.pre
    while start >= P and _shift_invariant(E, start - P, P):
        start -= P
    if start == E.pre:
        return E
    return _build(E.class_of, start, P, E.span())


def _rename(E: PartitionDesc) -> PartitionDesc:
    names = {}
    fresh = count()

    def nm(key):
        if key not in names:
            names[key] = f"c{next(fresh)}"
        return names[key]

    def conv(e):
        if e[0] == "s":
            return e
        return (e[0], nm(e[1])) + tuple(e[2:])

    prefix = [conv(e) for e in E.prefix]
    table = [conv(e) for e in E.table]
    return PartitionDesc(E.pre, E.period, prefix, table)


def _frame(*parts: PartitionDesc):
    P = 1
    for E in parts:
        P = lcm(P, E.period)
    span = max(E.span() for E in parts)
    # a finite class may straddle a prefix boundary, so periodicity starts a span later
    pre = _ceil_to(max(E.pre for E in parts) + span, P)
    return pre, P, span


# ---------------------------------------------------------------------------
# lattice operations


def meet(E1: PartitionDesc, E2: PartitionDesc) -> PartitionDesc:
    """Common refinement: ``x ~ y`` iff related in both."""
    pre, P, span = _frame(E1, E2)
    return PartitionDesc.from_function(lambda x: (E1.class_of(x), E2.class_of(x)), pre, P, span)


class _UF:
    def __init__(self):
        self.parent = {}

    def find(self, a):
        self.parent.setdefault(a, a)
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def join(E1: PartitionDesc, E2: PartitionDesc, *, windows: int = 6) -> PartitionDesc:
    """Finest partition coarser than both (transitive closure of the union).

    Closure is computed explicitly on the prefix plus ``windows`` period
    windows and extended periodically.  Raises
    :class:`JoinNotFinitelyDescribable` if the closure on the sample is not
    yet periodic (chains of finite classes drifting across windows).
    """
    pre, P, span = _frame(E1, E2)
    width = max(P, span)
    N = pre + windows * width
    if N > WINDOW_LIMIT:
        raise JoinNotFinitelyDescribable(f"closure needs a window of {N} points")
    uf = _UF()
    for x in range(N):
        for side, E in ((1, E1), (2, E2)):
            uf.union(("pt", x), (side, E.class_of(x)))
    shared = set()
    for side, E in ((1, E1), (2, E2)):
        for key in E.infinite_keys():
            shared.add(uf.find((side, ("i", key))))
    # a class containing x and x + P is a periodic chain, hence infinite
    for x in range(pre, N - P):
        root = uf.find(("pt", x))
        if root == uf.find(("pt", x + P)):
            shared.add(root)
    comp_pts = defaultdict(list)
    for x in range(N):
        comp_pts[uf.find(("pt", x))].append(x)

    # sample windows well inside the explicit region
    lo = pre + 2 * width
    hi = lo + width
    for x in range(lo, hi):
        root = uf.find(("pt", x))
        if root in shared:
            continue
        pts = comp_pts[root]
        if min(pts) < pre + width or max(pts) >= N - width:
            raise JoinNotFinitelyDescribable(
                f"the class of {x} is not confined to a bounded window")
        shifted = comp_pts[uf.find(("pt", x + P))]
        if shifted != [y + P for y in pts]:
            raise JoinNotFinitelyDescribable("closure is not periodic on the sample")

    def class_of(x):
        if x < hi:
            root = uf.find(("pt", x))
            if root in shared:
                return ("inf", min(comp_pts[root]))
            return ("fin", min(comp_pts[root]))
        k = (x - lo) // P
        y = x - k * P
        root = uf.find(("pt", y))
        if root in shared:
            return ("inf", min(comp_pts[root]))
        return ("fin", min(comp_pts[root]) + k * P)

    return PartitionDesc.from_function(class_of, lo, P, 2 * width + 1)


def refines(F: PartitionDesc, E: PartitionDesc) -> bool:
    """True iff every ``F``-class lies inside an ``E``-class (``E`` is coarser)."""
    return meet(F, E) == F


def group_is_finite(E: PartitionDesc) -> bool:
    """Whether the class-preserving finitary permutations form a finite group.

    True iff there is no infinite class and only finitely many classes have
    two or more points.
    """
    counts = defaultdict(int)
    for e in E.table:
        if e[0] == "i":
            return False
        if e[0] == "b":
            counts[e[1]] += 1
    return all(v < 2 for v in counts.values())


def pairs_view(E: PartitionDesc, n: int) -> frozenset:
    """The partition as a set of pairs, restricted to ``[0, n)``."""
    return frozenset((x, y) for x in range(n) for y in range(n) if E.same_class(x, y))


def orbit_partition(g: FinPerm) -> PartitionDesc:
    """Partition of N into the cycles of ``g`` and singletons."""
    owner = {}
    for i, cyc in enumerate(g.cycles()):
        for x in cyc:
            owner[x] = i

    def class_of(x):
        return ("cyc", owner[x]) if x in owner else ("s", x)

    return PartitionDesc.from_function(class_of, g.max_point + 1, 1, g.max_point + 2)


def partition_from_pairs(pairs: Iterable[tuple[int, int]]) -> PartitionDesc:
    """Finest partition relating each listed pair."""
    uf = _UF()
    pts = set()
    for a, b in pairs:
        uf.union(a, b)
        pts.update((a, b))
    bound = max(pts) + 1 if pts else 0
    return PartitionDesc.from_function(
        lambda x: ("c", uf.find(x)) if x in pts else ("s", x), bound, 1, bound + 1)


def coarsen_by_perm(E0: PartitionDesc, g: FinPerm) -> PartitionDesc:
    """Merge the classes of ``x`` and ``g(x)`` for every moved point.

    The group of the result equals the group generated by ``G_E0`` and
    ``g`` whenever every class that ``g`` carries into another class has a
    point outside ``supp(g)``.  Infinite classes always do; for finite
    classes see :func:`coarsen_is_exact`.
    """
    if g.is_identity():
        return E0
    return join(E0, orbit_partition(g))


def coarsen_is_exact(E0: PartitionDesc, g: FinPerm, bound: int | None = None) -> bool:
    """Whether each class that ``g`` moves across has a spare point outside ``supp(g)``.

    With ``bound`` the spare must lie below it (the window version).
    """
    supp = g.support
    for x in supp:
        a, b = E0.class_of(x), E0.class_of(g(x))
        if a == b:
            continue
        for c, y0 in ((a, x), (b, g(x))):
            if bound is None and E0.is_infinite_class(c):
                continue
            if _spare(E0, c, y0, supp, bound) is None:
                return False
    return True


def _spare(E0, cid, near, supp, bound):
    if bound is None:
        pts = E0.class_around(near)
        if pts is None:
            limit = max(supp) + E0.pre + 2 * E0.period + 1
            pts = (y for y in range(limit) if E0.class_of(y) == cid)
    else:
        pts = (y for y in range(bound) if E0.class_of(y) == cid)
    return next((y for y in sorted(pts) if y not in supp), None)


def extract_transposition(E0: PartitionDesc, g: FinPerm, a: int, b: int,
                          bound: int | None = None) -> FinPerm:
    """The transposition ``(a', b')`` obtained from ``g`` inside ``<G_E0, g>``.

    ``a'`` and ``b'`` are the least points of the classes of ``a`` and ``b``
    outside ``supp(g)`` (below ``bound`` when given).  The product
    ``(a a') g^-1 (b b') g (a a')`` is evaluated, not assumed.
    """
    return extract_transposition_word(E0, g, a, b, bound)[0]


def extract_transposition_word(E0, g, a, b, bound=None):
    """:func:`extract_transposition` plus the five-factor word ``((t, e), ...)``."""
    if g(a) != b:
        raise ValueError(f"g does not map {a} to {b}")
    Pa, Pb = E0.class_of(a), E0.class_of(b)
    if Pa == Pb:
        raise ValueError("a and b lie in the same class")
    supp = g.support
    a2 = _spare(E0, Pa, a, supp, bound)
    b2 = _spare(E0, Pb, b, supp, bound)
    if a2 is None or b2 is None:
        raise NoSparePoint(f"the class of {a if a2 is None else b} has no point outside "
                           f"supp(g)" + (f" below {bound}" if bound is not None else ""))
    ta, tb = transposition(a, a2), transposition(b, b2)
    word = ((ta, 1), (g, -1), (tb, 1), (g, 1), (ta, 1))
    out = ta * g.inverse() * tb * g * ta
    if out != transposition(a2, b2):  # pragma: no cover - algebraic identity
        raise AssertionError(f"product is {out}, expected ({a2} {b2})")
    return out, word


def almost_coarser(Y: PartitionDesc, X: PartitionDesc, patch_budget: int = 64):
    """Decide whether ``X ⊆ Y ∨ Z`` for some finite set of pairs ``Z``.

    Returns a :class:`~sflattice.lattice.Verdict`: ``Holds`` with a minimal
    ``Z`` of at most ``patch_budget`` pairs, or ``Fails`` with a pair of
    points that ``X`` forces together although ``Y`` keeps them apart, in a
    pattern repeating every period window (so no finite ``Z`` suffices).
    """
    from .lattice import Verdict

    J = join(X, Y)
    pre, P, _ = _frame(J, Y, X)
    q = pre + P
    for r in range(P):
        x = q + r
        cj, cy = J.class_of(x), Y.class_of(x)
        if J.is_infinite_class(cj) and not Y.is_infinite_class(cy):
            y = next(z for z in range(x + 1, x + 2 * P + J.span() + 2)
                     if J.class_of(z) == cj and not Y.same_class(x, z))
            return Verdict.fails(
                {"pair": [x, y], "period": P,
                 "reason": "x lies in a finite class of Y inside an infinite class of the "
                           "join; the same happens in every later window"}, exact=True)
        if not J.is_infinite_class(cj):
            for z in J.class_around(x):
                if not Y.same_class(x, z):
                    return Verdict.fails(
                        {"pair": [x, z], "period": P,
                         "reason": "the join merges two Y-classes here and in every "
                                   "later window"}, exact=True)
    # only finitely many Y-classes get merged: those met below q + P
    merged = defaultdict(set)
    for x in range(q + P):
        merged[J.class_of(x)].add(Y.class_of(x))
    Z = []
    for jc in sorted(merged, key=J.least_point):
        reps = sorted(Y.least_point(c) for c in merged[jc])
        Z.extend((reps[0], r) for r in reps[1:])
    if len(Z) > patch_budget:
        return Verdict.fails({"min_patch_size": len(Z), "patch_budget": patch_budget,
                              "reason": "the smallest patch exceeds the budget"}, exact=True)
    return Verdict.holds({"Z": [list(p) for p in Z]}, exact=True)


def residue_pair_example() -> tuple[PartitionDesc, PartitionDesc]:
    """Two orthogonal partitions, the second almost finer than the first.

    With ``A = 3N``, ``B = 3N + 1`` and ``C = 3N + 2``: ``E0`` has the classes
    ``A``, ``B`` and singletons on ``C``; ``E1`` pairs ``3k`` with ``3k + 1``
    and has singletons on ``C``.
    """
    e0 = PartitionDesc.from_labels(3, ["inf:A", "inf:B", "one"])
    e1 = PartitionDesc.from_labels(3, ["blk:R", "blk:R", "one"])
    return e0, e1


def partition_group(E: PartitionDesc):
    """The group of finitary permutations preserving every class of ``E``."""
    from .groups import PartitionGroup

    return PartitionGroup(E)
