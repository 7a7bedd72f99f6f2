"""
Lazily described subgroups of the finitary symmetric group.

A :class:`GroupDesc` is never expanded as a whole.  Queries work inside a
window ``[0, bound)``: the *window group* is the subgroup generated by the
describable generators whose support lies in the window.  It is computed as
a direct product of factors on disjoint point sets:

* symmetric factors, the full symmetric group on a block (partition classes,
  possibly merged along extra generators by transposition extraction);
* closure factors, enumerated by breadth-first closure with a word for
  every element.

Membership, local parts and transport maps all decompose over the factors,
so large symmetric blocks never get enumerated unless a query asks for
them.  Words (membership certificates) are tuples of ``(perm, exponent)``
pairs; :func:`eval_word` multiplies them left to right.
"""

from __future__ import annotations

import bisect
import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import BudgetExceeded, ParseError
from .indexset import IndexSet
from .partitions import PartitionDesc, coarsen_is_exact, join, orbit_partition
from .perm import IDENTITY, FinPerm, make_k_cycle, transposition

__all__ = [
    "WindowConfig",
    "GroupDesc",
    "FinitelyGenerated",
    "DisjointFamily",
    "PartitionGroup",
    "ExtendedBy",
    "LocalPart",
    "MembershipVerdict",
    "TransportMaps",
    "trivial_group",
    "generated_over",
    "gstar",
    "gstar_subgroup",
    "gstar_block",
    "membership",
    "local_part",
    "transport_maps",
    "restricted_transport_maps",
    "window_generators",
    "window_elements",
    "window_orbits",
    "is_finite_desc",
    "is_generator",
    "trace_set",
    "eval_word",
    "check_certificate",
    "group_from_json",
]

DEFAULT_BOUND = 64
DEFAULT_BUDGET = 10 ** 6


@dataclass(frozen=True)
class WindowConfig:
    """Restrict computation to points below ``bound``; cap closures at ``element_budget``."""

    bound: int = DEFAULT_BOUND
    element_budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.bound < 1 or self.element_budget < 1:
            raise ValueError("bound and element_budget must be positive")

    def with_bound(self, bound: int) -> "WindowConfig":
        return WindowConfig(bound, self.element_budget)


def _window(w) -> WindowConfig:
    if w is None:
        return WindowConfig()
    if isinstance(w, int):
        return WindowConfig(w)
    return w


# ---------------------------------------------------------------------------
# words


Word = tuple  # ((FinPerm, exponent), ...)


def eval_word(word: Iterable) -> FinPerm:
    """Left-to-right product ``p1**e1 * p2**e2 * ...``."""
    out = IDENTITY
    for p, e in word:
        out = out * (p ** e)
    return out


def _inv_word(word: Word) -> Word:
    return tuple((p, -e) for p, e in reversed(word))


def _reduce_word(word: Iterable) -> Word:
    """Merge equal neighbours and drop cancelling pairs."""
    out: list = []
    for p, e in word:
        if p.is_identity() or e == 0:
            continue
        if p.order() == 2:
            e %= 2
            if not e:
                continue
        if out and out[-1][0] == p:
            e2 = out[-1][1] + e
            out.pop()
            if p.order() == 2:
                e2 %= 2
            if e2:
                out.append((p, e2))
            continue
        out.append((p, e))
    return tuple(out)


# ---------------------------------------------------------------------------
# descriptions


class GroupDesc:
    """Base class of the four description variants."""

    kind = "group"

    def to_json(self) -> dict:  # pragma: no cover - overridden
        raise NotImplementedError

    def __str__(self) -> str:
        return describe(self)


@dataclass(frozen=True)
class FinitelyGenerated(GroupDesc):
    """``<generators>``; always a finite group."""

    generators: tuple = ()
    kind = "finitely_generated"

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))

    def to_json(self) -> dict:
        return {"type": self.kind, "generators": [g.to_json() for g in self.generators]}


@lru_cache(maxsize=None)
def _primes(n: int) -> tuple[int, ...]:
    """The first ``n`` primes."""
    out: list[int] = []
    c = 2
    while len(out) < n:
        if all(c % p for p in out if p * p <= c):
            out.append(c)
        c += 1
    return tuple(out)


class _GstarLayout:
    """Consecutive prime-length blocks: block ``i`` starts at the sum of the first ``i`` primes."""

    def __init__(self):
        self.starts = [0]

    def _extend_to_index(self, i):
        while len(self.starts) <= i + 1:
            k = len(self.starts)
            self.starts.append(self.starts[-1] + _primes(k)[k - 1])

    def _extend_to_point(self, x):
        while self.starts[-1] <= x:
            self._extend_to_index(len(self.starts))

    def block(self, i: int) -> range:
        self._extend_to_index(i)
        return range(self.starts[i], self.starts[i + 1])

    def index_of(self, x: int) -> int:
        self._extend_to_point(x)
        return bisect.bisect_right(self.starts, x) - 1


_LAYOUT = _GstarLayout()


def gstar_block(i: int) -> range:
    """Support of the ``i``-th generator of G*: a block of ``p_i`` consecutive points."""
    return _LAYOUT.block(i)


@lru_cache(maxsize=None)
def _gstar_cycle(i: int) -> FinPerm:
    return make_k_cycle(list(gstar_block(i)))


@dataclass(frozen=True)
class DisjointFamily(GroupDesc):
    """Group generated by non-trivial permutations with pairwise disjoint supports.

    ``family="gstar"`` is the prime-cycle family restricted to ``indices``
    (generator ``i`` is a ``p_i``-cycle on :func:`gstar_block` ``(i)``);
    ``family="explicit"`` lists the generators in ``perms``.
    """

    family: str = "gstar"
    indices: IndexSet = field(default_factory=IndexSet.everything)
    perms: tuple = ()
    kind = "disjoint_family"

    def __post_init__(self):
        object.__setattr__(self, "perms", tuple(self.perms))
        if self.family not in ("gstar", "explicit"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == "explicit":
            seen: set = set()
            for p in self.perms:
                if p.is_identity():
                    raise ValueError("family generators must be non-trivial")
                if seen & p.support:
                    raise ValueError("family generators must have disjoint supports")
                seen |= p.support
            object.__setattr__(self, "indices", IndexSet.finite(range(len(self.perms))))

    def rule(self, i: int) -> FinPerm | None:
        """Generator ``i``, or None when ``i`` is not an index of the family."""
        if self.family == "explicit":
            return self.perms[i] if 0 <= i < len(self.perms) else None
        if i not in self.indices:
            return None
        return _gstar_cycle(i)

    def locate(self, x: int) -> int | None:
        """Index of the generator moving ``x``, if any."""
        if self.family == "explicit":
            for i, p in enumerate(self.perms):
                if x in p.support:
                    return i
            return None
        i = _LAYOUT.index_of(x)
        return i if i in self.indices else None

    def generators_below(self, bound: int) -> list[tuple[int, FinPerm]]:
        out = []
        if self.family == "explicit":
            return [(i, p) for i, p in enumerate(self.perms) if p.max_point < bound]
        i = 0
        while gstar_block(i).stop <= bound:
            if i in self.indices:
                out.append((i, self.rule(i)))
            i += 1
        return out

    def is_finite(self) -> bool:
        return self.family == "explicit" or self.indices.is_finite()

    def to_json(self) -> dict:
        if self.family == "explicit":
            return {"type": self.kind, "family": "explicit",
                    "perms": [p.to_json() for p in self.perms]}
        return {"type": self.kind, "family": "gstar", "indices": self.indices.to_json()}


@dataclass(frozen=True)
class PartitionGroup(GroupDesc):
    """Finitary permutations preserving every class of ``partition``."""

    partition: PartitionDesc
    kind = "partition_group"

    def to_json(self) -> dict:
        return {"type": self.kind, "partition": self.partition.to_json()}


@dataclass(frozen=True)
class ExtendedBy(GroupDesc):
    """``<base, extra>``: ``base`` extended by finitely many permutations."""

    base: GroupDesc
    extra: tuple = ()
    kind = "extended_by"

    def __post_init__(self):
        object.__setattr__(self, "extra", tuple(self.extra))

    def to_json(self) -> dict:
        return {"type": self.kind, "base": self.base.to_json(),
                "extra": [g.to_json() for g in self.extra]}


def trivial_group() -> FinitelyGenerated:
    return FinitelyGenerated(())


def generated_over(G: GroupDesc, X: Sequence[FinPerm]) -> GroupDesc:
    """The group generated by ``G`` and ``X``."""
    return ExtendedBy(G, tuple(X))


def gstar() -> DisjointFamily:
    """G*: disjoint cycles of lengths 2, 3, 5, 7, ... on consecutive blocks from 0."""
    return DisjointFamily("gstar", IndexSet.everything())


def gstar_subgroup(A: IndexSet | Iterable[int]) -> DisjointFamily:
    """``G_A``: the subgroup of G* generated by the generators with index in ``A``."""
    if not isinstance(A, IndexSet):
        A = IndexSet.finite(A)
    return DisjointFamily("gstar", A)


def describe(G: GroupDesc) -> str:
    if isinstance(G, FinitelyGenerated):
        return "<" + ", ".join(map(str, G.generators)) + ">"
    if isinstance(G, DisjointFamily):
        if G.family == "explicit":
            return "<<" + ", ".join(map(str, G.perms)) + ">>"
        if G.indices == IndexSet.everything():
            return "G*"
        return f"G*[{G.indices!r}]"
    if isinstance(G, PartitionGroup):
        return f"G_E({G.partition!r})"
    return f"<{describe(G.base)}; " + ", ".join(map(str, G.extra)) + ">"


def _flatten(G: GroupDesc) -> tuple[GroupDesc, tuple]:
    """Root description and every extra generator above it."""
    extra: list = []
    while isinstance(G, ExtendedBy):
        extra[:0] = G.extra
        G = G.base
    if isinstance(G, FinitelyGenerated):
        return FinitelyGenerated(()), G.generators + tuple(extra)
    return G, tuple(extra)


def is_finite_desc(G: GroupDesc) -> bool:
    """Whether the description denotes a finite group (decided from the description)."""
    from .partitions import group_is_finite

    root, _ = _flatten(G)
    if isinstance(root, FinitelyGenerated):
        return True
    if isinstance(root, DisjointFamily):
        return root.is_finite()
    return group_is_finite(root.partition)


# ---------------------------------------------------------------------------
# window engine


class _Budget:
    def __init__(self, limit):
        self.limit = limit
        self.used = 0

    def spend(self, n=1):
        self.used += n
        if self.used > self.limit:
            raise BudgetExceeded(f"closure enumeration exceeded {self.limit} elements")


class _SymFactor:
    """Full symmetric group on ``points``, with a spanning tree of transposition words."""

    kind = "sym"

    def __init__(self, points, edges):
        self.points = frozenset(points)
        self._adj: dict[int, list] = {x: [] for x in self.points}
        for a, b, word in edges:
            self._adj[a].append((b, word))
            self._adj[b].append((a, _inv_word(word)))

    def _path(self, x, y):
        prev = {x: None}
        q = deque([x])
        while q:
            u = q.popleft()
            if u == y:
                break
            for v, word in self._adj[u]:
                if v not in prev:
                    prev[v] = (u, word)
                    q.append(v)
        steps = []
        while prev[y] is not None:
            u, word = prev[y]
            steps.append((u, y, word))
            y = u
        return steps[::-1]

    def transposition_word(self, x, y) -> Word:
        steps = self._path(x, y)
        # (v0 vk) = c (v_{k-1} v_k) c^-1 with c = (v0 v1) ... (v_{k-2} v_{k-1})
        c: tuple = ()
        for _, _, word in steps[:-1]:
            c += word
        return _reduce_word(c + steps[-1][2] + _inv_word(c))

    def contains(self, g: FinPerm) -> bool:
        return g.support <= self.points

    def word(self, g: FinPerm) -> Word:
        out: tuple = ()
        for cyc in g.cycles():
            for a, b in zip(cyc, cyc[1:]):
                out += self.transposition_word(a, b)
        return _reduce_word(out)

    def generators(self) -> list[tuple[FinPerm, Word]]:
        pts = sorted(self.points)
        if len(pts) < 2:
            return []
        t = transposition(pts[0], pts[1])
        gens = [(t, self.transposition_word(pts[0], pts[1]))]
        if len(pts) > 2:
            cyc = make_k_cycle(pts)
            gens.append((cyc, self.word(cyc)))
        return gens

    def elements_within(self, A, budget: _Budget) -> Iterable[FinPerm]:
        pts = sorted(self.points & A)
        for line in itertools.permutations(pts):
            budget.spend()
            yield FinPerm(dict(zip(pts, line)), check=False)

    def transports(self, A, B, budget):
        A, B = sorted(A), sorted(B)
        out = []
        for img in itertools.permutations(B):
            budget.spend()
            out.append(tuple(zip(A, img)))
        return out

    def orbits(self):
        return [self.points]

    def size_hint(self) -> int:
        from math import factorial

        return factorial(len(self.points))


class _ClosureFactor:
    """Finite group generated by ``gens`` on ``points``, fully enumerated."""

    kind = "closure"

    def __init__(self, points, gens, budget: _Budget):
        self.points = frozenset(points)
        self.gens = list(gens)  # [(perm, word)]
        self.parent: dict[FinPerm, tuple] = {IDENTITY: None}
        q = deque([IDENTITY])
        budget.spend()
        while q:
            e = q.popleft()
            for i, (g, _) in enumerate(self.gens):
                h = g * e
                if h not in self.parent:
                    budget.spend()
                    self.parent[h] = (e, i)
                    q.append(h)

    def contains(self, g: FinPerm) -> bool:
        return g in self.parent

    def word(self, g: FinPerm) -> Word:
        out: list = []
        while self.parent[g] is not None:
            e, i = self.parent[g]
            out.append(self.gens[i][1])
            g = e
        # g = g_k ... g_1 with g_1 applied first
        return _reduce_word(itertools.chain.from_iterable(out))

    def generators(self):
        return list(self.gens)

    def elements_within(self, A, budget):
        for e in self.parent:
            if e.support <= A:
                yield e

    def transports(self, A, B, budget):
        A = sorted(A)
        Bs = frozenset(B)
        out = set()
        for e in self.parent:
            if e.image(A) == Bs:
                out.add(tuple((a, e(a)) for a in A))
        return sorted(out)

    def orbits(self):
        uf = {x: x for x in self.points}

        def find(x):
            while uf[x] != x:
                uf[x] = uf[uf[x]]
                x = uf[x]
            return x

        for g, _ in self.gens:
            for x, y in g.items():
                uf[find(x)] = find(y)
        groups: dict = {}
        for x in self.points:
            groups.setdefault(find(x), set()).add(x)
        return [frozenset(v) for v in groups.values()]

    def size_hint(self) -> int:
        return len(self.parent)


@dataclass
class _WindowGroup:
    bound: int
    factors: list
    exact: bool
    owner: dict  # point -> factor index

    def factor_of(self, x):
        i = self.owner.get(x)
        return None if i is None else self.factors[i]


def _seed(root: GroupDesc, bound: int):
    """Symmetric blocks (with atomic transposition words) and generators of the root."""
    blocks = []
    gens = []
    if isinstance(root, PartitionGroup):
        E = root.partition
        for cls in E.classes_upto(bound):
            pts = sorted(cls)
            c0 = pts[0]
            edges = []
            for y in pts[1:]:
                t = transposition(c0, y)
                edges.append((c0, y, ((t, 1),)))
            blocks.append((pts, edges))
    elif isinstance(root, DisjointFamily):
        gens = [p for _, p in root.generators_below(bound)]
    return blocks, gens


class _UF:
    def __init__(self):
        self.p = {}

    def find(self, x):
        self.p.setdefault(x, x)
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            self.p[max(a, b)] = min(a, b)
        return min(a, b)


def _build(G: GroupDesc, bound: int, budget_limit: int) -> _WindowGroup:
    root, extra = _flatten(G)
    blocks, base_gens = _seed(root, bound)
    extra_in = [g for g in extra if g.max_point < bound and not g.is_identity()]
    budget = _Budget(budget_limit)

    # symmetric blocks with their tree edges; origin[x] = original class rep
    block_of: dict[int, int] = {}
    members: dict[int, list] = {}
    edges: dict[int, list] = {}
    origin: dict[int, int] = {}
    for pts, es in blocks:
        r = pts[0]
        members[r] = list(pts)
        edges[r] = list(es)
        for x in pts:
            block_of[x] = r
            origin[x] = r

    def merge(ra, rb, edge):
        keep, drop = min(ra, rb), max(ra, rb)
        for x in members[drop]:
            block_of[x] = keep
        members[keep] += members.pop(drop)
        edges[keep] += edges.pop(drop) + [edge]

    def tword(r, x, y):
        if x == y:
            return ()
        return _SymFactor(members[r], edges[r]).transposition_word(x, y)

    def spare(r, near, supp):
        own = [y for y in members[r] if origin[y] == origin[near] and y not in supp]
        rest = [y for y in members[r] if y not in supp]
        pool = own or rest
        return min(pool) if pool else None

    pending = list(extra_in)
    changed = True
    while changed and blocks:
        changed = False
        for g in pending:
            supp = g.support
            for x in sorted(supp):
                y = g(x)
                if x not in block_of or y not in block_of:
                    continue
                ra, rb = block_of[x], block_of[y]
                if ra == rb:
                    continue
                if len(supp) == 2:
                    merge(ra, rb, (x, y, ((g, 1),)))
                    changed = True
                    continue
                a2, b2 = spare(ra, x, supp), spare(rb, y, supp)
                if a2 is None or b2 is None:
                    continue
                wa = tword(ra, x, a2)
                wb = tword(rb, y, b2)
                word = _reduce_word(wa + ((g, -1),) + wb + ((g, 1),) + wa)
                if eval_word(word) != transposition(a2, b2):  # pragma: no cover
                    raise AssertionError("bridge word does not evaluate to a transposition")
                merge(ra, rb, (a2, b2, word))
                changed = True
    # generators not already inside the product of symmetric blocks
    rest = []
    for g in base_gens + pending:
        if all(x in block_of and block_of[x] == block_of[g(x)] for x in g.support):
            continue
        rest.append(g)
    uf = _UF()
    for r, pts in members.items():
        for x in pts:
            uf.union(r, x)
    for g in rest:
        s = sorted(g.support)
        for x in s[1:]:
            uf.union(s[0], x)
    comp_gens: dict[int, list] = {}
    for g in rest:
        comp_gens.setdefault(uf.find(min(g.support)), []).append(g)
    comp_blocks: dict[int, list] = {}
    for r in members:
        comp_blocks.setdefault(uf.find(r), []).append(r)

    factors = []
    for c in sorted(set(comp_gens) | set(comp_blocks)):
        gens = comp_gens.get(c, [])
        rs = comp_blocks.get(c, [])
        if not gens:
            for r in rs:
                if len(members[r]) >= 2:
                    factors.append(_SymFactor(members[r], edges[r]))
            continue
        fgens = [(g, ((g, 1),)) for g in gens]
        pts = set()
        for g in gens:
            pts |= g.support
        for r in rs:
            if len(members[r]) >= 2:
                sf = _SymFactor(members[r], edges[r])
                fgens += sf.generators()
                pts |= sf.points
        factors.append(_ClosureFactor(pts, fgens, budget))
    owner = {}
    for i, f in enumerate(factors):
        for x in f.points:
            owner[x] = i

    exact = _window_exact(G, root, extra, bound, members, rest)
    return _WindowGroup(bound, factors, exact, owner)


def _window_exact(G, root, extra, bound, members, rest) -> bool:
    """Whether the window group equals ``G ∩ Sym([0, bound))``."""
    if isinstance(root, FinitelyGenerated):
        # the whole group is generated by the listed generators
        return all(g.max_point < bound for g in extra)
    if isinstance(root, DisjointFamily):
        if not extra:
            return True
        # extras must not reach generators that cross the window edge
        seen = set()
        todo = [x for g in extra for x in g.support]
        while todo:
            x = todo.pop()
            if x in seen:
                continue
            if x >= bound:
                return False
            seen.add(x)
            i = root.locate(x)
            if i is not None:
                todo += list(root.rule(i).support)
            for g in extra:
                if x in g.support:
                    todo += list(g.support)
        return True
    # partition group: exact when the extras only coarsen and the merged
    # blocks are the classes of the coarsened partition inside the window
    if rest:
        return False
    E = root.partition
    for g in extra:
        if not coarsen_is_exact(E, g):
            return False
        E = join(E, orbit_partition(g))
    want = {frozenset(c) for c in E.classes_upto(bound) if len(c) >= 2}
    have = {frozenset(pts) for pts in members.values() if len(pts) >= 2}
    return want == have


@lru_cache(maxsize=4096)
def _window_group(G: GroupDesc, bound: int, budget: int) -> _WindowGroup:
    return _build(G, bound, budget)


def _wg(G: GroupDesc, w: WindowConfig) -> _WindowGroup:
    return _window_group(G, w.bound, w.element_budget)


# ---------------------------------------------------------------------------
# results


@dataclass(frozen=True)
class MembershipVerdict:
    """``member`` / ``non_member`` / ``unknown`` with a certificate or a reason."""

    status: str
    certificate: Word | None = None
    reason: str | None = None
    window: int | None = None

    MEMBER = "member"
    NON_MEMBER = "non_member"
    UNKNOWN = "unknown"

    @property
    def is_member(self) -> bool:
        return self.status == self.MEMBER

    @property
    def is_non_member(self) -> bool:
        return self.status == self.NON_MEMBER

    def to_json(self) -> dict:
        doc: dict = {"status": self.status}
        if self.certificate is not None:
            doc["certificate"] = [[p.to_json(), e] for p, e in self.certificate]
        if self.reason is not None:
            doc["reason"] = self.reason
        if self.window is not None:
            doc["window"] = self.window
        return doc


@dataclass(frozen=True)
class LocalPart:
    """Elements of a group with support inside ``domain``."""

    domain: frozenset
    elements: frozenset
    exact: bool

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g):
        return g in self.elements


@dataclass(frozen=True)
class TransportMaps:
    """Restrictions ``g|A`` of group elements with ``g(A) = B``, as sorted pair tuples."""

    domain: tuple
    codomain: frozenset
    maps: frozenset
    exact: bool

    def __len__(self):
        return len(self.maps)

    def __contains__(self, f):
        if isinstance(f, dict):
            f = tuple(sorted(f.items()))
        return f in self.maps


# ---------------------------------------------------------------------------
# queries


def membership(g: FinPerm, G: GroupDesc, w=None) -> MembershipVerdict:
    """Decide ``g`` in the window group of ``G``, with a word as certificate."""
    w = _window(w)
    if g.max_point >= w.bound:
        return MembershipVerdict(MembershipVerdict.UNKNOWN, reason="support leaves the window",
                                 window=w.bound)
    W = _wg(G, w)
    parts: dict[int, dict] = {}
    reason = None
    for x, y in g.items():
        i = W.owner.get(x)
        if i is None or W.owner.get(y) != i:
            reason = f"{x} -> {y} is not realised by any factor"
            break
        parts.setdefault(i, {})[x] = y
    if reason is None:
        word: tuple = ()
        for i in sorted(parts):
            f = W.factors[i]
            h = FinPerm(parts[i], check=False)
            if not f.contains(h):
                reason = f"restriction {h} is not in the factor on {sorted(f.points)[:6]}..."
                break
            word += f.word(h)
        else:
            return MembershipVerdict(MembershipVerdict.MEMBER, certificate=_reduce_word(word),
                                     window=w.bound)
    if W.exact:
        return MembershipVerdict(MembershipVerdict.NON_MEMBER, reason=reason, window=w.bound)
    return MembershipVerdict(MembershipVerdict.UNKNOWN, reason=reason, window=w.bound)


def local_part(G: GroupDesc, A: Iterable[int], w=None) -> LocalPart:
    """All window-group elements with support inside ``A``."""
    w = _window(w)
    A = frozenset(A)
    if A and max(A) >= w.bound:
        raise ValueError("A must lie inside the window")
    W = _wg(G, w)
    budget = _Budget(w.element_budget)
    pieces = []
    for f in W.factors:
        if len(f.points & A) < 2:
            continue
        pieces.append(list(f.elements_within(A, budget)))
    elements = [IDENTITY]
    for piece in pieces:
        nxt = []
        for a in elements:
            for b in piece:
                budget.spend()
                nxt.append(a * b)
        elements = nxt
    return LocalPart(A, frozenset(elements), W.exact)


def _factor_split(W, A, B):
    """Group points of ``A`` and ``B`` by factor; None if sizes disagree."""
    pa: dict = {}
    pb: dict = {}
    for x in A:
        pa.setdefault(W.owner.get(x), []).append(x)
    for y in B:
        pb.setdefault(W.owner.get(y), []).append(y)
    if set(pa) != set(pb) or any(len(pa[k]) != len(pb[k]) for k in pa):
        return None
    if None in pa and sorted(pa[None]) != sorted(pb[None]):
        return None
    return pa, pb


def _combine(per_factor):
    out = [()]
    for choices in per_factor:
        out = [a + c for a in out for c in choices]
    return frozenset(tuple(sorted(m)) for m in out)


def transport_maps(G: GroupDesc, A: Iterable[int], B: Iterable[int], w=None) -> TransportMaps:
    """Restrictions to ``A`` of window-group elements carrying ``A`` onto ``B``."""
    w = _window(w)
    A, B = sorted(set(A)), frozenset(B)
    if len(A) != len(B):
        raise ValueError("A and B must have the same size")
    W = _wg(G, w)
    budget = _Budget(w.element_budget)
    split = _factor_split(W, A, B)
    if split is None:
        return TransportMaps(tuple(A), B, frozenset(), W.exact)
    pa, pb = split
    per = []
    for k in sorted(pa, key=lambda v: -1 if v is None else v):
        if k is None:
            per.append([tuple((x, x) for x in pa[k])])
        else:
            per.append(W.factors[k].transports(pa[k], pb[k], budget))
    return TransportMaps(tuple(A), B, _combine(per), W.exact)


def _closure_small(gens: Sequence[FinPerm], budget: _Budget) -> set:
    out = {IDENTITY}
    q = deque([IDENTITY])
    while q:
        e = q.popleft()
        for g in gens:
            h = g * e
            if h not in out:
                budget.spend()
                out.add(h)
                q.append(h)
    return out


def restricted_transport_maps(G: GroupDesc, A, B, m: int, H: Iterable[FinPerm],
                              w=None) -> TransportMaps:
    """Transport maps of ``S = {g in G : g = h g1, h in <H>, supp(g1) ∩ [0, m) empty}``.

    ``H`` must act on ``[0, m)``; ``A`` and ``B`` lie outside it.
    """
    w = _window(w)
    A, B = sorted(set(A)), frozenset(B)
    if len(A) != len(B):
        raise ValueError("A and B must have the same size")
    if any(x < m for x in A) or any(y < m for y in B):
        raise ValueError("A and B must avoid [0, m)")
    H = [h for h in H if not h.is_identity()]
    if any(h.max_point >= m for h in H):
        raise ValueError("H must act on [0, m)")
    W = _wg(G, w)
    budget = _Budget(w.element_budget)
    split = _factor_split(W, A, B)
    if split is None:
        return TransportMaps(tuple(A), B, frozenset(), W.exact)
    pa, pb = split
    mset = frozenset(range(m))
    K = _closure_small(H, budget)
    involved = sorted({W.owner[x] for x in range(min(m, w.bound)) if x in W.owner}
                      | {k for k in pa if k is not None})
    # per factor: m-part key -> transports
    table: dict = {}
    for k in involved:
        f = W.factors[k]
        Ak, Bk = pa.get(k, []), frozenset(pb.get(k, []))
        if isinstance(f, _SymFactor):
            table[k] = None
            continue
        d: dict = {}
        fm = sorted(f.points & mset)
        fms = frozenset(fm)
        for e in f.parent:
            if e.image(fm) != fms or e.image(Ak) != Bk:
                continue
            d.setdefault(tuple(e(x) for x in fm), set()).add(tuple((a, e(a)) for a in Ak))
        table[k] = (fm, d)
    maps: set = set()
    for h in K:
        # h must fix m-points outside every factor and preserve each factor's m-part
        if any(h(x) != x for x in h.support if x not in W.owner):
            continue
        per = []
        ok = True
        for k in involved:
            f = W.factors[k]
            fm = f.points & mset
            if h.image(fm) != fm:
                ok = False
                break
            if table[k] is None:
                if k in pa:
                    per.append(f.transports(pa[k], pb[k], budget))
                continue
            keys, d = table[k]
            choices = d.get(tuple(h(x) for x in keys))
            if not choices:
                ok = False
                break
            if k in pa:
                per.append(sorted(choices))
        if not ok:
            continue
        if None in pa:
            per.append([tuple((x, x) for x in pa[None])])
        maps |= _combine(per)
    return TransportMaps(tuple(A), B, frozenset(maps), W.exact)


def window_orbits(G: GroupDesc, w=None) -> dict[int, frozenset]:
    """Orbit of every point below the bound under the window group."""
    w = _window(w)
    W = _wg(G, w)
    out = {x: frozenset((x,)) for x in range(w.bound)}
    for f in W.factors:
        for orb in f.orbits():
            for x in orb:
                out[x] = orb
    return out


def window_generators(G: GroupDesc, bound: int) -> list[FinPerm]:
    """Describable generators of ``G`` with support below ``bound``.

    Partition groups contribute the transpositions ``(c x)`` from the least
    point ``c`` of each class to its other points.
    """
    root, extra = _flatten(G)
    out: list[FinPerm] = []
    if isinstance(root, PartitionGroup):
        for cls in root.partition.classes_upto(bound):
            pts = sorted(cls)
            out += [transposition(pts[0], y) for y in pts[1:]]
    elif isinstance(root, DisjointFamily):
        out += [p for _, p in root.generators_below(bound)]
    out += [g for g in extra if g.max_point < bound and not g.is_identity()]
    return out


def window_elements(G: GroupDesc, w=None, limit: int | None = None) -> list[FinPerm]:
    """Window-group elements in canonical order (all of them, or the first ``limit``).

    Enumerates the product of the factors; :class:`BudgetExceeded` when the
    window group is larger than the budget and no ``limit`` is given.
    """
    w = _window(w)
    lp = local_part(G, range(w.bound), w) if limit is None else None
    if lp is not None:
        return sorted(lp.elements, key=FinPerm.sort_key)
    from .perm import iter_sf

    out = []
    budget = _Budget(w.element_budget)
    for p in iter_sf():
        if p.max_point >= w.bound:
            break
        budget.spend()
        if membership(p, G, w).is_member:
            out.append(p)
            if len(out) >= limit:
                break
    return out


def is_generator(G: GroupDesc, p: FinPerm) -> bool:
    """Whether ``p`` may appear as a letter in a certificate for ``G``."""
    root, extra = _flatten(G)
    if p in extra:
        return True
    if isinstance(root, PartitionGroup):
        if len(p.support) == 2:
            a, b = sorted(p.support)
            return root.partition.same_class(a, b)
        return False
    if isinstance(root, DisjointFamily):
        i = root.locate(min(p.support)) if p.support else None
        return i is not None and root.rule(i) == p
    return False


def check_certificate(G: GroupDesc, g: FinPerm, word: Iterable) -> bool:
    """Re-check a membership certificate: letters are generators and the product is ``g``."""
    word = tuple(word)
    return all(is_generator(G, p) for p, _ in word) and eval_word(word) == g


def trace_set(G: GroupDesc, n: int, w=None) -> tuple[frozenset, frozenset]:
    """``({i < n : sf_at(i) in G}, unknowns)`` for the window group."""
    from .perm import sf_at

    w = _window(w)
    members, unknown = set(), set()
    for i in range(n):
        v = membership(sf_at(i), G, w)
        if v.is_member:
            members.add(i)
        elif not v.is_non_member:
            unknown.add(i)
    return frozenset(members), frozenset(unknown)


# ---------------------------------------------------------------------------
# serialisation


def group_from_json(doc) -> GroupDesc:
    if isinstance(doc, str):
        return _parse_group(doc)
    if not isinstance(doc, dict) or "type" not in doc:
        raise ParseError("group must be an object with a 'type'")
    t = doc["type"]
    try:
        if t == "finitely_generated":
            return FinitelyGenerated(tuple(FinPerm.from_json(g) for g in doc.get("generators", [])))
        if t == "disjoint_family":
            fam = doc.get("family", "gstar")
            if fam == "explicit":
                return DisjointFamily("explicit", perms=tuple(FinPerm.from_json(g)
                                                              for g in doc.get("perms", [])))
            if fam != "gstar":
                raise ParseError(f"unknown family {fam!r}")
            idx = doc.get("indices", "all")
            return DisjointFamily("gstar", IndexSet.from_json(idx))
        if t == "partition_group":
            return PartitionGroup(PartitionDesc.from_json(doc["partition"]))
        if t == "extended_by":
            return ExtendedBy(group_from_json(doc["base"]),
                              tuple(FinPerm.from_json(g) for g in doc.get("extra", [])))
    except KeyError as exc:
        raise ParseError(f"missing field {exc} in {t} group") from None
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc)) from None
    raise ParseError(f"unknown group type {t!r}")


def _parse_group(text: str) -> GroupDesc:
    """Shorthands: ``gstar``, ``gstar:<indexset>``, ``trivial``, ``partition:<shorthand>``."""
    t = text.strip()
    if t == "gstar":
        return gstar()
    if t.startswith("gstar:"):
        return gstar_subgroup(IndexSet.parse(t[6:]))
    if t == "trivial":
        return trivial_group()
    if t.startswith("partition:"):
        return PartitionGroup(PartitionDesc.parse(t[10:]))
    raise ParseError(f"unknown group shorthand {text!r}")
