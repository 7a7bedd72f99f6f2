"""
Relations between subgroups: orthogonality, almost containment, splitting,
reaping, shattering, and the metric on the subgroup lattice.

Every decision returns a :class:`Verdict`.  Decisions that follow from the
descriptions alone (pairs of partition groups, pairs of G* subgroups,
finite groups) are marked ``exact``; the rest are window evidence.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .groups import (
    DisjointFamily,
    GroupDesc,
    PartitionGroup,
    WindowConfig,
    _flatten,
    _window,
    generated_over,
    gstar_block,
    gstar_subgroup,
    is_finite_desc,
    local_part,
    membership,
    window_generators,
)
from .indexset import IndexSet
from .partitions import almost_coarser, group_is_finite, meet, refines
from .perm import FinPerm, iter_sf, transposition

__all__ = [
    "Verdict",
    "AlmostWitness",
    "FamilyReport",
    "orthogonal",
    "common_elements",
    "almost_contained_verify",
    "almost_contained",
    "almost_witness_search",
    "a_equal",
    "subgroup_leq",
    "meet_desc",
    "relative_complement",
    "default_pool",
    "splits",
    "family_check",
    "shattering_from_splitting",
    "metric_d",
]

ORTH_THRESHOLD = 16


@dataclass(frozen=True)
class Verdict:
    """``holds`` / ``fails`` / ``undecided`` plus a re-checkable witness."""

    status: str
    witness: dict = field(default_factory=dict)
    exact: bool = False
    window: int | None = None

    HOLDS = "holds"
    FAILS = "fails"
    UNDECIDED = "undecided"

    @classmethod
    def holds(cls, witness=None, *, exact=False, window=None) -> "Verdict":
        return cls(cls.HOLDS, dict(witness or {}), exact, window)

    @classmethod
    def fails(cls, witness=None, *, exact=False, window=None) -> "Verdict":
        return cls(cls.FAILS, dict(witness or {}), exact, window)

    @classmethod
    def undecided(cls, window, witness=None) -> "Verdict":
        return cls(cls.UNDECIDED, dict(witness or {}), False, window)

    @property
    def is_holds(self) -> bool:
        return self.status == self.HOLDS

    @property
    def is_fails(self) -> bool:
        return self.status == self.FAILS

    def __bool__(self) -> bool:
        return self.is_holds

    def to_json(self) -> dict:
        from .serialize import to_jsonable

        doc = {"status": self.status, "exact": self.exact, "witness": to_jsonable(self.witness)}
        if self.window is not None:
            doc["window"] = self.window
        return doc


@dataclass(frozen=True)
class AlmostWitness:
    """``X`` together with a membership word for every checked generator."""

    X: tuple
    certificates: tuple  # ((generator, word), ...)


@dataclass
class FamilyReport:
    kind: str
    family: list
    probes: list
    outcomes: list  # one dict per probe

    @property
    def passed(self) -> bool:
        return all(o["witnessed"] for o in self.outcomes)


# ---------------------------------------------------------------------------
# description-level helpers


def _is_gstar(G) -> bool:
    return isinstance(G, DisjointFamily) and G.family == "gstar"


def _is_pg(G) -> bool:
    return isinstance(G, PartitionGroup)


def meet_desc(G1: GroupDesc, G2: GroupDesc) -> GroupDesc | None:
    """Description of ``G1 ∩ G2`` when both are G* subgroups or both partition groups."""
    if _is_gstar(G1) and _is_gstar(G2):
        return gstar_subgroup(G1.indices & G2.indices)
    if _is_pg(G1) and _is_pg(G2):
        return PartitionGroup(meet(G1.partition, G2.partition))
    return None


def relative_complement(b: GroupDesc, a: GroupDesc) -> GroupDesc | None:
    """For G* subgroups, the subgroup on the indices of ``b`` outside ``a``."""
    if _is_gstar(a) and _is_gstar(b):
        return gstar_subgroup(b.indices - a.indices)
    return None


def _gstar_common(indices: IndexSet, n: int) -> list[FinPerm]:
    out = []
    for i in indices:
        out.append(gstar_subgroup(IndexSet.everything()).rule(i))
        if len(out) >= n:
            break
    return out


def _pg_common(E, n: int) -> list[FinPerm]:
    """First ``n`` transpositions preserving every class of ``E``, in canonical order."""
    out = []
    y = 1
    while len(out) < n:
        for x in range(y):
            if E.same_class(x, y):
                out.append(transposition(x, y))
                if len(out) >= n:
                    break
        y += 1
        if y > 1 << 14:  # pragma: no cover - only reachable for finite groups
            break
    return out


def _blocks_in_one_class(E, A: IndexSet, n: int) -> list[FinPerm]:
    out = []
    for i in A:
        blk = gstar_block(i)
        if all(E.same_class(blk[0], x) for x in blk):
            out.append(gstar_subgroup(IndexSet.everything()).rule(i))
            if len(out) >= n:
                break
    return out


def _pg_gstar_infinite(E, A: IndexSet) -> bool:
    """Whether infinitely many G* blocks with index in ``A`` lie in one class of ``E``.

    Blocks grow without bound, so from some point on a block covers whole
    period windows: it lies in one class only when the periodic part of
    ``E`` is a single infinite class.
    """
    if A.is_finite():
        return False
    ks = {e[1] if e[0] == "i" else None for e in E.table}
    return len(ks) == 1 and None not in ks


# ---------------------------------------------------------------------------
# orthogonality


def common_elements(G1: GroupDesc, G2: GroupDesc, w=None, limit: int = ORTH_THRESHOLD,
                    cap: int = 20000) -> list[FinPerm]:
    """Distinct non-trivial elements of both window groups, in canonical order.

    Tries the window generators of both groups first, then scans local
    parts of ``G1`` on growing initial segments; stops at ``limit`` hits or
    once a local part would exceed ``cap`` elements.
    """
    w = _window(w)
    found: dict[FinPerm, None] = {}
    gens = set(window_generators(G1, w.bound)) | set(window_generators(G2, w.bound))
    for g in sorted(gens, key=FinPerm.sort_key):
        if membership(g, G1, w).is_member and membership(g, G2, w).is_member:
            found[g] = None
            if len(found) >= limit:
                return list(found)
    for n in range(2, w.bound + 1):
        try:
            lp = local_part(G1, range(n), WindowConfig(w.bound, min(w.element_budget, cap)))
        except Exception as exc:  # BudgetExceeded
            from .errors import BudgetExceeded

            if isinstance(exc, BudgetExceeded):
                break
            raise
        for g in sorted(lp.elements, key=FinPerm.sort_key):
            if g.is_identity() or g in found:
                continue
            if membership(g, G2, w).is_member:
                found[g] = None
                if len(found) >= limit:
                    return list(found)
    return list(found)


def orthogonal(G1: GroupDesc, G2: GroupDesc, w=None, threshold: int = ORTH_THRESHOLD) -> Verdict:
    """Is ``G1 ∩ G2`` finite?"""
    w = _window(w)
    if is_finite_desc(G1) or is_finite_desc(G2):
        return Verdict.holds({"reason": "one of the groups is finite"}, exact=True)
    if _is_pg(G1) and _is_pg(G2):
        M = meet(G1.partition, G2.partition)
        if group_is_finite(M):
            return Verdict.holds({"meet": M.to_json()}, exact=True)
        return Verdict.fails({"meet": M.to_json(), "common": _pg_common(M, threshold)}, exact=True)
    if _is_gstar(G1) and _is_gstar(G2):
        C = G1.indices & G2.indices
        if C.is_finite():
            return Verdict.holds({"common_indices": sorted(C.added)}, exact=True)
        return Verdict.fails({"common_indices": C.to_json(),
                              "common": _gstar_common(C, threshold)}, exact=True)
    pair = (G1, G2) if _is_pg(G1) else (G2, G1)
    if _is_pg(pair[0]) and _is_gstar(pair[1]):
        E, A = pair[0].partition, pair[1].indices
        if _pg_gstar_infinite(E, A):
            return Verdict.fails({"common": _blocks_in_one_class(E, A, threshold)}, exact=True)
        return Verdict.holds({"reason": "only finitely many generator blocks lie in one class"},
                             exact=True)
    common = common_elements(G1, G2, w, threshold)
    if len(common) >= threshold:
        return Verdict.fails({"common": common}, exact=False, window=w.bound)
    return Verdict.undecided(w.bound, {"common": common})


# ---------------------------------------------------------------------------
# almost containment


def almost_contained_verify(G1: GroupDesc, G2: GroupDesc, X: Sequence[FinPerm] = (),
                            w=None) -> Verdict:
    """Is every window generator of ``G1`` in ``<G2, X>``?"""
    w = _window(w)
    target = generated_over(G2, tuple(X))
    certs = []
    unknown = []
    for g in window_generators(G1, w.bound):
        v = membership(g, target, w)
        if v.is_member:
            certs.append((g, v.certificate))
        elif v.is_non_member:
            return Verdict.fails({"generator": g, "reason": v.reason, "X": list(X)},
                                 exact=False, window=w.bound)
        else:
            unknown.append(g)
    if unknown:
        return Verdict.undecided(w.bound, {"unknown": unknown, "X": list(X)})
    return Verdict.holds({"X": list(X), "witness": AlmostWitness(tuple(X), tuple(certs))},
                         exact=False, window=w.bound)


def almost_contained(G1: GroupDesc, G2: GroupDesc, w=None, patch_budget: int = 64) -> Verdict:
    """``G1 ≤_a G2`` decided from the descriptions when possible.

    G* subgroups: ``A \\ B`` finite, witness ``X = {σ_i : i in A \\ B}``.
    Partition groups: ``G_F ≤_a G_E`` iff ``F ⊆ E ∨ Z`` for a finite pair set
    ``Z``, witness the transpositions of ``Z``.  Otherwise the window check
    with ``X = ∅``.
    """
    w = _window(w)
    if _is_gstar(G1) and _is_gstar(G2):
        D = G1.indices - G2.indices
        if D.is_finite():
            X = [gstar_subgroup(IndexSet.everything()).rule(i) for i in sorted(D.added)]
            return Verdict.holds({"X": X}, exact=True)
        return Verdict.fails({"infinite_difference": D.to_json()}, exact=True)
    if _is_pg(G1) and _is_pg(G2):
        v = almost_coarser(G2.partition, G1.partition, patch_budget)
        if v.is_holds:
            X = [transposition(a, b) for a, b in v.witness["Z"]]
            return Verdict.holds({"X": X, "Z": v.witness["Z"]}, exact=True)
        return v
    if is_finite_desc(G1):
        X = tuple(window_generators(G1, _finite_bound(G1)))
        return Verdict.holds({"X": list(X), "reason": "G1 is finitely generated"}, exact=True)
    return almost_contained_verify(G1, G2, (), w)


def _finite_bound(G: GroupDesc) -> int:
    """A bound past which a finite description has no generators."""
    root, extra = _flatten(G)
    top = max((g.max_point + 1 for g in extra), default=0)
    if isinstance(root, DisjointFamily):
        if root.family == "explicit":
            top = max([top] + [p.max_point + 1 for p in root.perms])
        elif root.indices.added:
            top = max(top, gstar_block(max(root.indices.added)).stop)
    elif _is_pg(root):
        top = max(top, root.partition.span() + 1)
    return top


def _candidates(support_bound: int) -> list[FinPerm]:
    out = []
    for p in iter_sf():
        if p.max_point >= support_bound:
            break
        if not p.is_identity():
            out.append(p)
    return out


def almost_witness_search(G1: GroupDesc, G2: GroupDesc, size_bound: int, support_bound: int,
                          w=None) -> AlmostWitness | None:
    """First ``X`` (by size, then canonical order) with ``G1 ≤ <G2, X>`` on the window."""
    w = _window(w)
    cands = _candidates(support_bound)
    for size in range(size_bound + 1):
        for X in itertools.combinations(cands, size):
            v = almost_contained_verify(G1, G2, X, w)
            if v.is_holds:
                return v.witness["witness"]
    return None


def a_equal(G1: GroupDesc, G2: GroupDesc, X1: Sequence[FinPerm] = (),
            X2: Sequence[FinPerm] = (), w=None) -> Verdict:
    """``G1 ≤ <G2, X1>`` and ``G2 ≤ <G1, X2>`` on the window."""
    v1 = almost_contained_verify(G1, G2, X1, w)
    v2 = almost_contained_verify(G2, G1, X2, w)
    wit = {"forward": v1.to_json(), "backward": v2.to_json()}
    if v1.is_holds and v2.is_holds:
        return Verdict.holds(wit, window=v1.window)
    if v1.is_fails or v2.is_fails:
        return Verdict.fails(wit, window=v1.window)
    return Verdict.undecided(v1.window, wit)


def subgroup_leq(c: GroupDesc, b: GroupDesc, w=None) -> Verdict:
    """Is ``c`` a subgroup of ``b``?  Exact for G* subgroups and partition groups."""
    if _is_gstar(c) and _is_gstar(b):
        ok = c.indices.issubset(b.indices)
        return (Verdict.holds if ok else Verdict.fails)({}, exact=True)
    if _is_pg(c) and _is_pg(b):
        ok = refines(c.partition, b.partition)
        return (Verdict.holds if ok else Verdict.fails)({}, exact=True)
    return almost_contained_verify(c, b, (), w)


# ---------------------------------------------------------------------------
# splitting, reaping, shattering


def default_pool(groups: Iterable[GroupDesc]) -> list[GroupDesc]:
    """The groups, their pairwise meets and G* relative complements, without repeats."""
    groups = list(groups)
    pool: list = []

    def add(G):
        if G is not None and G not in pool:
            pool.append(G)

    for G in groups:
        add(G)
    for a, b in itertools.permutations(groups, 2):
        add(meet_desc(a, b))
        add(relative_complement(b, a))
    return pool


def splits(a: GroupDesc, b: GroupDesc, candidates: Sequence[GroupDesc] | None = None,
           w=None) -> Verdict:
    """Does ``a`` split ``b``: infinite ``c, d ≤ b`` with ``c ≤ a`` and ``d ⊥ a``?

    Relative to ``candidates`` (default: :func:`default_pool` of ``a, b``);
    a negative answer only says the pool has no witnesses.
    """
    w = _window(w)
    pool = list(candidates) if candidates is not None else default_pool([a, b])
    below_b = [G for G in pool
               if not is_finite_desc(G) and subgroup_leq(G, b, w).is_holds]
    c = next((G for G in below_b if subgroup_leq(G, a, w).is_holds), None)
    d = next((G for G in below_b if orthogonal(G, a, w).is_holds), None) if c else None
    if c is not None and d is not None:
        return Verdict.holds({"c": c, "d": d},
                             exact=all(subgroup_leq(G, b, w).exact for G in (c, d)))
    return Verdict.fails({"pool_relative": True, "pool_size": len(pool),
                          "c_found": c is not None, "d_found": d is not None})


def family_check(kind: str, family: Sequence, probes: Sequence[GroupDesc], w=None,
                 pool: Sequence[GroupDesc] | None = None) -> FamilyReport:
    """Check a splitting, reaping or shattering family against finitely many probes.

    * splitting: every probe ``b`` is split by some member;
    * reaping: for every probe ``a`` some member ``b`` has ``b ≤_a a`` or ``b ⊥ a``;
    * shattering: ``family`` is a list of families; every probe meets two
      distinct members of one of them non-orthogonally.
    """
    w = _window(w)
    outcomes = []
    for j, probe in enumerate(probes):
        out = {"probe": j, "witnessed": False, "witness": None}
        if kind == "splitting":
            for i, a in enumerate(family):
                cand = pool if pool is not None else default_pool([a, probe])
                v = splits(a, probe, cand, w)
                if v.is_holds:
                    out.update(witnessed=True, witness={"member": i, **v.witness})
                    break
        elif kind == "reaping":
            for i, b in enumerate(family):
                v = almost_contained(b, probe, w)
                if v.is_holds:
                    out.update(witnessed=True, witness={"member": i, "almost_contained": v.witness})
                    break
                v = orthogonal(b, probe, w)
                if v.is_holds:
                    out.update(witnessed=True, witness={"member": i, "orthogonal": v.witness})
                    break
        elif kind == "shattering":
            for i, fam in enumerate(family):
                hits = [k for k, b in enumerate(fam) if orthogonal(b, probe, w).is_fails]
                if len(hits) >= 2:
                    out.update(witnessed=True, witness={"family": i, "members": hits[:2]})
                    break
        else:
            raise ValueError(f"unknown family kind {kind!r}")
        outcomes.append(out)
    return FamilyReport(kind, list(family), list(probes), outcomes)


def shattering_from_splitting(family: Sequence[GroupDesc], completion_pool: Sequence[GroupDesc],
                              w=None) -> list[list[GroupDesc]]:
    """For each member ``c``, a pairwise orthogonal family containing ``c``.

    Greedy completion: pool members are added in order when infinite and
    orthogonal to everything chosen so far, so the family is maximal within
    the pool.
    """
    w = _window(w)
    out = []
    for c in family:
        if is_finite_desc(c):
            raise ValueError("family members must be infinite")
        psi = [c]
        for G in completion_pool:
            if G in psi or is_finite_desc(G):
                continue
            if all(orthogonal(G, H, w).is_holds for H in psi):
                psi.append(G)
        out.append(psi)
    return out


# ---------------------------------------------------------------------------
# metric


def _bits(n: int) -> frozenset:
    return frozenset(i for i in range(n.bit_length()) if n >> i & 1)


@lru_cache(maxsize=4096)
def _local(G, A, bound, budget):
    return local_part(G, A, WindowConfig(bound, budget)).elements


def metric_d(G1: GroupDesc, G2: GroupDesc, N: int = 64, w=None) -> tuple[Fraction, Fraction]:
    """``(value, error)``: the sum over ``n < N`` of ``2^-n`` where the local parts on ``A_n`` differ.

    ``A_n`` is the set of positions of 1-bits of ``n``; the tail beyond ``N``
    contributes at most ``error = 2^-(N-1)``.
    """
    w = _window(w)
    bound = max(w.bound, max(1, (N - 1).bit_length()))
    total = Fraction(0)
    for n in range(N):
        A = _bits(n)
        if _local(G1, A, bound, w.element_budget) != _local(G2, A, bound, w.element_budget):
            total += Fraction(1, 1 << n)
    return total, Fraction(1, 1 << (N - 1)) if N >= 1 else Fraction(2)
