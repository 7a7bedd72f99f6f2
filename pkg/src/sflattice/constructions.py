"""
Constructive lemmas as deterministic searches.

Every "choose" of the underlying arguments becomes a scan in canonical
order, so equal inputs give equal outputs.  Searches are confined to the
window and raise :class:`NotFoundInWindow` (naming the failing stage) when
the window is too small.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import BudgetExceeded, NotFoundInWindow
from .groups import (
    DisjointFamily,
    GroupDesc,
    WindowConfig,
    _window,
    local_part,
    membership,
    restricted_transport_maps,
    window_orbits,
)
from .lattice import almost_contained_verify
from .perm import IDENTITY, FinPerm

__all__ = [
    "ChainPrefix",
    "EnumeratedFamily",
    "RhoConstruction",
    "avoid_support",
    "avoid_support_constrained",
    "rho_k_cycles",
    "build_rho",
    "pseudo_intersection",
    "anti_reaping_pair",
    "orthogonal_diagonal",
    "closure",
]


@dataclass(frozen=True)
class ChainPrefix:
    """A finite descending chain ``G_0 > G_1 > ... > G_m``."""

    groups: tuple

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(self.groups))

    def verify(self, w=None) -> bool:
        """Each ``G_{i+1}`` lies in ``G_i`` on the window and the inclusion is proper there."""
        w = _window(w)
        for a, b in zip(self.groups, self.groups[1:]):
            if not almost_contained_verify(b, a, (), w).is_holds:
                return False
            if almost_contained_verify(a, b, (), w).is_holds:
                return False
        return True


@dataclass(frozen=True)
class EnumeratedFamily:
    """Finitely many groups visited round-robin, so each recurs infinitely often."""

    groups: tuple

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(self.groups))
        if not self.groups:
            raise ValueError("family must be non-empty")

    def schedule(self, i: int) -> GroupDesc:
        return self.groups[i % len(self.groups)]


def closure(gens: Iterable[FinPerm], budget: int = 10 ** 6) -> set[FinPerm]:
    """All products of ``gens`` (a finite group)."""
    gens = [g for g in gens if not g.is_identity()]
    out = {IDENTITY}
    q = deque([IDENTITY])
    while q:
        e = q.popleft()
        for g in gens:
            h = g * e
            if h not in out:
                out.add(h)
                if len(out) > budget:
                    raise BudgetExceeded(f"closure exceeded {budget} elements")
                q.append(h)
    return out


def _next_m(perms: Iterable[FinPerm], m: int = 0) -> int:
    return max([m] + [p.max_point + 1 for p in perms])


# ---------------------------------------------------------------------------
# avoidance


def _scan(G: GroupDesc, m: int, w: WindowConfig):
    """Non-trivial window elements with support in ``[m, M]`` moving ``M``, for ``M = m+1, ...``.

    Within one ``M`` the elements come in lexicographic order of their
    one-line form, which is the canonical enumeration order.
    """
    for M in range(m + 1, w.bound):
        lp = local_part(G, range(m, M + 1), w)
        batch = [g for g in lp.elements if M in g.support]
        yield from sorted(batch, key=FinPerm.sort_key)


def avoid_support(G: GroupDesc, m: int, w=None) -> FinPerm:
    """First non-trivial element of ``G`` with support disjoint from ``[0, m)``."""
    w = _window(w)
    for g in _scan(G, m, w):
        return g
    raise NotFoundInWindow(f"no non-trivial element avoids [0, {m}) below {w.bound}",
                           stage="avoid", window=w.bound)


def avoid_support_constrained(G: GroupDesc, m: int, H: Sequence[FinPerm],
                              others: Sequence[GroupDesc], w=None) -> FinPerm:
    """As :func:`avoid_support`, and no element of ``<H, ρ> \\ <H>`` lies in any of ``others``."""
    w = _window(w)
    H = [h for h in H if not h.is_identity()]
    if any(h.max_point >= m for h in H):
        raise ValueError("H must act on [0, m)")
    base = closure(H, w.element_budget)
    for rho in _scan(G, m, w):
        if not others:
            return rho
        new = closure(H + [rho], w.element_budget) - base
        if all(not membership(g, O, w).is_member for g in new for O in others):
            return rho
    raise NotFoundInWindow(f"no admissible element avoids [0, {m}) below {w.bound}",
                           stage="avoid_constrained", window=w.bound)


# ---------------------------------------------------------------------------
# the (k+1)-cycle builder


@dataclass
class RhoConstruction:
    rho: FinPerm
    k: int
    m: int
    D: list = field(default_factory=list)   # per group: [D_0, D_1, ..., D_k] (sorted tuples)
    f: list = field(default_factory=list)   # per group: [f_1, ..., f_k] as dicts
    verified: bool = False

    def to_json(self) -> dict:
        return {
            "rho": self.rho.to_json(),
            "k": self.k,
            "m": self.m,
            "D": [[list(d) for d in Ds] for Ds in self.D],
            "f": [[sorted([a, b] for a, b in fi.items()) for fi in fs] for fs in self.f],
            "verified": self.verified,
        }


def _by_max_lex(points: Sequence[int], size: int):
    """Subsets of ``points`` of the given size, ordered by maximum then lexicographically."""
    points = sorted(points)
    for i, top in enumerate(points):
        for rest in itertools.combinations(points[:i], size - 1):
            yield rest + (top,)


def _bijections(A: Sequence[int], B: Sequence[int]):
    for img in itertools.permutations(sorted(B)):
        yield tuple(zip(sorted(A), img))


def build_rho(groups: Sequence[GroupDesc], k: int, m: int, H: Sequence[FinPerm] = (),
              w=None, max_size: int = 4) -> RhoConstruction:
    """Build ``ρ``, a product of ``(k+1)``-cycles off ``[0, m)``, with ``<H,ρ> ∩ G_j = <H> ∩ G_j``.

    Per group ``j``: ``D_j0`` is the first set (size 2 first, then by maximum
    and lexicographically) on which the group ``S_j`` of elements agreeing
    with ``<H>`` on ``[0, m)`` and fixing it setwise does not induce the
    full symmetric group; ``D_j1 .. D_jk`` are the first sets whose points
    lie in fresh window orbits of ``G_j``, falling back to the first set
    admitting a bijection not induced by ``S_j``; ``f_ji`` is the first such
    bijection.
    """
    w = _window(w)
    if k < 1:
        raise ValueError("k must be at least 1")
    H = [h for h in H if not h.is_identity()]
    used: set[int] = set()
    all_D, all_f = [], []
    free = lambda: [x for x in range(m, w.bound) if x not in used]  # noqa: E731
    for j, G in enumerate(groups):
        D0 = None
        for size in range(2, max_size + 1):
            full = _factorial(size)
            for D in _by_max_lex(free(), size):
                if len(restricted_transport_maps(G, D, D, m, H, w)) < full:
                    D0 = D
                    break
            if D0 is not None:
                break
        if D0 is None:
            raise NotFoundInWindow(f"group {j}: S_j induces the full symmetric group on every "
                                   f"set of size <= {max_size} below {w.bound}",
                                   stage="D0", window=w.bound)
        used |= set(D0)
        orbits = window_orbits(G, w)
        Ds, fs = [D0], []
        for i in range(1, k + 1):
            chosen = None
            taken = set()
            for x in used:
                taken |= orbits.get(x, {x})
            fresh = [x for x in free() if not (orbits[x] & taken)]
            for D in _by_max_lex(fresh, len(D0)):
                if len({orbits[x] for x in D}) == len(D):
                    chosen = D
                    break
            if chosen is None:
                for D in _by_max_lex(free(), len(D0)):
                    induced = restricted_transport_maps(G, D0, D, m, H, w)
                    if len(induced) < _factorial(len(D0)):
                        chosen = D
                        break
            if chosen is None:
                raise NotFoundInWindow(f"group {j}: no set D_{i} below {w.bound}",
                                       stage=f"D{i}", window=w.bound)
            induced = restricted_transport_maps(G, D0, chosen, m, H, w)
            f = next((b for b in _bijections(D0, chosen) if b not in induced.maps), None)
            if f is None:  # pragma: no cover - excluded by the selection above
                raise NotFoundInWindow(f"group {j}: every bijection onto D_{i} is induced",
                                       stage=f"f{i}", window=w.bound)
            used |= set(chosen)
            Ds.append(chosen)
            fs.append(dict(f))
        all_D.append(Ds)
        all_f.append(fs)
    moves: dict[int, int] = {}
    for Ds, fs in zip(all_D, all_f):
        inv = [{v: u for u, v in f.items()} for f in fs]
        for x in Ds[0]:
            moves[x] = fs[0][x]
        for i in range(1, k):
            for x in Ds[i]:
                moves[x] = fs[i][inv[i - 1][x]]
        for x in Ds[k]:
            moves[x] = inv[k - 1][x]
    rho = FinPerm(moves)
    out = RhoConstruction(rho, k, m, all_D, all_f)
    out.verified = _verify_rho(groups, H, rho, w)
    if not out.verified:
        raise NotFoundInWindow("window check found an element of <H, rho> \\ <H> in a target "
                               "group; enlarge the window", stage="verify", window=w.bound)
    return out


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def _verify_rho(groups, H, rho, w) -> bool:
    base = closure(H, w.element_budget)
    new = closure(list(H) + [rho], w.element_budget) - base
    return all(not membership(g, G, w).is_member for g in new for G in groups)


def rho_k_cycles(groups: Sequence[GroupDesc], k: int, m: int, H: Sequence[FinPerm] = (),
                 w=None) -> FinPerm:
    """The permutation ``ρ`` of :func:`build_rho`."""
    return build_rho(groups, k, m, H, w).rho


# ---------------------------------------------------------------------------
# chains and diagonalisations


def pseudo_intersection(chain: ChainPrefix, w=None):
    """A group below every chain member up to finitely many generators.

    Returns ``(G, witnesses)`` with ``G`` generated by ``g_0, g_1, ...``
    (``g_i`` in ``G_i`` with support above all earlier picks) and
    ``witnesses[i] = [g_0, ..., g_{i-1}]`` such that ``G ≤ <G_i, witnesses[i]>``.
    """
    w = _window(w)
    if not chain.verify(w):
        raise ValueError("chain is not descending on the window")
    picks: list[FinPerm] = []
    for G in chain.groups:
        picks.append(avoid_support(G, _next_m(picks), w))
    result = DisjointFamily("explicit", perms=tuple(picks))
    witnesses = [list(picks[:i]) for i in range(len(picks))]
    return result, witnesses


def anti_reaping_pair(family: EnumeratedFamily, steps: int, w=None):
    """Two groups with trivial intersection, each meeting every family member infinitely often.

    Step ``s`` picks from ``schedule(s // 2)`` above everything picked so
    far; even steps feed the first group, odd steps the second.
    """
    w = _window(w)
    g, h = [], []
    for s in range(steps):
        p = avoid_support(family.schedule(s // 2), _next_m(g + h), w)
        (g if s % 2 == 0 else h).append(p)
    return (DisjointFamily("explicit", perms=tuple(g)),
            DisjointFamily("explicit", perms=tuple(h)))


def orthogonal_diagonal(family: EnumeratedFamily, steps: int,
                        k_schedule: Callable[[int], int] | None = None, w=None) -> GroupDesc:
    """Group generated by ``ρ_0, ρ_1, ...``, each built against the family members seen so far."""
    w = _window(w)
    k_schedule = k_schedule or (lambda n: 1)
    rhos: list[FinPerm] = []
    for n in range(steps):
        groups: list = []
        for i in range(n + 1):
            G = family.schedule(i)
            if G not in groups:
                groups.append(G)
        rhos.append(rho_k_cycles(groups, k_schedule(n), _next_m(rhos), rhos, w))
    return DisjointFamily("explicit", perms=tuple(rhos))
