"""
The posets of disjoint-support permutation sets and a finite generic-filter engine.

``P_r`` conditions are pairs ``(H, H2)`` of finite permutation sets with
pairwise disjoint supports, ordered by componentwise inclusion.  ``P_a``
conditions are pairs ``(H, F)`` with ``F`` a finite set of groups;
``(H, F) <= (H', F')`` when ``H ⊇ H'``, ``F ⊇ F'`` and nothing in
``<H> \\ <H'>`` lies in a group of ``F'``.

:func:`rasiowa_sikorski` walks down from the maximum condition, applying a
list of dense-set oracles in order, and records where each one was met.
Everything is deterministic, so transcripts replay byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .constructions import _next_m, avoid_support, build_rho, closure
from .errors import LFError, ParseError, StepMismatch
from .groups import FinitelyGenerated, GroupDesc, _window, group_from_json, membership
from .lattice import Verdict
from .perm import FinPerm, make_k_cycle
from .serialize import dumps, to_jsonable

__all__ = [
    "PrCondition",
    "PaCondition",
    "DenseOracle",
    "FilterChain",
    "pr_leq",
    "pr_dense_extend",
    "pa_leq",
    "pa_dense_extend_group",
    "pa_dense_extend_size",
    "rasiowa_sikorski",
    "extract_group",
    "extract_pair",
    "verify",
    "transcript",
    "verify_transcript",
    "oracles_from_json",
]


def _check_disjoint(perms: Sequence[FinPerm]):
    seen: set = set()
    for p in perms:
        if p.is_identity():
            raise ValueError("conditions hold non-trivial permutations only")
        if seen & p.support:
            raise ValueError(f"support of {p} meets an earlier support")
        seen |= p.support


@dataclass(frozen=True)
class PrCondition:
    H: tuple = ()
    H2: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "H", tuple(self.H))
        object.__setattr__(self, "H2", tuple(self.H2))
        if set(self.H) & set(self.H2):
            raise ValueError("H and H2 must be disjoint")
        _check_disjoint(self.H + self.H2)

    def to_json(self) -> dict:
        return {"H": [p.to_json() for p in self.H], "H2": [p.to_json() for p in self.H2]}

    @classmethod
    def from_json(cls, doc) -> "PrCondition":
        return cls(tuple(FinPerm.from_json(p) for p in doc.get("H", [])),
                   tuple(FinPerm.from_json(p) for p in doc.get("H2", [])))


@dataclass(frozen=True)
class PaCondition:
    H: tuple = ()
    F: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "H", tuple(self.H))
        object.__setattr__(self, "F", tuple(self.F))
        _check_disjoint(self.H)

    def to_json(self) -> dict:
        return {"H": [p.to_json() for p in self.H], "F": [G.to_json() for G in self.F]}

    @classmethod
    def from_json(cls, doc) -> "PaCondition":
        return cls(tuple(FinPerm.from_json(p) for p in doc.get("H", [])),
                   tuple(group_from_json(G) for G in doc.get("F", [])))


def pr_leq(c: PrCondition, d: PrCondition) -> bool:
    """``c <= d``: ``c`` extends ``d`` in both coordinates."""
    return set(d.H) <= set(c.H) and set(d.H2) <= set(c.H2)


def _count_in(perms, G, w) -> int:
    return sum(1 for p in perms if membership(p, G, w).is_member)


def pr_dense_extend(c: PrCondition, G: GroupDesc, k: int, w=None) -> PrCondition:
    """Extend ``c`` until ``H`` and ``H2`` each hold more than ``k`` elements of ``G``.

    New elements come from :func:`avoid_support` above every existing
    support, going to ``H`` and ``H2`` alternately.
    """
    w = _window(w)
    H, H2 = list(c.H), list(c.H2)
    nH, nH2 = _count_in(H, G, w), _count_in(H2, G, w)
    while nH <= k or nH2 <= k:
        if nH <= k:
            H.append(avoid_support(G, _next_m(H + H2), w))
            nH += 1
        if nH2 <= k:
            H2.append(avoid_support(G, _next_m(H + H2), w))
            nH2 += 1
    return PrCondition(tuple(H), tuple(H2))


def pa_leq(c: PaCondition, d: PaCondition, w=None) -> Verdict:
    """``c <= d`` in ``P_a``, checking ``<c.H> \\ <d.H>`` against ``d.F`` on the window."""
    w = _window(w)
    if not set(d.H) <= set(c.H):
        return Verdict.fails({"reason": "H does not extend"}, exact=True)
    if not set(d.F) <= set(c.F):
        return Verdict.fails({"reason": "F does not extend"}, exact=True)
    if not d.F:
        return Verdict.holds({}, exact=True)
    new = closure(c.H, w.element_budget) - closure(d.H, w.element_budget)
    unknown = []
    exact = True
    for h in sorted(new, key=FinPerm.sort_key):
        for i, G in enumerate(d.F):
            v = membership(h, G, w)
            if v.is_member:
                return Verdict.fails({"element": h, "group": i, "certificate": v.certificate},
                                     exact=True, window=w.bound)
            if not v.is_non_member:
                unknown.append((h, i))
                exact = False
    if unknown:
        return Verdict.undecided(w.bound, {"unknown": unknown})
    return Verdict.holds({"checked": len(new)}, exact=exact, window=w.bound)


def pa_dense_extend_group(c: PaCondition, G: GroupDesc) -> PaCondition:
    """Meet ``Σ_G``: add ``G`` to ``F``."""
    if G in c.F:
        return c
    return PaCondition(c.H, c.F + (G,))


def pa_dense_extend_size(c: PaCondition, l: int, others: Sequence[GroupDesc] | None = None,
                         w=None, k: int = 1) -> PaCondition:
    """Meet ``Σ_l``: add ``(k+1)``-cycle products built against ``F`` until ``|H| > l``."""
    w = _window(w)
    groups = list(c.F if others is None else others)
    H = list(c.H)
    while len(H) <= l:
        m = _next_m(H)
        if groups:
            rho = build_rho(groups, k, m, H, w).rho
        else:
            rho = make_k_cycle(range(m, m + k + 1))
        H.append(rho)
    return PaCondition(tuple(H), c.F)


# ---------------------------------------------------------------------------
# oracles and chains


@dataclass(frozen=True)
class DenseOracle:
    """A named dense set with a deterministic extension map.

    Kinds: ``pr`` (``|H ∩ G| > k`` and ``|H2 ∩ G| > k``), ``pa_group``
    (``G in F``) and ``pa_size`` (``|H| > l``).
    """

    name: str
    kind: str
    group: GroupDesc | None = None
    n: int = 0

    def extend(self, c, w=None):
        if self.kind == "pr":
            return pr_dense_extend(c, self.group, self.n, w)
        if self.kind == "pa_group":
            return pa_dense_extend_group(c, self.group)
        if self.kind == "pa_size":
            return pa_dense_extend_size(c, self.n, None, w)
        raise ValueError(f"unknown oracle kind {self.kind!r}")

    def contains(self, c, w=None) -> bool:
        w = _window(w)
        if self.kind == "pr":
            return _count_in(c.H, self.group, w) > self.n and _count_in(c.H2, self.group, w) > self.n
        if self.kind == "pa_group":
            return self.group in c.F
        if self.kind == "pa_size":
            return len(c.H) > self.n
        raise ValueError(f"unknown oracle kind {self.kind!r}")

    @property
    def poset(self) -> str:
        return "pr" if self.kind == "pr" else "pa"

    @classmethod
    def pr(cls, G: GroupDesc, k: int, name: str | None = None) -> "DenseOracle":
        return cls(name or f"D({G},{k})", "pr", G, k)

    @classmethod
    def sigma_group(cls, G: GroupDesc, name: str | None = None) -> "DenseOracle":
        return cls(name or f"Sigma_G({G})", "pa_group", G)

    @classmethod
    def sigma_size(cls, l: int, name: str | None = None) -> "DenseOracle":
        return cls(name or f"Sigma_{l}", "pa_size", None, l)

    def to_json(self) -> dict:
        doc: dict = {"name": self.name, "kind": self.kind}
        if self.group is not None:
            doc["group"] = self.group.to_json()
        if self.kind in ("pr", "pa_size"):
            doc["n"] = self.n
        return doc

    @classmethod
    def from_json(cls, doc) -> "DenseOracle":
        try:
            kind = doc["kind"]
            group = group_from_json(doc["group"]) if "group" in doc else None
            n = int(doc.get("n", 0))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad oracle: {exc}") from None
        if kind not in ("pr", "pa_group", "pa_size"):
            raise ParseError(f"unknown oracle kind {kind!r}", "kind")
        if kind != "pa_size" and group is None:
            raise ParseError("oracle needs a group", "group")
        name = doc.get("name") or cls(kind, kind, group, n).default_name()
        return cls(name, kind, group, n)

    def default_name(self) -> str:
        if self.kind == "pr":
            return f"D({self.group},{self.n})"
        if self.kind == "pa_group":
            return f"Sigma_G({self.group})"
        return f"Sigma_{self.n}"


def oracles_from_json(doc) -> tuple[str, list[DenseOracle]]:
    """``(poset, oracles)`` from ``{"poset": ..., "oracles": [...]}`` or a bare list."""
    if isinstance(doc, list):
        doc = {"oracles": doc}
    oracles = [DenseOracle.from_json(o) for o in doc.get("oracles", [])]
    posets = {o.poset for o in oracles}
    poset = doc.get("poset") or (posets.pop() if len(posets) == 1 else "pr")
    if any(o.poset != poset for o in oracles):
        raise ParseError(f"oracles do not all belong to {poset}")
    return poset, oracles


@dataclass
class FilterChain:
    poset: str
    conditions: list = field(default_factory=list)
    met: list = field(default_factory=list)  # [(oracle name, index)]

    def to_json(self) -> dict:
        return {"poset": self.poset,
                "conditions": [c.to_json() for c in self.conditions],
                "met": [[name, i] for name, i in self.met]}

    @classmethod
    def from_json(cls, doc) -> "FilterChain":
        poset = doc.get("poset")
        if poset not in ("pr", "pa"):
            raise ParseError("poset must be 'pr' or 'pa'", "poset")
        cond = PrCondition if poset == "pr" else PaCondition
        return cls(poset, [cond.from_json(c) for c in doc.get("conditions", [])],
                   [(n, int(i)) for n, i in doc.get("met", [])])


def _maximum(poset: str):
    if poset == "pr":
        return PrCondition()
    if poset == "pa":
        return PaCondition()
    raise ValueError(f"unknown poset {poset!r}")


def rasiowa_sikorski(poset: str, oracles: Sequence[DenseOracle], w=None) -> FilterChain:
    """Descend from the maximum condition, meeting each oracle in turn."""
    w = _window(w)
    chain = FilterChain(poset, [_maximum(poset)])
    for i, o in enumerate(oracles):
        if o.poset != poset:
            raise ValueError(f"oracle {o.name} belongs to {o.poset}, not {poset}")
        try:
            c = o.extend(chain.conditions[-1], w)
        except LFError as exc:
            exc.oracle_index = i
            raise
        chain.conditions.append(c)
        chain.met.append((o.name, len(chain.conditions) - 1))
    return chain


def _leq(poset, c, d, w) -> bool:
    return pr_leq(c, d) if poset == "pr" else pa_leq(c, d, w).is_holds


def verify(chain: FilterChain, oracles: Sequence[DenseOracle] = (), w=None) -> bool:
    """Every later condition extends every earlier one, and each oracle is met where recorded."""
    w = _window(w)
    cs = chain.conditions
    for i in range(len(cs)):
        for j in range(i + 1, len(cs)):
            if not _leq(chain.poset, cs[j], cs[i], w):
                return False
    by_name = {o.name: o for o in oracles}
    for name, i in chain.met:
        if not 0 <= i < len(cs):
            return False
        if name in by_name and not by_name[name].contains(cs[i], w):
            return False
    return len(chain.met) >= len(oracles)


def extract_group(chain: FilterChain):
    """The group generated by the ``H`` part of the last condition.

    For a ``P_r`` chain the result is the pair of groups generated by ``H``
    and by ``H2``.
    """
    if not chain.conditions:
        raise ValueError("empty chain")
    last = chain.conditions[-1]
    if chain.poset == "pr":
        return FinitelyGenerated(last.H), FinitelyGenerated(last.H2)
    return FinitelyGenerated(last.H)


def extract_pair(chain: FilterChain) -> tuple[FinitelyGenerated, FinitelyGenerated]:
    """For ``P_r``: the groups generated by ``H`` and by ``H2``."""
    if chain.poset != "pr":
        raise ValueError("only P_r chains carry a second set")
    return extract_group(chain)


def transcript(chain: FilterChain, oracles: Sequence[DenseOracle], w=None) -> dict:
    """Replayable record of a run: oracles, window, chain and extracted groups."""
    w = _window(w)
    doc = {
        "poset": chain.poset,
        "window": w.bound,
        "budget": w.element_budget,
        "oracles": [o.to_json() for o in oracles],
        "chain": chain.to_json(),
        "extracted": [G.to_json() for G in (extract_pair(chain) if chain.poset == "pr"
                                            else (extract_group(chain),))],
    }
    return to_jsonable(doc)


def verify_transcript(doc: dict) -> bool:
    """Check the recorded chain and replay the run; raise :class:`StepMismatch` on divergence."""
    from .groups import WindowConfig

    w = WindowConfig(int(doc.get("window", 64)), int(doc.get("budget", 10 ** 6)))
    poset, oracles = oracles_from_json({"poset": doc.get("poset"), "oracles": doc["oracles"]})
    chain = FilterChain.from_json(doc["chain"])
    if not verify(chain, oracles, w):
        return False
    replay = rasiowa_sikorski(poset, oracles, w)
    for i, (a, b) in enumerate(zip(replay.conditions, chain.conditions)):
        if dumps(a) != dumps(b):
            raise StepMismatch(i, b.to_json(), a.to_json())
    if len(replay.conditions) != len(chain.conditions):
        raise StepMismatch(len(replay.conditions), len(chain.conditions), len(replay.conditions))
    return True
