import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from sflattice import BudgetExceeded, FinPerm, IndexSet, ParseError, PartitionDesc
from sflattice.groups import (
    DisjointFamily,
    ExtendedBy,
    FinitelyGenerated,
    PartitionGroup,
    WindowConfig,
    check_certificate,
    eval_word,
    generated_over,
    group_from_json,
    gstar,
    gstar_block,
    gstar_subgroup,
    is_finite_desc,
    local_part,
    membership,
    trace_set,
    transport_maps,
    trivial_group,
)
from sflattice.perm import sf_index

import oracles


def P(text):
    return FinPerm.parse(text)


def one_line(p, n):
    return tuple(p(x) for x in range(n))


def perms_on(n):
    return [FinPerm.from_one_line(img) for img in itertools.permutations(range(n))]


@st.composite
def small_gens(draw, n=6):
    k = draw(st.integers(0, 3))
    return [FinPerm.from_one_line(draw(st.permutations(list(range(n))))) for _ in range(k)]


class TestLocalPart:
    def test_examples(self):
        G = FinitelyGenerated((P("(0 1)"), P("(2 3)")))
        lp = local_part(G, {0, 1}, WindowConfig(4))
        assert lp.elements == {FinPerm(), P("(0 1)")} and lp.exact
        G = FinitelyGenerated((P("(0 1)(2 3)"), P("(2 3)")))
        assert local_part(G, {0, 1}, 4).elements == {FinPerm(), P("(0 1)")}
        assert local_part(FinitelyGenerated((P("(0 1 2)"),)), {0, 1}, 4).elements == {FinPerm()}

    @settings(max_examples=60, deadline=None)
    @given(small_gens(), st.sets(st.integers(0, 5), max_size=6))
    def test_matches_closure(self, gens, A):
        closed = oracles.closure([one_line(g, 6) for g in gens], 6)
        truth = {p for p in closed if oracles.support(p) <= A}
        lp = local_part(FinitelyGenerated(tuple(gens)), A, 6)
        assert {one_line(g, 6) for g in lp.elements} == truth

    def test_is_subgroup(self):
        for G in (gstar(), PartitionGroup(PartitionDesc.mod(3)),
                  generated_over(gstar(), [P("(1 2)")])):
            lp = local_part(G, range(7), 16)
            els = lp.elements
            assert FinPerm() in els
            assert all(a * b in els and ~a in els for a in els for b in els)

    def test_partition_sizes(self):
        E = PartitionDesc.blocks(3)
        for A in ({0, 1, 2}, {0, 1, 3, 4, 5}, set(range(9))):
            n = len(local_part(PartitionGroup(E), A))
            assert n == oracles.partition_local_size(E.class_of, A)

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            local_part(PartitionGroup(PartitionDesc.one_class()), range(12), WindowConfig(64, 1000))

    def test_outside_window(self):
        with pytest.raises(ValueError):
            local_part(gstar(), {70}, 64)


class TestMembership:
    def test_examples(self):
        parity = PartitionGroup(PartitionDesc.mod(2))
        assert membership(P("(0 2)"), parity).is_member
        assert membership(P("(0 1)"), parity).is_non_member
        v = membership(P("(0 1)"), gstar())
        assert v.is_member and v.certificate == ((P("(0 1)"), 1),)

    def test_certificates_recheck(self):
        G = generated_over(PartitionGroup(PartitionDesc.mod(3)), [P("(0 1)")])
        v = membership(P("(3 4)"), G)
        assert v.is_member and check_certificate(G, P("(3 4)"), v.certificate)
        assert eval_word(v.certificate) == P("(3 4)")

    @settings(max_examples=60, deadline=None)
    @given(small_gens(), st.permutations(list(range(6))))
    def test_finitely_generated_matches_closure(self, gens, img):
        g = FinPerm.from_one_line(img)
        closed = oracles.closure([one_line(h, 6) for h in gens], 6)
        v = membership(g, FinitelyGenerated(tuple(gens)), 6)
        assert v.is_member == (tuple(img) in closed)
        if v.is_member:
            assert eval_word(v.certificate) == g

    def test_gstar_factorisation_exhaustive(self):
        # all of Sym(7) against the block-by-block reference
        for A in (IndexSet.everything(), IndexSet.parse("evens"), IndexSet.finite([1])):
            G = gstar_subgroup(A)
            idx = set(A.upto(10))
            for g in perms_on(7):
                v = membership(g, G)
                assert v.is_member or v.is_non_member
                assert v.is_member == oracles.gstar_member(one_line(g, 7) + tuple(range(7, 20)), idx)

    def test_gstar_closure_window_12(self):
        # the generated group on 12 points matches the factorisation test
        blocks = oracles.gstar_blocks(3)  # 0..9
        gens = [oracles.from_cycles([b], 12) for b in blocks]
        closed = oracles.closure(gens, 12)
        assert len(closed) == 2 * 3 * 5
        for img in closed:
            assert membership(FinPerm.from_one_line(img), gstar(), 12).is_member
        assert membership(P("(10 11)"), gstar(), 12).is_non_member

    @settings(max_examples=80, deadline=None)
    @given(st.permutations(list(range(7))), st.sampled_from(["mod2", "mod3", "blocks2", "blocks3"]))
    def test_partition_groups(self, img, name):
        E = PartitionDesc.parse(name)
        g = FinPerm.from_one_line(img)
        v = membership(g, PartitionGroup(E))
        assert v.is_member == oracles.partition_member(tuple(img), E.class_of)
        assert v.is_member or v.is_non_member

    def test_generated_over_empty(self):
        G = PartitionGroup(PartitionDesc.blocks(2))
        H = generated_over(G, [])
        for g in perms_on(5):
            assert membership(g, G).status == membership(g, H).status

    def test_generated_over_trivial(self):
        assert membership(P("(0 1)"), generated_over(trivial_group(), [P("(0 1)")])).is_member

    def test_outside_window_is_unknown(self):
        v = membership(P("(0 70)"), gstar(), 64)
        assert v.status == "unknown"


class TestTransport:
    def test_examples(self):
        parity = PartitionGroup(PartitionDesc.mod(2))
        assert transport_maps(parity, [0], [2]).maps == {((0, 2),)}
        assert len(transport_maps(gstar(), [0], [5], 10)) == 0
        assert transport_maps(gstar(), [], []).maps == {()}
        with pytest.raises(ValueError):
            transport_maps(gstar(), [0, 1], [2])

    def test_gstar_orbit_brute_force(self):
        gens = [oracles.from_cycles([b], 10) for b in oracles.gstar_blocks(3)]
        orbit0 = {p[0] for p in oracles.closure(gens, 10)}
        assert orbit0 == {0, 1}
        for y in range(10):
            assert (len(transport_maps(gstar(), [0], [y], 10)) > 0) == (y in orbit0)

    @settings(max_examples=40, deadline=None)
    @given(small_gens(5), st.sets(st.integers(0, 4), min_size=1, max_size=3), st.data())
    def test_matches_closure(self, gens, A, data):
        B = data.draw(st.sets(st.integers(0, 4), min_size=len(A), max_size=len(A)))
        closed = oracles.closure([one_line(g, 5) for g in gens], 5)
        truth = {tuple(sorted((x, p[x]) for x in A)) for p in closed if {p[x] for x in A} == B}
        assert transport_maps(FinitelyGenerated(tuple(gens)), A, B, 5).maps == truth


class TestGstar:
    def test_layout(self):
        assert gstar().rule(0) == P("(0 1)")
        assert gstar().rule(1) == P("(2 3 4)")
        assert list(gstar_block(2)) == list(range(5, 10))
        blocks = oracles.gstar_blocks(51)
        for i in range(51):
            assert list(gstar_block(i)) == blocks[i]
        seen = set()
        for i in range(51):
            s = gstar().rule(i).support
            assert not seen & s
            seen |= s

    def test_subgroups(self):
        ev = gstar_subgroup(IndexSet.parse("evens"))
        assert membership(gstar().rule(1), ev).is_non_member
        assert membership(gstar().rule(2), ev).is_member
        everything = gstar_subgroup(IndexSet.everything())
        for g in perms_on(6):
            assert membership(g, everything).status == membership(g, gstar()).status

    @settings(max_examples=50, deadline=None)
    @given(st.sets(st.integers(0, 7)), st.sets(st.integers(0, 7)))
    def test_embedding_order(self, A, B):
        GA, GB = gstar_subgroup(A), gstar_subgroup(B)
        gens_in = all(membership(gstar().rule(i), GB, 128).is_member for i in A)
        assert gens_in == (A <= B)

    def test_explicit_family(self):
        F = DisjointFamily("explicit", perms=(P("(0 1)"), P("(2 3 4)")))
        assert membership(P("(0 1)(2 4 3)"), F).is_member
        with pytest.raises(ValueError):
            DisjointFamily("explicit", perms=(P("(0 1)"), P("(1 2)")))


class TestTrace:
    def test_examples(self):
        assert trace_set(trivial_group(), 30) == ({0}, frozenset())
        members, _ = trace_set(FinitelyGenerated((P("(0 1)"),)), 30)
        assert members == {0, sf_index(P("(0 1)"))}

    def test_monotone(self):
        G = gstar_subgroup(IndexSet.parse("evens"))
        H = generated_over(G, [P("(2 3 4)")])
        mg, _ = trace_set(G, 720)
        mh, uh = trace_set(H, 720)
        assert mg <= mh | uh
        assert sf_index(P("(2 3 4)")) in mh - mg


class TestDescriptions:
    def test_json_round_trip(self):
        groups = [gstar(), gstar_subgroup(IndexSet.parse("mod3:1")), trivial_group(),
                  PartitionGroup(PartitionDesc.blocks(2)),
                  ExtendedBy(gstar(), (P("(1 2)"),)),
                  FinitelyGenerated((P("(0 1 2)"),)),
                  DisjointFamily("explicit", perms=(P("(0 1)"),))]
        for G in groups:
            assert group_from_json(json.loads(json.dumps(G.to_json()))) == G

    def test_shorthands(self):
        assert group_from_json("gstar") == gstar()
        assert group_from_json("partition:mod2") == PartitionGroup(PartitionDesc.mod(2))
        assert group_from_json("trivial") == trivial_group()
        for bad in ("sym", {"type": "nope"}, {"type": "partition_group"}, 3):
            with pytest.raises(ParseError):
                group_from_json(bad)

    def test_finiteness(self):
        assert is_finite_desc(FinitelyGenerated((P("(0 1)"),)))
        assert not is_finite_desc(gstar())
        assert is_finite_desc(gstar_subgroup([1, 2]))
        assert not is_finite_desc(PartitionGroup(PartitionDesc.mod(2)))
        assert is_finite_desc(PartitionGroup(PartitionDesc.singletons()))
