import itertools
import json

import pytest
from hypothesis import assume, given, settings, strategies as st

from sflattice import FinPerm, JoinNotFinitelyDescribable, NoSparePoint, ParseError
from sflattice.groups import PartitionGroup, generated_over, membership
from sflattice.partitions import (
    PartitionDesc,
    almost_coarser,
    coarsen_by_perm,
    coarsen_is_exact,
    extract_transposition,
    extract_transposition_word,
    group_is_finite,
    join,
    meet,
    orbit_partition,
    pairs_view,
    partition_from_pairs,
    partition_group,
    refines,
    residue_pair_example,
)

import oracles

W = 60
LABELS = ["inf:A", "inf:B", "inf:C", "blk:R", "blk:S", "one"]


def P(text):
    return FinPerm.parse(text)


def brute_label(period, labels, preperiod, patch):
    """Reference reading of a label table: class id of each point."""

    def lab(x):
        if x in patch:
            v = patch[x]
            return ("s", x) if v == "one" else ("i", v)
        if x < preperiod:
            raw, q = labels[x], -1
        else:
            raw, q = labels[preperiod + (x - preperiod) % period], (x - preperiod) // period
        kind, _, name = raw.partition(":")
        if raw == "one":
            return ("s", x)
        if kind == "inf":
            return ("i", name)
        return ("b", name, q)

    return lab


@st.composite
def label_tables(draw, max_period=4, max_pre=3, with_patch=True):
    period = draw(st.integers(1, max_period))
    pre = draw(st.integers(0, max_pre))
    labels = draw(st.lists(st.sampled_from(LABELS), min_size=pre + period, max_size=pre + period))
    patch = {}
    if with_patch:
        patch = draw(st.dictionaries(st.integers(0, 8), st.sampled_from(["one", "A", "B", "Z"]),
                                     max_size=3))
    return period, labels, pre, patch


def build(table):
    period, labels, pre, patch = table
    return PartitionDesc.from_labels(period, labels, pre, patch)


def relation(E, n=W):
    return {(x, y) for x in range(n) for y in range(n) if E.same_class(x, y)}


class TestDescriptions:
    @settings(max_examples=150)
    @given(label_tables())
    def test_labels_match_reference(self, table):
        E = build(table)
        assert relation(E) == oracles.set_partition_pairs(brute_label(*table), W)

    @settings(max_examples=100)
    @given(label_tables())
    def test_equivalence_relation(self, table):
        E = build(table)
        for n in (8, 17, 64):
            R = pairs_view(E, n)
            assert all((x, x) in R for x in range(n))
            assert all((y, x) in R for x, y in R)
            by_first = {}
            for x, y in R:
                by_first.setdefault(x, set()).add(y)
            assert all(by_first[y] <= by_first[x] for x, y in R)

    @settings(max_examples=100)
    @given(label_tables())
    def test_json_round_trip(self, table):
        E = build(table)
        doc = json.loads(json.dumps(E.to_json()))
        assert PartitionDesc.from_json(doc) == E

    @given(label_tables(), st.integers(1, 3))
    def test_canonical_form(self, table, k):
        # repeating the periodic table k times describes the same partition
        period, labels, pre, patch = table
        assume(not any(lab.startswith("blk") for lab in labels))
        again = PartitionDesc.from_labels(period * k, labels[:pre] + labels[pre:] * k, pre, patch)
        assert again == build(table)
        assert hash(again) == hash(build(table))

    def test_shorthands(self):
        assert PartitionDesc.parse("pairs") == PartitionDesc.blocks(2)
        assert PartitionDesc.parse("mod1") == PartitionDesc.one_class()
        assert PartitionDesc.parse("singletons").labels_upto(4) == [0, 1, 2, 3]
        assert PartitionDesc.parse("blocks3").labels_upto(7) == [0, 0, 0, 1, 1, 1, 2]
        for bad in ("modx", "triples", ""):
            with pytest.raises(ParseError):
                PartitionDesc.parse(bad)

    def test_bad_documents(self):
        with pytest.raises(ParseError):
            PartitionDesc.from_labels(2, ["inf:A"])
        with pytest.raises(ParseError):
            PartitionDesc.from_json({"period": 2})

    def test_class_meta(self):
        e0, e1 = residue_pair_example()
        assert [m["kind"] for m in e0.class_meta()] == ["infinite", "infinite"]
        assert e1.class_meta() == [{"id": "c0", "kind": "block", "extent": [0, 1]}]
        F = PartitionDesc.from_labels(2, ["inf:A", "one"], patch={1: "Q", 3: "Q"})
        kinds = {m["kind"] for m in F.class_meta()}
        assert kinds == {"infinite", "finite"}


class TestMeetJoin:
    def test_examples(self):
        assert meet(PartitionDesc.mod(2), PartitionDesc.mod(3)) == PartitionDesc.mod(6)
        E = PartitionDesc.blocks(3)
        assert join(E, PartitionDesc.singletons()) == E
        assert meet(E, E) == E

    def test_join_of_shifted_pairs_is_one_class(self):
        shifted = PartitionDesc.from_labels(2, ["one", "blk:R", "blk:R"], preperiod=1)
        assert join(PartitionDesc.blocks(2), shifted) == PartitionDesc.one_class()

    @settings(max_examples=150)
    @given(label_tables(), label_tables())
    def test_meet_matches_intersection(self, t1, t2):
        E1, E2 = build(t1), build(t2)
        assert relation(meet(E1, E2)) == relation(E1) & relation(E2)

    def test_meet_block_straddling_prefix(self):
        # {3, 6} is cut by the patch at 3 while the later blocks {7, 10}, ... survive
        E1 = build((1, ["inf:A"], 0, {0: "one", 3: "one"}))
        E2 = build((4, ["inf:A", "inf:A", "inf:A", "blk:R", "inf:A", "inf:A", "blk:R"], 3, {}))
        M = meet(E1, E2)
        assert relation(M) == relation(E1) & relation(E2)
        assert [6] in [sorted(c) for c in M.classes_upto(16)]
        assert [7, 10] in [sorted(c) for c in M.classes_upto(16)]
        assert refines(M, E1) and refines(M, E2)

    @settings(max_examples=150)
    @given(label_tables(), label_tables())
    def test_join_matches_transitive_closure(self, t1, t2):
        E1, E2 = build(t1), build(t2)
        try:
            J = join(E1, E2)
        except JoinNotFinitelyDescribable:
            return
        n = 3 * W
        pairs = (relation(E1, n) | relation(E2, n))
        truth = {(x, y) for x, y in oracles.transitive_closure(pairs, n) if x < W and y < W}
        assert relation(J) == truth

    @given(label_tables(), label_tables())
    def test_refines(self, t1, t2):
        E1, E2 = build(t1), build(t2)
        M = meet(E1, E2)
        assert refines(M, E1) and refines(M, E2)
        assert refines(E1, E2) == (relation(E1) <= relation(E2))

    def test_meet_membership_is_conjunction(self):
        parts = [PartitionDesc.mod(2), PartitionDesc.blocks(3), residue_pair_example()[0],
                 PartitionDesc.from_labels(3, ["inf:A", "blk:R", "blk:R"])]
        perms = [FinPerm.from_one_line(p) for p in itertools.permutations(range(6))]
        for E1, E2 in itertools.combinations(parts, 2):
            G1, G2, G = PartitionGroup(E1), PartitionGroup(E2), PartitionGroup(meet(E1, E2))
            for p in perms:
                both = membership(p, G1).is_member and membership(p, G2).is_member
                assert membership(p, G).is_member == both

    def test_pairs_and_orbits(self):
        E = partition_from_pairs([(0, 3), (3, 5), (7, 8)])
        assert E.labels_upto(9) == [0, 1, 2, 0, 3, 0, 4, 5, 5]
        assert orbit_partition(P("(0 2 4)(5 6)")).same_class(0, 4)


class TestFiniteness:
    def test_examples(self):
        assert group_is_finite(PartitionDesc.singletons())
        assert not group_is_finite(PartitionDesc.mod(2))
        assert not group_is_finite(PartitionDesc.blocks(2))
        assert group_is_finite(partition_from_pairs([(0, 5), (1, 2)]))

    def test_pair_growth_brute_force(self):
        # the local part keeps growing exactly when the group is infinite
        for E in (PartitionDesc.blocks(2), PartitionDesc.singletons(),
                  partition_from_pairs([(0, 1)])):
            sizes = [oracles.partition_local_size(E.class_of, range(n)) for n in (4, 8, 12)]
            growing = sizes[0] < sizes[1] < sizes[2]
            assert growing == (not group_is_finite(E))

    @settings(max_examples=100)
    @given(label_tables())
    def test_matches_reference(self, table):
        E = build(table)
        lab = brute_label(*table)
        big = [c for c in oracles.set_partition_pairs(lab, 40) if c[0] != c[1] and c[0] > 20]
        assert group_is_finite(E) == (not big)


class TestAlmostCoarser:
    def test_examples(self):
        E = PartitionDesc.blocks(3)
        v = almost_coarser(E, E)
        assert v.is_holds and v.witness["Z"] == []
        e0, e1 = residue_pair_example()
        v = almost_coarser(e0, e1)
        assert v.is_holds and v.exact and v.witness["Z"] == [[0, 1]]
        assert almost_coarser(PartitionDesc.singletons(), PartitionDesc.mod(2)).is_fails
        assert almost_coarser(e1, e0).is_fails

    @settings(max_examples=150)
    @given(label_tables(), label_tables())
    def test_witnesses_recheck(self, ty, tx):
        Y, X = build(ty), build(tx)
        try:
            v = almost_coarser(Y, X)
        except JoinNotFinitelyDescribable:
            return
        n = 2 * W
        if v.is_holds:
            pairs = relation(Y, n) | {tuple(z) for z in v.witness["Z"]}
            closed = oracles.transitive_closure(pairs, n)
            assert {(x, y) for x, y in relation(X, W)} <= closed
        else:
            assert v.is_fails
            if "pair" in v.witness:
                x, y = v.witness["pair"]
                Pd = v.witness["period"]
                for k in range(3):
                    a, b = x + k * Pd, y + k * Pd
                    joined = oracles.transitive_closure(relation(X, n) | relation(Y, n), n)
                    assert (a, b) in joined and not Y.same_class(a, b)


class TestCoarsening:
    def test_examples(self):
        E = PartitionDesc.mod(3)
        assert coarsen_by_perm(E, FinPerm()) == E
        C = coarsen_by_perm(E, P("(0 1)"))
        assert C == PartitionDesc.from_labels(3, ["inf:A", "inf:A", "inf:B"])
        assert coarsen_is_exact(E, P("(0 1)"))

    def test_extract_example(self):
        E = PartitionDesc.mod(3)
        g = P("(0 1)")
        t = extract_transposition(E, g, 0, 1)
        assert t == P("(3 4)")
        t2, word = extract_transposition_word(E, g, 0, 1)
        G = generated_over(partition_group(E), [g])
        v = membership(t, G)
        assert v.is_member
        prod = FinPerm()
        for p, e in word:
            prod = prod * p ** e
        assert prod == t2 == t

    def test_extract_errors(self):
        E = PartitionDesc.mod(3)
        with pytest.raises(ValueError):
            extract_transposition(E, P("(0 1)"), 0, 2)
        with pytest.raises(ValueError):
            extract_transposition(E, P("(0 3)"), 0, 3)
        tiny = partition_from_pairs([(0, 1)])
        with pytest.raises(NoSparePoint):
            extract_transposition(tiny, P("(1 2)"), 1, 2)
        assert not coarsen_is_exact(tiny, P("(1 2)"))

    def test_extract_within_window(self):
        E = PartitionDesc.mod(2)
        assert extract_transposition(E, P("(0 1)(2 3)"), 0, 1, bound=8) == P("(4 5)")
        with pytest.raises(NoSparePoint):
            extract_transposition(E, P("(0 1)(2 3)"), 0, 1, bound=4)

    @settings(max_examples=100)
    @given(label_tables(), st.permutations(list(range(6))))
    def test_monotone(self, table, img):
        E, g = build(table), FinPerm.from_one_line(img)
        try:
            C = coarsen_by_perm(E, g)
        except JoinNotFinitelyDescribable:
            return
        assert refines(E, C)
        assert all(C.same_class(x, g(x)) for x in g.support)

    def test_membership_matches_generated_over(self):
        E = PartitionDesc.mod(3)
        g = P("(0 1)(2 5)")
        C = partition_group(coarsen_by_perm(E, g))
        G = generated_over(partition_group(E), [g])
        for p in (FinPerm.from_one_line(i) for i in itertools.permutations(range(6))):
            assert membership(p, C).is_member == membership(p, G).is_member
