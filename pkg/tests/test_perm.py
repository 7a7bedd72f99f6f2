import itertools

import pytest
from hypothesis import given, strategies as st

from sflattice import DuplicatePoint, ParseError
from sflattice.perm import (
    IDENTITY,
    FinPerm,
    compose,
    cycle_decomposition,
    inverse,
    iter_sf,
    make_k_cycle,
    sf_at,
    sf_index,
    transposition,
)

import oracles

# First 21 entries of the enumeration, frozen from oracles.sf_table(21).
SF_TABLE = [
    [], [[0, 1]], [[1, 2]], [[0, 1, 2]], [[0, 2, 1]], [[0, 2]], [[2, 3]], [[1, 2, 3]],
    [[1, 3, 2]], [[1, 3]], [[0, 1], [2, 3]], [[0, 1, 2, 3]], [[0, 1, 3, 2]], [[0, 1, 3]],
    [[0, 2, 3, 1]], [[0, 2, 3]], [[0, 2], [1, 3]], [[0, 2, 1, 3]], [[0, 3, 2, 1]],
    [[0, 3, 1]], [[0, 3, 2]],
]


def P(text):
    return FinPerm.parse(text)


def perms_on(n):
    for img in itertools.permutations(range(n)):
        yield FinPerm.from_one_line(img)


@st.composite
def finperms(draw, n=8):
    img = draw(st.permutations(list(range(n))))
    return FinPerm.from_one_line(img)


class TestCompose:
    def test_examples(self):
        assert compose(P("(0 1)"), P("(1 2)")) == P("(0 1 2)")
        assert compose(IDENTITY, P("(3 5 7)")) == P("(3 5 7)")
        p = P("(0 4 2)(1 3)")
        assert compose(p, inverse(p)) == IDENTITY

    def test_convention_is_right_to_left(self):
        p, q = P("(0 1)"), P("(1 2)")
        assert (p * q)(1) == p(q(1)) == 2
        assert (p * q)(0) == 1 and (p * q)(2) == 0

    def test_cancellation_shrinks_support(self):
        p = P("(0 1)")
        assert (p * p).support == frozenset()
        assert (p * p).support < p.support | p.support

    @given(finperms(), finperms())
    def test_support_bound(self, p, q):
        assert (p * q).support <= p.support | q.support

    @given(finperms(), finperms(), finperms())
    def test_associative(self, p, q, r):
        assert (p * q) * r == p * (q * r)


class TestInverse:
    def test_examples(self):
        assert inverse(P("(0 1 2)")) == P("(0 2 1)")
        assert inverse(IDENTITY) == IDENTITY
        assert inverse(P("(0 1)")) == P("(0 1)")

    @given(finperms())
    def test_support_preserved(self, p):
        assert inverse(p).support == p.support
        assert p * ~p == IDENTITY


class TestCycles:
    def test_examples(self):
        assert cycle_decomposition(IDENTITY) == []
        assert cycle_decomposition(P("(0 1)(2 3 4)")) == [(0, 1), (2, 3, 4)]
        assert cycle_decomposition(compose(P("(0 1)"), P("(1 2)"))) == [(0, 1, 2)]

    def test_min_first_and_sorted(self):
        p = FinPerm.from_cycles([[7, 5], [4, 2, 3]])
        assert cycle_decomposition(p) == [(2, 3, 4), (5, 7)]

    def test_recompose_exhaustive_on_seven_points(self):
        for p in perms_on(7):
            q = IDENTITY
            for c in cycle_decomposition(p):
                q = q * make_k_cycle(c)
            assert q == p

    def test_order_and_type(self):
        p = P("(0 1)(2 3 4)")
        assert p.order() == 6
        assert p.cycle_type() == (2, 3)


class TestKCycle:
    def test_examples(self):
        c = make_k_cycle([3, 5, 7])
        assert (c(3), c(5), c(7)) == (5, 7, 3)
        assert make_k_cycle([0, 1]) == transposition(0, 1)

    def test_duplicate(self):
        with pytest.raises(DuplicatePoint):
            make_k_cycle([2, 2])

    def test_too_short(self):
        with pytest.raises(ValueError):
            make_k_cycle([4])


class TestEnumeration:
    def test_frozen_table(self):
        for i, cycles in enumerate(SF_TABLE):
            assert sf_at(i).to_json() == cycles, i
            assert sf_index(FinPerm.from_json(cycles)) == i

    def test_table_matches_brute_force(self):
        for i, img in enumerate(oracles.sf_table(200)):
            assert sf_at(i) == FinPerm.from_one_line(img)

    def test_round_trip(self):
        seen = set()
        for i in range(10 ** 4):
            p = sf_at(i)
            assert sf_index(p) == i
            seen.add(p)
        assert len(seen) == 10 ** 4

    def test_blocks_by_largest_point(self):
        for M in range(1, 7):
            lo = 1
            for k in range(2, M + 1):
                lo *= k
            assert sf_at(lo).max_point == M
            assert sf_at(lo * (M + 1) - 1).max_point == M

    def test_iter_matches_at(self):
        assert list(itertools.islice(iter_sf(), 50)) == [sf_at(i) for i in range(50)]

    @given(st.integers(min_value=0, max_value=10 ** 12))
    def test_large_indices(self, i):
        assert sf_index(sf_at(i)) == i


class TestForms:
    def test_identity_json(self):
        assert IDENTITY.to_json() == []
        assert FinPerm.from_json([]) == IDENTITY

    def test_bad_json(self):
        for bad in ([[1, 1]], [[0]], "x", [[0, -1]], [[0, 1], [1, 2]]):
            with pytest.raises(ParseError):
                FinPerm.from_json(bad)

    def test_parse(self):
        assert P("(0 1)(2 3 4)") == FinPerm.from_cycles([[0, 1], [2, 3, 4]])
        assert P("()") == P("") == IDENTITY
        assert str(P("(4 2 3)")) == "(2 3 4)"
        with pytest.raises(ParseError):
            P("0 1")

    def test_fixed_points_not_stored(self):
        p = FinPerm({0: 1, 1: 0, 2: 2})
        assert p == P("(0 1)")
        assert 2 not in p.support

    def test_not_a_bijection(self):
        with pytest.raises(ValueError):
            FinPerm({0: 1, 1: 1})

    @given(finperms())
    def test_json_round_trip(self, p):
        assert FinPerm.from_json(p.to_json()) == p
        assert hash(FinPerm.from_json(p.to_json())) == hash(p)
