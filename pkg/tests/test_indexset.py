import pytest
from hypothesis import given, strategies as st

from sflattice import IndexSet, ParseError

N = 80


@st.composite
def index_sets(draw, max_period=6):
    period = draw(st.integers(1, max_period))
    bits = draw(st.lists(st.booleans(), min_size=period, max_size=period))
    patch = draw(st.lists(st.booleans(), max_size=10))
    return IndexSet.from_bits(bits, patch)


def members(A, n=N):
    return {x for x in range(n) if x in A}


class TestIndexSet:
    def test_shorthands(self):
        assert IndexSet.parse("evens").upto(7) == [0, 2, 4, 6]
        assert IndexSet.parse("odds").upto(6) == [1, 3, 5]
        assert IndexSet.parse("mod3:1,2").upto(7) == [1, 2, 4, 5]
        assert IndexSet.parse("ge:3").upto(6) == [3, 4, 5]
        assert IndexSet.parse("none").is_empty()
        assert IndexSet.parse("all") == IndexSet.everything()
        with pytest.raises(ParseError):
            IndexSet.parse("primes")
        with pytest.raises(ParseError):
            IndexSet.parse("modx")
        with pytest.raises(ParseError):
            IndexSet.parse("mod0")

    def test_finite(self):
        A = IndexSet.finite([1, 4])
        assert A.is_finite() and list(A) == [1, 4]
        assert not IndexSet.parse("evens").is_finite()

    @given(index_sets(), index_sets())
    def test_boolean_algebra(self, A, B):
        assert members(A & B) == members(A) & members(B)
        assert members(A | B) == members(A) | members(B)
        assert members(A - B) == members(A) - members(B)
        assert members(A ^ B) == members(A) ^ members(B)
        assert members(A.complement()) == set(range(N)) - members(A)

    @given(index_sets(), index_sets())
    def test_subset_relations(self, A, B):
        assert A.issubset(B) == (members(A) <= members(B))
        tail = set(range(40, N))
        assert A.almost_subset(B) == (members(A) & tail <= members(B))

    @given(index_sets())
    def test_reduced_and_json(self, A):
        r = A.reduced()
        assert members(r) == members(A)
        assert IndexSet.from_json(A.to_json()) == A
        assert hash(r) == hash(A)

    def test_equal_across_periods(self):
        assert IndexSet.residue(4, 0, 2) == IndexSet.parse("evens")
        assert IndexSet.residue(4, 0) != IndexSet.parse("evens")
