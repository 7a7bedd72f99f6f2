import json

import pytest

from sflattice import FinPerm, IndexSet, NotFoundInWindow, ParseError, PartitionDesc, StepMismatch
from sflattice.constructions import closure
from sflattice.forcing import (
    DenseOracle,
    FilterChain,
    PaCondition,
    PrCondition,
    extract_group,
    extract_pair,
    oracles_from_json,
    pa_dense_extend_group,
    pa_dense_extend_size,
    pa_leq,
    pr_dense_extend,
    pr_leq,
    rasiowa_sikorski,
    transcript,
    verify,
    verify_transcript,
)
from sflattice.groups import FinitelyGenerated, PartitionGroup, gstar, gstar_subgroup, membership
from sflattice.lattice import orthogonal
from sflattice.serialize import dumps


def P(text):
    return FinPerm.parse(text)


def sigma(i):
    return gstar().rule(i)


class TestPr:
    def test_order(self):
        top = PrCondition()
        c = PrCondition((P("(0 1)"),), (P("(2 3)"),))
        assert pr_leq(c, top) and pr_leq(c, c) and not pr_leq(top, c)
        a, b = PrCondition((P("(0 1)"),)), PrCondition((P("(2 3)"),))
        assert not pr_leq(a, b) and not pr_leq(b, a)

    def test_condition_invariants(self):
        with pytest.raises(ValueError):
            PrCondition((P("(0 1)"),), (P("(1 2)"),))
        with pytest.raises(ValueError):
            PrCondition((P("(0 1)"),), (P("(0 1)"),))
        with pytest.raises(ValueError):
            PrCondition((FinPerm(),))

    def test_dense_extend(self):
        c = pr_dense_extend(PrCondition(), gstar(), 1)
        assert c.H == (sigma(0), sigma(2)) and c.H2 == (sigma(1), sigma(3))
        assert pr_leq(c, PrCondition())
        d = pr_dense_extend(c, PartitionGroup(PartitionDesc.mod(2)), 0)
        assert pr_leq(d, c) and len(d.H) == 3 and len(d.H2) == 3

    def test_json(self):
        c = pr_dense_extend(PrCondition(), gstar(), 2)
        assert PrCondition.from_json(json.loads(dumps(c.to_json()))) == c


class TestPa:
    def test_order(self):
        c = PaCondition((P("(0 1)"),))
        assert pa_leq(c, c).is_holds
        assert pa_leq(c, PaCondition()).is_holds
        v = pa_leq(c, PaCondition((), (gstar(),)))
        assert v.is_fails
        assert not pa_leq(PaCondition(), c).is_holds

    def test_extend_group(self):
        c = pa_dense_extend_group(PaCondition(), gstar())
        assert c == PaCondition((), (gstar(),))
        assert pa_dense_extend_group(c, gstar()) == c

    def test_extend_size(self):
        c = pa_dense_extend_size(PaCondition((), (gstar(),)), 0)
        assert c == PaCondition((P("(0 5)(2 10)"),), (gstar(),))
        d = pa_dense_extend_size(c, 1)
        assert len(d.H) == 2 and pa_leq(d, c).is_holds
        assert min(d.H[1].support) > max(c.H[0].support)

    def test_extend_size_without_groups(self):
        c = pa_dense_extend_size(PaCondition(), 1)
        assert len(c.H) == 2 and pa_leq(c, PaCondition()).is_holds


class TestEngine:
    def test_empty(self):
        for poset, top in (("pr", PrCondition()), ("pa", PaCondition())):
            chain = rasiowa_sikorski(poset, [])
            assert chain.conditions == [top] and chain.met == []
            assert verify(chain)

    def test_pr_run(self):
        oracles = [DenseOracle.pr(gstar(), 0), DenseOracle.pr(gstar(), 1)]
        chain = rasiowa_sikorski("pr", oracles)
        assert len(chain.conditions) == 3
        assert chain.met == [("D(G*,0)", 1), ("D(G*,1)", 2)]
        assert verify(chain, oracles)
        G0, G1 = extract_pair(chain)
        assert sigma(0) in G0.generators and sigma(2) in G0.generators
        assert orthogonal(G0, G1).is_holds
        assert closure(G0.generators) & closure(G1.generators) == {FinPerm()}

    def test_pa_run(self):
        fam = [gstar(), PartitionGroup(PartitionDesc.blocks(2))]
        oracles = [DenseOracle.sigma_group(G) for G in fam] + \
                  [DenseOracle.sigma_size(l) for l in range(3)]
        chain = rasiowa_sikorski("pa", oracles, 128)
        assert verify(chain, oracles, 128)
        assert len(chain.met) == len(oracles)
        G0 = extract_group(chain)
        assert len(G0.generators) == 3
        for g in closure(G0.generators):
            if not g.is_identity():
                assert all(membership(g, G, 128).is_non_member for G in fam)

    def test_oracle_error_carries_index(self):
        oracles = [DenseOracle.pr(gstar(), 0),
                   DenseOracle.pr(FinitelyGenerated((P("(0 1)"),)), 0)]
        with pytest.raises(NotFoundInWindow) as err:
            rasiowa_sikorski("pr", oracles)
        assert err.value.oracle_index == 1

    def test_wrong_poset(self):
        with pytest.raises(ValueError):
            rasiowa_sikorski("pa", [DenseOracle.pr(gstar(), 0)])

    def test_determinism(self):
        oracles = [DenseOracle.pr(G, k) for G in (gstar(), gstar_subgroup(IndexSet.parse("odds")))
                   for k in range(3)]
        a = transcript(rasiowa_sikorski("pr", oracles, 1024), oracles, 1024)
        b = transcript(rasiowa_sikorski("pr", oracles, 1024), oracles, 1024)
        assert dumps(a) == dumps(b)

    def test_tampered_chain_rejected(self):
        oracles = [DenseOracle.pr(gstar(), 0), DenseOracle.pr(gstar(), 1)]
        chain = rasiowa_sikorski("pr", oracles)
        broken = FilterChain("pr", [chain.conditions[0], chain.conditions[2], chain.conditions[1]],
                             chain.met)
        assert not verify(broken, oracles)
        short = FilterChain("pr", chain.conditions, chain.met[:1])
        assert not verify(short, oracles)

    def test_transcript_round_trip(self):
        oracles = [DenseOracle.sigma_group(gstar()), DenseOracle.sigma_size(0)]
        doc = json.loads(dumps(transcript(rasiowa_sikorski("pa", oracles), oracles)))
        assert verify_transcript(doc)
        doc["chain"]["conditions"][-1]["H"] = [[[0, 7], [2, 10]]]
        with pytest.raises(StepMismatch):
            verify_transcript(doc)


class TestOracleDocuments:
    def test_round_trip(self):
        oracles = [DenseOracle.pr(gstar(), 3), DenseOracle.sigma_group(gstar()),
                   DenseOracle.sigma_size(4)]
        for o in oracles:
            assert DenseOracle.from_json(json.loads(dumps(o.to_json()))) == o
        assert [o.name for o in oracles] == ["D(G*,3)", "Sigma_G(G*)", "Sigma_4"]

    def test_file_format(self):
        poset, oracles = oracles_from_json([{"kind": "pr", "group": "gstar", "n": 1}])
        assert poset == "pr" and oracles[0].n == 1
        with pytest.raises(ParseError):
            oracles_from_json([{"kind": "pr", "group": "gstar", "n": 1},
                               {"kind": "pa_size", "n": 2}])
        with pytest.raises(ParseError):
            FilterChain.from_json({"poset": "px"})
