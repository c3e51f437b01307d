import itertools

import pytest

from kgraphlat import align
from kgraphlat.align import is_exhaustive
from kgraphlat.ideals import (
    enumerate_ideal_pairs,
    enumerate_sat_hered,
    hereditary_closure,
    ideal_lattice,
    is_hereditary,
    is_satiated,
    is_saturated,
    pair_leq,
    quotient_graph,
    restricted_fe_family,
    satiation_closure,
    saturation,
)
from kgraphlat.kgraph import KGraphError, validate_kgraph

import oracles


# -- hereditary ---------------------------------------------------------------


def test_is_hereditary_examples(fx):
    g = fx["FX4"]
    assert is_hereditary(g, {"w"})
    assert not is_hereditary(g, {"v"})
    assert is_hereditary(g, set())
    assert is_hereditary(g, set(g.vertices))


def test_hereditary_closure_examples(fx):
    g4, g1 = fx["FX4"], fx["FX1"]
    assert hereditary_closure(g4, {"v"}) == {"u", "v", "w"}
    assert hereditary_closure(g1, {"v"}) == {"v"}
    assert hereditary_closure(g4, set()) == set()


def test_hereditary_closure_is_least(fx):
    for g in fx.values():
        verts = g.vertices
        for n in range(len(verts) + 1):
            for combo in itertools.combinations(verts, n):
                got = hereditary_closure(g, combo)
                assert is_hereditary(g, got)
                supersets = [
                    frozenset(s)
                    for m in range(len(verts) + 1)
                    for s in itertools.combinations(verts, m)
                    if set(combo) <= set(s) and is_hereditary(g, s)
                ]
                assert got == frozenset.intersection(*supersets)


# -- saturation -----------------------------------------------------------------


def test_is_saturated_examples(fx):
    g = fx["FX4"]
    res = is_saturated(g, {"u", "w"}, (2,))
    assert res.is_false
    v, F = res.witness
    assert v == "v" and {p.literal() for p in F} == {"e", "f"}
    assert is_saturated(g, {"w"}, (2,)).is_true
    assert is_saturated(g, set(), (2,)).is_true


def test_is_saturated_requires_hereditary(fx):
    with pytest.raises(KGraphError):
        is_saturated(fx["FX4"], {"v"}, (2,))


def test_saturation_examples(fx):
    assert saturation(fx["FX1"], {"v"}, (2,)).members == ("u", "v")
    assert saturation(fx["FX4"], {"u", "w"}, (2,)).members == ("u", "v", "w")
    assert saturation(fx["FX4"], set(), (2,)).members == ()


def test_saturation_props_and_bruteforce_oracle(fx):
    """Idempotent, monotone, extensive; equals the intersection of all
    saturated supersets found by scanning every subset."""
    for name in ("FX1", "FX4", "FX5", "FX6"):
        g = fx[name]
        cap = (2,) * g.k
        verts = g.vertices

        def oracle_saturated(S):
            S = frozenset(S)
            for v in verts:
                if v in S:
                    continue
                fmax = [
                    p for p in g.paths_up_to(v, cap) if p.s in S and not p.is_vertex
                ]
                if fmax and is_exhaustive(g, fmax, cap).is_true:
                    return False
            return True

        subsets = [
            frozenset(c) for m in range(len(verts) + 1) for c in itertools.combinations(verts, m)
        ]
        for G in subsets:
            got = frozenset(saturation(g, G, cap).members)
            assert G <= got  # extensive
            assert frozenset(saturation(g, got, cap).members) == got  # idempotent
            sat_supersets = [S for S in subsets if G <= S and oracle_saturated(S)]
            assert got == frozenset.intersection(*sat_supersets)  # least
        for G in subsets:
            for H in subsets:
                if G <= H:
                    assert frozenset(saturation(g, G, cap).members) <= frozenset(
                        saturation(g, H, cap).members
                    )  # monotone


def test_saturation_preserves_hereditary(fx):
    for name in ("FX1", "FX4", "FX6"):
        g = fx[name]
        for n in range(len(g.vertices) + 1):
            for combo in itertools.combinations(g.vertices, n):
                if is_hereditary(g, combo):
                    assert saturation(g, combo, (2,) * g.k).hereditary


def test_enumerate_sat_hered_examples(fx):
    got4 = [h.members for h in enumerate_sat_hered(fx["FX4"], (2,))]
    assert got4 == [(), ("u",), ("w",), ("u", "v", "w")]
    got2 = [h.members for h in enumerate_sat_hered(fx["FX2"], (2, 2))]
    assert got2 == [(), ("v",)]
    got1 = [h.members for h in enumerate_sat_hered(fx["FX1"], (2,))]
    assert got1 == [(), ("u", "v")]


# -- quotient -----------------------------------------------------------------------


def test_quotient_examples(fx):
    g = fx["FX4"]
    gq = quotient_graph(g, {"w"})
    assert gq.vertices == ("u", "v") and [e.eid for e in gq.edges] == ["f"]
    gq2 = quotient_graph(g, {"u"})
    assert gq2.vertices == ("v", "w") and [e.eid for e in gq2.edges] == ["e", "g"]
    assert quotient_graph(g, set()) == g


def test_quotient_rejects_non_hereditary(fx):
    with pytest.raises(KGraphError):
        quotient_graph(fx["FX4"], {"v"})


def test_quotients_validate_for_all_enumerated(fx):
    for g in fx.values():
        cap = (2,) * g.k
        for hv in enumerate_sat_hered(g, cap):
            assert validate_kgraph(quotient_graph(g, hv.as_frozenset)).ok


# -- stripped family and satiation ---------------------------------------------------


def test_restricted_fe_family_examples(fx):
    g = fx["FX4"]
    sf = restricted_fe_family(g, {"w"}, (2,))
    assert {frozenset(p.literal() for p in S) for S in sf.base.sets_at("v")} == {
        frozenset({"f"})
    }
    sf2 = restricted_fe_family(g, {"u"}, (2,))
    assert {frozenset(p.literal() for p in S) for S in sf2.base.sets_at("v")} == {
        frozenset({"e"}),
        frozenset({"e.g"}),
        frozenset({"e", "e.g"}),
    }
    # empty H: the family is the capped candidate family itself
    sf0 = restricted_fe_family(g, set(), (2,))
    direct = align.fe_sets_all(g, (2,))
    assert sf0.sets() == frozenset(direct.all_sets())


def test_restricted_members_never_refuted(fx):
    for g in fx.values():
        cap = (2,) * g.k
        for hv in enumerate_sat_hered(g, cap):
            sf = restricted_fe_family(g, hv.as_frozenset, cap)
            gq = quotient_graph(g, hv.as_frozenset)
            for S, cert in sf.certs().items():
                assert not cert.is_false
                recheck = is_exhaustive(gq, S, cap)
                assert not recheck.is_false
            if hv.saturated.is_true:
                assert not sf.tainted


def test_is_satiated_examples(fx):
    g3 = fx["FX3"]
    fam = [{g3.path(["b"]), g3.path(["c"])}]
    assert is_satiated(g3, fam, (1, 1)).is_true
    g2 = fx["FX2"]
    res = is_satiated(g2, [{g2.path(["b"])}], (1, 1))
    assert res.is_false
    rule, G, _, D = res.witness
    assert rule == "S1"
    assert {p.literal() for p in D} == {"b", "r"}
    assert is_satiated(g2, [], (1, 1)).is_true


def test_is_satiated_of_stripped_family_never_false(fx):
    for g in fx.values():
        cap = (2,) * g.k
        for hv in enumerate_sat_hered(g, cap):
            sf = restricted_fe_family(g, hv.as_frozenset, cap)
            assert not sf.satiated.is_false


def test_satiation_closure_examples(fx):
    g2 = fx["FX2"]
    b = g2.path(["b"])
    cl = satiation_closure(g2, [{b}], (1, 1))
    sets = {frozenset(p.literal() for p in S) for S in cl.sets()}
    assert frozenset({"b", "r"}) in sets  # superset rule fires
    assert satiation_closure(g2, [], (1, 1)).sets() == frozenset()
    # closure of the stripped family adds nothing, on every fixture
    for name in ("FX1", "FX3", "FX4", "FX5", "FX6"):
        g = fx[name]
        cap = (2,) * g.k
        for hv in enumerate_sat_hered(g, cap):
            sf = restricted_fe_family(g, hv.as_frozenset, cap)
            gq = quotient_graph(g, hv.as_frozenset)
            assert satiation_closure(gq, sf, cap).sets() == sf.sets()


def test_satiation_closure_idempotent(fx):
    g2 = fx["FX2"]
    cl = satiation_closure(g2, [{g2.path(["b"])}], (1, 1))
    again = satiation_closure(g2, cl, (1, 1))
    assert again.sets() == cl.sets()


# -- pairs and lattice -----------------------------------------------------------


def test_enumerate_ideal_pairs_examples(fx):
    got4 = [(p.H, p.B) for p in enumerate_ideal_pairs(fx["FX4"], (2,))]
    assert got4 == [((), ()), (("u",), ()), (("w",), ()), (("u", "v", "w"), ())]
    got2 = [(p.H, p.B) for p in enumerate_ideal_pairs(fx["FX2"], (2, 2))]
    assert got2 == [((), ()), (("v",), ())]
    got6 = [(p.H, p.B) for p in enumerate_ideal_pairs(fx["FX6"], (2,))]
    assert got6 == [((), ()), (("v",), ())]


def test_pair_leq_examples(fx):
    g = fx["FX4"]
    pairs = enumerate_ideal_pairs(g, (2,))
    by_h = {p.H: p for p in pairs}
    assert pair_leq(g, by_h[("u",)], by_h[("u", "v", "w")])
    assert not pair_leq(g, by_h[("u",)], by_h[("w",)])
    assert not pair_leq(g, by_h[("w",)], by_h[("u",)])
    for p in pairs:
        assert pair_leq(g, p, p)


def test_pair_leq_rejects_cap_mismatch(fx):
    g = fx["FX4"]
    p2 = enumerate_ideal_pairs(g, (2,))[0]
    p3 = enumerate_ideal_pairs(g, (3,))[0]
    with pytest.raises(KGraphError):
        pair_leq(g, p2, p3)


def test_pair_leq_is_partial_order(fx):
    for name in ("FX1", "FX4", "FX6"):
        g = fx[name]
        pairs = enumerate_ideal_pairs(g, (2,))
        for a in pairs:
            assert pair_leq(g, a, a)
            for b in pairs:
                if pair_leq(g, a, b) and pair_leq(g, b, a):
                    assert a == b
                for c in pairs:
                    if pair_leq(g, a, b) and pair_leq(g, b, c):
                        assert pair_leq(g, a, c)


def test_ideal_lattice_examples(fx):
    lat = ideal_lattice(fx["FX4"], (2,))
    assert [p.H for p in lat.pairs] == [(), ("u",), ("w",), ("u", "v", "w")]
    assert lat.hasse == ((0, 1), (0, 2), (1, 3), (2, 3))
    assert lat.is_lattice
    assert all(p.exact for p in lat.pairs)
    lat1 = ideal_lattice(fx["FX1"], (2,))
    assert len(lat1.pairs) == 2 and lat1.hasse == ((0, 1),)
    lat6 = ideal_lattice(fx["FX6"], (2,))
    assert len(lat6.pairs) == 2 and lat6.hasse == ((0, 1),)


def test_lattice_meets_joins_on_diamond(fx):
    lat = ideal_lattice(fx["FX4"], (2,))
    # nodes: 0=bottom, 1={u}, 2={w}, 3=top
    assert lat.meets[(1, 2)] == 0
    assert lat.joins[(1, 2)] == 3
    assert lat.meets[(0, 3)] == 0 and lat.joins[(0, 3)] == 3


# -- rank-1 oracle ---------------------------------------------------------------


def test_k1_oracle_on_fixtures(fx):
    for name in ("FX1", "FX4", "FX5", "FX6"):
        g = fx[name]
        pairs = enumerate_ideal_pairs(g, (1,))
        assert all(p.B == () for p in pairs)
        got = [frozenset(p.H) for p in pairs]
        assert got == sorted(oracles.k1_sat_hered_sets(g), key=lambda s: (len(s), sorted(s)))


def test_is_satiated_rejects_out_of_universe_members(fx):
    g = fx["FX4"]
    deep = g.path(["e", "g"])  # degree 2 member against a cap-1 universe
    with pytest.raises(KGraphError):
        is_satiated(g, [{deep}], (1,))


def test_pi_closure_idempotent_on_random_graphs():
    from kgraphlat.align import pi_closure
    from kgraphlat.randomgraphs import random_2graph

    for seed in range(6):
        g = random_2graph(seed)
        v = g.vertices[0]
        pool = [p for p in g.paths_up_to(v, (1, 1)) if not p.is_vertex][:4]
        if not pool:
            continue
        once = pi_closure(g, pool)
        assert pi_closure(g, once) == once
        assert set(pool) <= set(once)
