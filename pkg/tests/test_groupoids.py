import pytest
from hypothesis import given, settings, strategies as st

from pathcat.errors import Budget, NotIsofibration, ResourceCap
from pathcat import groupoids as g
from oracles import (
    brute_functors, brute_natural_transformations, brute_is_isofibration,
    brute_is_equivalence, brute_pi_objects, brute_pi_morphisms, functor_key,
)

ONE = g.discrete(1, name="1")
I = g.indiscrete(2, name="I")
B2 = g.cyclic_group(2, name="B2")
IND3 = g.indiscrete(3, name="indiscrete3")

SMALL = [ONE, I, B2, g.discrete(2), IND3]


def component(spec):
    kind, n = spec
    if kind == "discrete":
        return g.discrete(n)
    if kind == "indiscrete":
        return g.indiscrete(n)
    return g.cyclic_group(n)


def build_gpd(specs):
    G = component(specs[0])
    for spec in specs[1:]:
        G, _, _ = g.disjoint_union(G, component(spec))
    return G


comp_spec = st.tuples(st.sampled_from(["discrete", "indiscrete", "cyclic"]),
                      st.integers(min_value=1, max_value=3))
gpd_strategy = st.lists(comp_spec, min_size=1, max_size=2).map(build_gpd)


def test_seed_tables_satisfy_groupoid_laws():
    for G in SMALL:
        assert G.check()


def test_product_and_disjoint_union_tables():
    prod = g.product(I, B2)
    assert prod.gpd.check()
    assert prod.gpd.n_objects == 2 and prod.gpd.n_mors == 8
    assert prod.proj1.check() and prod.proj2.check()
    u, inl, inr = g.disjoint_union(I, B2)
    assert u.check() and inl.check() and inr.check()
    assert len(u.components()) == 2


def test_mediator_satisfies_universal_property():
    prod = g.product(B2, B2)
    f = g.identity_functor(B2)
    m = prod.mediate(f, f)
    assert m.check()
    assert g.compose_functors(prod.proj1, m).mor_map == f.mor_map
    assert g.compose_functors(prod.proj2, m).mor_map == f.mor_map


def test_pullback_against_brute_filter():
    tB = g.constant_functor(B2, ONE, 0)
    P = g.vertical_path_groupoid(tB)
    prod = g.product(B2, B2)
    stF = prod.mediate(P.s, P.t)
    pb = g.pullback(stF, stF)
    assert pb.gpd.check()
    pairs = [(a, b) for a in P.gpd.objects() for b in P.gpd.objects()
             if stF.obj_map[a] == stF.obj_map[b]]
    assert list(pb.obj_pairs) == pairs
    mors = [(m, n) for m in P.gpd.mors() for n in P.gpd.mors()
            if stF.mor_map[m] == stF.mor_map[n]]
    assert list(pb.mor_pairs) == mors


@pytest.mark.parametrize("A,B", [
    (ONE, B2), (ONE, I), (B2, B2), (I, B2), (B2, I), (I, I),
    (g.discrete(2), I), (IND3, B2),
])
def test_enumerate_functors_matches_brute(A, B):
    got = {functor_key(F) for F in g.enumerate_functors(A, B)}
    want = set(brute_functors(A, B))
    assert got == want


def test_enumerate_functors_with_post_constraints_matches_brute():
    prod = g.product(I, B2)
    post = [(prod.proj1, g.identity_functor(I))]
    got = [functor_key(F) for F in g.enumerate_functors(I, prod.gpd, post=post)]
    want = brute_functors(I, prod.gpd, post=post)
    assert sorted(got) == sorted(want)
    for F in g.enumerate_functors(I, prod.gpd, post=post):
        assert g.compose_functors(prod.proj1, F).mor_map == \
            g.identity_functor(I).mor_map


@pytest.mark.parametrize("A,B", [(B2, B2), (I, B2), (I, I), (ONE, I)])
def test_natural_transformations_match_brute(A, B):
    fs = list(g.enumerate_functors(A, B))
    for F in fs:
        for G in fs:
            got = g.natural_transformations(F, G)
            want = brute_natural_transformations(F, G)
            assert sorted(got) == sorted(want)


@settings(max_examples=20, deadline=None)
@given(gpd_strategy, gpd_strategy)
def test_functor_count_matches_brute_on_random_groupoids(A, B):
    got = sum(1 for _ in g.enumerate_functors(A, B))
    want = len(brute_functors(A, B))
    assert got == want


def test_functor_groupoid_frozen_values():
    FII = g.functor_groupoid(I, I)
    assert (FII.gpd.n_objects, FII.gpd.n_mors) == (4, 16)
    assert g.groupoid_iso_search(FII.gpd, g.indiscrete(4)) is not None

    FBB = g.functor_groupoid(B2, B2)
    assert (FBB.gpd.n_objects, FBB.gpd.n_mors) == (2, 4)
    assert [len(FBB.gpd.hom(a, b)) for a in range(2) for b in range(2)] == \
        [2, 0, 0, 2]

    FIB = g.functor_groupoid(I, B2)
    assert (FIB.gpd.n_objects, FIB.gpd.n_mors) == (2, 8)
    assert len(FIB.gpd.components()) == 1
    assert len(FIB.gpd.hom(0, 0)) == 2

    F1B = g.functor_groupoid(ONE, B2)
    assert (F1B.gpd.n_objects, F1B.gpd.n_mors) == (1, 2)


def test_functor_groupoid_evaluation_is_functorial():
    F = g.functor_groupoid(I, B2)
    E, A, B = F.gpd, F.A, F.B
    for (x, y), v in E.comp.items():
        for (m2, m1), m in A.comp.items():
            lhs = F.eval_mor(v, m)
            rhs = B.compose(F.eval_mor(x, m2), F.eval_mor(y, m1))
            assert lhs == rhs
    for i in E.objects():
        for a in A.objects():
            ti = E.identity[i]
            assert F.eval_mor(ti, A.identity[a]) == \
                B.identity[F.eval_obj(i, a)]


def test_vertical_path_groupoid_structure():
    for Y, n_obj, n_mor in [(B2, 2, 8), (I, 4, 16), (g.discrete(3), 3, 3)]:
        t = g.constant_functor(Y, ONE, 0)
        P = g.vertical_path_groupoid(t)
        assert P.gpd.check() and P.r.check() and P.s.check() and P.t.check()
        assert (P.gpd.n_objects, P.gpd.n_mors) == (n_obj, n_mor)
        idY = g.identity_functor(Y)
        assert g.compose_functors(P.s, P.r).mor_map == idY.mor_map
        assert g.compose_functors(P.t, P.r).mor_map == idY.mor_map
        assert g.is_equivalence(P.r)
        prod = g.product(Y, Y)
        assert g.is_isofibration(prod.mediate(P.s, P.t))


def test_path_groupoid_of_indiscrete_is_indiscrete_on_squares():
    t = g.constant_functor(I, ONE, 0)
    P = g.vertical_path_groupoid(t)
    assert g.groupoid_iso_search(P.gpd, g.indiscrete(4)) is not None


def test_fiberwise_path_groupoid_of_st_over_square():
    # paths in B2^I relative to its endpoint fibration have 2 objects and
    # every hom-set has exactly 2 arrows
    t = g.constant_functor(B2, ONE, 0)
    P = g.vertical_path_groupoid(t)
    prod = g.product(B2, B2)
    stF = prod.mediate(P.s, P.t)
    PP = g.vertical_path_groupoid(stF)
    assert PP.gpd.check()
    assert PP.gpd.n_objects == 2
    assert all(len(PP.gpd.hom(a, b)) == 2
               for a in PP.gpd.objects() for b in PP.gpd.objects())


@pytest.mark.parametrize("A,B", [(B2, B2), (I, B2), (ONE, I), (I, I)])
def test_isofibration_and_equivalence_match_brute(A, B):
    for F in g.enumerate_functors(A, B):
        assert g.is_isofibration(F) == brute_is_isofibration(F)
        assert g.is_equivalence(F) == brute_is_equivalence(F)


def test_groupoid_iso_search_frozen_negatives():
    assert g.groupoid_iso_search(B2, g.indiscrete(2)) is None
    assert g.groupoid_iso_search(g.discrete(2), g.indiscrete(2)) is None
    F, Finv = g.groupoid_iso_search(I, g.indiscrete(2))
    assert g.compose_functors(Finv, F).is_identity()
    assert g.compose_functors(F, Finv).is_identity()


@pytest.mark.parametrize("A,Z", [(B2, B2), (I, B2), (I, I), (B2, I)])
def test_pi_along_terminal_is_functor_groupoid(A, Z):
    u = g.constant_functor(A, ONE, 0)
    prod = g.product(A, Z)
    pi = g.pi_groupoid(u, prod.proj1)
    assert pi.gpd.check() and pi.proj.check()
    fun = g.functor_groupoid(A, Z)
    assert g.groupoid_iso_search(pi.gpd, fun.gpd) is not None


def test_pi_matches_brute_reference():
    for A, Z in [(B2, B2), (I, B2)]:
        u = g.constant_functor(A, ONE, 0)
        prod = g.product(A, Z)
        q = prod.proj1
        pi = g.pi_groupoid(u, q)
        want_objects = brute_pi_objects(u, q)
        assert pi.gpd.n_objects == len(want_objects)
        want_mors = brute_pi_morphisms(u, q, want_objects)
        got = sorted((w, tuple(sorted(eta.items())))
                     for w, _, _, eta in pi.morphisms)
        want = sorted((w, tuple(sorted(eta.items())))
                      for w, _, _, eta in want_mors)
        assert got == want


def test_pi_with_fibered_base_matches_brute():
    # u is the first projection of B2 x I, so fibers sit over a 2-object base
    prod = g.product(I, B2)
    u = prod.proj1
    pb = g.product(prod.gpd, B2)
    q = pb.proj1
    pi = g.pi_groupoid(u, q)
    assert pi.gpd.check()
    want_objects = brute_pi_objects(u, q)
    assert pi.gpd.n_objects == len(want_objects)
    want_mors = brute_pi_morphisms(u, q, want_objects)
    assert pi.gpd.n_mors == len(want_mors)


def test_pi_requires_lifts():
    pick = g.constant_functor(ONE, I, 0)
    with pytest.raises(NotIsofibration):
        g.pi_groupoid(pick, g.identity_functor(ONE))


def test_budget_cap_raises():
    with pytest.raises(ResourceCap):
        g.functor_groupoid(I, I, budget=Budget(2))


def test_enumeration_order_is_reproducible():
    first = [functor_key(F) for F in g.enumerate_functors(I, B2)]
    second = [functor_key(F) for F in g.enumerate_functors(I, B2)]
    assert first == second
