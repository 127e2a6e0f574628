import pytest

from pathcat.errors import CongruenceFailure, NotIsofibration
from pathcat import groupoids as g
from pathcat.gpdcheck import (
    FunctorProperties, fiber_over_point, functor_properties,
    groupoid_iso_search, pullback_of_functor, verify_composition_closure,
    verify_fiber_criterion,
)
from oracles import brute_functors, brute_is_isofibration, brute_properties, \
    as_functor

ONE = g.discrete(1, name="1")
TWO = g.discrete(2)
I = g.indiscrete(2, name="I")
B2 = g.cyclic_group(2, name="B2")
IND3 = g.indiscrete(3, name="indiscrete3")

CORPUS = [ONE, TWO, I, B2, IND3]

COLLAPSE = g.GpdFunctor(B2, ONE, (0,), (0, 0))
INCLUDE = g.GpdFunctor(ONE, B2, (0,), (0,))


@pytest.fixture(scope="module")
def all_functors():
    """Every functor between corpus groupoids, keyed by (dom, cod) index."""
    table = {}
    for i, A in enumerate(CORPUS):
        for j, B in enumerate(CORPUS):
            table[(i, j)] = [as_functor(A, B, p)
                             for p in brute_functors(A, B)]
    return table


# -- flag decisions ----------------------------------------------------------

def test_identity_functor_has_all_flags():
    for G in CORPUS:
        p = functor_properties(g.identity_functor(G))
        assert p == FunctorProperties(True, True, True, True, True, True)


def test_loop_collapse_flags():
    p = functor_properties(COLLAPSE)
    assert p == FunctorProperties(
        ess_surjective=True, ess_injective=True, full=True,
        faithful=False, isofibration=True, equivalence=False)


def test_point_inclusion_flags():
    p = functor_properties(INCLUDE)
    assert p == FunctorProperties(
        ess_surjective=True, ess_injective=True, full=False,
        faithful=True, isofibration=False, equivalence=False)


def test_flags_match_brute_oracle_everywhere(all_functors):
    checked = 0
    for fs in all_functors.values():
        for F in fs:
            fast = functor_properties(F)
            slow = functor_properties(F, audit=True)
            assert fast == slow
            want = brute_properties(F)
            assert {k: getattr(fast, k) for k in want} == want
            checked += 1
    assert checked == 98


def test_strength_ladder(all_functors):
    for fs in all_functors.values():
        for F in fs:
            p = functor_properties(F)
            if p.ess_surjective_full:
                assert p.ess_surjective_injective
            if p.ess_surjective_injective:
                assert p.ess_surjective


def test_inconsistent_flags_rejected():
    bogus = FunctorProperties(
        ess_surjective=True, ess_injective=False, full=True,
        faithful=True, isofibration=True, equivalence=False)
    with pytest.raises(CongruenceFailure):
        bogus.check()


def test_properties_invariant_under_iso(all_functors):
    autos_dom = [F for F in all_functors[(4, 4)]
                 if len(set(F.obj_map)) == 3 and len(set(F.mor_map)) == 9]
    assert len(autos_dom) == 6
    for F in all_functors[(4, 2)]:       # indiscrete3 -> I
        base = functor_properties(F)
        for J in autos_dom:
            assert functor_properties(g.compose_functors(F, J)) == base
    autos_cod = [F for F in all_functors[(2, 2)]
                 if len(set(F.obj_map)) == 2 and len(set(F.mor_map)) == 4]
    assert len(autos_cod) == 2
    for F in all_functors[(3, 2)]:       # B2 -> I
        base = functor_properties(F)
        for J in autos_cod:
            assert functor_properties(g.compose_functors(J, F)) == base


# -- iso search ---------------------------------------------------------------

def test_iso_search_finds_identity_first():
    for G in CORPUS:
        F, F_inv = groupoid_iso_search(G, G)
        assert F.is_identity() and F_inv.is_identity()


def test_iso_search_same_table_other_name():
    F, F_inv = groupoid_iso_search(I, g.indiscrete(2))
    assert F.obj_map == (0, 1) and F.mor_map == (0, 1, 2, 3)
    assert g.compose_functors(F_inv, F).is_identity()


def test_iso_search_distinguishes_loop_from_segment():
    # equal object and morphism counts, different composition
    assert groupoid_iso_search(B2, g.indiscrete(2)) is None


# -- strict fibers -------------------------------------------------------------

def test_fiber_over_terminal_base_is_the_functor():
    F = g.GpdFunctor(I, B2, (0, 0), (0, 1, 1, 0))
    J = fiber_over_point(F, COLLAPSE, 0)
    assert J.obj_map == F.obj_map and J.mor_map == F.mor_map


def test_fiber_of_iso_has_all_flags():
    rot = g.GpdFunctor(IND3, IND3,
                       (1, 2, 0),
                       tuple(((a + 1) % 3) * 3 + (b + 1) % 3
                             for a in range(3) for b in range(3)))
    rot.check()
    for alpha in IND3.objects():
        p = functor_properties(
            fiber_over_point(rot, g.identity_functor(IND3), alpha))
        assert p == FunctorProperties(True, True, True, True, True, True)


def test_fiber_requires_isofibration_composite():
    with pytest.raises(NotIsofibration):
        fiber_over_point(INCLUDE, g.identity_functor(B2), 0)


def test_fiber_criterion_over_corpus(all_functors):
    instances = 0
    for i in range(len(CORPUS)):
        for j in range(len(CORPUS)):
            for k in range(len(CORPUS)):
                for F in all_functors[(i, j)]:
                    for G in all_functors[(j, k)]:
                        if not brute_is_isofibration(
                                g.compose_functors(G, F)):
                            continue
                        verify_fiber_criterion(F, G)
                        instances += 1
    assert instances == 581


# -- pullbacks ------------------------------------------------------------------

def test_pullback_along_identity_is_the_functor():
    for F in (COLLAPSE, INCLUDE, g.GpdFunctor(I, B2, (0, 0), (0, 1, 1, 0))):
        proj = pullback_of_functor(F, g.identity_functor(F.cod))
        assert proj.dom.n_objects == F.dom.n_objects
        assert proj.obj_map == F.obj_map and proj.mor_map == F.mor_map


def test_pullback_of_collapse_along_segment():
    G = g.GpdFunctor(I, ONE, (0, 0), (0,) * 4)
    proj = pullback_of_functor(COLLAPSE, G)
    assert (proj.dom.n_objects, proj.dom.n_mors) == (2, 8)
    assert functor_properties(proj) == FunctorProperties(
        ess_surjective=True, ess_injective=True, full=True,
        faithful=False, isofibration=True, equivalence=False)


def test_pullback_rejects_non_isofibration():
    with pytest.raises(NotIsofibration):
        pullback_of_functor(g.identity_functor(B2), INCLUDE)


def test_pullback_transfer_over_corpus(all_functors):
    instances = 0
    for i in range(len(CORPUS)):
        for k in range(len(CORPUS)):
            for j in range(len(CORPUS)):
                for G in all_functors[(j, k)]:
                    if not brute_is_isofibration(G):
                        continue
                    for F in all_functors[(i, k)]:
                        pullback_of_functor(F, G)
                        instances += 1
    assert instances == 685


# -- composites ------------------------------------------------------------------

def test_composition_closure_over_corpus(all_functors):
    pairs = fired = 0
    for i in range(len(CORPUS)):
        for j in range(len(CORPUS)):
            for k in range(len(CORPUS)):
                for F in all_functors[(i, j)]:
                    for G in all_functors[(j, k)]:
                        fired += verify_composition_closure(F, G)
                        pairs += 1
    assert pairs == 2875
    assert fired == 8560
