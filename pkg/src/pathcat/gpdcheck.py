"""Decision procedures for properties of functors between finite groupoids.

Every flag is decided by exhaustive search over the finite tables.  The
closure statements (strict fibers detect essential surjectivity and
fullness, pullback along an isofibration preserves them, two-out-of-three
for composites) are recomputed from both sides; a disagreement is a
CongruenceFailure, never a silent repair.
"""

from dataclasses import dataclass

from .errors import CongruenceFailure, NotIsofibration
from .groupoids import (GpdFunctor, compose_functors, groupoid_iso_search,
                        is_equivalence, is_isofibration, iso_classes,
                        pullback, subgroupoid)

# groupoid_iso_search is re-exported: it is part of this module's surface
# but lives with the kernel because it reuses the functor enumerator there


@dataclass(frozen=True)
class FunctorProperties:
    """Decided flags for one functor between finite groupoids."""

    ess_surjective: bool
    ess_injective: bool
    full: bool
    faithful: bool
    isofibration: bool
    equivalence: bool

    @property
    def ess_surjective_injective(self):
        return self.ess_surjective and self.ess_injective

    @property
    def ess_surjective_full(self):
        return self.ess_surjective and self.full

    def check(self):
        """Internal consistency: the strength ladder between groupoids."""
        if self.equivalence and not (self.ess_surjective and self.full
                                     and self.faithful):
            raise CongruenceFailure(
                "equivalence without surjective fully-faithful flags",
                witness=self)
        if self.ess_surjective_full and not self.ess_injective:
            raise CongruenceFailure(
                "full and essentially surjective but not essentially "
                "injective", witness=self)
        return True


def functor_properties(F, audit=False):
    """Decide every flag of FunctorProperties for F by exhaustive search.

    Fullness is decided on one representative pair per ordered pair of
    source iso-classes; pre- and post-composition with isomorphisms are
    bijections that commute with F, so the verdict transfers to the whole
    class pair.  audit=True rescans every object pair instead.
    """
    A, B = F.dom, F.cod
    dom_classes = iso_classes(A)
    cod_classes = iso_classes(B)
    cod_root = {c: r for r, cls in cod_classes.items() for c in cls}

    hit = {cod_root[F.obj_map[a]] for a in A.objects()}
    ess_surjective = hit == set(cod_classes)

    image_roots = [cod_root[F.obj_map[r]] for r in sorted(dom_classes)]
    ess_injective = len(set(image_roots)) == len(image_roots)

    if audit:
        pairs = [(a, b) for a in A.objects() for b in A.objects()]
    else:
        reps = sorted(dom_classes)
        pairs = [(a, b) for a in reps for b in reps]
    full = True
    for a, b in pairs:
        images = {F.mor_map[m] for m in A.hom(a, b)}
        if not set(B.hom(F.obj_map[a], F.obj_map[b])) <= images:
            full = False
            break

    faithful = True
    seen = set()
    for m in A.mors():
        key = (A.src[m], A.tgt[m], F.mor_map[m])
        if key in seen:
            faithful = False
            break
        seen.add(key)

    props = FunctorProperties(
        ess_surjective=ess_surjective,
        ess_injective=ess_injective,
        full=full,
        faithful=faithful,
        isofibration=is_isofibration(F),
        equivalence=is_equivalence(F))
    # is_equivalence rescans every hom pair, so this cross-checks the
    # representative-pair shortcut against a full scan
    if props.equivalence != (ess_surjective and full and faithful):
        raise CongruenceFailure(
            "equivalence verdict disagrees with recomputed flags",
            witness=props)
    props.check()
    return props


def _strict_fiber(H, alpha):
    """Objects over alpha and morphisms over its identity, as a subgroupoid."""
    A = H.dom
    objs = [a for a in A.objects() if H.obj_map[a] == alpha]
    ident = H.cod.identity[alpha]
    mors = [m for m in A.mors() if H.mor_map[m] == ident]
    return subgroupoid(A, objs, mors, name=f"{A.name}@{alpha}")


def fiber_over_point(F, G, alpha):
    """The functor between strict fibers over alpha induced by F.

    F: A -> B and G: B -> C; the composite G . F must be an isofibration,
    so that isomorphisms downstairs can be straightened into the fiber.
    """
    H = compose_functors(G, F)
    if not is_isofibration(H):
        raise NotIsofibration(
            f"composite {F.dom.name} -> {G.cod.name} does not lift "
            "isomorphisms")
    fib_a, incl_a = _strict_fiber(H, alpha)
    fib_b, incl_b = _strict_fiber(G, alpha)
    obj_back = {b: i for i, b in enumerate(incl_b.obj_map)}
    mor_back = {m: i for i, m in enumerate(incl_b.mor_map)}
    J = GpdFunctor(fib_a, fib_b,
                   tuple(obj_back[F.obj_map[a]] for a in incl_a.obj_map),
                   tuple(mor_back[F.mor_map[m]] for m in incl_a.mor_map))
    J.check()
    return J


def verify_fiber_criterion(F, G):
    """Strict fibers detect essential surjectivity and fullness of F.

    Computes each strength once for F itself and once as the conjunction
    over the fibers above every object of G's codomain; the two sides must
    agree in both directions.  Returns {strength name: shared verdict}.
    """
    whole = functor_properties(F)
    fiberwise = [functor_properties(fiber_over_point(F, G, alpha))
                 for alpha in G.cod.objects()]
    out = {}
    for name in ("ess_surjective", "ess_surjective_full"):
        lhs = getattr(whole, name)
        rhs = all(getattr(p, name) for p in fiberwise)
        if lhs != rhs:
            raise CongruenceFailure(
                f"fiber criterion broken for {name}",
                witness=(name, lhs, rhs))
        out[name] = lhs
    return out


def pullback_of_functor(F, G, budget=None):
    """Pull F: A -> C back along an isofibration G: B -> C.

    Returns the projection A x_C B -> B.  Essential surjectivity and
    fullness of F must transfer to the projection (the converse is not
    claimed); a violation raises CongruenceFailure.
    """
    if not is_isofibration(G):
        raise NotIsofibration(
            f"{G.dom.name} -> {G.cod.name} does not lift isomorphisms")
    span = pullback(F, G, budget=budget)
    proj = span.proj2
    pf = functor_properties(F)
    pp = functor_properties(proj)
    for name in ("ess_surjective", "ess_surjective_full"):
        if getattr(pf, name) and not getattr(pp, name):
            raise CongruenceFailure(
                f"pullback projection lost {name}",
                witness=(name, pf, pp))
    return proj


def verify_composition_closure(F, G):
    """Two-out-of-three closure for the graded strengths.

    With H = G . F: if F and G carry a strength then H does, and if F and
    H carry it then G does.  Returns the number of implications whose
    hypothesis fired; a broken conclusion raises CongruenceFailure.
    """
    assert F.cod is G.dom, (F.cod.name, G.dom.name)
    H = compose_functors(G, F)
    pf, pg, ph = (functor_properties(F), functor_properties(G),
                  functor_properties(H))
    fired = 0
    for name in ("ess_surjective", "ess_surjective_full"):
        f_has, g_has, h_has = (getattr(pf, name), getattr(pg, name),
                               getattr(ph, name))
        if f_has and g_has:
            fired += 1
            if not h_has:
                raise CongruenceFailure(
                    f"composite dropped {name}", witness=(name, pf, pg, ph))
        if f_has and h_has:
            fired += 1
            if not g_has:
                raise CongruenceFailure(
                    f"second factor dropped {name}",
                    witness=(name, pf, pg, ph))
    return fired
