"""Groupoid structure on hom-sets and its functoriality.

For fixed objects X and Y of a path structure, the maps X -> Y become the
objects of a groupoid: an arrow is a homotopy X -> PY taken up to fiberwise
homotopy over Y x Y.  Composition and inversion of arrows are realized by
chosen fillers of lifting squares (the composer and the inverter below),
whiskering by a map on either side by a third filler, and the action of a
functor that preserves weak equivalences by a fourth.  Everything at this
scale is a finite check, so the builders verify the laws of what they
construct and raise instead of returning a structure that fails them.

Filler choices are deterministic (least morphism id) and memoized on the
path structure, so two arrows composed twice give the same class and
reports built from these structures are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (CongruenceFailure, MissingEntry, NaturalityFailure,
                     NotComposable, NotHomotopical, NotWeakEquivalence)
from .groupoids import GpdFunctor, Groupoid, UnionFind
from .pathstruct import LiftingSquare, find_filler


def _state(PS):
    """Per-structure memo for fillers and built hom-groupoids."""
    try:
        return PS._enrich
    except AttributeError:
        PS._enrich = {"egroupoid": {}, "hom": {}, "whisker": {}, "extension": {}}
        return PS._enrich


# ---------------------------------------------------------------------------
# composition and inversion fillers on one path object


@dataclass(frozen=True)
class EGroupoidData:
    """Fillers making homotopies into a path object composable.

    composer: defined on pairs of homotopies with matching endpoints
    (comp_domain), returns a homotopy from the first source to the second
    target.  inverter: swaps the endpoints of a homotopy.  equivalence_paths
    is the path object used to compare homotopies fiberwise over Y x Y.
    """

    Y: int
    po: object                # PathObjectData for Y
    equivalence_paths: object  # PathObjectData over the endpoint fibration
    composer: int
    inverter: int
    product: object           # PullbackData: Y x Y
    comp_domain: object       # PullbackData: homotopy pairs, target-to-source
    endpoints: int            # (source, target): PY -> Y x Y
    reversed_endpoints: int   # (target, source): PY -> Y x Y
    paired_constants: int     # constant homotopy doubled: Y -> comp domain


def build_internal_egroupoid(PS, Y, po=None):
    """Choose and verify composition structure on a path object of Y."""
    memo = _state(PS)["egroupoid"]
    C = PS.cat
    if po is None:
        po = PS.path_object(None, Y)
    key = (Y, po)
    if key in memo:
        return memo[key]
    product = PS.product(Y, Y)
    st = PS.mediator(product, po.s, po.t)
    ts = PS.mediator(product, po.t, po.s)
    equivalence_paths = PS.slice_path_object(st)
    comp_domain = PS.pullback_of(po.t, po.s)
    rr = PS.mediator(comp_domain, po.r, po.r)
    if not PS.is_weak_equivalence(rr):
        raise NotWeakEquivalence(
            f"paired constant homotopies {rr} into {comp_domain.apex} "
            "must be a weak equivalence")
    bottom = PS.mediator(product,
                         C.compose(po.s, comp_domain.proj1),
                         C.compose(po.t, comp_domain.proj2))
    composer = find_filler(PS, LiftingSquare(w=rr, p=st, h=po.r, k=bottom))
    inverter = find_filler(PS, LiftingSquare(w=po.r, p=ts, h=po.r, k=st))
    data = EGroupoidData(Y, po, equivalence_paths, composer, inverter,
                         product, comp_domain, st, ts, rr)
    memo[key] = data
    return data


# ---------------------------------------------------------------------------
# the hom-groupoid


class HomGroupoid:
    """The groupoid of maps X -> Y and homotopy classes of maps X -> PY.

    objects: all maps X -> Y, ascending.  Arrow classes are numbered in
    ascending order of their least member; reps holds that member.  gpd is
    the same structure as a plain finite groupoid, usable by any groupoid
    decider; its object i is objects[i] and its morphism j is class j.
    """

    def __init__(self, PS, X, Y, eg, verify=True):
        self.PS = PS
        self.X = X
        self.Y = Y
        self.eg = eg
        C = PS.cat
        po = eg.po
        self.objects = tuple(C.search_maps(X, Y, budget=PS.budget))
        self.obj_index = {f: i for i, f in enumerate(self.objects)}
        arrows = C.search_maps(X, po.P, budget=PS.budget)
        by_ends = {}
        for H in arrows:
            key = (C.compose(po.s, H), C.compose(po.t, H))
            by_ends.setdefault(key, []).append(H)
        uf = UnionFind(arrows)
        for ends in sorted(by_ends):
            group = by_ends[ends]
            for i, H in enumerate(group):
                for K in group[i + 1:]:
                    if uf.find(H) != uf.find(K) and self._parallel(H, K):
                        uf.union(H, K)
        groups = uf.groups()
        reps = sorted(groups)
        self.reps = tuple(reps)
        self.class_members = tuple(tuple(groups[r]) for r in reps)
        self.class_of = {H: i for i, ms in enumerate(self.class_members)
                         for H in ms}
        self.src_map = tuple(C.compose(po.s, r) for r in reps)
        self.tgt_map = tuple(C.compose(po.t, r) for r in reps)
        self.identity_class_of = {
            f: self.class_of[C.compose(po.r, f)] for f in self.objects}
        comp = {}
        for j in range(len(reps)):
            for i in range(len(reps)):
                if self.src_map[j] == self.tgt_map[i]:
                    comp[(j, i)] = self._compose_reps(reps[j], reps[i])
        self.gpd = Groupoid(
            len(self.objects),
            tuple(self.obj_index[f] for f in self.src_map),
            tuple(self.obj_index[g] for g in self.tgt_map),
            comp,
            tuple(self.identity_class_of[f] for f in self.objects),
            inverse=tuple(self.class_of[C.compose(eg.inverter, r)]
                          for r in reps),
            name=f"hom({X},{Y})",
            obj_labels=tuple(str(f) for f in self.objects))
        if verify:
            try:
                self.gpd.check()
            except AssertionError as exc:
                raise CongruenceFailure(
                    f"hom-groupoid laws fail for ({X}, {Y}): {exc}")
            witness = verify_class_operations(self)
            if witness is not None:
                raise CongruenceFailure(
                    f"class operation depends on representatives "
                    f"for ({X}, {Y})", witness=witness)

    def _parallel(self, H, K):
        """Existence of a homotopy H -> K fixing both endpoints."""
        if H == K:
            return True
        pp = self.eg.equivalence_paths
        C = self.PS.cat
        return C.count_maps(self.X, pp.P, post=[(pp.s, H), (pp.t, K)],
                            limit=1, budget=self.PS.budget) >= 1

    def _compose_reps(self, K, H):
        """Class of the composite arrow: K after H."""
        PS, C, eg = self.PS, self.PS.cat, self.eg
        paired = PS.mediator(eg.comp_domain, H, K)
        return self.class_of[C.compose(eg.composer, paired)]

    def n_classes(self):
        return len(self.reps)

    def classes_between(self, f, g):
        return [HomClass(self, j) for j in range(len(self.reps))
                if self.src_map[j] == f and self.tgt_map[j] == g]


@dataclass(frozen=True)
class HomClass:
    """One arrow of a hom-groupoid: a class of homotopies X -> PY."""

    hg: object
    index: int

    @property
    def src(self):
        return self.hg.src_map[self.index]

    @property
    def tgt(self):
        return self.hg.tgt_map[self.index]

    @property
    def rep(self):
        return self.hg.reps[self.index]

    def members(self):
        return self.hg.class_members[self.index]


def hom_groupoid(PS, X, Y, po=None, verify=True):
    """Build (or reuse) the groupoid of maps X -> Y."""
    eg = build_internal_egroupoid(PS, Y, po=po)
    memo = _state(PS)["hom"]
    key = (X, Y, eg.po)
    if key in memo:
        return memo[key]
    hg = HomGroupoid(PS, X, Y, eg, verify=verify)
    memo[key] = hg
    return hg


def hom_class(hg, H):
    """The arrow class of an explicit homotopy H: X -> PY."""
    if H not in hg.class_of:
        raise MissingEntry(
            f"{H} is not a homotopy between maps {hg.X} -> {hg.Y}")
    return HomClass(hg, hg.class_of[H])


def identity_class(hg, f):
    """The identity arrow at the map f: the constant homotopy's class."""
    if f not in hg.identity_class_of:
        raise MissingEntry(f"{f} is not a map {hg.X} -> {hg.Y}")
    return HomClass(hg, hg.identity_class_of[f])


def compose_hom_classes(hg, beta, alpha):
    """beta after alpha at class level, via the composer filler."""
    if beta.hg is not hg or alpha.hg is not hg:
        raise NotComposable("classes belong to a different hom-groupoid")
    if alpha.tgt != beta.src:
        raise NotComposable(
            f"target of class {alpha.index} is not source of {beta.index}")
    return HomClass(hg, hg.gpd.compose(beta.index, alpha.index))


def inverse_class(alpha):
    """The inverse arrow, via the inverter filler."""
    return HomClass(alpha.hg, alpha.hg.gpd.inverse[alpha.index])


def verify_class_operations(hg):
    """Check every representative pair; witness of a dependence, or None."""
    PS, C, eg = hg.PS, hg.PS.cat, hg.eg
    n = len(hg.reps)
    for j in range(n):
        for i in range(n):
            if hg.src_map[j] != hg.tgt_map[i]:
                continue
            want = hg.gpd.comp[(j, i)]
            for K in hg.class_members[j]:
                for H in hg.class_members[i]:
                    paired = PS.mediator(eg.comp_domain, H, K)
                    got = hg.class_of[C.compose(eg.composer, paired)]
                    if got != want:
                        return ("compose", j, i, K, H, got, want)
    for j in range(n):
        want = hg.gpd.inverse[j]
        for K in hg.class_members[j]:
            got = hg.class_of[C.compose(eg.inverter, K)]
            if got != want:
                return ("inverse", j, K, got, want)
    return None


# ---------------------------------------------------------------------------
# whiskering


def whisker_filler(PS, f, po_src=None, po_tgt=None):
    """The chosen map of path objects transporting homotopies along f.

    Strictly compatible with the endpoint fibrations; on an identity with
    one path object choice the identity is taken so whiskering by an
    identity is the identity on classes.
    """
    C = PS.cat
    Y, Z = C.dom(f), C.cod(f)
    eg_src = build_internal_egroupoid(PS, Y, po=po_src)
    eg_tgt = build_internal_egroupoid(PS, Z, po=po_tgt)
    memo = _state(PS)["whisker"]
    key = (f, eg_src.po, eg_tgt.po)
    if key in memo:
        return memo[key]
    if f == C.identity(Y) and eg_src.po == eg_tgt.po:
        filler = C.identity(eg_src.po.P)
    else:
        bottom = PS.mediator(eg_tgt.product,
                             C.compose(f, eg_src.po.s),
                             C.compose(f, eg_src.po.t))
        filler = find_filler(PS, LiftingSquare(
            w=eg_src.po.r, p=eg_tgt.endpoints,
            h=C.compose(eg_tgt.po.r, f), k=bottom))
    memo[key] = filler
    return filler


def whisker_left(PS, f, alpha):
    """Post-compose an arrow class with f, through the whisker filler."""
    hg = alpha.hg
    C = PS.cat
    if C.dom(f) != hg.Y:
        raise NotComposable(f"{f} does not leave {hg.Y}")
    target = hom_groupoid(PS, hg.X, C.cod(f))
    filler = whisker_filler(PS, f, po_src=hg.eg.po, po_tgt=target.eg.po)
    return hom_class(target, C.compose(filler, alpha.rep))


def whisker_right(alpha, g):
    """Pre-compose an arrow class with g; strict, no filler involved."""
    hg = alpha.hg
    PS = hg.PS
    C = PS.cat
    if C.cod(g) != hg.X:
        raise NotComposable(f"{g} does not land in {hg.X}")
    target = hom_groupoid(PS, C.dom(g), hg.Y, po=hg.eg.po)
    return hom_class(target, C.compose(alpha.rep, g))


def horizontal_compose(beta, alpha):
    """Horizontal composite of arrow classes in adjacent hom-groupoids.

    Both composition orders are computed; they must agree, and the shared
    value is returned.
    """
    PS = beta.hg.PS
    if alpha.hg.PS is not PS or alpha.hg.Y != beta.hg.X:
        raise NotComposable("hom-groupoids are not adjacent")
    target = hom_groupoid(PS, alpha.hg.X, beta.hg.Y)
    one = compose_hom_classes(
        target, whisker_right(beta, alpha.tgt), whisker_left(PS, beta.src, alpha))
    two = compose_hom_classes(
        target, whisker_left(PS, beta.tgt, alpha), whisker_right(beta, alpha.src))
    if one.index != two.index:
        raise CongruenceFailure(
            "the two horizontal composition orders disagree",
            witness=(beta.index, alpha.index, one.index, two.index))
    return one


def whisker_left_functor(PS, f, X):
    """Post-composition with f as a functor between hom-groupoids."""
    C = PS.cat
    src_hg = hom_groupoid(PS, X, C.dom(f))
    tgt_hg = hom_groupoid(PS, X, C.cod(f))
    filler = whisker_filler(PS, f)
    F = GpdFunctor(
        src_hg.gpd, tgt_hg.gpd,
        tuple(tgt_hg.obj_index[C.compose(f, g)] for g in src_hg.objects),
        tuple(tgt_hg.class_of[C.compose(filler, r)] for r in src_hg.reps))
    F.check()
    return F


def whisker_right_functor(PS, g, Z):
    """Pre-composition with g as a functor between hom-groupoids."""
    C = PS.cat
    src_hg = hom_groupoid(PS, C.cod(g), Z)
    tgt_hg = hom_groupoid(PS, C.dom(g), Z)
    F = GpdFunctor(
        src_hg.gpd, tgt_hg.gpd,
        tuple(tgt_hg.obj_index[C.compose(f, g)] for f in src_hg.objects),
        tuple(tgt_hg.class_of[C.compose(r, g)] for r in src_hg.reps))
    F.check()
    return F


def whiskering_natural_iso(PS, alpha, W):
    """An arrow class f => g makes post-composition by f and by g
    naturally isomorphic; returns (functor for f, functor for g,
    component class indices per map W -> X)."""
    hg = alpha.hg
    F1 = whisker_left_functor(PS, alpha.src, W)
    F2 = whisker_left_functor(PS, alpha.tgt, W)
    src_hg = hom_groupoid(PS, W, hg.X)
    tgt_hg = hom_groupoid(PS, W, hg.Y)
    comps = tuple(whisker_right(alpha, h).index for h in src_hg.objects)
    G = tgt_hg.gpd
    for j in range(len(src_hg.reps)):
        a, b = src_hg.gpd.src[j], src_hg.gpd.tgt[j]
        left = G.compose(comps[b], F1.mor_map[j])
        right = G.compose(F2.mor_map[j], comps[a])
        if left != right:
            raise NaturalityFailure(
                f"whiskering comparison fails at class {j} of "
                f"hom({W},{hg.X})")
    return F1, F2, comps


# ---------------------------------------------------------------------------
# action of a functor on hom-groupoids

# a functor argument is anything with obj(a) and mor(m); table functors
# qualify, and the lazy wrappers below cover structures that grow


class IdentityFunctor:
    """The identity, usable on a category of any (growing) size."""

    def __init__(self, C):
        self.C = C

    def obj(self, a):
        return a

    def mor(self, m):
        return m


class ConstantFunctor:
    """Everything to one object and its identity."""

    def __init__(self, C, target_obj):
        self.C = C
        self.target_obj = target_obj

    def obj(self, a):
        return self.target_obj

    def mor(self, m):
        return self.C.identity(self.target_obj)


@dataclass
class FunctorExtensionData:
    """Per-object comparison fillers for one functor between structures."""

    functor: object
    src: object
    tgt: object
    comparisons: dict = field(default_factory=dict)

    def comparison_at(self, Y):
        """Filler comparing the image of a path object with a chosen one.

        Strictly compatible with endpoints; the identity when the functor
        maps the source path object data onto the target's designated one.
        """
        if Y in self.comparisons:
            return self.comparisons[Y]
        F = self.functor
        D = self.tgt.cat
        po = self.src.path_object(None, Y)
        FY = F.obj(Y)
        eg = build_internal_egroupoid(self.tgt, FY)
        Fr = F.mor(po.r)
        if not self.tgt.is_weak_equivalence(Fr):
            raise NotHomotopical(
                f"image {Fr} of the constant homotopy on {Y} is not a "
                "weak equivalence")
        image_po = (F.obj(po.P), Fr, F.mor(po.s), F.mor(po.t))
        if image_po == (eg.po.P, eg.po.r, eg.po.s, eg.po.t):
            lam = D.identity(eg.po.P)
        else:
            bottom = self.tgt.mediator(eg.product, F.mor(po.s), F.mor(po.t))
            lam = find_filler(self.tgt, LiftingSquare(
                w=Fr, p=eg.endpoints, h=eg.po.r, k=bottom))
        self.comparisons[Y] = lam
        return lam


def functor_extension(src_PS, tgt_PS, F):
    memo = _state(src_PS)["extension"]
    key = (F, id(tgt_PS))
    if key not in memo:
        memo[key] = FunctorExtensionData(F, src_PS, tgt_PS)
    return memo[key]


def extend_homotopical_functor(src_PS, tgt_PS, F, X, Y, check_all=True):
    """The action of a weak-equivalence-preserving functor on one
    hom-groupoid, as a groupoid functor; functoriality is verified.

    check_all scans every morphism of the source for preservation of the
    marking; with it off only the instances actually transported are
    guarded.
    """
    C, D = src_PS.cat, tgt_PS.cat
    if check_all:
        for m in list(C.morphisms()):
            if src_PS.is_weak_equivalence(m) and \
                    not tgt_PS.is_weak_equivalence(F.mor(m)):
                raise NotHomotopical(
                    f"functor maps weak equivalence {m} to {F.mor(m)}, "
                    "which is not one")
    ext = functor_extension(src_PS, tgt_PS, F)
    src_hg = hom_groupoid(src_PS, X, Y)
    tgt_hg = hom_groupoid(tgt_PS, F.obj(X), F.obj(Y))
    lam = ext.comparison_at(Y)
    out = GpdFunctor(
        src_hg.gpd, tgt_hg.gpd,
        tuple(tgt_hg.obj_index[F.mor(g)] for g in src_hg.objects),
        tuple(tgt_hg.class_of[D.compose(lam, F.mor(r))] for r in src_hg.reps))
    out.check()
    return out


def verify_whisker_preservation(src_PS, tgt_PS, F, X, Y, Z):
    """Transporting a whiskered class equals whiskering the transported
    class, on both sides, for every map Y -> Z and every arrow class.

    Returns the number of instances checked; raises on the first failure.
    """
    C = src_PS.cat
    ext_XY = extend_homotopical_functor(src_PS, tgt_PS, F, X, Y,
                                        check_all=False)
    ext_XZ = extend_homotopical_functor(src_PS, tgt_PS, F, X, Z,
                                        check_all=False)
    ext_YZ = extend_homotopical_functor(src_PS, tgt_PS, F, Y, Z,
                                        check_all=False)
    hg_XY = hom_groupoid(src_PS, X, Y)
    hg_YZ = hom_groupoid(src_PS, Y, Z)
    img_XY = hom_groupoid(tgt_PS, F.obj(X), F.obj(Y))
    img_YZ = hom_groupoid(tgt_PS, F.obj(Y), F.obj(Z))
    checked = 0
    for f in C.search_maps(Y, Z, budget=src_PS.budget):
        for j in range(hg_XY.n_classes()):
            lhs = ext_XZ.mor_map[
                whisker_left(src_PS, f, HomClass(hg_XY, j)).index]
            rhs = whisker_left(tgt_PS, F.mor(f),
                               HomClass(img_XY, ext_XY.mor_map[j])).index
            if lhs != rhs:
                raise CongruenceFailure(
                    "post-whiskering is not preserved",
                    witness=(f, j, lhs, rhs))
            checked += 1
    for g in C.search_maps(X, Y, budget=src_PS.budget):
        for j in range(hg_YZ.n_classes()):
            lhs = ext_XZ.mor_map[
                whisker_right(HomClass(hg_YZ, j), g).index]
            rhs = whisker_right(
                HomClass(img_YZ, ext_YZ.mor_map[j]), F.mor(g)).index
            if lhs != rhs:
                raise CongruenceFailure(
                    "pre-whiskering is not preserved",
                    witness=(g, j, lhs, rhs))
            checked += 1
    return checked


def verify_extension_composition(PS_a, PS_b, PS_c, F, G, X, Y):
    """Acting by F then by G equals acting by the composite, pointwise."""

    class _Composite:
        def obj(self, a):
            return G.obj(F.obj(a))

        def mor(self, m):
            return G.mor(F.mor(m))

    first = extend_homotopical_functor(PS_a, PS_b, F, X, Y, check_all=False)
    second = extend_homotopical_functor(
        PS_b, PS_c, G, F.obj(X), F.obj(Y), check_all=False)
    both = extend_homotopical_functor(
        PS_a, PS_c, _Composite(), X, Y, check_all=False)
    composed_obj = tuple(second.obj_map[i] for i in first.obj_map)
    composed_mor = tuple(second.mor_map[j] for j in first.mor_map)
    return (composed_obj, composed_mor) == (both.obj_map, both.mor_map)


# ---------------------------------------------------------------------------
# strict transformations


@dataclass(frozen=True)
class CommutationCertificate:
    """Witnesses that a transformation commutes with hom-groupoid actions.

    objects: (map X -> Y, its common image under both routes).
    classes: (class index, its common image class index).
    """

    objects: tuple
    classes: tuple


def induced_strict_transformation(src_PS, tgt_PS, F, G, alpha, X, Y):
    """Check one naturality datum against the hom-groupoid actions.

    alpha maps each object A of the source to a component F(A) -> G(A).
    Pointwise naturality is verified first, then the square interchanging
    component whiskering with the two hom-groupoid actions, on every
    object and every arrow class of hom(X, Y).
    """
    C, D = src_PS.cat, tgt_PS.cat
    for m in list(C.morphisms()):
        A, B = C.dom(m), C.cod(m)
        if D.compose(G.mor(m), alpha[A]) != D.compose(alpha[B], F.mor(m)):
            raise NaturalityFailure(
                f"component square fails at morphism {m}")
    F_ext = extend_homotopical_functor(src_PS, tgt_PS, F, X, Y,
                                       check_all=False)
    G_ext = extend_homotopical_functor(src_PS, tgt_PS, G, X, Y,
                                       check_all=False)
    src_hg = hom_groupoid(src_PS, X, Y)
    F_hg = hom_groupoid(tgt_PS, F.obj(X), F.obj(Y))
    G_hg = hom_groupoid(tgt_PS, G.obj(X), G.obj(Y))
    object_rows = []
    for i, g in enumerate(src_hg.objects):
        left = D.compose(alpha[Y], F_hg.objects[F_ext.obj_map[i]])
        right = D.compose(G_hg.objects[G_ext.obj_map[i]], alpha[X])
        if left != right:
            raise NaturalityFailure(
                f"object square fails at map {g}: {left} != {right}")
        object_rows.append((g, left))
    class_rows = []
    for j in range(src_hg.n_classes()):
        left = whisker_left(tgt_PS, alpha[Y], HomClass(F_hg, F_ext.mor_map[j]))
        right = whisker_right(HomClass(G_hg, G_ext.mor_map[j]), alpha[X])
        if left.index != right.index:
            raise NaturalityFailure(
                f"class square fails at class {j}: "
                f"{left.index} != {right.index}")
        class_rows.append((j, left.index))
    return CommutationCertificate(tuple(object_rows), tuple(class_rows))


# ---------------------------------------------------------------------------
# independence of the path object choice


def compare_path_object_choices(PS, X, Y, po_alt):
    """Mutually inverse isomorphisms between the hom-groupoids built on
    the designated path object of Y and on an alternative one."""
    C = PS.cat
    hg1 = hom_groupoid(PS, X, Y)
    hg2 = hom_groupoid(PS, X, Y, po=po_alt)
    eg1, eg2 = hg1.eg, hg2.eg
    fwd = find_filler(PS, LiftingSquare(
        w=eg1.po.r, p=eg2.endpoints, h=eg2.po.r, k=eg1.endpoints))
    bwd = find_filler(PS, LiftingSquare(
        w=eg2.po.r, p=eg1.endpoints, h=eg1.po.r, k=eg2.endpoints))
    to_alt = GpdFunctor(
        hg1.gpd, hg2.gpd,
        tuple(hg2.obj_index[f] for f in hg1.objects),
        tuple(hg2.class_of[C.compose(fwd, r)] for r in hg1.reps))
    to_alt.check()
    from_alt = GpdFunctor(
        hg2.gpd, hg1.gpd,
        tuple(hg1.obj_index[f] for f in hg2.objects),
        tuple(hg1.class_of[C.compose(bwd, r)] for r in hg2.reps))
    from_alt.check()
    for j in range(hg1.n_classes()):
        if from_alt.mor_map[to_alt.mor_map[j]] != j:
            raise CongruenceFailure(
                "path object comparison is not invertible",
                witness=("forward", j))
    for j in range(hg2.n_classes()):
        if to_alt.mor_map[from_alt.mor_map[j]] != j:
            raise CongruenceFailure(
                "path object comparison is not invertible",
                witness=("backward", j))
    return to_alt, from_alt
