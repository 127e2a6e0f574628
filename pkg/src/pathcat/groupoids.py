"""Finite groupoids as dense tables, and constrained functor search.

Everything downstream reduces to one enumeration problem: list the functors
A -> B subject to post-composition constraints q . F = k.  A functor out of a
connected groupoid is determined by the image of a basepoint, a group
homomorphism on the vertex group, and an image for each spanning-tree edge;
the three kinds of slot are filtered independently by the constraints, so the
search never builds a candidate it must later discard for constraint reasons.
Enumeration order is canonical (components by least object, then basepoint
image, vertex-group images, tree-edge images, all ascending), which makes
every downstream "first found" choice reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import Budget, NotIsofibration, ResourceCap


class UnionFind:
    """Union-find over arbitrary hashable keys with deterministic groups."""

    def __init__(self, keys=()):
        self.parent = {k: k for k in keys}

    def add(self, k):
        self.parent.setdefault(k, k)

    def find(self, k):
        p = self.parent
        root = k
        while p[root] != root:
            root = p[root]
        while p[k] != root:
            p[k], k = root, p[k]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the smaller key as root so representatives are canonical
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra

    def groups(self):
        out = {}
        for k in self.parent:
            out.setdefault(self.find(k), []).append(k)
        return {root: sorted(members) for root, members in sorted(out.items())}


class Groupoid:
    """A finite groupoid with dense object ids 0..n-1 and morphism ids 0..m-1.

    comp maps (g, f) -> g . f exactly on pairs with tgt(f) == src(g).
    """

    def __init__(self, n_objects, src, tgt, comp, identity, inverse=None,
                 name=None, obj_labels=None, mor_labels=None):
        self.n_objects = n_objects
        self.src = tuple(src)
        self.tgt = tuple(tgt)
        self.comp = dict(comp)
        self.identity = tuple(identity)
        self.name = name or f"G{n_objects}"
        self.obj_labels = tuple(obj_labels) if obj_labels else None
        self.mor_labels = tuple(mor_labels) if mor_labels else None
        if inverse is None:
            inverse = self._find_inverses()
        self.inverse = tuple(inverse)
        self._hom = None
        self._components = None
        self._tree = None
        self._decomp = None
        self._by_src = None

    # -- basic structure ---------------------------------------------------

    @property
    def n_mors(self):
        return len(self.src)

    def objects(self):
        return range(self.n_objects)

    def mors(self):
        return range(self.n_mors)

    def compose(self, g, f):
        assert self.tgt[f] == self.src[g], (g, f)
        return self.comp[(g, f)]

    def inv(self, m):
        return self.inverse[m]

    def _find_inverses(self):
        inv = [None] * len(self.src)
        for m in range(len(self.src)):
            a, b = self.src[m], self.tgt[m]
            for n in range(len(self.src)):
                if self.src[n] == b and self.tgt[n] == a \
                        and self.comp[(n, m)] == self.identity[a] \
                        and self.comp[(m, n)] == self.identity[b]:
                    inv[m] = n
                    break
            if inv[m] is None:
                raise ValueError(f"morphism {m} of {self.name} has no inverse")
        return inv

    def hom(self, a, b):
        if self._hom is None:
            table = {}
            for m in range(self.n_mors):
                table.setdefault((self.src[m], self.tgt[m]), []).append(m)
            self._hom = {k: tuple(v) for k, v in table.items()}
        return self._hom.get((a, b), ())

    def mors_from(self, a):
        if self._by_src is None:
            table = {}
            for m in range(self.n_mors):
                table.setdefault(self.src[m], []).append(m)
            self._by_src = {k: tuple(v) for k, v in table.items()}
        return self._by_src.get(a, ())

    def check(self):
        """Assert all groupoid laws; used on constructed tables in tests."""
        for a in self.objects():
            i = self.identity[a]
            assert self.src[i] == self.tgt[i] == a
        for (g, f), v in self.comp.items():
            assert self.tgt[f] == self.src[g]
            assert self.src[v] == self.src[f] and self.tgt[v] == self.tgt[g]
        for f in self.mors():
            for g in self.mors():
                if self.tgt[f] == self.src[g]:
                    assert (g, f) in self.comp, (g, f)
            assert self.comp[(f, self.identity[self.src[f]])] == f
            assert self.comp[(self.identity[self.tgt[f]], f)] == f
            i = self.inverse[f]
            assert self.comp[(i, f)] == self.identity[self.src[f]]
            assert self.comp[(f, i)] == self.identity[self.tgt[f]]
        for (g, f) in self.comp:
            for h in self.mors():
                if self.src[h] == self.tgt[g]:
                    assert self.comp[(h, self.comp[(g, f)])] == \
                        self.comp[(self.comp[(h, g)], f)]
        return True

    # -- connectivity ------------------------------------------------------

    def components(self):
        """Connected components as sorted object lists, ordered by least object."""
        if self._components is None:
            uf = UnionFind(self.objects())
            for m in self.mors():
                uf.union(self.src[m], self.tgt[m])
            self._components = [tuple(v) for v in uf.groups().values()]
        return self._components

    def spanning_tree(self):
        """Per object, a chosen morphism basepoint -> object (identity at the basepoint)."""
        if self._tree is None:
            tree = {}
            for comp in self.components():
                b0 = comp[0]
                tree[b0] = self.identity[b0]
                frontier = [b0]
                seen = {b0}
                while frontier:
                    nxt = []
                    for a in frontier:
                        for m in sorted(self.mors_from(a)):
                            b = self.tgt[m]
                            if b not in seen:
                                seen.add(b)
                                tree[b] = self.compose(m, tree[a])
                                nxt.append(b)
                    nxt.sort()
                    frontier = nxt
            self._tree = tree
        return self._tree

    def loop_decompose(self, m):
        """m = e_tgt . loop . e_src^-1 with loop in the vertex group at the basepoint."""
        if self._decomp is None:
            tree = self.spanning_tree()
            decomp = []
            for x in self.mors():
                e_s, e_t = tree[self.src[x]], tree[self.tgt[x]]
                loop = self.compose(self.inv(e_t), self.compose(x, e_s))
                decomp.append(loop)
            self._decomp = tuple(decomp)
        return self._decomp[m]

    def normalized(self):
        """Relabel morphisms sorted by (src, tgt, old id); returns (gpd, mor_perm)."""
        order = sorted(self.mors(), key=lambda m: (self.src[m], self.tgt[m], m))
        perm = [0] * self.n_mors          # old id -> new id
        for new, old in enumerate(order):
            perm[old] = new
        comp = {(perm[g], perm[f]): perm[v] for (g, f), v in self.comp.items()}
        labels = None
        if self.mor_labels:
            labels = tuple(self.mor_labels[old] for old in order)
        g = Groupoid(self.n_objects,
                     [self.src[old] for old in order],
                     [self.tgt[old] for old in order],
                     comp,
                     [perm[i] for i in self.identity],
                     inverse=[perm[self.inverse[old]] for old in order],
                     name=self.name, obj_labels=self.obj_labels,
                     mor_labels=labels)
        return g, tuple(perm)

    def signature(self):
        """Exact table signature used for structural interning of objects."""
        return (self.n_objects, self.src, self.tgt, self.identity,
                tuple(sorted((g, f, v) for (g, f), v in self.comp.items())))

    def __repr__(self):
        return f"<Groupoid {self.name}: {self.n_objects} obj, {self.n_mors} mor>"


@dataclass(frozen=True)
class GpdFunctor:
    """A functor between finite groupoids as dense image tuples."""

    dom: Groupoid
    cod: Groupoid
    obj_map: tuple
    mor_map: tuple

    def obj(self, a):
        return self.obj_map[a]

    def mor(self, m):
        return self.mor_map[m]

    def check(self):
        for m in self.dom.mors():
            fm = self.mor_map[m]
            assert self.cod.src[fm] == self.obj_map[self.dom.src[m]]
            assert self.cod.tgt[fm] == self.obj_map[self.dom.tgt[m]]
        for a in self.dom.objects():
            assert self.mor_map[self.dom.identity[a]] == \
                self.cod.identity[self.obj_map[a]]
        for (g, f), v in self.dom.comp.items():
            assert self.cod.compose(self.mor_map[g], self.mor_map[f]) == \
                self.mor_map[v]
        return True

    def is_identity(self):
        return (self.dom is self.cod
                and self.obj_map == tuple(self.dom.objects())
                and self.mor_map == tuple(self.dom.mors()))


def identity_functor(G):
    return GpdFunctor(G, G, tuple(G.objects()), tuple(G.mors()))


def constant_functor(A, B, b):
    return GpdFunctor(A, B, tuple(b for _ in A.objects()),
                      tuple(B.identity[b] for _ in A.mors()))


def compose_functors(g, f):
    """g after f."""
    assert f.cod is g.dom, (f.cod, g.dom)
    return GpdFunctor(f.dom, g.cod,
                      tuple(g.obj_map[x] for x in f.obj_map),
                      tuple(g.mor_map[x] for x in f.mor_map))


# -- basic constructions ---------------------------------------------------

def discrete(n, name=None):
    return Groupoid(n, range(n), range(n),
                    {(i, i): i for i in range(n)}, range(n),
                    inverse=range(n), name=name or f"discrete({n})")


def indiscrete(n, name=None):
    """Exactly one morphism between every ordered pair of objects."""
    idx = lambda a, b: a * n + b
    src = [a for a in range(n) for _ in range(n)]
    tgt = [b for _ in range(n) for b in range(n)]
    comp = {}
    for a in range(n):
        for b in range(n):
            for c in range(n):
                comp[(idx(b, c), idx(a, b))] = idx(a, c)
    return Groupoid(n, src, tgt, comp, [idx(a, a) for a in range(n)],
                    inverse=[b * n + a for a in range(n) for b in range(n)],
                    name=name or f"indiscrete({n})")


def cyclic_group(n, name=None):
    """One object with Z/n worth of loops; loop k composed with j is k+j mod n."""
    comp = {(k, j): (k + j) % n for k in range(n) for j in range(n)}
    return Groupoid(1, [0] * n, [0] * n, comp, [0],
                    inverse=[(-k) % n for k in range(n)],
                    name=name or f"cyclic({n})")


def disjoint_union(A, B, name=None):
    src = list(A.src) + [B.src[m] + A.n_objects for m in B.mors()]
    tgt = list(A.tgt) + [B.tgt[m] + A.n_objects for m in B.mors()]
    comp = dict(A.comp)
    for (g, f), v in B.comp.items():
        comp[(g + A.n_mors, f + A.n_mors)] = v + A.n_mors
    ident = list(A.identity) + [i + A.n_mors for i in B.identity]
    inv = list(A.inverse) + [i + A.n_mors for i in B.inverse]
    G = Groupoid(A.n_objects + B.n_objects, src, tgt, comp, ident, inverse=inv,
                 name=name or f"({A.name}+{B.name})")
    inl = GpdFunctor(A, G, tuple(A.objects()), tuple(A.mors()))
    inr = GpdFunctor(B, G, tuple(a + A.n_objects for a in B.objects()),
                     tuple(m + A.n_mors for m in B.mors()))
    return G, inl, inr


@dataclass(frozen=True)
class SpanData:
    """A product or pullback groupoid with its projections and pair indexing."""

    gpd: Groupoid
    proj1: GpdFunctor
    proj2: GpdFunctor
    obj_pairs: tuple
    mor_pairs: tuple
    obj_index: dict = field(hash=False)
    mor_index: dict = field(hash=False)

    def pair_obj(self, a, b):
        return self.obj_index[(a, b)]

    def pair_mor(self, m, n):
        return self.mor_index[(m, n)]

    def mediate(self, u, v):
        """The unique functor T -> span with proj1 . it = u and proj2 . it = v."""
        assert u.dom is v.dom
        return GpdFunctor(
            u.dom, self.gpd,
            tuple(self.obj_index[(u.obj_map[a], v.obj_map[a])]
                  for a in u.dom.objects()),
            tuple(self.mor_index[(u.mor_map[m], v.mor_map[m])]
                  for m in u.dom.mors()))


_SPAN_COMP_CEILING = 2_000_000


def _span(A, B, obj_pairs, mor_pairs, name, budget=None):
    obj_index = {p: i for i, p in enumerate(obj_pairs)}
    mor_index = {p: i for i, p in enumerate(mor_pairs)}
    src = [obj_index[(A.src[m], B.src[n])] for m, n in mor_pairs]
    tgt = [obj_index[(A.tgt[m], B.tgt[n])] for m, n in mor_pairs]
    by_tgt = {}
    for j, t in enumerate(tgt):
        by_tgt.setdefault(t, []).append(j)
    # the table size is known before any entry is built; refuse to
    # materialize one that would not fit in memory
    est = sum(len(by_tgt.get(s, ())) for s in src)
    if est > _SPAN_COMP_CEILING:
        raise ResourceCap(
            f"composition table for {name} needs {est} entries "
            f"(ceiling {_SPAN_COMP_CEILING})")
    comp = {}
    for i, (g1, g2) in enumerate(mor_pairs):
        for j in by_tgt.get(src[i], ()):
            f1, f2 = mor_pairs[j]
            comp[(i, j)] = mor_index[(A.compose(g1, f1), B.compose(g2, f2))]
    ident = [mor_index[(A.identity[a], B.identity[b])] for a, b in obj_pairs]
    inv = [mor_index[(A.inverse[m], B.inverse[n])] for m, n in mor_pairs]
    G = Groupoid(len(obj_pairs), src, tgt, comp, ident, inverse=inv, name=name)
    p1 = GpdFunctor(G, A, tuple(a for a, _ in obj_pairs),
                    tuple(m for m, _ in mor_pairs))
    p2 = GpdFunctor(G, B, tuple(b for _, b in obj_pairs),
                    tuple(n for _, n in mor_pairs))
    return SpanData(G, p1, p2, tuple(obj_pairs), tuple(mor_pairs),
                    obj_index, mor_index)


def product(A, B, budget=None):
    if budget is not None:
        budget.scope().spend(A.n_mors * B.n_mors)
    obj_pairs = [(a, b) for a in A.objects() for b in B.objects()]
    mor_pairs = [(m, n) for m in A.mors() for n in B.mors()]
    return _span(A, B, obj_pairs, mor_pairs, f"({A.name}x{B.name})",
                 budget=budget)


def pullback(F, G, budget=None):
    """Strict pullback of F: A -> C against G: B -> C."""
    assert F.cod is G.cod
    A, B = F.dom, G.dom
    objs_over = {}
    for b in B.objects():
        objs_over.setdefault(G.obj_map[b], []).append(b)
    mors_over = {}
    for n in B.mors():
        mors_over.setdefault(G.mor_map[n], []).append(n)
    if budget is not None:
        budget.scope().spend(sum(
            len(mors_over.get(F.mor_map[m], ())) for m in A.mors()))
    obj_pairs = [(a, b) for a in A.objects()
                 for b in objs_over.get(F.obj_map[a], ())]
    mor_pairs = [(m, n) for m in A.mors()
                 for n in mors_over.get(F.mor_map[m], ())]
    return _span(A, B, obj_pairs, mor_pairs,
                 f"({A.name}x[{F.cod.name}]{B.name})", budget=budget)


def subgroupoid(G, objs, mors, name=None):
    """The subgroupoid on the given closed object/morphism id sets."""
    objs = sorted(objs)
    mors = sorted(set(mors) | {G.identity[a] for a in objs})
    obj_index = {a: i for i, a in enumerate(objs)}
    mor_index = {m: i for i, m in enumerate(mors)}
    comp = {}
    for g in mors:
        for f in mors:
            if G.tgt[f] == G.src[g]:
                v = G.compose(g, f)
                assert v in mor_index, "morphism set not closed under composition"
                comp[(mor_index[g], mor_index[f])] = mor_index[v]
    S = Groupoid(len(objs),
                 [obj_index[G.src[m]] for m in mors],
                 [obj_index[G.tgt[m]] for m in mors],
                 comp,
                 [mor_index[G.identity[a]] for a in objs],
                 inverse=[mor_index[G.inverse[m]] for m in mors],
                 name=name or f"{G.name}|sub")
    incl = GpdFunctor(S, G, tuple(objs), tuple(mors))
    return S, incl


# -- path objects ----------------------------------------------------------

@dataclass(frozen=True)
class PathGpdData:
    """The vertical path groupoid of u: B -> C with its structure functors.

    Object i is the u-vertical morphism base_mors[i] of B; the arrow
    (m, m2, phi) is the commuting square with left edge phi and right edge
    m2 . phi . m^-1.  r picks constant paths, s and t the two endpoints.
    """

    gpd: Groupoid
    r: GpdFunctor
    s: GpdFunctor
    t: GpdFunctor
    base_mors: tuple
    arrows: tuple

    def obj_of_vertical(self, m):
        return self.base_mors.index(m)


def vertical_path_groupoid(u):
    """Path object of u: B -> C inside the slice over C (all of B when C = 1)."""
    B = u.dom
    C = u.cod
    vertical = [m for m in B.mors()
                if u.mor_map[m] == C.identity[C.src[u.mor_map[m]]]]
    obj_index = {m: i for i, m in enumerate(vertical)}
    arrows = []
    for m in vertical:
        for m2 in vertical:
            for phi in B.hom(B.src[m], B.src[m2]):
                arrows.append((m, m2, phi))
    arrow_index = {a: i for i, a in enumerate(arrows)}
    src = [obj_index[m] for m, _, _ in arrows]
    tgt = [obj_index[m2] for _, m2, _ in arrows]
    comp = {}
    for i, (m_b, m_c, phi2) in enumerate(arrows):
        for j, (m_a, m_bb, phi1) in enumerate(arrows):
            if m_bb == m_b:
                comp[(i, j)] = arrow_index[(m_a, m_c, B.compose(phi2, phi1))]
    ident = [arrow_index[(m, m, B.identity[B.src[m]])] for m in vertical]
    inv = [arrow_index[(m2, m, B.inverse[phi])] for m, m2, phi in arrows]
    P = Groupoid(len(vertical), src, tgt, comp, ident, inverse=inv,
                 name=f"P[{u.cod.name}]({B.name})")
    r = GpdFunctor(B, P,
                   tuple(obj_index[B.identity[b]] for b in B.objects()),
                   tuple(arrow_index[(B.identity[B.src[f]],
                                      B.identity[B.tgt[f]], f)]
                         for f in B.mors()))
    s = GpdFunctor(P, B, tuple(B.src[m] for m in vertical),
                   tuple(phi for _, _, phi in arrows))
    t = GpdFunctor(P, B, tuple(B.tgt[m] for m in vertical),
                   tuple(B.compose(m2, B.compose(phi, B.inverse[m]))
                         for m, m2, phi in arrows))
    return PathGpdData(P, r, s, t, tuple(vertical), tuple(arrows))


# -- functor enumeration ---------------------------------------------------

def _generators(G, b0, loops):
    idm = G.identity[b0]
    gens = []
    closure = {idm}
    for g in loops:
        if g not in closure:
            gens.append(g)
            frontier = list(closure | {g})
            closure = set(frontier)
            grew = True
            while grew:
                grew = False
                for x in list(closure):
                    for y in (gens + [idm]):
                        z = G.compose(x, y)
                        if z not in closure:
                            closure.add(z)
                            grew = True
    return gens


def _group_homs(A, b0, B, o, post, bud):
    """Vertex-group homomorphisms hom(b0,b0) -> hom(o,o) satisfying post."""
    loops = A.hom(b0, b0)
    targets = B.hom(o, o)
    id_a, id_b = A.identity[b0], B.identity[o]
    gens = _generators(A, b0, loops)
    if not gens:
        phi = {id_a: id_b}
        if all(q.mor_map[id_b] == k.mor_map[id_a] for q, k in post):
            yield phi
        return

    def close(mapping):
        known = dict(mapping)
        known[id_a] = id_b
        frontier = list(known)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = A.compose(x, g)
                    img = B.compose(known[x], mapping[g])
                    if y in known:
                        if known[y] != img:
                            return None
                    else:
                        known[y] = img
                        nxt.append(y)
            frontier = nxt
        if len(known) != len(loops):
            return None
        return known

    def extend(i, mapping):
        if i == len(gens):
            full = close(mapping)
            if full is None:
                return
            bud.spend()
            for x in loops:
                for y in loops:
                    if full[A.compose(x, y)] != B.compose(full[x], full[y]):
                        return
            if all(q.mor_map[full[g]] == k.mor_map[g] for q, k in post
                   for g in loops):
                yield dict(full)
            return
        g = gens[i]
        for h in targets:
            bud.spend()
            ok = True
            for q, k in post:
                if q.mor_map[h] != k.mor_map[g]:
                    ok = False
                    break
            if ok:
                mapping[g] = h
                yield from extend(i + 1, mapping)
                del mapping[g]

    yield from extend(0, {})


def enumerate_functors(A, B, post=(), budget=None):
    """All functors F: A -> B with q . F = k for every (q, k) in post.

    post entries are pairs of functors q: B -> C, k: A -> C.  Yields in
    canonical order; every yielded functor satisfies all constraints and
    every functor satisfying them is yielded.
    """
    bud = budget.scope() if budget is not None else Budget()
    for q, k in post:
        assert q.dom is B and k.dom is A and q.cod is k.cod
    tree = A.spanning_tree()
    # constraints pin candidate images, so index the constraint functors
    # once and intersect preimages instead of scanning all of B per slot
    rev_obj, rev_mor = [], []
    for q, _ in post:
        ro, rm = {}, {}
        for o, v in enumerate(q.obj_map):
            ro.setdefault(v, set()).add(o)
        for x, v in enumerate(q.mor_map):
            rm.setdefault(v, set()).add(x)
        rev_obj.append(ro)
        rev_mor.append(rm)

    def obj_candidates(a):
        cands = None
        for i, (_, k) in enumerate(post):
            s = rev_obj[i].get(k.obj_map[a], set())
            cands = s if cands is None else cands & s
        return sorted(cands) if cands is not None else B.objects()

    def edge_candidates(e_a, o):
        cands = None
        for i, (_, k) in enumerate(post):
            s = rev_mor[i].get(k.mor_map[e_a], set())
            cands = s if cands is None else cands & s
        if cands is None:
            return B.mors_from(o)
        return sorted(x for x in cands if B.src[x] == o)

    comp_list = A.components()
    base_of = {a: comp[0] for comp in comp_list for a in comp}
    n_mor = A.n_mors

    # depth-first over components, then over slot assignments within one,
    # so the candidate count never materializes anywhere
    def fill(idx, obj_map, edge_img, phi_of):
        if idx == len(comp_list):
            mor_map = [None] * n_mor
            for m in range(n_mor):
                sa, ta = A.src[m], A.tgt[m]
                phi = phi_of[base_of[sa]]
                loop_img = phi[A.loop_decompose(m)]
                mor_map[m] = B.compose(
                    edge_img[ta], B.compose(loop_img, B.inverse[edge_img[sa]]))
            yield GpdFunctor(A, B, tuple(obj_map), tuple(mor_map))
            return
        comp = comp_list[idx]
        b0 = comp[0]
        rest = comp[1:]
        for o in obj_candidates(b0):
            bud.spend()
            for phi in _group_homs(A, b0, B, o, post, bud):
                slot_lists = []
                dead = False
                for a in rest:
                    cands = edge_candidates(tree[a], o)
                    bud.spend(max(len(cands), 1))
                    if not cands:
                        dead = True
                        break
                    slot_lists.append(cands)
                if dead:
                    continue
                obj_map[b0] = o
                edge_img[b0] = B.identity[o]
                phi_of[b0] = phi
                for edges in itertools.product(*slot_lists):
                    bud.spend()
                    for a, x in zip(rest, edges):
                        obj_map[a] = B.tgt[x]
                        edge_img[a] = x
                    yield from fill(idx + 1, obj_map, edge_img, phi_of)

    yield from fill(0, [None] * A.n_objects, {}, {})


def natural_transformations(F, G):
    """All natural transformations F => G as component tuples, canonical order."""
    assert F.dom is G.dom and F.cod is G.cod
    A, B = F.dom, F.cod
    tree = A.spanning_tree()
    per_comp = []
    for comp in A.components():
        b0 = comp[0]
        cands = []
        for a0 in B.hom(F.obj_map[b0], G.obj_map[b0]):
            if all(B.compose(G.mor_map[g], a0) == B.compose(a0, F.mor_map[g])
                   for g in A.hom(b0, b0)):
                cands.append(a0)
        if not cands:
            return []
        per_comp.append((comp, cands))
    out = []
    for combo in itertools.product(*(c for _, c in per_comp)):
        comps = [None] * A.n_objects
        for (comp, _), a0 in zip(per_comp, combo):
            for a in comp:
                e = tree[a]
                comps[a] = B.compose(G.mor_map[e],
                                     B.compose(a0, B.inverse[F.mor_map[e]]))
        out.append(tuple(comps))
    return out


# -- functor groupoid and dependent product --------------------------------

@dataclass(frozen=True)
class FunGpdData:
    """The groupoid of functors A -> B and natural transformations."""

    gpd: Groupoid
    A: Groupoid
    B: Groupoid
    functors: tuple
    transformations: tuple     # (src functor index, tgt functor index, components)

    def eval_obj(self, fi, a):
        return self.functors[fi].obj_map[a]

    def eval_mor(self, ti, m):
        """epsilon on the morphism (alpha, m): composes alpha_tgt after F(m)."""
        i, _, comps = self.transformations[ti]
        F = self.functors[i]
        return self.B.compose(comps[self.A.tgt[m]], F.mor_map[m])


def functor_groupoid(A, B, budget=None, cap=None):
    bud = budget.scope() if budget is not None else Budget()
    functors = []
    for F in enumerate_functors(A, B, budget=bud):
        functors.append(F)
        if cap is not None and len(functors) > cap:
            raise ResourceCap(
                f"functor groupoid {B.name}^{A.name} exceeds {cap} objects")
    trans = []
    for i, F in enumerate(functors):
        for j, G in enumerate(functors):
            for comps in natural_transformations(F, G):
                trans.append((i, j, comps))
    index = {t: k for k, t in enumerate(trans)}
    src = [i for i, _, _ in trans]
    tgt = [j for _, j, _ in trans]
    comp = {}
    for x, (i2, j2, c2) in enumerate(trans):
        for y, (i1, j1, c1) in enumerate(trans):
            if j1 == i2:
                c = tuple(B.compose(c2[a], c1[a]) for a in A.objects())
                comp[(x, y)] = index[(i1, j2, c)]
    ident = [index[(i, i, tuple(B.identity[F.obj_map[a]] for a in A.objects()))]
             for i, F in enumerate(functors)]
    inv = [index[(j, i, tuple(B.inverse[c] for c in comps))]
           for i, j, comps in trans]
    G = Groupoid(len(functors), src, tgt, comp, ident, inverse=inv,
                 name=f"{B.name}^{A.name}")
    return FunGpdData(G, A, B, tuple(functors), tuple(trans))


@dataclass(frozen=True)
class PiGpdData:
    """Sections of q: Q -> A along u: A -> B, as a groupoid over B.

    Object: (b, section of q over the strict fiber of u at b).  Morphism over
    w: b -> b2: a coherent family eta assigning to every m of A over w a lift
    eta[m] of m through q.  proj sends both to their B-part.
    """

    gpd: Groupoid
    proj: GpdFunctor
    u: GpdFunctor
    q: GpdFunctor
    objects: tuple             # (b, section GpdFunctor, fiber key)
    morphisms: tuple           # (w, src index, tgt index, eta dict)
    fibers: dict = field(hash=False)   # b -> (gpd, incl, obj ids, mor ids)

    def eval_obj(self, pi, a):
        b, section, _ = self.objects[pi]
        fiber, _, objs, _ = self.fibers[b]
        return section.obj_map[objs.index(a)]

    def eval_mor(self, ti, m):
        return self.morphisms[ti][3][m]


def pi_groupoid(u, q, budget=None, cap=None):
    """Dependent product of q: Q -> A along u: A -> B (u must lift morphisms).

    Objects over b are sections of q on the strict fiber of u at b.  A
    morphism over w: b -> b2 is determined by one lift per orbit of the
    morphisms of A over w under pre/post composition with verticals, subject
    to a stabilizer condition that makes the expanded family well defined.
    Composition factors arrows through chosen lifts of u, so u is required
    to lift every morphism of B at every source object lying over it;
    product and pullback projections along isofibrations qualify.
    """
    assert q.cod is u.dom
    bud = budget.scope() if budget is not None else Budget()
    A, B, Q = u.dom, u.cod, q.dom

    fibers = {}
    for b in B.objects():
        objs = [a for a in A.objects() if u.obj_map[a] == b]
        mors = [m for m in A.mors() if u.mor_map[m] == B.identity[b]]
        fibers[b] = subgroupoid(A, objs, mors, name=f"{A.name}|{b}") + (objs, mors)

    mors_over = {}
    for m in A.mors():
        mors_over.setdefault(u.mor_map[m], []).append(m)

    lift = {}
    for w in B.mors():
        if w == B.identity[B.src[w]]:
            continue
        for a in fibers[B.src[w]][2]:
            found = None
            for m in A.mors_from(a):
                if u.mor_map[m] == w:
                    found = m
                    break
            if found is None:
                raise NotIsofibration(
                    f"no lift of base morphism {w} at object {a}")
            lift[(w, a)] = found

    objects = []
    for b in B.objects():
        fiber, incl, _, _ = fibers[b]
        for section in enumerate_functors(fiber, Q, post=[(q, incl)],
                                          budget=bud):
            objects.append((b, section, b))
        if cap is not None and len(objects) > cap:
            raise ResourceCap(f"dependent product exceeds {cap} objects")

    sections = []
    for b, section, _ in objects:
        _, _, objs, mors = fibers[b]
        loc_o = {a: k for k, a in enumerate(objs)}
        loc_m = {m: k for k, m in enumerate(mors)}
        sections.append(({a: section.obj_map[k] for a, k in loc_o.items()},
                         {m: section.mor_map[k] for m, k in loc_m.items()}))

    morphisms = []
    for w in B.mors():
        b, b2 = B.src[w], B.tgt[w]
        over = sorted(mors_over.get(w, []))
        vert_src = fibers[b][3]
        vert_tgt = fibers[b2][3]
        # orbit decomposition with witnesses m == v_post . rep . v_pre
        witness = {}
        reps = []
        for m0 in over:
            if m0 in witness:
                continue
            reps.append(m0)
            witness[m0] = (m0, A.identity[A.src[m0]], A.identity[A.tgt[m0]])
            frontier = [m0]
            while frontier:
                nxt = []
                for x in frontier:
                    _, v_pre, v_post = witness[x]
                    for v in vert_src:
                        if A.tgt[v] == A.src[x] and A.compose(x, v) not in witness:
                            y = A.compose(x, v)
                            witness[y] = (m0, A.compose(v_pre, v), v_post)
                            nxt.append(y)
                    for v2 in vert_tgt:
                        if A.src[v2] == A.tgt[x] and A.compose(v2, x) not in witness:
                            y = A.compose(v2, x)
                            witness[y] = (m0, v_pre, A.compose(v2, v_post))
                            nxt.append(y)
                frontier = nxt

        for i, (bi, _, _) in enumerate(objects):
            if bi != b:
                continue
            s_obj, s_mor = sections[i]
            for j, (bj, _, _) in enumerate(objects):
                if bj != b2:
                    continue
                s2_obj, s2_mor = sections[j]
                rep_choices = []
                dead = False
                for rep in reps:
                    # stabilizer pairs are (v, rep . v^-1 . rep^-1) for
                    # vertical loops v at the source of rep
                    loops = [v for v in vert_src
                             if A.src[v] == A.src[rep] == A.tgt[v]]
                    cands = []
                    for n in Q.mors():
                        bud.spend()
                        if q.mor_map[n] != rep:
                            continue
                        if Q.src[n] != s_obj[A.src[rep]]:
                            continue
                        if Q.tgt[n] != s2_obj[A.tgt[rep]]:
                            continue
                        ok = True
                        for v in loops:
                            v2 = A.compose(A.compose(rep, A.inverse[v]),
                                           A.inverse[rep])
                            if Q.compose(s2_mor[v2],
                                         Q.compose(n, s_mor[v])) != n:
                                ok = False
                                break
                        if ok:
                            cands.append(n)
                    if not cands:
                        dead = True
                        break
                    rep_choices.append(cands)
                if dead:
                    continue
                for picks in itertools.product(*rep_choices):
                    eta0 = dict(zip(reps, picks))
                    eta = {}
                    for m in over:
                        rep, v_pre, v_post = witness[m]
                        eta[m] = Q.compose(
                            s2_mor[v_post],
                            Q.compose(eta0[rep], s_mor[v_pre]))
                    morphisms.append((w, i, j, eta))

    mor_index = {}
    for k, (w, i, j, eta) in enumerate(morphisms):
        mor_index[(w, i, j, tuple(sorted(eta.items())))] = k

    src = [i for _, i, _, _ in morphisms]
    tgt = [j for _, _, j, _ in morphisms]
    comp = {}
    for x, (w2, i2, j2, eta2) in enumerate(morphisms):
        for y, (w1, i1, j1, eta1) in enumerate(morphisms):
            if j1 != i2:
                continue
            w = B.compose(w2, w1)
            eta = {}
            for m in mors_over.get(w, []):
                if w1 == B.identity[B.src[w1]]:
                    m1 = A.identity[A.src[m]]
                else:
                    m1 = lift[(w1, A.src[m])]
                m2 = A.compose(m, A.inverse[m1])
                eta[m] = Q.compose(eta2[m2], eta1[m1])
            comp[(x, y)] = mor_index[(w, i1, j2, tuple(sorted(eta.items())))]
    ident = []
    for i, (b, section, _) in enumerate(objects):
        _, s_mor = sections[i]
        eta = {m: s_mor[m] for m in mors_over.get(B.identity[b], [])}
        ident.append(mor_index[(B.identity[b], i, i, tuple(sorted(eta.items())))])
    inv = []
    for w, i, j, eta in morphisms:
        eta_inv = {A.inverse[m]: Q.inverse[n] for m, n in eta.items()}
        inv.append(mor_index[(B.inverse[w], j, i,
                              tuple(sorted(eta_inv.items())))])
    P = Groupoid(len(objects), src, tgt, comp, ident, inverse=inv,
                 name=f"Pi[{u.dom.name}->{u.cod.name}]({Q.name})")
    proj = GpdFunctor(P, B, tuple(b for b, _, _ in objects),
                      tuple(w for w, _, _, _ in morphisms))
    return PiGpdData(P, proj, u, q, tuple(objects), tuple(morphisms), fibers)


# -- decision helpers --------------------------------------------------------

def iso_classes(G):
    """Union-find of objects under isomorphism; returns {root: sorted members}."""
    uf = UnionFind(G.objects())
    for m in G.mors():
        uf.union(G.src[m], G.tgt[m])
    return uf.groups()


def is_isofibration(F):
    """Every iso of the codomain starting at an image object lifts on the nose."""
    by_obj = {}
    for m in F.dom.mors():
        by_obj.setdefault(F.dom.src[m], set()).add(F.mor_map[m])
    for a in F.dom.objects():
        have = by_obj.get(a, set())
        for w in F.cod.mors_from(F.obj_map[a]):
            if w not in have:
                return False
    return True


def is_equivalence(F):
    classes = iso_classes(F.cod)
    root_of = {c: root for root, cls in classes.items() for c in cls}
    hit = {root_of[F.obj_map[a]] for a in F.dom.objects()}
    if set(classes) - hit:
        return False
    for a in F.dom.objects():
        for b in F.dom.objects():
            dom_hom = F.dom.hom(a, b)
            images = [F.mor_map[m] for m in dom_hom]
            if len(set(images)) != len(images):
                return False
            if set(images) != set(F.cod.hom(F.obj_map[a], F.obj_map[b])):
                return False
    return True


def groupoid_iso_search(A, B, budget=None):
    """An isomorphism (F, F_inverse) between groupoids, or None."""
    if A.n_objects != B.n_objects or A.n_mors != B.n_mors:
        return None

    def profile(G):
        return sorted(sorted(len(G.hom(a, b)) for b in G.objects())
                      for a in G.objects())

    if profile(A) != profile(B):
        return None
    bud = budget.scope() if budget is not None else Budget()
    for F in enumerate_functors(A, B, budget=bud):
        if len(set(F.obj_map)) == A.n_objects and \
                len(set(F.mor_map)) == A.n_mors:
            obj_inv = [0] * B.n_objects
            for a, b in enumerate(F.obj_map):
                obj_inv[b] = a
            mor_inv = [0] * B.n_mors
            for m, n in enumerate(F.mor_map):
                mor_inv[n] = m
            return F, GpdFunctor(B, A, tuple(obj_inv), tuple(mor_inv))
    return None
