"""Built-in model families: finite sets (discrete groupoids) and finite
groupoids, both served by one computed provider.

The provider state is a fragment: the groupoid objects interned so far
(deduplicated by exact normalized table signature) and the functors interned
so far (dense morphism ids).  The category interface answers from the
fragment; constrained searches go through the enumeration kernel and intern
what they find, capped per search.  Pullbacks, functor groupoids, and path
objects are constructed on demand and memoized.  Markings are decided, not
stored: fibrations are isofibrations (every map in the discrete flavor) and
weak equivalences are equivalences of groupoids.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

from . import groupoids as gpd
from .errors import (Budget, MissingPiType, MissingSlicePathObject,
                     NotComposable, NotIsofibration, ParseError, ResourceCap,
                     SchemaError)
from .fincat import FinCategory, category_to_doc, table_category_from_doc
from .pathstruct import PathObjectData, PathStructure

DEFAULT_OBJ_CAP = 50
DEFAULT_HOM_CAP = 200
SEED_OBJ_CAP = 4


def builtin_seed(name):
    if name == "terminal":
        return gpd.discrete(1, name="1")
    if name == "interval":
        return gpd.indiscrete(2, name="I")
    if name == "bz2":
        return gpd.cyclic_group(2, name="B2")
    if name == "indiscrete3":
        return gpd.indiscrete(3, name="J3")
    raise SchemaError(f"unknown seed name: {name}")


class ComputedCategory(FinCategory):
    """Fragment of the category of finite groupoids, grown by interning."""

    provider_kind = "computed"

    def __init__(self, name="Gpd", obj_cap=DEFAULT_OBJ_CAP,
                 hom_cap=DEFAULT_HOM_CAP, budget=None):
        self.name = name
        self.obj_cap = obj_cap
        self.hom_cap = hom_cap
        self.budget = budget if budget is not None else Budget()
        self._gpds = []              # canonical groupoid per object id
        self._sig_to_obj = {}
        self._perms = {}             # id(raw groupoid) -> (obj id, mor perm, ref)
        self._mors = []              # canonical functor per morphism id
        self._mor_index = {}
        self._hom_fragment = {}
        self._identities = {}
        self._pullback_memo = {}

    # -- interning ----------------------------------------------------------

    def intern_object(self, G):
        key = id(G)
        if key in self._perms:
            return self._perms[key][0]
        normal, perm = G.normalized()
        sig = normal.signature()
        if sig in self._sig_to_obj:
            obj = self._sig_to_obj[sig]
        else:
            if len(self._gpds) >= self.obj_cap:
                raise ResourceCap(
                    f"{self.name} exceeds {self.obj_cap} generated objects")
            obj = len(self._gpds)
            self._gpds.append(normal)
            self._sig_to_obj[sig] = obj
            ident = gpd.identity_functor(normal)
            self._identities[obj] = self._intern_canonical(obj, obj, ident)
        self._perms[key] = (obj, perm, G)
        return obj

    def _translate(self, F):
        """Re-express a functor between raw groupoids on canonical objects."""
        dom_obj, dperm, _ = self._perms[id(F.dom)]
        cod_obj, cperm, _ = self._perms[id(F.cod)]
        dom_c, cod_c = self._gpds[dom_obj], self._gpds[cod_obj]
        mor_map = [0] * len(F.mor_map)
        for m_raw, img in enumerate(F.mor_map):
            mor_map[dperm[m_raw]] = cperm[img]
        return dom_obj, cod_obj, gpd.GpdFunctor(dom_c, cod_c, F.obj_map,
                                                tuple(mor_map))

    def _intern_canonical(self, dom_obj, cod_obj, F):
        key = (dom_obj, cod_obj, F.obj_map, F.mor_map)
        if key in self._mor_index:
            return self._mor_index[key]
        mid = len(self._mors)
        self._mors.append((dom_obj, cod_obj, F))
        self._mor_index[key] = mid
        self._hom_fragment.setdefault((dom_obj, cod_obj), []).append(mid)
        return mid

    def intern_functor(self, F):
        self.intern_object(F.dom)
        self.intern_object(F.cod)
        dom_obj, cod_obj, Fc = self._translate(F)
        return self._intern_canonical(dom_obj, cod_obj, Fc)

    def gpd_of(self, obj):
        return self._gpds[obj]

    def functor_of(self, m):
        return self._mors[m][2]

    # -- category interface ---------------------------------------------------

    def objects(self):
        return range(len(self._gpds))

    def morphisms(self):
        return range(len(self._mors))

    def dom(self, m):
        return self._mors[m][0]

    def cod(self, m):
        return self._mors[m][1]

    def identity(self, a):
        return self._identities[a]

    def compose(self, g, f):
        if self.cod(f) != self.dom(g):
            raise NotComposable(f"cod({f}) != dom({g})")
        composite = gpd.compose_functors(self.functor_of(g), self.functor_of(f))
        return self._intern_canonical(self.dom(f), self.cod(g), composite)

    def perm_of(self, G):
        """Raw-to-canonical morphism permutation for an interned raw groupoid."""
        return self._perms[id(G)][1]

    def hom(self, a, b):
        return tuple(sorted(self._hom_fragment.get((a, b), ())))

    def search_maps(self, src, tgt, post=(), budget=None, cap=None):
        """Complete constrained enumeration; results are interned fragment ids."""
        cap = self.hom_cap if cap is None else cap
        out = []
        for m in self.iter_maps(src, tgt, post=post, budget=budget):
            out.append(m)
            if len(out) > cap:
                raise ResourceCap(
                    f"hom-search ({src} -> {tgt}) exceeds {cap} morphisms")
        return sorted(out)

    def iter_maps(self, src, tgt, post=(), budget=None):
        """Uncapped lazy variant of search_maps, for early-exit existence checks."""
        bud = budget if budget is not None else self.budget
        post_functors = [(self.functor_of(q), self.functor_of(k))
                         for q, k in post]
        for F in gpd.enumerate_functors(self._gpds[src], self._gpds[tgt],
                                        post=post_functors, budget=bud):
            yield self._intern_canonical(src, tgt, F)

    def is_iso(self, m):
        """A functor between groupoids is iso iff bijective on cells."""
        F = self.functor_of(m)
        return len(set(F.obj_map)) == F.cod.n_objects == len(F.obj_map) \
            and len(set(F.mor_map)) == F.cod.n_mors == len(F.mor_map)

    def count_maps(self, src, tgt, post=(), limit=2, budget=None):
        """Count matches without interning them into the fragment."""
        bud = budget if budget is not None else self.budget
        post_functors = [(self.functor_of(q), self.functor_of(k))
                         for q, k in post]
        n = 0
        for _ in gpd.enumerate_functors(self._gpds[src], self._gpds[tgt],
                                        post=post_functors, budget=bud):
            n += 1
            if n >= limit:
                break
        return n

    def designated_pullback(self, f, g):
        key = (f, g)
        if key not in self._pullback_memo:
            span = gpd.pullback(self.functor_of(f), self.functor_of(g),
                                budget=self.budget)
            apex = self.intern_object(span.gpd)
            p1 = self.intern_functor(span.proj1)
            p2 = self.intern_functor(span.proj2)
            self._pullback_memo[key] = (apex, p1, p2, span)
        apex, p1, p2, _ = self._pullback_memo[key]
        return apex, p1, p2

    def span_of_pullback(self, f, g):
        self.designated_pullback(f, g)
        return self._pullback_memo[(f, g)][3]


class ComputedPathStructure(PathStructure):
    """Path structure on the computed provider; markings are decided.

    flavor "gpd": fibrations are isofibrations, path objects are functor
    groupoids out of the interval.  flavor "discrete": every map is a
    fibration and each object is its own path object.
    """

    def __init__(self, cat, flavor, terminal, interval_obj=None, budget=None,
                 name=None):
        super().__init__(cat, fibrations=(), weak_equivalences=(),
                         terminal=terminal, weak=False, budget=budget,
                         name=name)
        self.flavor = flavor
        self.interval_obj = interval_obj
        self._fib_cache = {}
        self._we_cache = {}
        self._fun_cache = {}
        self._pi_cache = {}

    def terminal_map(self, X):
        C = self.cat
        return C.intern_functor(gpd.constant_functor(
            C.gpd_of(X), C.gpd_of(self.terminal()), 0))

    # -- markings -------------------------------------------------------------

    def is_fibration(self, m):
        if self.flavor == "discrete":
            return True
        if m not in self._fib_cache:
            self._fib_cache[m] = gpd.is_isofibration(self.cat.functor_of(m))
        return self._fib_cache[m]

    def is_weak_equivalence(self, m):
        if m not in self._we_cache:
            self._we_cache[m] = gpd.is_equivalence(self.cat.functor_of(m))
        return self._we_cache[m]

    # -- path objects ----------------------------------------------------------

    def path_object(self, base, Y):
        if base is None:
            base = self.terminal()
        if base != self.terminal():
            raise MissingSlicePathObject(
                f"absolute path objects only; base {base} is not terminal")
        key = (base, Y)
        if key in self.path_objects:
            return self.path_objects[key]
        po = self._build_path_object(Y)
        self.path_objects[key] = po
        return po

    def _build_path_object(self, Y):
        C = self.cat
        if self.flavor == "discrete":
            i = C.identity(Y)
            return PathObjectData(self.terminal(), Y, Y, i, i, i,
                                  over=self.terminal_map(Y))
        FD = self.functor_data(self.interval_obj, Y)
        P = C.intern_object(FD.gpd)
        GY = C.gpd_of(Y)
        s = gpd.GpdFunctor(
            FD.gpd, GY,
            tuple(F.obj_map[0] for F in FD.functors),
            tuple(comps[0] for _, _, comps in FD.transformations))
        t = gpd.GpdFunctor(
            FD.gpd, GY,
            tuple(F.obj_map[1] for F in FD.functors),
            tuple(comps[1] for _, _, comps in FD.transformations))
        obj_of = {F: i for i, F in enumerate(FD.functors)}
        tr_of = {tr: i for i, tr in enumerate(FD.transformations)}
        GI = C.gpd_of(self.interval_obj)
        r_obj = [obj_of[gpd.constant_functor(GI, GY, y)] for y in GY.objects()]
        r_mor = [tr_of[(r_obj[GY.src[f]], r_obj[GY.tgt[f]], (f, f))]
                 for f in GY.mors()]
        r = gpd.GpdFunctor(GY, FD.gpd, tuple(r_obj), tuple(r_mor))
        return PathObjectData(self.terminal(), Y, P,
                              C.intern_functor(r), C.intern_functor(s),
                              C.intern_functor(t),
                              over=self.terminal_map(Y))

    def slice_path_object(self, p):
        if p in self._slice_po_cache:
            return self._slice_po_cache[p]
        C = self.cat
        base, Y = C.cod(p), C.dom(p)
        if base == self.terminal():
            po = self.path_object(base, Y)
        else:
            data = gpd.vertical_path_groupoid(C.functor_of(p))
            po = PathObjectData(base, Y, C.intern_object(data.gpd),
                                C.intern_functor(data.r),
                                C.intern_functor(data.s),
                                C.intern_functor(data.t))
        po = replace(po, over=p)
        self._slice_po_cache[p] = po
        return po

    # -- function-space hooks --------------------------------------------------

    def functor_data(self, X, Y):
        """Memoized functor groupoid data between canonical objects."""
        key = (X, Y)
        if key not in self._fun_cache:
            self._fun_cache[key] = gpd.functor_groupoid(
                self.cat.gpd_of(X), self.cat.gpd_of(Y),
                budget=self.budget, cap=self.cat.hom_cap)
        return self._fun_cache[key]

    def exponential_candidate(self, X, Y):
        """The functor groupoid Y^X with its evaluation map E x X -> Y."""
        C = self.cat
        FD = self.functor_data(X, Y)
        E = C.intern_object(FD.gpd)
        # the product span lives on the canonical instance of E; translate
        # its morphism ids back before consulting the functor-groupoid data
        perm = C.perm_of(FD.gpd)
        raw_of = [0] * len(perm)
        for raw, canonical in enumerate(perm):
            raw_of[canonical] = raw
        span = C.span_of_pullback(self.terminal_map(E), self.terminal_map(X))
        GY = C.gpd_of(Y)
        ev_obj = [FD.eval_obj(fi, a) for fi, a in span.obj_pairs]
        ev_mor = [FD.eval_mor(raw_of[ti], m) for ti, m in span.mor_pairs]
        ev = gpd.GpdFunctor(span.gpd, GY, tuple(ev_obj), tuple(ev_mor))
        return E, C.intern_functor(ev)

    def pi_data(self, u, q):
        """Sections of q: Q -> A along the fibration u: A -> B.

        Returns the section object with its map to B and the evaluation
        defined on the designated pullback of that map against u.
        """
        key = (u, q)
        if key in self._pi_cache:
            return self._pi_cache[key]
        C = self.cat
        if C.cod(q) != C.dom(u):
            raise NotComposable(
                f"sections need q into the domain of u; got {q} along {u}")
        try:
            data = gpd.pi_groupoid(C.functor_of(u), C.functor_of(q),
                                   budget=self.budget, cap=self.cat.hom_cap)
        except NotIsofibration as exc:
            raise MissingPiType(str(exc)) from exc
        P = C.intern_object(data.gpd)
        # section ids permute on interning; object ids stay put, so only the
        # transformation tables need translating back to the raw instance
        perm = C.perm_of(data.gpd)
        raw_of = [0] * len(perm)
        for raw, canonical in enumerate(perm):
            raw_of[canonical] = raw
        fib = C.intern_functor(data.proj)
        pulled = self.pullback_of(fib, u)
        span = C.span_of_pullback(fib, u)
        GQ = C.gpd_of(C.dom(q))
        ev_obj = [data.eval_obj(pi, a) for pi, a in span.obj_pairs]
        ev_mor = [data.eval_mor(raw_of[ti], m) for ti, m in span.mor_pairs]
        ev = gpd.GpdFunctor(span.gpd, GQ, tuple(ev_obj), tuple(ev_mor))
        ev.check()
        out = PiData(P, fib, C.intern_functor(ev))
        assert C.compose(q, out.eval) == pulled.proj2
        self._pi_cache[key] = out
        return out


@dataclass(frozen=True)
class PiData:
    """A dependent product: section object, its map to the base, evaluation."""
    Pi: int
    fib: int
    eval: int


def _materialize(PS, core):
    """Intern the canonical fragment: structure maps for the core objects."""
    C = PS.cat
    for Y in core:
        PS.terminal_map(Y)
    for Y in core:
        PS.product(Y, Y)
    for Y in core:
        po = PS.path_object(PS.terminal(), Y)
        pb = PS.product(Y, Y)
        PS.mediator(pb, po.s, po.t)


def make_discrete_model(sizes, cap=None, budget=None):
    """Finite sets as discrete groupoids: all maps fibrations, bijections weak."""
    cat = ComputedCategory(name="FinSet", obj_cap=cap or DEFAULT_OBJ_CAP,
                           budget=budget)
    one = cat.intern_object(gpd.discrete(1, name="1"))
    PS = ComputedPathStructure(cat, "discrete", terminal=one,
                               budget=cat.budget,
                               name="discrete" + str(sorted(sizes)))
    core = [one]
    core.append(cat.intern_object(gpd.discrete(0, name="0")))
    for n in sorted(sizes):
        core.append(cat.intern_object(gpd.discrete(n)))
    seen = []
    for obj in core:
        if obj not in seen:
            seen.append(obj)
    core = seen
    for X in list(core):
        for Y in list(core):
            cat.span_of_pullback(PS.terminal_map(X), PS.terminal_map(Y))
    _materialize(PS, list(cat.objects()))
    return PS


def make_gpd_model(seeds, cap=None, budget=None):
    """Finite groupoids: isofibrations fibred, equivalences weak, P(Y) = Y^I."""
    cat = ComputedCategory(name="Gpd", obj_cap=cap or DEFAULT_OBJ_CAP,
                           budget=budget)
    resolved = []
    for seed in seeds:
        G = builtin_seed(seed) if isinstance(seed, str) else seed
        if G.n_objects > SEED_OBJ_CAP:
            raise ResourceCap(
                f"seed {G.name} exceeds {SEED_OBJ_CAP} objects")
        resolved.append(G)
    one = cat.intern_object(gpd.discrete(1, name="1"))
    interval = cat.intern_object(gpd.indiscrete(2, name="I"))
    PS = ComputedPathStructure(cat, "gpd", terminal=one,
                               interval_obj=interval, budget=cat.budget,
                               name="gpd[" + ",".join(
                                   s if isinstance(s, str) else s.name
                                   for s in seeds) + "]")
    core = [one, interval] + [cat.intern_object(G) for G in resolved]
    core = sorted(set(core))
    _materialize(PS, core)
    return PS


# -- serialization ------------------------------------------------------------

_MODEL_KEYS = {"category", "fibrations", "weak_equivalences", "path_objects"}


def _close_under_composition(C):
    changed = True
    while changed:
        changed = False
        mors = list(C.morphisms())
        for g in mors:
            for f in mors:
                if C.cod(f) == C.dom(g):
                    before = len(list(C.morphisms()))
                    C.compose(g, f)
                    if len(list(C.morphisms())) != before:
                        changed = True


def model_to_doc(PS):
    """Normalized snapshot of the current fragment as a plain document."""
    C = PS.cat
    if getattr(C, "provider_kind", "table") == "computed":
        _close_under_composition(C)
    mors = list(C.morphisms())
    doc = {
        "category": category_to_doc(C),
        "fibrations": sorted(m for m in mors if PS.is_fibration(m)),
        "weak_equivalences": sorted(m for m in mors
                                    if PS.is_weak_equivalence(m)),
        "path_objects": [],
    }
    seen = set()
    for (base, Y), po in sorted(PS.path_objects.items()):
        if (base, Y) in seen:
            continue
        seen.add((base, Y))
        doc["path_objects"].append({
            "base": po.base, "object": po.object, "P": po.P,
            "r": po.r, "s": po.s, "t": po.t,
        })
    return doc


def model_from_doc(doc, name="model"):
    if not isinstance(doc, dict):
        raise SchemaError("model document must be an object")
    unknown = set(doc) - _MODEL_KEYS
    if unknown:
        raise SchemaError(f"unknown model keys: {sorted(unknown)}")
    if "category" not in doc:
        raise SchemaError("model document missing key: category")
    cat = table_category_from_doc(doc["category"], name=name)
    mors = set(cat.morphisms())
    for key in ("fibrations", "weak_equivalences"):
        for m in doc.get(key, []):
            if m not in mors:
                raise SchemaError(f"{key} entry {m} is not a morphism")
    path_objects = {}
    for entry in doc.get("path_objects", []):
        if set(entry) != {"base", "object", "P", "r", "s", "t"}:
            raise SchemaError(
                f"bad path object entry keys: {sorted(entry)}")
        po = PathObjectData(entry["base"], entry["object"], entry["P"],
                            entry["r"], entry["s"], entry["t"])
        key = (po.base, po.object)
        if key in path_objects:
            raise SchemaError(f"duplicate path object for {key}")
        path_objects[key] = po
    return PathStructure(cat,
                         fibrations=doc.get("fibrations", []),
                         weak_equivalences=doc.get("weak_equivalences", []),
                         path_objects=path_objects,
                         name=name)


def load_model(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return model_from_doc(doc, name=str(path))


def save_model(PS, path):
    with open(path, "w") as fh:
        json.dump(model_to_doc(PS), fh, indent=2, sort_keys=True)
        fh.write("\n")
