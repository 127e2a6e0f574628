"""Slice structures: the category of maps into a fixed object.

A slice object is a parent map q with codomain I; a slice morphism from q
to p is a parent morphism m with p . m = q, stored as the pair (m, p) since
q is determined.  The slice is a live view: cells wrap parent cells on
demand, and complete searches translate their constraints and delegate to
the parent, so a computed parent keeps answering slice questions exactly.

The resulting structure is weak: only objects whose structure map is a
marked fibration are fibrant, and only those carry path objects.
"""

from __future__ import annotations

from .errors import MissingEntry, MissingSlicePathObject, NotComposable
from .fincat import FinCategory
from .pathstruct import PathObjectData, PathStructure


class SliceCategory(FinCategory):
    """The category of maps into I, reindexed with dense ids."""

    def __init__(self, parent, I, name=None):
        self.parent = parent
        self.base = I
        self.name = name or f"{parent.name}/{I}"
        self._objs = []          # slice object -> parent morphism into I
        self._obj_index = {}
        self._mors = []          # slice morphism -> (parent m, slice target)
        self._mor_index = {}
        self._srcs = []          # slice morphism -> its source, fixed at wrap
        self.parent_pullback = None   # optional memoized parent pullback hook
        seed_mors = list(parent.morphisms())
        for q in seed_mors:
            if parent.cod(q) == I:
                self.wrap_obj(q)
        n_seed_objs = len(self._objs)
        for m in seed_mors:
            for p_idx in range(n_seed_objs):
                if parent.dom(self._objs[p_idx]) == parent.cod(m):
                    self.wrap_mor(m, p_idx)

    # -- wrapping ------------------------------------------------------------

    def wrap_obj(self, q):
        """The slice object for a parent map q into the base."""
        if self.parent.cod(q) != self.base:
            raise NotComposable(f"map {q} does not land in the base")
        if q not in self._obj_index:
            self._obj_index[q] = len(self._objs)
            self._objs.append(q)
        return self._obj_index[q]

    def wrap_mor(self, m, tgt):
        """The slice morphism for a parent map m landing in slice object tgt."""
        q = self._objs[tgt]
        if self.parent.dom(q) != self.parent.cod(m):
            raise NotComposable(f"map {m} does not land in slice object {tgt}")
        key = (m, tgt)
        if key not in self._mor_index:
            src = self.wrap_obj(self.parent.compose(q, m))
            self._mor_index[key] = len(self._mors)
            self._mors.append(key)
            self._srcs.append(src)
        return self._mor_index[key]

    def structure_map(self, a):
        """The parent map into the base that slice object a stands for."""
        return self._objs[a]

    def unwrap(self, sm):
        """The (parent morphism, slice target) pair behind slice morphism sm."""
        if sm < 0 or sm >= len(self._mors):
            raise MissingEntry(f"unknown slice morphism id {sm}")
        return self._mors[sm]

    # -- FinCategory interface -------------------------------------------------

    def objects(self):
        return range(len(self._objs))

    def morphisms(self):
        return range(len(self._mors))

    def dom(self, sm):
        self.unwrap(sm)
        return self._srcs[sm]

    def cod(self, sm):
        return self.unwrap(sm)[1]

    def identity(self, a):
        q = self._objs[a]
        return self.wrap_mor(self.parent.identity(self.parent.dom(q)), a)

    def compose(self, g, f):
        mg, tg = self.unwrap(g)
        mf, tf = self.unwrap(f)
        if self.dom(g) != tf:
            raise NotComposable(f"slice morphisms {g} after {f} do not align")
        return self.wrap_mor(self.parent.compose(mg, mf), tg)

    def hom(self, a, b):
        return tuple(i for i in self.morphisms()
                     if self.dom(i) == a and self.cod(i) == b)

    def _translate_post(self, tgt, post):
        """Parent-level constraints equivalent to slice-level post at tgt."""
        out = []
        for a, want in post:
            am, _ = self.unwrap(a)
            wm, _ = self.unwrap(want)
            out.append((am, wm))
        return out

    def search_maps(self, src, tgt, post=(), budget=None, cap=None):
        q, p = self._objs[src], self._objs[tgt]
        parent_post = [(p, q)] + self._translate_post(tgt, post)
        found = self.parent.search_maps(self.parent.dom(q), self.parent.dom(p),
                                        post=parent_post, budget=budget,
                                        cap=cap)
        return sorted(self.wrap_mor(m, tgt) for m in found)

    def iter_maps(self, src, tgt, post=(), budget=None):
        q, p = self._objs[src], self._objs[tgt]
        parent_post = [(p, q)] + self._translate_post(tgt, post)
        for m in self.parent.iter_maps(self.parent.dom(q), self.parent.dom(p),
                                       post=parent_post, budget=budget):
            yield self.wrap_mor(m, tgt)

    def count_maps(self, src, tgt, post=(), limit=2, budget=None):
        q, p = self._objs[src], self._objs[tgt]
        parent_post = [(p, q)] + self._translate_post(tgt, post)
        return self.parent.count_maps(self.parent.dom(q), self.parent.dom(p),
                                      post=parent_post, limit=limit,
                                      budget=budget)

    def is_iso(self, sm):
        return self.parent.is_iso(self.unwrap(sm)[0])

    def designated_pullback(self, f, g):
        """A slice pullback is the parent pullback with induced structure map."""
        from .errors import PathcatError
        from .fincat import find_pullback
        mf, _ = self.unwrap(f)
        mg, _ = self.unwrap(g)
        try:
            if self.parent_pullback is not None:
                pb = self.parent_pullback(mf, mg)
            else:
                pb = find_pullback(self.parent, mf, mg)
        except PathcatError:
            return None
        q_src = self._objs[self.dom(f)]
        apex = self.wrap_obj(self.parent.compose(q_src, pb.proj1))
        return (apex, self.wrap_mor(pb.proj1, self.dom(f)),
                self.wrap_mor(pb.proj2, self.dom(g)))


class SlicePathStructure(PathStructure):
    """The weak path structure on all maps into I, fibrant = fibrations."""

    def __init__(self, parent, I):
        cat = SliceCategory(parent.cat, I, name=f"{parent.name}/{I}")
        cat.parent_pullback = parent.pullback_of
        super().__init__(cat, fibrations=(), weak_equivalences=(),
                         terminal=cat.wrap_obj(parent.cat.identity(I)),
                         weak=True, budget=parent.budget,
                         name=f"{parent.name}/{I}")
        self.parent = parent
        for a in list(cat.objects()):
            q = cat.structure_map(a)
            if parent.is_fibration(q):
                try:
                    self._import_path_object(a, q)
                except MissingSlicePathObject:
                    pass

    def _import_path_object(self, a, q):
        """Install the parent's fiberwise path object of q as a slice cell."""
        cat = self.cat
        po = self.parent.slice_path_object(q)
        sp = self.parent.cat.compose(q, po.s)
        P = cat.wrap_obj(sp)
        data = PathObjectData(
            base=self.terminal(), object=a, P=P,
            r=cat.wrap_mor(po.r, P),
            s=cat.wrap_mor(po.s, a), t=cat.wrap_mor(po.t, a),
            over=cat.wrap_mor(sp, self.terminal()))
        self.path_objects[(self.terminal(), a)] = data
        return data

    # markings are inherited pointwise from the parent

    def is_fibration(self, sm):
        return self.parent.is_fibration(self.cat.unwrap(sm)[0])

    def is_weak_equivalence(self, sm):
        return self.parent.is_weak_equivalence(self.cat.unwrap(sm)[0])

    def is_fibrant(self, a):
        return self.parent.is_fibration(self.cat.structure_map(a))

    def path_object(self, base, Y):
        if base is None:
            base = self.terminal()
        if base == self.terminal():
            if (base, Y) in self.path_objects:
                return self.path_objects[(base, Y)]
            q = self.cat.structure_map(Y)
            if self.parent.is_fibration(q):
                return self._import_path_object(Y, q)
        return super().path_object(base, Y)

    def slice_path_object(self, sp):
        """Fiberwise path data for a fibration inside the slice.

        Homotopies over a slice object agree with parent homotopies over its
        domain, so the parent's fiberwise path object wraps directly.
        """
        if sp in self._slice_po_cache:
            return self._slice_po_cache[sp]
        cat = self.cat
        tgt = cat.cod(sp)
        if tgt == self.terminal():
            return self.path_object(self.terminal(), cat.dom(sp))
        m, _ = cat.unwrap(sp)
        po = self.parent.slice_path_object(m)
        src_structure = cat.structure_map(cat.dom(sp))
        sp_structure = self.parent.cat.compose(src_structure, po.s)
        P = cat.wrap_obj(sp_structure)
        data = PathObjectData(
            base=tgt, object=cat.dom(sp), P=P,
            r=cat.wrap_mor(po.r, P),
            s=cat.wrap_mor(po.s, cat.dom(sp)),
            t=cat.wrap_mor(po.t, cat.dom(sp)),
            over=sp)
        self._slice_po_cache[sp] = data
        return data


def slice_category(PS, I):
    """The weak path structure on maps into I with inherited markings."""
    return SlicePathStructure(PS, I)
