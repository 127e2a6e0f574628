"""Path structures: a finite category with fibrations, weak equivalences,
and path objects, plus the homotopy apparatus built on them.

A structure is absolute (every object fibrant, base = terminal) or weak
(path objects only for objects marked fibrant over the base); slices of an
absolute structure are weak.  All quantified checks freeze the category's
object and morphism lists at entry, so providers that materialize new cells
during a check do not move the goalposts of that run.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import (Budget, CongruenceFailure, MissingPullback,
                     MissingSlicePathObject, NoFiller, NoPullback,
                     NotComposable, NoTerminal, PathcatError)
from .fincat import (ValidationReport, _at_most_two, find_pullback,
                     find_terminal)


@dataclass(frozen=True)
class PathObjectData:
    """A factorization of the diagonal: r: Y -> P weakly, (s, t): P -> YxY."""

    base: int
    object: int
    P: int
    r: int
    s: int
    t: int
    over: int = None     # fibration witnessing fibrancy over base, when known


@dataclass(frozen=True)
class Homotopy:
    """A map into a path object connecting src to tgt."""

    map: int
    path_object: PathObjectData
    src: int
    tgt: int


@dataclass(frozen=True)
class LiftingSquare:
    """w: W -> Y weak equivalence on the left, p: X -> Z fibration on the
    right, h: W -> X on top, k: Y -> Z on the bottom, p.h == k.w."""

    w: int
    p: int
    h: int
    k: int
    base_for_homotopy: int = None   # defaults to cod(p)


class PathStructure:
    """A finite category with marked fibrations and weak equivalences."""

    def __init__(self, cat, fibrations, weak_equivalences, path_objects=None,
                 terminal=None, weak=False, budget=None, name=None):
        self.cat = cat
        self.fibrations = set(fibrations)
        self.weak_equivalences = set(weak_equivalences)
        self.path_objects = dict(path_objects or {})
        self._terminal = terminal
        self.weak = weak
        self.budget = budget if budget is not None else Budget()
        self.name = name or cat.name
        self._slice_po_cache = {}
        self._pullback_cache = {}

    # -- markings ------------------------------------------------------------

    def is_fibration(self, m):
        return m in self.fibrations

    def is_weak_equivalence(self, m):
        return m in self.weak_equivalences

    def is_acyclic_fibration(self, m):
        return self.is_fibration(m) and self.is_weak_equivalence(m)

    def terminal(self):
        if self._terminal is None:
            self._terminal = find_terminal(self.cat)
        return self._terminal

    def terminal_map(self, X):
        hom = self.cat.hom(X, self.terminal())
        if len(hom) != 1:
            raise NoTerminal(f"object {X} has {len(hom)} maps to the terminal")
        return hom[0]

    def is_fibrant(self, X):
        if not self.weak:
            return True
        return any(self.cat.cod(p) == self.terminal() and self.is_fibration(p)
                   for p in self.cat.morphisms() if self.cat.dom(p) == X)

    # -- searches ------------------------------------------------------------

    def maps_with(self, src, tgt, post=()):
        """Ascending morphism ids m: src -> tgt with q.m == k for (q, k) in post."""
        return self.cat.search_maps(src, tgt, post=post, budget=self.budget)

    def product(self, X, Y):
        """The product X x Y as a pullback over the terminal object."""
        return self.pullback_of(self.terminal_map(X), self.terminal_map(Y))

    def pullback_of(self, f, g):
        key = (f, g)
        if key not in self._pullback_cache:
            try:
                self._pullback_cache[key] = find_pullback(self.cat, f, g)
            except NoPullback as exc:
                raise MissingPullback(str(exc)) from exc
        return self._pullback_cache[key]

    def mediator(self, pb, u, v):
        """The unique map into a verified pullback cone with given legs."""
        if (u, v) in pb.mediators:
            return pb.mediators[(u, v)]
        ws = _at_most_two(self.cat, self.cat.dom(u), pb.apex,
                          [(pb.proj1, u), (pb.proj2, v)], self.budget)
        if len(ws) != 1:
            raise MissingPullback(
                f"expected one mediator for ({u}, {v}), found {len(ws)}")
        pb.mediators[(u, v)] = ws[0]
        return ws[0]

    # -- path objects ----------------------------------------------------------

    def path_object(self, base, Y):
        """The designated path object of Y over base; base None means terminal."""
        if base is None:
            base = self.terminal()
        if base == self.terminal():
            if (base, Y) in self.path_objects:
                return self.path_objects[(base, Y)]
            found = self._search_path_object(base, Y, over=self.terminal_map(Y))
            if found is None:
                raise MissingSlicePathObject(
                    f"no path object for {Y} over terminal in {self.name}")
            self.path_objects[(base, Y)] = found
            return found
        raise MissingSlicePathObject(
            f"no path object for {Y} over {base} in {self.name}")

    def slice_path_object(self, p):
        """A path object for dom(p) in the slice over cod(p); p a fibration."""
        if p in self._slice_po_cache:
            return self._slice_po_cache[p]
        base, Y = self.cat.cod(p), self.cat.dom(p)
        if base == self.terminal():
            po = self.path_object(base, Y)
            po = replace(po, over=p)
        else:
            po = self.path_objects.get((base, Y))
            if po is not None and po.over not in (None, p):
                po = None
            if po is None:
                po = self._search_path_object(base, Y, over=p)
            if po is None:
                raise MissingSlicePathObject(
                    f"no path object for {Y} over base {base} in {self.name}")
            po = replace(po, over=p)
        self._slice_po_cache[p] = po
        return po

    def _search_path_object(self, base, Y, over):
        bud = self.budget.scope()
        for P in sorted(self.cat.objects()):
            for r in self.cat.hom(Y, P):
                for s in self.cat.hom(P, Y):
                    for t in self.cat.hom(P, Y):
                        bud.spend()
                        cand = PathObjectData(base, Y, P, r, s, t, over=over)
                        if self.check_path_object(cand):
                            return cand
        return None

    def check_path_object(self, cand):
        """Whether cand satisfies all path object conditions over its base."""
        C = self.cat
        Y, P = cand.object, cand.P
        if C.dom(cand.r) != Y or C.cod(cand.r) != P:
            return False
        if C.dom(cand.s) != P or C.cod(cand.s) != Y:
            return False
        if C.dom(cand.t) != P or C.cod(cand.t) != Y:
            return False
        idY = C.identity(Y)
        if C.compose(cand.s, cand.r) != idY or C.compose(cand.t, cand.r) != idY:
            return False
        if not self.is_weak_equivalence(cand.r):
            return False
        p = cand.over
        if p is None:
            p = self.terminal_map(Y) if cand.base == self.terminal() else None
        if p is None:
            return False
        # everything must live over the base: s and t are vertical
        if C.compose(p, cand.s) != C.compose(p, cand.t):
            return False
        try:
            pb = self.pullback_of(p, p)
        except MissingPullback:
            return False
        try:
            st = self.mediator(pb, cand.s, cand.t)
        except MissingPullback:
            return False
        return self.is_fibration(st)

    # -- slices ---------------------------------------------------------------

    def slice(self, I):
        from .slices import SlicePathStructure
        return SlicePathStructure(self, I)


# -- homotopies ----------------------------------------------------------------


def _resolve_path_object(PS, f, g, base, over):
    C = PS.cat
    if C.dom(f) != C.dom(g) or C.cod(f) != C.cod(g):
        raise NotComposable(f"maps {f} and {g} are not parallel")
    Y = C.cod(f)
    if base is None:
        base = PS.terminal()
    if over is not None:
        return PS.slice_path_object(over)
    if base == PS.terminal():
        return PS.path_object(base, Y)
    cands = [p for p in sorted(C.morphisms())
             if C.dom(p) == Y and C.cod(p) == base and PS.is_fibration(p)
             and C.compose(p, f) == C.compose(p, g)]
    if not cands:
        raise MissingSlicePathObject(
            f"no fibration {Y} -> {base} compatible with maps {f}, {g}")
    return PS.slice_path_object(cands[0])


def enumerate_homotopies(PS, base, f, g, over=None):
    """All homotopies f => g over base, ascending by the underlying map id.

    base None (or the terminal object) means absolute homotopy; otherwise the
    homotopy is fiberwise, through the path object of the least marked
    fibration under which f and g agree (or the one passed as `over`).
    """
    po = _resolve_path_object(PS, f, g, base, over)
    X = PS.cat.dom(f)
    return [Homotopy(H, po, f, g)
            for H in PS.maps_with(X, po.P, post=[(po.s, f), (po.t, g)])]


def homotopic(PS, f, g, base=None, over=None):
    if f == g:
        return True
    try:
        return bool(enumerate_homotopies(PS, base, f, g, over=over))
    except MissingSlicePathObject:
        raise
    except NotComposable:
        return False


def find_filler(PS, square, all_fillers=False):
    """Diagonal fillers for a lifting square, least morphism id first.

    Returns the least filler l with p.l == k and l.w homotopic to h over the
    base; with all_fillers=True returns the full ascending list.
    """
    C = PS.cat
    w, p, h, k = square.w, square.p, square.h, square.k
    if C.compose(p, h) != C.compose(k, w):
        raise NotComposable("lifting square does not commute")
    Y, X = C.cod(w), C.dom(p)
    base = square.base_for_homotopy
    if base is None:
        base = C.cod(p)
    strict = PS.maps_with(Y, X, post=[(p, k)])
    out = []
    for l in strict:
        lw = C.compose(l, w)
        if homotopic(PS, lw, h, base=base, over=p):
            if not all_fillers:
                return l
            out.append(l)
    if all_fillers:
        return out
    err = NoFiller(f"no filler for square (w={w}, p={p}, h={h}, k={k})")
    err.square = square
    raise err


# -- homotopy category ----------------------------------------------------------


def _homotopy_classes(PS):
    """Per parallel pair, the partition of maps into homotopy classes."""
    from .groupoids import UnionFind
    C = PS.cat
    by_pair = {}
    for m in C.morphisms():
        by_pair.setdefault((C.dom(m), C.cod(m)), []).append(m)
    class_of = {}
    for (X, Y), mors in sorted(by_pair.items()):
        uf = UnionFind(mors)
        for i, f in enumerate(mors):
            for g in mors[i + 1:]:
                if uf.find(f) == uf.find(g):
                    continue
                if enumerate_homotopies(PS, None, f, g):
                    uf.union(f, g)
        for root, members in uf.groups().items():
            for m in members:
                class_of[m] = root
    return class_of


def homotopy_category(PS):
    """The quotient by absolute homotopy, with least-id class representatives.

    Verifies that the relation is a congruence first and raises
    CongruenceFailure with a witness triple when it is not.
    """
    from .fincat import TableCategory
    C = PS.cat
    class_of = _homotopy_classes(PS)
    reps = sorted(set(class_of.values()))
    for f in C.morphisms():
        f2 = class_of[f]
        if f2 == f:
            continue
        for g in C.morphisms():
            if C.dom(g) == C.cod(f):
                if class_of[C.compose(g, f)] != class_of[C.compose(g, f2)]:
                    err = CongruenceFailure(
                        f"composition with {g} does not respect the class of {f}")
                    err.witness = (g, f, f2)
                    raise err
            if C.cod(g) == C.dom(f):
                if class_of[C.compose(f, g)] != class_of[C.compose(f2, g)]:
                    err = CongruenceFailure(
                        f"composition with {g} does not respect the class of {f}")
                    err.witness = (f, f2, g)
                    raise err
    index = {rep: i for i, rep in enumerate(reps)}
    dom = {index[rep]: C.dom(rep) for rep in reps}
    cod = {index[rep]: C.cod(rep) for rep in reps}
    identities = {a: index[class_of[C.identity(a)]] for a in C.objects()}
    comp = {}
    for gi, g in enumerate(reps):
        for fi, f in enumerate(reps):
            if C.cod(f) == C.dom(g):
                comp[(gi, fi)] = index[class_of[C.compose(g, f)]]
    Ho = TableCategory(list(C.objects()), dom, cod, identities, comp,
                       name=f"Ho({PS.name})")
    return Ho, {m: index[root] for m, root in class_of.items()}


def is_homotopy_equivalence(PS, f):
    """Whether f has a two-sided inverse up to absolute homotopy."""
    C = PS.cat
    X, Y = C.dom(f), C.cod(f)
    for g in C.iter_maps(Y, X, budget=PS.budget):
        if homotopic(PS, C.compose(g, f), C.identity(X)) and \
                homotopic(PS, C.compose(f, g), C.identity(Y)):
            return True
    return False


# -- axiom validation -------------------------------------------------------------


def _isos(PS, mors):
    return {m for m in mors if PS.cat.is_iso(m)}


def validate_path_axioms(PS):
    """Check every structural axiom on the frozen current fragment.

    Returns a ValidationReport whose failures carry the axiom name and a
    witness tuple; an empty report means the marked structure satisfies all
    seven axioms on this category.
    """
    C = PS.cat
    report = ValidationReport()
    objects = list(C.objects())
    mors = list(C.morphisms())
    fibs = [m for m in mors if PS.is_fibration(m)]
    wes = set(m for m in mors if PS.is_weak_equivalence(m))
    acyclic = [m for m in fibs if m in wes]

    # 1: fibrations closed under composition
    for g in fibs:
        for f in fibs:
            if C.cod(f) == C.dom(g):
                report.count("fibration-composition")
                if not PS.is_fibration(C.compose(g, f)):
                    report.add("fibration-composition", (g, f, C.compose(g, f)))

    # identities should be fibrations for closure statements to make sense;
    # covered by axiom 5 through isos, so not re-checked here

    # 2: pullbacks of fibrations exist and are fibrations
    for p in fibs:
        for f in mors:
            if C.cod(f) != C.cod(p):
                continue
            report.count("fibration-pullback")
            try:
                pb = PS.pullback_of(p, f)
            except PathcatError:
                report.add("fibration-pullback", (p, f))
                continue
            if not PS.is_fibration(pb.proj2):
                report.add("fibration-pullback", (p, f, pb.proj2))

    # 3: pullbacks of acyclic fibrations are acyclic fibrations
    for p in acyclic:
        for f in mors:
            if C.cod(f) != C.cod(p):
                continue
            report.count("acyclic-fibration-pullback")
            try:
                pb = PS.pullback_of(p, f)
            except PathcatError:
                report.add("acyclic-fibration-pullback", (p, f))
                continue
            if not (PS.is_fibration(pb.proj2) and
                    PS.is_weak_equivalence(pb.proj2)):
                report.add("acyclic-fibration-pullback", (p, f, pb.proj2))

    # 4: weak equivalences satisfy two out of six
    for f in mors:
        for g in mors:
            if C.cod(f) != C.dom(g):
                continue
            gf = C.compose(g, f)
            for h in mors:
                if C.cod(g) != C.dom(h):
                    continue
                hg = C.compose(h, g)
                if PS.is_weak_equivalence(gf) and PS.is_weak_equivalence(hg):
                    report.count("two-out-of-six")
                    hgf = C.compose(h, gf)
                    bad = [m for m in (f, g, h, hgf)
                           if not PS.is_weak_equivalence(m)]
                    if bad:
                        report.add("two-out-of-six", (h, g, f, tuple(bad)))

    # 5: isomorphisms are acyclic fibrations, acyclic fibrations have sections
    for m in sorted(_isos(PS, mors)):
        report.count("iso-acyclic")
        if not PS.is_acyclic_fibration(m):
            report.add("iso-acyclic", (m,))
    for p in acyclic:
        report.count("acyclic-section")
        X, Y = C.dom(p), C.cod(p)
        sections = C.iter_maps(Y, X, post=[(p, C.identity(Y))], budget=PS.budget)
        if next(iter(sections), None) is None:
            report.add("acyclic-section", (p,))

    # 6: terminal object with every object fibrant over it
    try:
        one = PS.terminal()
    except NoTerminal:
        report.add("terminal", ())
        one = None
    if one is not None and not PS.weak:
        for X in objects:
            report.count("terminal-fibration")
            tm = C.hom(X, one)
            if len(tm) != 1 or not PS.is_fibration(tm[0]):
                report.add("terminal-fibration", (X,) + tuple(tm))

    # 7: a path object for every fibrant object
    if one is not None:
        for Y in objects:
            if PS.weak and not PS.is_fibrant(Y):
                continue
            report.count("path-object")
            try:
                po = PS.path_object(one, Y)
            except MissingSlicePathObject:
                report.add("path-object", (Y,))
                continue
            if not PS.check_path_object(po):
                report.add("path-object", (Y, po.P, po.r, po.s, po.t))
    return report


def is_path_object(PS, base, Y, cand):
    """Public check that cand is a path object for Y over base."""
    if base is None:
        base = PS.terminal()
    if cand.base != base or cand.object != Y:
        return False
    return PS.check_path_object(cand)
