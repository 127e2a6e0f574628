"""Finite categories with dense integer ids, behind one small interface.

Two providers implement it: TableCategory wraps an explicit composition
table, and the model layer's computed provider materializes objects and
morphisms on demand.  Every search here scans ids in ascending order, so
"first found" answers are canonical for a given provider state.  Searches
never freely adjoin objects: a table category answers only from its table.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (MissingEntry, NoPullback, NotComposable, NoTerminal,
                     SchemaError)


class FinCategory:
    """Interface: dense object ids, dense morphism ids, total structure maps."""

    name = "C"

    def objects(self):
        raise NotImplementedError

    def morphisms(self):
        raise NotImplementedError

    def dom(self, m):
        raise NotImplementedError

    def cod(self, m):
        raise NotImplementedError

    def identity(self, a):
        raise NotImplementedError

    def compose(self, g, f):
        """g after f; raises NotComposable / MissingEntry."""
        raise NotImplementedError

    def hom(self, a, b):
        """Ascending morphism ids from a to b."""
        return tuple(m for m in self.morphisms()
                     if self.dom(m) == a and self.cod(m) == b)

    def search_maps(self, src, tgt, post=(), budget=None, cap=None):
        """All maps src -> tgt satisfying each (after, expected) constraint.

        Table categories answer from their table; the computed provider
        overrides this with a complete search that may materialize new
        morphisms.  Results come back in ascending id order.
        """
        out = []
        for m in self.iter_maps(src, tgt, post=post, budget=budget):
            out.append(m)
            if cap is not None and len(out) > cap:
                from .errors import ResourceCap
                raise ResourceCap(f"more than {cap} maps {src} -> {tgt} matched")
        return out

    def iter_maps(self, src, tgt, post=(), budget=None):
        """Lazily yield maps src -> tgt matching post; callers may stop early.

        Unlike search_maps this never caps the result count, so it suits
        existence checks that bail out at the first witness.
        """
        bud = budget.scope() if budget is not None else None
        for m in self.hom(src, tgt):
            if bud is not None:
                bud.spend()
            if all(self.compose(a, m) == want for a, want in post):
                yield m

    def count_maps(self, src, tgt, post=(), limit=2, budget=None):
        """Number of maps src -> tgt matching post, counting only to limit.

        Used for existence and uniqueness questions; materializes nothing
        beyond what iter_maps already touches.
        """
        n = 0
        for _ in self.iter_maps(src, tgt, post=post, budget=budget):
            n += 1
            if n >= limit:
                break
        return n

    def is_iso(self, m):
        """Whether m has a strict two-sided inverse."""
        X, Y = self.dom(m), self.cod(m)
        for n in self.hom(Y, X):
            if self.compose(n, m) == self.identity(X) and \
                    self.compose(m, n) == self.identity(Y):
                return True
        return False

    def designated_pullback(self, f, g):
        """Provider hint: a known pullback cone (apex, proj1, proj2) or None."""
        return None


class TableCategory(FinCategory):
    """A finite category given by explicit tables."""

    def __init__(self, objects, dom, cod, identities, comp, name="C"):
        self.name = name
        self._objects = tuple(objects)
        self._dom = dict(dom) if isinstance(dom, dict) else \
            {i: d for i, d in enumerate(dom)}
        self._cod = dict(cod) if isinstance(cod, dict) else \
            {i: c for i, c in enumerate(cod)}
        self._identities = dict(identities)
        self._comp = dict(comp)
        self._hom = None

    def objects(self):
        return self._objects

    def morphisms(self):
        return tuple(sorted(self._dom))

    def dom(self, m):
        if m not in self._dom:
            raise MissingEntry(f"unknown morphism id {m}")
        return self._dom[m]

    def cod(self, m):
        if m not in self._cod:
            raise MissingEntry(f"unknown morphism id {m}")
        return self._cod[m]

    def identity(self, a):
        if a not in self._identities:
            raise MissingEntry(f"no identity recorded for object {a}")
        return self._identities[a]

    def compose(self, g, f):
        if self.cod(f) != self.dom(g):
            raise NotComposable(f"cod({f}) = {self.cod(f)} != dom({g}) = {self.dom(g)}")
        if (g, f) not in self._comp:
            raise MissingEntry(f"composition table has no entry for ({g}, {f})")
        return self._comp[(g, f)]

    def hom(self, a, b):
        if self._hom is None:
            table = {}
            for m in sorted(self._dom):
                table.setdefault((self._dom[m], self._cod[m]), []).append(m)
            self._hom = {k: tuple(v) for k, v in table.items()}
        return self._hom.get((a, b), ())


_CATEGORY_KEYS = {"objects", "morphisms", "identities", "comp"}


def table_category_from_doc(doc, name="C"):
    """Strict parser for the category block of a model document."""
    if not isinstance(doc, dict):
        raise SchemaError("category block must be an object")
    unknown = set(doc) - _CATEGORY_KEYS
    if unknown:
        raise SchemaError(f"unknown category keys: {sorted(unknown)}")
    for key in _CATEGORY_KEYS:
        if key not in doc:
            raise SchemaError(f"category block missing key: {key}")
    objects = doc["objects"]
    if objects != list(range(len(objects))):
        raise SchemaError("objects must be dense ids starting at 0")
    dom, cod = {}, {}
    for entry in doc["morphisms"]:
        if set(entry) != {"id", "dom", "cod"}:
            raise SchemaError(f"bad morphism entry keys: {sorted(entry)}")
        m = entry["id"]
        if m in dom:
            raise SchemaError(f"duplicate morphism id {m}")
        dom[m], cod[m] = entry["dom"], entry["cod"]
    if sorted(dom) != list(range(len(dom))):
        raise SchemaError("morphism ids must be dense starting at 0")
    for m in dom:
        if dom[m] not in objects or cod[m] not in objects:
            raise SchemaError(f"morphism {m} has endpoints outside objects")
    identities = {}
    for key, m in doc["identities"].items():
        a = int(key)
        if a not in objects or m not in dom:
            raise SchemaError(f"bad identity entry {key}: {m}")
        identities[a] = m
    if set(identities) != set(objects):
        raise SchemaError("identities must cover every object exactly once")
    comp = {}
    for row in doc["comp"]:
        if len(row) != 3:
            raise SchemaError(f"comp rows must be [g, f, gf], got {row}")
        g, f, v = row
        if g not in dom or f not in dom or v not in dom:
            raise SchemaError(f"comp row {row} references unknown morphisms")
        if (g, f) in comp:
            raise SchemaError(f"duplicate comp entry for ({g}, {f})")
        comp[(g, f)] = v
    return TableCategory(objects, dom, cod, identities, comp, name=name)


def category_to_doc(C):
    return {
        "objects": list(C.objects()),
        "morphisms": [{"id": m, "dom": C.dom(m), "cod": C.cod(m)}
                      for m in C.morphisms()],
        "identities": {str(a): C.identity(a) for a in C.objects()},
        "comp": sorted([g, f, C.compose(g, f)]
                       for g in C.morphisms() for f in C.morphisms()
                       if C.dom(g) == C.cod(f)),
    }


@dataclass
class ValidationReport:
    """Flat list of (check, witness) failures; empty means the laws hold."""

    failures: list = field(default_factory=list)
    checked: dict = field(default_factory=dict)

    @property
    def ok(self):
        return not self.failures

    def add(self, check, witness):
        self.failures.append((check, witness))

    def count(self, check, n=1):
        self.checked[check] = self.checked.get(check, 0) + n


def compose_morphisms(C, g, f):
    """g after f in C."""
    return C.compose(g, f)


def validate_category(C):
    """Check identity and associativity laws; report failures, never raise."""
    report = ValidationReport()
    mors = list(C.morphisms())
    for a in C.objects():
        report.count("identity-endpoints")
        try:
            i = C.identity(a)
        except MissingEntry:
            report.add("identity-endpoints", (a,))
            continue
        if C.dom(i) != a or C.cod(i) != a:
            report.add("identity-endpoints", (a, i))
    for f in mors:
        try:
            lf = C.compose(f, C.identity(C.dom(f)))
            rf = C.compose(C.identity(C.cod(f)), f)
        except (MissingEntry, NotComposable):
            report.add("identity-law", (f,))
            continue
        report.count("identity-law")
        if lf != f or rf != f:
            report.add("identity-law", (f, lf, rf))
    composable = [(g, f) for g in mors for f in mors if C.cod(f) == C.dom(g)]
    for g, f in composable:
        report.count("composition-closure")
        try:
            v = C.compose(g, f)
        except MissingEntry:
            report.add("composition-closure", (g, f))
            continue
        if C.dom(v) != C.dom(f) or C.cod(v) != C.cod(g):
            report.add("composition-endpoints", (g, f, v))
    for g, f in composable:
        for h in mors:
            if C.dom(h) != C.cod(g):
                continue
            report.count("associativity")
            try:
                lhs = C.compose(h, C.compose(g, f))
                rhs = C.compose(C.compose(h, g), f)
            except MissingEntry:
                report.add("associativity", (h, g, f))
                continue
            if lhs != rhs:
                report.add("associativity", (h, g, f, lhs, rhs))
    return report


def find_terminal(C):
    """Least object receiving exactly one morphism from every object."""
    for t in sorted(C.objects()):
        if all(len(C.hom(a, t)) == 1 for a in C.objects()):
            return t
    raise NoTerminal(f"{C.name} has no terminal object")


@dataclass
class PullbackData:
    """A verified pullback cone with a mediator cache keyed by (u, v)."""

    apex: int
    proj1: int
    proj2: int
    mediators: dict = field(default_factory=dict)

    def mediator(self, u, v):
        return self.mediators[(u, v)]


def _at_most_two(C, src, tgt, post, budget=None):
    """First two maps src -> tgt matching post; enough to test uniqueness."""
    out = []
    for w in C.iter_maps(src, tgt, post=post, budget=budget):
        out.append(w)
        if len(out) == 2:
            break
    return out


def _verify_pullback_cone(C, f, g, apex, p1, p2):
    """Empty mediator dict if (apex, p1, p2) satisfies the universal property.

    Each commuting cone over the cospan must admit exactly one map into the
    candidate apex.  Only counts are taken here; the mediators themselves are
    materialized lazily when someone asks for one.
    """
    for T in list(C.objects()):
        for u in C.hom(T, C.dom(f)):
            fu = C.compose(f, u)
            for v in C.hom(T, C.dom(g)):
                if C.compose(g, v) != fu:
                    continue
                if C.count_maps(T, apex, post=[(p1, u), (p2, v)]) != 1:
                    return None
    return {}


def find_pullback(C, f, g):
    """A pullback cone for cod(f) == cod(g), verified against every cone in C.

    Prefers a provider-designated cone; otherwise searches candidates by
    ascending apex then ascending projections.  Raises NoPullback if no
    candidate satisfies the universal property inside C.
    """
    if C.cod(f) != C.cod(g):
        raise NotComposable(f"cospan mismatch: cod({f}) != cod({g})")
    designated = C.designated_pullback(f, g)
    if designated is not None:
        apex, p1, p2 = designated
        mediators = _verify_pullback_cone(C, f, g, apex, p1, p2)
        if mediators is not None:
            return PullbackData(apex, p1, p2, mediators)
    for apex in sorted(C.objects()):
        for p1 in C.hom(apex, C.dom(f)):
            for p2 in C.hom(apex, C.dom(g)):
                if C.compose(f, p1) != C.compose(g, p2):
                    continue
                mediators = _verify_pullback_cone(C, f, g, apex, p1, p2)
                if mediators is not None:
                    return PullbackData(apex, p1, p2, mediators)
    raise NoPullback(f"no pullback of ({f}, {g}) exists inside {C.name}")


@dataclass(frozen=True)
class CatFunctor:
    """A functor between finite categories as id dictionaries."""

    dom_cat: FinCategory
    cod_cat: FinCategory
    obj_map: dict = field(hash=False)
    mor_map: dict = field(hash=False)

    def obj(self, a):
        return self.obj_map[a]

    def mor(self, m):
        return self.mor_map[m]

    def check(self):
        C, D = self.dom_cat, self.cod_cat
        for m in C.morphisms():
            assert D.dom(self.mor_map[m]) == self.obj_map[C.dom(m)]
            assert D.cod(self.mor_map[m]) == self.obj_map[C.cod(m)]
        for a in C.objects():
            assert self.mor_map[C.identity(a)] == D.identity(self.obj_map[a])
        for g in C.morphisms():
            for f in C.morphisms():
                if C.cod(f) == C.dom(g):
                    assert self.mor_map[C.compose(g, f)] == \
                        D.compose(self.mor_map[g], self.mor_map[f])
        return True
