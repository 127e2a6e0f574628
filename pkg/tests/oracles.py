"""Independent brute-force reference implementations.

Everything here enumerates raw candidate maps with itertools and filters by
the defining equations directly.  Nothing is shared with the package's
search kernel (no basepoint/vertex-group decomposition, no spanning trees),
so agreement is meaningful evidence.  Only usable on very small groupoids.
"""

import itertools

from pathcat.groupoids import GpdFunctor


def brute_functors(A, B, post=()):
    """All functors A -> B by raw enumeration, as (obj_map, mor_map) pairs."""
    out = []
    for obj_map in itertools.product(range(B.n_objects), repeat=A.n_objects):
        slot_lists = []
        ok = True
        for m in A.mors():
            cands = [n for n in B.mors()
                     if B.src[n] == obj_map[A.src[m]]
                     and B.tgt[n] == obj_map[A.tgt[m]]]
            if not cands:
                ok = False
                break
            slot_lists.append(cands)
        if not ok:
            continue
        for mor_map in itertools.product(*slot_lists):
            if any(mor_map[A.identity[a]] != B.identity[obj_map[a]]
                   for a in A.objects()):
                continue
            if any(B.comp[(mor_map[g], mor_map[f])] != mor_map[v]
                   for (g, f), v in A.comp.items()):
                continue
            if any(q.obj_map[obj_map[a]] != k.obj_map[a]
                   for q, k in post for a in A.objects()):
                continue
            if any(q.mor_map[mor_map[m]] != k.mor_map[m]
                   for q, k in post for m in A.mors()):
                continue
            out.append((obj_map, mor_map))
    return out


def brute_natural_transformations(F, G):
    """All natural transformations F => G as component tuples."""
    A, B = F.dom, F.cod
    slots = [B.hom(F.obj_map[a], G.obj_map[a]) for a in A.objects()]
    out = []
    for comps in itertools.product(*slots):
        if all(B.comp[(comps[A.tgt[m]], F.mor_map[m])]
               == B.comp[(G.mor_map[m], comps[A.src[m]])]
               for m in A.mors()):
            out.append(comps)
    return out


def brute_is_isofibration(F):
    for a in F.dom.objects():
        for w in F.cod.mors():
            if F.cod.src[w] != F.obj_map[a]:
                continue
            if not any(F.dom.src[m] == a and F.mor_map[m] == w
                       for m in F.dom.mors()):
                return False
    return True


def brute_is_equivalence(F):
    A, B = F.dom, F.cod
    # essentially surjective
    for b in B.objects():
        if not any(any(B.src[w] == F.obj_map[a] and B.tgt[w] == b
                       for w in B.mors())
                   for a in A.objects()):
            return False
    # fully faithful
    for a in A.objects():
        for a2 in A.objects():
            images = [F.mor_map[m] for m in A.hom(a, a2)]
            target = list(B.hom(F.obj_map[a], F.obj_map[a2]))
            if sorted(images) != sorted(target):
                return False
    return True


def brute_pi_objects(u, q):
    """Sections of q over each strict u-fiber, as (b, obj_map, mor_map) keyed
    by global ids of the fiber."""
    A, B, Q = u.dom, u.cod, q.dom
    out = []
    for b in B.objects():
        objs = [a for a in A.objects() if u.obj_map[a] == b]
        mors = [m for m in A.mors() if u.mor_map[m] == B.identity[b]]
        for obj_map in itertools.product(range(Q.n_objects), repeat=len(objs)):
            if any(q.obj_map[obj_map[i]] != a for i, a in enumerate(objs)):
                continue
            loc = {a: i for i, a in enumerate(objs)}
            slot_lists = []
            ok = True
            for m in mors:
                cands = [n for n in Q.mors()
                         if q.mor_map[n] == m
                         and Q.src[n] == obj_map[loc[A.src[m]]]
                         and Q.tgt[n] == obj_map[loc[A.tgt[m]]]]
                if not cands:
                    ok = False
                    break
                slot_lists.append(cands)
            if not ok:
                continue
            for mor_map in itertools.product(*slot_lists):
                sect = dict(zip(mors, mor_map))
                if any(sect[A.identity[a]] != Q.identity[obj_map[loc[a]]]
                       for a in objs):
                    continue
                if any(Q.comp[(sect[g], sect[f])] != sect[v]
                       for (g, f), v in A.comp.items()
                       if g in sect and f in sect):
                    continue
                out.append((b, dict(zip(objs, obj_map)), sect))
    return out


def brute_pi_morphisms(u, q, sections):
    """Coherent lift families between sections, one entry per (w, i, j, eta)."""
    A, B, Q = u.dom, u.cod, q.dom
    out = []
    for w in B.mors():
        b, b2 = B.src[w], B.tgt[w]
        over = [m for m in A.mors() if u.mor_map[m] == w]
        vert_b = [m for m in A.mors() if u.mor_map[m] == B.identity[b]]
        vert_b2 = [m for m in A.mors() if u.mor_map[m] == B.identity[b2]]
        for i, (bi, s_obj, s_mor) in enumerate(sections):
            if bi != b:
                continue
            for j, (bj, s2_obj, s2_mor) in enumerate(sections):
                if bj != b2:
                    continue
                slot_lists = []
                ok = True
                for m in over:
                    cands = [n for n in Q.mors()
                             if q.mor_map[n] == m
                             and Q.src[n] == s_obj[A.src[m]]
                             and Q.tgt[n] == s2_obj[A.tgt[m]]]
                    if not cands:
                        ok = False
                        break
                    slot_lists.append(cands)
                if not ok:
                    continue
                for picks in itertools.product(*slot_lists):
                    eta = dict(zip(over, picks))
                    good = True
                    for m in over:
                        for v in vert_b:
                            if A.tgt[v] != A.src[m]:
                                continue
                            for v2 in vert_b2:
                                if A.src[v2] != A.tgt[m]:
                                    continue
                                m2 = A.comp[(v2, A.comp[(m, v)])]
                                want = Q.comp[(s2_mor[v2],
                                               Q.comp[(eta[m], s_mor[v])])]
                                if eta[m2] != want:
                                    good = False
                                    break
                            if not good:
                                break
                        if not good:
                            break
                    if good:
                        out.append((w, i, j, eta))
    return out


def brute_properties(F):
    """All six functor flags straight from the definitions.

    Isomorphism of objects is decided by scanning every morphism (in a
    groupoid each one is invertible); fullness and faithfulness scan every
    object pair.  No union-find, no representative shortcuts.
    """
    A, B = F.dom, F.cod

    def linked(G, x, y):
        return any(G.src[w] == x and G.tgt[w] == y for w in G.mors())

    ess_surjective = all(any(linked(B, F.obj_map[a], b) for a in A.objects())
                         for b in B.objects())
    ess_injective = all(linked(A, x, y)
                        for x in A.objects() for y in A.objects()
                        if linked(B, F.obj_map[x], F.obj_map[y]))
    full = all(any(F.mor_map[m] == w for m in A.hom(a, b))
               for a in A.objects() for b in A.objects()
               for w in B.hom(F.obj_map[a], F.obj_map[b]))
    faithful = all(F.mor_map[m] != F.mor_map[n]
                   for a in A.objects() for b in A.objects()
                   for m in A.hom(a, b) for n in A.hom(a, b) if m != n)
    return {"ess_surjective": ess_surjective,
            "ess_injective": ess_injective,
            "full": full,
            "faithful": faithful,
            "isofibration": brute_is_isofibration(F),
            "equivalence": brute_is_equivalence(F)}


def functor_key(F):
    return (F.obj_map, F.mor_map)


def as_functor(A, B, pair):
    return GpdFunctor(A, B, tuple(pair[0]), tuple(pair[1]))
