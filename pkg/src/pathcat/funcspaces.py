"""Weak, ordinary, and strong function spaces and dependent products.

A candidate is an object with an evaluation map.  Its grade is decided by
running test objects through the induced hom-groupoid functor: essentially
surjective gives a weak function space, essential injectivity upgrades it
to ordinary, fullness to strong.  Dependent products are graded the same
way one slice at a time.  The constructions for fibered candidates and the
path-comparison map recompute every stated square instead of trusting it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .enrichment import extend_homotopical_functor, whisker_left_functor
from .errors import (CongruenceFailure, MissingPiType, NoFiller,
                     NotComposable, NotIsofibration, NotWeakEquivalence,
                     ResourceCap, SchemaError)
from .fincat import PullbackData
from .gpdcheck import functor_properties
from .groupoids import compose_functors
from .pathstruct import (LiftingSquare, PathObjectData, enumerate_homotopies,
                         find_filler, homotopic, is_homotopy_equivalence)


def _state(PS):
    if not hasattr(PS, "_funcspaces"):
        PS._funcspaces = {"times": {}, "slices": {}, "base_change": {}}
    return PS._funcspaces


# -- candidates ------------------------------------------------------------------


@dataclass(frozen=True)
class ExponentialCandidate:
    """An object E with an evaluation E x X -> Y, up for grading."""

    X: int
    Y: int
    E: int
    eval: int
    product: PullbackData    # the designated product E x X


@dataclass(frozen=True)
class PiCandidate:
    """An object over J with an evaluation over I, for f: X -> I along
    g: I -> J."""

    f: int
    g: int
    Pi: int
    pi_fib: int              # Pi -> J
    eval: int                # (Pi x_J I) -> X over I
    pulled: PullbackData     # the designated pullback of pi_fib against g


@dataclass(frozen=True)
class FunextData:
    """The path-comparison package for an exponential candidate."""

    eval_pair: int           # (E x E) x X -> Y x Y
    pair: "ExponentialCandidate"
    PYX: "ExponentialCandidate"
    st_pair: int             # endpoint pairing of the constructed space
    rX: int                  # strict transpose of the path constructor
    phi: int                 # filler comparing paths in E with members of PYX


def designated_exponential(PS, X, Y):
    """The model's own function-space candidate for the pair (X, Y)."""
    if not hasattr(PS, "exponential_candidate"):
        raise MissingPiType(f"model {PS.name} provides no function spaces")
    E, ev = PS.exponential_candidate(X, Y)
    return ExponentialCandidate(X, Y, E, ev, PS.product(E, X))


def designated_pi(PS, f, g):
    """The model's dependent product of f along g, as a candidate."""
    C = PS.cat
    if C.cod(f) != C.dom(g):
        raise NotComposable(f"fibration {f} does not land in the base of {g}")
    for m in (f, g):
        if not PS.is_fibration(m):
            raise NotIsofibration(f"map {m} is not a fibration")
    if not hasattr(PS, "pi_data"):
        raise MissingPiType(f"model {PS.name} provides no dependent products")
    data = PS.pi_data(g, f)
    return PiCandidate(f, g, data.Pi, data.fib, data.eval,
                       PS.pullback_of(data.fib, g))


def candidate_to_doc(cand):
    """Serializable form of a candidate; products are rebuilt on load."""
    if isinstance(cand, ExponentialCandidate):
        return {"kind": "exponential", "X": cand.X, "Y": cand.Y,
                "E": cand.E, "eval": cand.eval}
    if isinstance(cand, PiCandidate):
        return {"kind": "pi", "f": cand.f, "g": cand.g, "Pi": cand.Pi,
                "pi_fib": cand.pi_fib, "eval": cand.eval}
    raise SchemaError(f"not a candidate: {cand!r}")


def candidate_from_doc(PS, doc):
    """Parse and type-check a candidate document against a model."""
    if not isinstance(doc, dict):
        raise SchemaError("candidate document must be an object")
    kind = doc.get("kind")
    fields = {"exponential": ("X", "Y", "E", "eval"),
              "pi": ("f", "g", "Pi", "pi_fib", "eval")}.get(kind)
    if fields is None:
        raise SchemaError(f"unknown candidate kind: {kind!r}")
    if set(doc) != {"kind", *fields}:
        raise SchemaError(f"candidate fields must be exactly {fields}")
    C = PS.cat
    vals = {}
    for key in fields:
        v = doc[key]
        pool = C.n_morphisms() if key in ("eval", "f", "g", "pi_fib") \
            else C.n_objects()
        if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < pool:
            raise SchemaError(f"candidate field {key} has no referent: {v!r}")
        vals[key] = v
    if kind == "exponential":
        cand = ExponentialCandidate(vals["X"], vals["Y"], vals["E"],
                                    vals["eval"],
                                    PS.product(vals["E"], vals["X"]))
        if C.dom(cand.eval) != cand.product.apex or C.cod(cand.eval) != cand.Y:
            raise SchemaError("evaluation is not typed E x X -> Y")
        return cand
    cand = PiCandidate(vals["f"], vals["g"], vals["Pi"], vals["pi_fib"],
                       vals["eval"],
                       PS.pullback_of(vals["pi_fib"], vals["g"]))
    if C.dom(cand.pi_fib) != cand.Pi or C.cod(cand.pi_fib) != C.cod(cand.g) \
            or C.cod(cand.f) != C.dom(cand.g) \
            or C.dom(cand.eval) != cand.pulled.apex \
            or C.cod(cand.eval) != C.dom(cand.f) \
            or C.compose(cand.f, cand.eval) != cand.pulled.proj2:
        raise SchemaError("dependent-product candidate is not typed over I")
    return cand


# -- grading ---------------------------------------------------------------------


_GRADES = (("weak", "ess_surjective"),
           ("ordinary", "ess_surjective_injective"),
           ("strong", "ess_surjective_full"))


def _grade(judge, witnesses, skip_capped):
    """Aggregate per-witness functor properties into strength verdicts.

    With skip_capped (the default test range), witnesses whose hom-search
    exceeds a resource cap are recorded and left out of the quantifier;
    an explicitly requested witness propagates the cap instead.
    """
    out = {"weak": True, "ordinary": True, "strong": True,
           "witnesses": {"weak": None, "ordinary": None, "strong": None},
           "skipped": []}
    for witness in witnesses:
        try:
            props = judge(witness)
        except ResourceCap:
            if not skip_capped:
                raise
            out["skipped"].append(witness)
            continue
        for grade, attr in _GRADES:
            if out[grade] and not getattr(props, attr):
                out[grade] = False
                out["witnesses"][grade] = witness
    return out


class ProductFunctor:
    """The endofunctor pairing everything with a fixed object."""

    def __init__(self, PS, X):
        self.PS = PS
        self.X = X

    def obj(self, A):
        return self.PS.product(A, self.X).apex

    def mor(self, m):
        PS = self.PS
        C = PS.cat
        src = PS.product(C.dom(m), self.X)
        tgt = PS.product(C.cod(m), self.X)
        return PS.mediator(tgt, C.compose(m, src.proj1), src.proj2)


def _times(PS, X):
    memo = _state(PS)["times"]
    if X not in memo:
        memo[X] = ProductFunctor(PS, X)
    return memo[X]


def evaluation_functor(PS, cand, T):
    """The hom-groupoid functor whose grade the candidate is judged by:
    pair with the exponent, then compose with the evaluation."""
    F = _times(PS, cand.X)
    # check_all=False: the extension guards each comparison filler it
    # actually builds; a full preservation rescan would intern a product
    # for every object of the model on every call
    ext = extend_homotopical_functor(PS, PS, F, T, cand.E, check_all=False)
    return compose_functors(
        whisker_left_functor(PS, cand.eval, F.obj(T)), ext)


def check_exponential(PS, cand, test_objects=None):
    """Grade an exponential candidate over the given test objects."""
    C = PS.cat
    if C.dom(cand.eval) != cand.product.apex or C.cod(cand.eval) != cand.Y:
        raise NotComposable("evaluation is not typed E x X -> Y")
    skip_capped = test_objects is None
    if skip_capped:
        test_objects = list(C.objects())
    return _grade(
        lambda T: functor_properties(evaluation_functor(PS, cand, T)),
        test_objects, skip_capped)


# -- dependent products ------------------------------------------------------------


def _slice(PS, base):
    memo = _state(PS)["slices"]
    if base not in memo:
        memo[base] = PS.slice(base)
    return memo[base]


class BaseChangeFunctor:
    """Pullback along a fixed map, from the slice over its codomain to the
    slice over its domain."""

    def __init__(self, PS, g, src_slice, tgt_slice):
        self.PS = PS
        self.g = g
        self.src = src_slice
        self.tgt = tgt_slice

    def _pulled(self, a):
        return self.PS.pullback_of(self.src.cat.structure_map(a), self.g)

    def obj(self, a):
        return self.tgt.cat.wrap_obj(self._pulled(a).proj2)

    def mor(self, sm):
        C = self.PS.cat
        sC = self.src.cat
        m, _ = sC.unwrap(sm)
        pb_s = self._pulled(sC.dom(sm))
        pb_t = self._pulled(sC.cod(sm))
        med = self.PS.mediator(pb_t, C.compose(m, pb_s.proj1), pb_s.proj2)
        return self.tgt.cat.wrap_mor(med, self.obj(sC.cod(sm)))


def _base_change(PS, g):
    memo = _state(PS)["base_change"]
    if g not in memo:
        C = PS.cat
        memo[g] = BaseChangeFunctor(PS, g, _slice(PS, C.cod(g)),
                                    _slice(PS, C.dom(g)))
    return memo[g]


def _check_pi_typing(PS, cand):
    C = PS.cat
    for m in (cand.f, cand.g, cand.pi_fib):
        if not PS.is_fibration(m):
            raise NotIsofibration(f"map {m} is not a fibration")
    if C.cod(cand.f) != C.dom(cand.g) \
            or C.dom(cand.pi_fib) != cand.Pi \
            or C.cod(cand.pi_fib) != C.cod(cand.g):
        raise NotComposable("candidate is not shaped X -> I -> J with "
                            "Pi over J")
    if C.dom(cand.eval) != cand.pulled.apex \
            or C.cod(cand.eval) != C.dom(cand.f) \
            or C.compose(cand.f, cand.eval) != cand.pulled.proj2:
        raise NotComposable("evaluation does not live over I")


def pi_evaluation_functor(PS, cand, t):
    """The slice hom-groupoid functor graded by check_pi_type, for one map
    t into the base of g."""
    C = PS.cat
    sJ = _slice(PS, C.cod(cand.g))
    sI = _slice(PS, C.dom(cand.g))
    bc = _base_change(PS, cand.g)
    t_obj = sJ.cat.wrap_obj(t)
    ext = extend_homotopical_functor(sJ, sI, bc, t_obj,
                                     sJ.cat.wrap_obj(cand.pi_fib),
                                     check_all=False)
    ev_slice = sI.cat.wrap_mor(cand.eval, sI.cat.wrap_obj(cand.f))
    return compose_functors(
        whisker_left_functor(sI, ev_slice, bc.obj(t_obj)), ext)


def check_pi_type(PS, cand, test_maps=None):
    """Grade a dependent-product candidate over maps into the base of g."""
    C = PS.cat
    _check_pi_typing(PS, cand)
    skip_capped = test_maps is None
    if skip_capped:
        J = C.cod(cand.g)
        test_maps = [m for m in C.morphisms() if C.cod(m) == J]
    return _grade(
        lambda t: functor_properties(pi_evaluation_functor(PS, cand, t)),
        test_maps, skip_capped)


# -- transport and construction -----------------------------------------------------


def transport_along_weak_equivalence(PS, cand, h, position):
    """Move an exponential candidate along a weak equivalence in one of its
    three positions; the grade is preserved (re-check to confirm)."""
    C = PS.cat
    if not PS.is_weak_equivalence(h):
        raise NotWeakEquivalence(
            f"map {h} is not marked as a weak equivalence")
    if position == "domain_of_E":
        if C.cod(h) != cand.E:
            raise NotComposable(f"map {h} does not land in the candidate")
        Z = C.dom(h)
        prod = PS.product(Z, cand.X)
        hx1 = PS.mediator(cand.product, C.compose(h, prod.proj1), prod.proj2)
        return ExponentialCandidate(cand.X, cand.Y, Z,
                                    C.compose(cand.eval, hx1), prod)
    if position == "codomain_Y":
        if C.dom(h) != cand.Y:
            raise NotComposable(f"map {h} does not leave the value object")
        return ExponentialCandidate(cand.X, C.cod(h), cand.E,
                                    C.compose(h, cand.eval), cand.product)
    if position == "argument_X":
        if C.cod(h) != cand.X:
            raise NotComposable(f"map {h} does not land in the exponent")
        W = C.dom(h)
        prod = PS.product(cand.E, W)
        one_x_h = PS.mediator(cand.product, prod.proj1,
                              C.compose(h, prod.proj2))
        return ExponentialCandidate(W, cand.Y, cand.E,
                                    C.compose(cand.eval, one_x_h), prod)
    raise SchemaError(f"unknown transport position: {position!r}")


def construct_exponential_over_fibration(PS, p, base_exp):
    """Lift a function space along a fibration p: Y -> Z.

    Sections of the pullback of p against the base evaluation, taken along
    the product projection, give the new space; its evaluation is the
    pullback leg after the section evaluation.  Returns the candidate and
    the induced fibration over the base space, with the comparison square
    recomputed strictly.
    """
    C = PS.cat
    Y, Z = C.dom(p), C.cod(p)
    if C.cod(base_exp.eval) != Z:
        raise NotComposable(
            f"candidate evaluates into {C.cod(base_exp.eval)}, not {Z}")
    if not PS.is_fibration(p):
        raise NotIsofibration(f"map {p} is not a fibration")
    if not hasattr(PS, "pi_data"):
        raise MissingPiType(f"model {PS.name} provides no dependent products")
    X = base_exp.X
    prod_zx = base_exp.product
    qpb = PS.pullback_of(p, base_exp.eval)
    data = PS.pi_data(prod_zx.proj1, qpb.proj2)
    pX = data.fib
    prod_e = PS.product(data.Pi, X)
    pulled = PS.pullback_of(pX, prod_zx.proj1)
    px_x1 = PS.mediator(prod_zx, C.compose(pX, prod_e.proj1), prod_e.proj2)
    iso = PS.mediator(pulled, prod_e.proj1, px_x1)
    ev = C.compose(qpb.proj1, C.compose(data.eval, iso))
    if C.compose(p, ev) != C.compose(base_exp.eval, px_x1):
        raise CongruenceFailure(
            "constructed evaluation square does not commute strictly",
            witness=(C.compose(p, ev), C.compose(base_exp.eval, px_x1)))
    if not PS.is_fibration(pX):
        raise CongruenceFailure(
            f"induced map {pX} between function spaces is not a fibration")
    return ExponentialCandidate(X, Y, data.Pi, ev, prod_e), pX


def construct_pi_over_fibration(PS, f, p, base_pi):
    """Lift a dependent product along a fibration p between objects over I.

    base_pi must be the product of the structure map of the codomain of p
    along f.  Returns the candidate for the domain's structure map and the
    induced fibration between the two section spaces.
    """
    C = PS.cat
    if base_pi.g != f:
        raise NotComposable("base candidate is not a product along f")
    y = base_pi.f
    if C.cod(p) != C.dom(y):
        raise NotComposable(f"map {p} does not land in the object of {y}")
    if not PS.is_fibration(p):
        raise NotIsofibration(f"map {p} is not a fibration")
    if not hasattr(PS, "pi_data"):
        raise MissingPiType(f"model {PS.name} provides no dependent products")
    x = C.compose(y, p)
    qpb = PS.pullback_of(p, base_pi.eval)
    data = PS.pi_data(base_pi.pulled.proj1, qpb.proj2)
    pi_p = data.fib
    out_fib = C.compose(base_pi.pi_fib, pi_p)
    pulled = PS.pullback_of(out_fib, base_pi.g)
    inner = PS.pullback_of(pi_p, base_pi.pulled.proj1)
    w = PS.mediator(base_pi.pulled, C.compose(pi_p, pulled.proj1),
                    pulled.proj2)
    iso = PS.mediator(inner, pulled.proj1, w)
    ev = C.compose(qpb.proj1, C.compose(data.eval, iso))
    if C.compose(p, ev) != C.compose(base_pi.eval, w):
        raise CongruenceFailure(
            "constructed evaluation square does not commute strictly",
            witness=(C.compose(p, ev), C.compose(base_pi.eval, w)))
    if not PS.is_fibration(pi_p):
        raise CongruenceFailure(
            f"induced map {pi_p} between section spaces is not a fibration")
    cand = PiCandidate(x, f, data.Pi, out_fib, ev, pulled)
    _check_pi_typing(PS, cand)
    return cand, pi_p


def compose_pi_horizontal(PS, f, g, h):
    """The dependent product of f along a composite base h . g, evaluated
    through the product along g of the inner evaluation."""
    C = PS.cat
    if C.cod(f) != C.dom(g) or C.cod(g) != C.dom(h):
        raise NotComposable("maps do not form a tower")
    inner = designated_pi(PS, f, g)
    outer = designated_pi(PS, inner.pi_fib, h)
    hg = C.compose(h, g)
    if not PS.is_fibration(hg):
        raise NotIsofibration(f"composite base map {hg} is not a fibration")
    pulled = PS.pullback_of(outer.pi_fib, hg)
    c = PS.mediator(outer.pulled, pulled.proj1, C.compose(g, pulled.proj2))
    d = PS.mediator(inner.pulled, C.compose(outer.eval, c), pulled.proj2)
    cand = PiCandidate(f, hg, outer.Pi, outer.pi_fib,
                       C.compose(inner.eval, d), pulled)
    _check_pi_typing(PS, cand)
    return cand


# -- path comparison ----------------------------------------------------------------


def product_path_object(PS, Y):
    """A path object for Y x Y assembled from two copies of one for Y."""
    C = PS.cat
    po = PS.path_object(None, Y)
    prod_y = PS.product(Y, Y)
    prod_p = PS.product(po.P, po.P)
    r2 = PS.mediator(prod_p, C.compose(po.r, prod_y.proj1),
                     C.compose(po.r, prod_y.proj2))
    s2 = PS.mediator(prod_y, C.compose(po.s, prod_p.proj1),
                     C.compose(po.s, prod_p.proj2))
    t2 = PS.mediator(prod_y, C.compose(po.t, prod_p.proj1),
                     C.compose(po.t, prod_p.proj2))
    return PathObjectData(PS.terminal(), prod_y.apex, prod_p.apex, r2, s2, t2,
                          over=PS.terminal_map(prod_y.apex))


def build_funext_comparison(PS, cand):
    """Assemble the comparison between paths in a function space and the
    function space of paths, over the endpoint pairing."""
    C = PS.cat
    X, Y, E = cand.X, cand.Y, cand.E
    po = PS.path_object(None, Y)
    prod_y = PS.product(Y, Y)
    st = PS.mediator(prod_y, po.s, po.t)
    prod_e = cand.product
    e2 = PS.product(E, E)
    dom3 = PS.product(e2.apex, X)
    first = PS.mediator(prod_e, C.compose(e2.proj1, dom3.proj1), dom3.proj2)
    second = PS.mediator(prod_e, C.compose(e2.proj2, dom3.proj1), dom3.proj2)
    eval_pair = PS.mediator(prod_y, C.compose(cand.eval, first),
                            C.compose(cand.eval, second))
    pair = ExponentialCandidate(X, prod_y.apex, e2.apex, eval_pair, dom3)
    pyx, st_pair = construct_exponential_over_fibration(PS, st, pair)
    delta_e = PS.mediator(e2, C.identity(E), C.identity(E))
    target = C.compose(po.r, cand.eval)
    rX = None
    for m in PS.maps_with(E, pyx.E, post=[(st_pair, delta_e)]):
        mx1 = PS.mediator(pyx.product, C.compose(m, prod_e.proj1),
                          prod_e.proj2)
        if C.compose(pyx.eval, mx1) == target:
            rX = m
            break
    if rX is None:
        raise NoFiller("no strict transpose of the path constructor over "
                       "the endpoint pairing")
    rx_x1 = PS.mediator(pyx.product, C.compose(rX, prod_e.proj1),
                        prod_e.proj2)
    if not enumerate_homotopies(PS, prod_y.apex, C.compose(pyx.eval, rx_x1),
                                target, over=st):
        raise CongruenceFailure(
            "transposed path constructor does not evaluate to the path "
            "constructor fiberwise over the endpoint pair")
    po_e = PS.path_object(None, E)
    e2_st = PS.mediator(e2, po_e.s, po_e.t)
    phi = find_filler(PS, LiftingSquare(w=po_e.r, p=st_pair, h=rX, k=e2_st))
    return FunextData(eval_pair, pair, pyx, st_pair, rX, phi)


def check_funext(PS, cand, fd, test_objects=None):
    """Decide whether strength of the candidate agrees with the comparison
    map being a weak equivalence, each side computed on its own."""
    graded = []

    def judge(T):
        props = functor_properties(evaluation_functor(PS, cand, T))
        graded.append(props)
        return props

    skip_capped = test_objects is None
    if skip_capped:
        test_objects = list(PS.cat.objects())
    strong = _grade(judge, test_objects, skip_capped)["strong"]
    phi_we = is_homotopy_equivalence(PS, fd.phi)
    fully_faithful = strong and phi_we and all(
        props.full and props.faithful for props in graded)
    return {"strong_iff_phi_we": strong == phi_we,
            "fully_faithful": fully_faithful}


# -- upgrading ----------------------------------------------------------------------


def find_connecting_equivalence(PS, strong_cand, ordinary_cand):
    """A weak equivalence from one candidate's space to the other's whose
    pairing intertwines the evaluations up to homotopy, if any."""
    C = PS.cat
    prod_o = ordinary_cand.product
    for h in PS.maps_with(ordinary_cand.E, strong_cand.E):
        if not PS.is_weak_equivalence(h):
            continue
        hx1 = PS.mediator(strong_cand.product,
                          C.compose(h, prod_o.proj1), prod_o.proj2)
        if homotopic(PS, C.compose(strong_cand.eval, hx1),
                     ordinary_cand.eval):
            return h
    return None


def verify_ordinary_upgrade(PS, strong_cand, ordinary_cand,
                            test_objects=None):
    """True when the ordinary candidate grades strong in the presence of a
    strong one for the same pair; the connecting equivalence must exist."""
    if (strong_cand.X, strong_cand.Y) != (ordinary_cand.X, ordinary_cand.Y):
        raise NotComposable("candidates grade different object pairs")
    upgraded = check_exponential(PS, ordinary_cand, test_objects)["strong"]
    if upgraded and find_connecting_equivalence(
            PS, strong_cand, ordinary_cand) is None:
        raise CongruenceFailure(
            "upgrade holds but no connecting weak equivalence intertwines "
            "the evaluations")
    return upgraded
