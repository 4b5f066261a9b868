"""Degree-graded refinements of theory presentations.

A graded presentation refines a base presentation of dimension n by a
set-valued layer: a set of objects over every colour, a fibre over every
multimap label at every graded boundary, and a composition table whose
entries refine the base's entries.  Equivalently (and this file leans on
the equivalence throughout) it is a presentation whose labels are pairs
(degree, fibre element) together with the first-projection morphism onto
the base; ``to_projection`` / ``from_projection`` convert between the
two forms without enumeration, because the graded boundary keys are by
construction exactly the pair theory's boundary keys.

The functorial operations are ``pullback`` along a base morphism, the
dependent sum ``push_left`` along a projection, and the dependent
product ``push_right`` into the corepresented one-higher base.  The
right push is tabulated from a set-level section formula (an
implementation theorem derived for this code base, checked in the tests
exclusively through its mapping universal property): an object over a
base colour is a section choosing a fibre element over every object of
the middle layer; a fibre element over a one-dimensional degree is a
section choosing, over every refinement of the boundary objects, a
compatible pair of a middle-layer label and a fibre element over it; and
the top compatibility sets are singletons precisely when every boundary
refinement composes consistently on both layers.  The formula is
tabulated for bases of dimension at most one, which covers every desk
check here.

``convolve`` composes two gradings over a common base into a grading
over the corepresented pair base by a pull-push composite through the
terminal grading, keeping the dimension bookkeeping flat until the final
right push raises it by one.  The algebra presentations at the end of
the file describe actions of a corepresented presentation directly; they
validate through a pair theory one dimension higher than the graded
route, so the two counting routes of the structure theorems share no
table-building code.
"""

from dataclasses import dataclass
from itertools import product

from .arity import canonical_key, enumerate_arities, layout
from .constructions import POINT, detheorize_T, theta
from .theory import (
    DIM0_KEY,
    TheoryMorphism,
    TheoryPresentation,
    ValidationReport,
    Violation,
    _assignment_of_key,
    arity_of_key,
    atom_key,
    boundary_assignments,
    build_theory,
    enumerate_morphisms,
    lower_key,
    map_assignment,
    validate_morphism,
    validate_theory,
    whole_key,
)

#: sentinel for composition entries the base does not declare
_SKIP = object()


@dataclass(frozen=True)
class GradedTheoryPresentation:
    """A set-valued refinement of a base presentation.

    ``objects`` maps base colours to tuples (empty dict when the base is
    0-dimensional); ``strata[d]`` and ``top_mul`` map ``(arity key,
    graded boundary key)`` to dicts from base degrees to fibre tuples;
    ``composition`` maps ``(arity key, graded lower key)`` to dicts from
    input pair tuples to output pairs, each pair (degree, fibre
    element).  Graded keys have the shape of the base's boundary keys
    with every entry replaced by such a pair.  For a 0-dimensional base
    the element fibres live in ``top_mul[DIM0_KEY]`` as a dict from base
    elements to tuples.
    """

    base: TheoryPresentation
    objects: dict
    strata: dict
    top_mul: dict
    composition: dict

    @property
    def n(self):
        return self.base.n

    def fibre(self, d, akey="", tkey=(), v=None):
        if self.base.n == 0:
            return self.top_mul[DIM0_KEY].get(v, ())
        if d == 0:
            return self.objects.get(v, ())
        table = self.top_mul if d == self.base.n else self.strata[d]
        return table.get((akey, tkey), {}).get(v, ())


def _project_key(gkey):
    """The base boundary key under a graded one (first projection)."""
    cols = tuple(e[0] for e in gkey[0])
    if len(gkey) == 1:
        return (cols,)
    return (
        cols,
        tuple(tuple(e[0] for e in g) for g in gkey[1]),
        tuple(e[0] for e in gkey[2]),
        gkey[3][0],
    )


def _lower_assignment(lay, lk):
    """Rebuild an address assignment from a composition lower key."""
    asg = {("c", i): c for i, c in enumerate(lk[0])}
    for nu, labs in enumerate(lk[1], start=1):
        for at, lab in zip(lay.atoms[nu], labs):
            asg[at.address] = lab
    return asg


def _pair_assignment(p, lay, asg):
    """Annotate every assigned address with its image under p."""
    out = {}
    for i in range(lay.colour_count):
        c = asg[("c", i)]
        out[("c", i)] = (p.act(0, "", (), c), c)
    for nu in sorted(lay.atoms):
        for at in lay.atoms[nu]:
            if at.address not in asg:
                continue
            tkey = atom_key(at.spec, asg.__getitem__)
            out[at.address] = (
                p.act(nu, canonical_key(at.spec.arity), tkey, asg[at.address]),
                asg[at.address],
            )
    return out


# ---------------------------------------------------------------------------
# the projection equivalence


def to_projection(X):
    """The pair theory of a graded presentation with its projection.

    Labels are the (degree, fibre element) pairs already indexing the
    graded tables, so this is a pure reshape; the inverse direction is
    :func:`from_projection`.
    """
    base = X.base
    n = base.n
    if n == 0:
        fib = X.top_mul[DIM0_KEY]
        elems = tuple((a, x) for a in base.label_set(0) for x in fib.get(a, ()))
        comp = {k: dict(v) for k, v in X.composition.items()}
        Y = TheoryPresentation(0, base.variance, 0, base.arity_bound, {}, {DIM0_KEY: elems}, comp)
        return Y, TheoryMorphism(Y, base, {0: {DIM0_KEY: {e: e[0] for e in elems}}})
    cols = tuple((u, x) for u in base.label_set(0) for x in X.objects.get(u, ()))
    strata = {d: {} for d in range(n)}
    strata[0][DIM0_KEY] = cols
    top = {}
    actions = {0: {DIM0_KEY: {c: c[0] for c in cols}}}
    for d in range(1, n + 1):
        table = top if d == n else strata[d]
        src = X.top_mul if d == n else X.strata.get(d, {})
        actions[d] = {}
        for (ak, gkey), fib in src.items():
            labs = tuple(
                (v, y)
                for v in base.label_set(d, ak, _project_key(gkey))
                for y in fib.get(v, ())
            )
            table[(ak, gkey)] = labs
            actions[d][(ak, gkey)] = {lab: lab[0] for lab in labs}
    comp = {k: dict(v) for k, v in X.composition.items()}
    Y = TheoryPresentation(n, base.variance, n, base.arity_bound, strata, top, comp)
    return Y, TheoryMorphism(Y, base, actions)


def from_projection(Y, p):
    """The graded presentation of a presentation over a projection.

    ``p`` is any strict morphism out of Y; its fibres over the target's
    labels become the graded data, with Y's own labels as the fibre
    elements.  Inverse to :func:`to_projection` up to relabelling the
    fibres by second projection.
    """
    base = p.target
    n = Y.n
    if n == 0:
        f0 = p.actions[0][DIM0_KEY]
        fib = {a: tuple(e for e in Y.top_mul[DIM0_KEY] if f0[e] == a) for a in base.label_set(0)}
        comp = {}
        for (ak, _), entry in Y.composition.items():
            comp[(ak, ())] = {
                tuple((f0[x], x) for x in ins): (f0[out], out) for ins, out in entry.items()
            }
        return GradedTheoryPresentation(base, {}, {}, {DIM0_KEY: fib}, comp)
    objects = {
        u: tuple(c for c in Y.label_set(0) if p.act(0, "", (), c) == u)
        for u in base.label_set(0)
    }
    strata = {d: {} for d in range(1, n)}
    top = {}
    for d in range(1, n + 1):
        table = top if d == n else strata[d]
        src = Y.top_mul if d == n else Y.strata[d]
        for (ak, skey), labs in src.items():
            lay = layout(arity_of_key(Y, d, ak))
            asg = _assignment_of_key(lay, skey)
            pasg = _pair_assignment(p, lay, asg)
            gkey = whole_key(lay, pasg.__getitem__)
            bkey = whole_key(lay, lambda ad: pasg[ad][0])
            table[(ak, gkey)] = {
                v: tuple(y for y in labs if p.act(d, ak, skey, y) == v)
                for v in base.label_set(d, ak, bkey)
            }
    comp = {}
    for (ak, lk), entry in Y.composition.items():
        lay = layout(arity_of_key(Y, n + 1, ak))
        asg = _lower_assignment(lay, lk)
        pasg = _pair_assignment(p, lay, asg)
        glk = lower_key(lay, pasg.__getitem__)
        chain_info = [
            (canonical_key(lay.atom(ad).spec.arity), atom_key(lay.atom(ad).spec, asg.__getitem__))
            for ad in lay.chain_addrs
        ]
        tat = lay.atom(lay.target_addr)
        tak, ttk = canonical_key(tat.spec.arity), atom_key(tat.spec, asg.__getitem__)
        gentry = {}
        for ins, out in entry.items():
            tins = tuple((p.act(n, cak, ck, y), y) for (cak, ck), y in zip(chain_info, ins))
            gentry[tins] = (p.act(n, tak, ttk, out), out)
        comp[(ak, glk)] = gentry
    return GradedTheoryPresentation(base, objects, strata, top, comp)


def validate_graded(X, bound=None):
    """Typing of the graded tables plus full validation of the pair
    theory and its projection morphism."""
    base = X.base
    viol, warn = [], []
    if base.n == 0:
        for a in X.top_mul.get(DIM0_KEY, {}):
            if a not in base.label_set(0):
                viol.append(Violation("grading-typing", "", (a,), "base element", a))
    else:
        for u in X.objects:
            if u not in base.label_set(0):
                viol.append(Violation("grading-typing", "", (u,), "base colour", u))
        for d in range(1, base.n + 1):
            table = X.top_mul if d == base.n else X.strata.get(d, {})
            for (ak, gkey), fib in table.items():
                degrees = base.label_set(d, ak, _project_key(gkey))
                for v in fib:
                    if v not in degrees:
                        viol.append(Violation("grading-typing", ak, (gkey, v), tuple(degrees), v))
    if viol:
        return ValidationReport("fail", viol, warn)
    Y, p = to_projection(X)
    return _pair_report(Y, p, bound)


def _pair_report(Y, p, bound):
    """Theory report first; the morphism check only runs on a closed
    pair theory (it indexes through the label tables)."""
    r1 = validate_theory(Y, bound)
    if r1.violations:
        return r1
    r2 = validate_morphism(p, bound)
    viol = r1.violations + r2.violations
    warn = r1.warnings + r2.warnings
    return ValidationReport("fail" if viol else "pass", viol, warn)


def relabel_graded(X, obj_map, lab_map):
    """Rename objects and fibre elements throughout a graded presentation.

    ``obj_map(colour, object)`` and ``lab_map(d, degree, element)`` must
    be injective slotwise; keys are rewritten structurally, so no layout
    walks are needed.
    """
    base = X.base
    n = base.n
    if n == 0:
        top = {
            DIM0_KEY: {
                a: tuple(lab_map(0, a, x) for x in labs)
                for a, labs in X.top_mul[DIM0_KEY].items()
            }
        }
        comp = {}
        for key, entry in X.composition.items():
            comp[key] = {
                tuple((a, lab_map(0, a, x)) for a, x in ins): (out[0], lab_map(0, out[0], out[1]))
                for ins, out in entry.items()
            }
        return GradedTheoryPresentation(base, {}, {}, top, comp)

    def rp(d, pair):
        u, x = pair
        return (u, obj_map(u, x)) if d == 0 else (u, lab_map(d, u, x))

    def rkey(gkey, d):
        cols = tuple(rp(0, c) for c in gkey[0])
        if len(gkey) == 1:
            return (cols,)
        groups = tuple(tuple(rp(nu, e) for e in g) for nu, g in enumerate(gkey[1], start=1))
        return (cols, groups, tuple(rp(d - 1, e) for e in gkey[2]), rp(d - 1, gkey[3]))

    def rfib(d, fib):
        return {v: tuple(lab_map(d, v, y) for y in ys) for v, ys in fib.items()}

    objects = {u: tuple(obj_map(u, x) for x in xs) for u, xs in X.objects.items()}
    strata = {
        d: {(ak, rkey(gk, d)): rfib(d, fib) for (ak, gk), fib in table.items()}
        for d, table in X.strata.items()
    }
    top = {(ak, rkey(gk, n)): rfib(n, fib) for (ak, gk), fib in X.top_mul.items()}
    comp = {}
    for (ak, glk), entry in X.composition.items():
        nk = (
            tuple(rp(0, c) for c in glk[0]),
            tuple(tuple(rp(nu, e) for e in g) for nu, g in enumerate(glk[1], start=1)),
        )
        comp[(ak, nk)] = {
            tuple(rp(n, e) for e in ins): rp(n, out) for ins, out in entry.items()
        }
    return GradedTheoryPresentation(base, objects, strata, top, comp)


# ---------------------------------------------------------------------------
# morphism plumbing


def compose_morphisms(G, F):
    """The composite morphism applying F and then G."""
    if F.target != G.source:
        raise ValueError("morphisms do not compose")
    actions = {0: {DIM0_KEY: {c: G.act(0, "", (), img) for c, img in F.actions[0][DIM0_KEY].items()}}}
    for d in range(1, F.source.n + 1):
        actions[d] = {}
        for (ak, skey), mp in F.actions.get(d, {}).items():
            lay = layout(arity_of_key(F.source, d, ak))
            asg = _assignment_of_key(lay, skey)
            mkey = whole_key(lay, map_assignment(F, lay, asg).__getitem__)
            actions[d][(ak, skey)] = {a: G.act(d, ak, mkey, b) for a, b in mp.items()}
    return TheoryMorphism(F.source, G.target, actions)


def morphism_from_maps(S, T, colour_map, label_map=None):
    """Assemble a morphism from a colour map and a per-label rule.

    ``label_map(d, arity key, source key, translated target key, label)``
    returns the image label; translated keys are computed with the part
    of the morphism already built, so the rule only sees well-typed
    target boundaries.
    """
    actions = {0: {DIM0_KEY: {c: colour_map(c) for c in S.label_set(0)}}}
    F = TheoryMorphism(S, T, actions)
    for d in range(1, S.n + 1):
        actions[d] = {}
        table = S.top_mul if d == S.n else S.strata[d]
        for (ak, skey), labs in table.items():
            lay = layout(arity_of_key(S, d, ak))
            asg = _assignment_of_key(lay, skey)
            tkey = whole_key(lay, map_assignment(F, lay, asg).__getitem__)
            actions[d][(ak, skey)] = {lab: label_map(d, ak, skey, tkey, lab) for lab in labs}
    return F


def theta_morphism(F, bound=None):
    """Corepresent a morphism: same actions below, singletons on top."""
    S2, T2 = theta(F.source, bound), theta(F.target, bound)
    actions = {d: {k: dict(v) for k, v in tab.items()} for d, tab in F.actions.items()}
    actions[F.source.n + 1] = {
        key: {POINT: POINT} for key, labs in S2.top_mul.items() if labs
    }
    return TheoryMorphism(S2, T2, actions)


# ---------------------------------------------------------------------------
# building graded presentations through their pair theories


def _graded_pair_theory(base, objects, fibre_rule, comp_rule, bound=None):
    """Saturate the pair theory of a graded presentation.

    ``fibre_rule(d, arity, lay, asg, degree)`` yields the fibre over a
    degree at a pair-labelled boundary; ``comp_rule(arity, lay, asg,
    out degree, inputs)`` yields the fibre part of a composite (or
    ``_SKIP``).  The base degree of every composite is forced by the
    base's own table; lower keys the base does not declare are skipped
    wholesale (prune with :func:`_prune_skips`).
    """
    n = base.n
    bound = base.arity_bound if bound is None else bound
    pairs = tuple((u, x) for u in base.label_set(0) for x in objects.get(u, ()))
    if n == 0:
        def crule0(P, lay, asg, inputs):
            bentry = base.composition.get((canonical_key(P), ()))
            if bentry is None:
                return _SKIP
            v = bentry[tuple(e[0] for e in inputs)]
            y = comp_rule(P, lay, asg, v, inputs)
            return _SKIP if y is _SKIP else (v, y)

        return build_theory(0, base.variance, bound, pairs, lambda *a: (), crule0)

    def lrule(d, ar, lay, asg):
        bkey = whole_key(lay, lambda ad: asg[ad][0])
        out = []
        for v in base.label_set(d, canonical_key(ar), bkey):
            out.extend((v, y) for y in fibre_rule(d, ar, lay, asg, v))
        return tuple(out)

    def crule(P, lay, asg, inputs):
        bentry = base.composition.get((canonical_key(P), lower_key(lay, lambda ad: asg[ad][0])))
        if bentry is None:
            return _SKIP
        v = bentry[tuple(e[0] for e in inputs)]
        y = comp_rule(P, lay, asg, v, inputs)
        return _SKIP if y is _SKIP else (v, y)

    return build_theory(n, base.variance, bound, pairs, lrule, crule)


def _prune_skips(Y):
    """Drop skipped composition entries; drop keys left empty by it."""
    for key in list(Y.composition):
        entry = Y.composition[key]
        kept = {i: o for i, o in entry.items() if o is not _SKIP}
        if len(kept) == len(entry):
            continue
        if kept:
            Y.composition[key] = kept
        else:
            del Y.composition[key]
    return Y


def _graded_from_pairs(base, Y):
    """Reshape a pair theory (labels already pairs) into graded form."""
    n = base.n
    if n == 0:
        fib = {a: tuple(x for a2, x in Y.top_mul[DIM0_KEY] if a2 == a) for a in base.label_set(0)}
        return GradedTheoryPresentation(
            base, {}, {}, {DIM0_KEY: fib}, {k: dict(v) for k, v in Y.composition.items()}
        )
    objects = {u: tuple(x for u2, x in Y.label_set(0) if u2 == u) for u in base.label_set(0)}
    strata = {d: {} for d in range(1, n)}
    top = {}
    for d in range(1, n + 1):
        table = top if d == n else strata[d]
        src = Y.top_mul if d == n else Y.strata[d]
        for (ak, gkey), labs in src.items():
            table[(ak, gkey)] = {
                v: tuple(y for v2, y in labs if v2 == v)
                for v in base.label_set(d, ak, _project_key(gkey))
            }
    comp = {k: dict(v) for k, v in Y.composition.items()}
    return GradedTheoryPresentation(base, objects, strata, top, comp)


# ---------------------------------------------------------------------------
# stock gradings


def terminal_graded(U, objects=None, bound=None):
    """Singleton fibres over a chosen object family (default: one
    object per colour)."""
    if U.n == 0:
        if objects is None:
            objects = {a: (POINT,) for a in U.label_set(0)}
        Y = _graded_pair_theory(
            U, objects, None, lambda P, lay, asg, v, inputs: objects[v][0], bound
        )
        return _graded_from_pairs(U, _prune_skips(Y))
    if objects is None:
        objects = {u: ("*",) for u in U.label_set(0)}
    Y = _graded_pair_theory(
        U,
        objects,
        lambda d, ar, lay, asg, v: (POINT,),
        lambda P, lay, asg, v, inputs: POINT,
        bound,
    )
    return _graded_from_pairs(U, _prune_skips(Y))


def product_graded(U, k, bound=None):
    """Every fibre a fixed k-element set, composing by addition mod k."""
    labs = tuple(range(k))
    objects = {u: labs for u in U.label_set(0)}
    crule = lambda P, lay, asg, v, inputs: sum(e[1] for e in inputs) % k
    if U.n == 0:
        Y = _graded_pair_theory(U, objects, None, crule, bound)
    else:
        Y = _graded_pair_theory(U, objects, lambda d, ar, lay, asg, v: labs, crule, bound)
    return _graded_from_pairs(U, _prune_skips(Y))


# ---------------------------------------------------------------------------
# pullback and the two pushes


def pullback(F, X, bound=None):
    """Restring a graded presentation along a base morphism."""
    base2 = F.source
    if F.target != X.base:
        raise ValueError("the morphism must land in the grading base")
    if base2.n == 0:
        f0 = F.actions[0][DIM0_KEY]
        objects = {a: X.top_mul[DIM0_KEY].get(f0[a], ()) for a in base2.label_set(0)}

        def crule0(P, lay, asg, v, inputs):
            entry = X.composition.get((canonical_key(P), ()))
            if entry is None:
                return _SKIP
            out = entry.get(tuple((f0[a], x) for a, x in inputs))
            return _SKIP if out is None else out[1]

        Y = _graded_pair_theory(base2, objects, None, crule0, bound)
        return _graded_from_pairs(base2, _prune_skips(Y))
    objects = {u: X.objects.get(F.act(0, "", (), u), ()) for u in base2.label_set(0)}

    def translate(lay, asg):
        out = {}
        for i in range(lay.colour_count):
            u, x = asg[("c", i)]
            out[("c", i)] = (F.act(0, "", (), u), x)
        for nu in sorted(lay.atoms):
            for at in lay.atoms[nu]:
                if at.address not in asg:
                    continue
                v, y = asg[at.address]
                bkey = atom_key(at.spec, lambda a: asg[a][0])
                out[at.address] = (F.act(nu, canonical_key(at.spec.arity), bkey, v), y)
        return out

    def frule(d, ar, lay, asg, v):
        tasg = translate(lay, asg)
        w = F.act(d, canonical_key(ar), whole_key(lay, lambda ad: asg[ad][0]), v)
        return X.fibre(d, canonical_key(ar), whole_key(lay, tasg.__getitem__), w)

    def crule(P, lay, asg, v, inputs):
        tasg = translate(lay, asg)
        entry = X.composition.get((canonical_key(P), lower_key(lay, tasg.__getitem__)))
        if entry is None:
            return _SKIP
        out = entry.get(tuple(tasg[ad] for ad in lay.chain_addrs))
        return _SKIP if out is None else out[1]

    Y = _graded_pair_theory(base2, objects, frule, crule, bound)
    return _graded_from_pairs(base2, _prune_skips(Y))


def push_left(V, Y):
    """Sum a grading of the pair theory of V down to V's own base."""
    VP, p = to_projection(V)
    if Y.base != VP:
        raise ValueError("the pushed presentation must be graded over the pair theory")
    YB, q = to_projection(Y)
    return from_projection(YB, compose_morphisms(p, q))


def _nonempty_actions(actions):
    return {d: {k: v for k, v in tab.items() if v} for d, tab in actions.items()}


def graded_morphisms(A, B, bound=None, budget=2_000_000):
    """All morphisms of gradings over a shared base: pair-theory
    morphisms commuting with the projections."""
    if A.base != B.base:
        raise ValueError("graded morphisms need a shared base")
    Y1, p1 = to_projection(A)
    Y2, p2 = to_projection(B)
    want = _nonempty_actions(p1.actions)
    return [
        F
        for F in enumerate_morphisms(Y1, Y2, bound, budget)
        if _nonempty_actions(compose_morphisms(p2, F).actions) == want
    ]


def theta_graded(X, bound=None):
    """Corepresent a grading: the graded form of the corepresented
    projection morphism, over the corepresented base."""
    Y, p = to_projection(X)
    F = theta_morphism(p, bound)
    return from_projection(F.source, F)


def _pr_sections(vals, fibres):
    """All total choice functions, as tuples of (point, choice)."""
    return tuple(tuple(zip(vals, ch)) for ch in product(*fibres))


def push_right(V, X, bound=None):
    """The dependent product of X along V, graded over the
    corepresented base (the section formula from the module docstring).

    V is graded over a base U of dimension at most one and X over the
    pair theory of V; the result is graded over the corepresentation of
    U, one dimension up.
    """
    U = V.base
    m = U.n
    if m > 1:
        raise ValueError("right push is tabulated for bases of dimension <= 1")
    VP, _ = to_projection(V)
    if X.base != VP:
        raise ValueError("the pushed presentation must be graded over the pair theory")
    UU = theta(U, bound)
    if m == 0:
        objects = {}
        for u in U.label_set(0):
            vs = V.fibre(0, v=u)
            objects[u] = _pr_sections(vs, [X.fibre(0, v=(u, v)) for v in vs])

        def frule(d, ar, lay, asg, lam):
            k = ar.top
            us = [asg[("c", i)][0] for i in range(k + 1)]
            sigs = [dict(asg[("c", i)][1]) for i in range(k + 1)]
            ak = canonical_key(ar)
            ventry = V.composition.get((ak, ()))
            xentry = X.composition.get((ak, ()))
            if ventry is None or xentry is None:
                return ()
            for om in product(*[V.fibre(0, v=us[i]) for i in range(k)]):
                vout = ventry.get(tuple((us[i], om[i]) for i in range(k)))
                if vout is None:
                    return ()
                xout = xentry.get(tuple(((us[i], om[i]), sigs[i][om[i]]) for i in range(k)))
                if xout is None:
                    return ()
                if sigs[k].get(vout[1]) != xout[1]:
                    return ()
            return (POINT,)

    else:
        objects = {}
        for u in U.label_set(0):
            vs = V.objects.get(u, ())
            objects[u] = _pr_sections(vs, [X.objects.get((u, v), ()) for v in vs])

        def frule(d, ar, lay, asg, deg):
            if d == 1:
                return _pr_tau_fibre(V, X, ar, lay, asg, deg)
            return _pr_compat(V, X, ar, lay, asg)

    crule = lambda P, lay, asg, v, inputs: POINT
    Y = _graded_pair_theory(UU, objects, frule, crule, bound)
    return _graded_from_pairs(UU, _prune_skips(Y))


def _pr_tau_fibre(V, X, ar, lay, asg, lam):
    """Sections over boundary refinements: per refinement a middle-layer
    label over the degree plus a fibre element of X over it."""
    ak = canonical_key(ar)
    k = ar.top
    us = [asg[("c", i)][0] for i in range(k + 1)]
    sigs = [dict(asg[("c", i)][1]) for i in range(k + 1)]
    omegas = list(product(*[V.objects.get(u, ()) for u in us]))
    options = []
    for om in omegas:
        vcols = tuple((us[i], om[i]) for i in range(k + 1))
        xcols = tuple(((us[i], om[i]), sigs[i][om[i]]) for i in range(k + 1))
        opts = [
            (w, z)
            for w in V.fibre(1, ak, (vcols,), lam)
            for z in X.fibre(1, ak, (xcols,), (lam, w))
        ]
        if not opts:
            return ()
        options.append(opts)
    return tuple(tuple(zip(omegas, ch)) for ch in product(*options))


def _pr_compat(V, X, ar, lay, asg):
    """Singleton exactly when every boundary refinement composes
    consistently on both layers and lands on the target's section."""
    us = [asg[("c", i)][0] for i in range(lay.colour_count)]
    sigs = [dict(asg[("c", i)][1]) for i in range(lay.colour_count)]
    ak2 = canonical_key(ar)
    tat = lay.atom(lay.target_addr)
    chain_atoms = [lay.atom(ad) for ad in lay.chain_addrs]
    for Om in product(*[V.objects.get(u, ()) for u in us]):
        vasg = {("c", i): (us[i], Om[i]) for i in range(lay.colour_count)}
        ventry = V.composition.get((ak2, lower_key(lay, vasg.__getitem__)))
        xasg = {("c", i): ((us[i], Om[i]), sigs[i][Om[i]]) for i in range(lay.colour_count)}
        xentry = X.composition.get((ak2, lower_key(lay, xasg.__getitem__)))
        if ventry is None or xentry is None:
            return ()
        vins, xins = [], []
        ok = True
        for at in chain_atoms:
            lam_at, tau_at = asg[at.address]
            wz = dict(tau_at).get(tuple(Om[a[1]] for a in at.spec.colours))
            if wz is None:
                ok = False
                break
            vins.append((lam_at, wz[0]))
            xins.append(((lam_at, wz[0]), wz[1]))
        if not ok:
            return ()
        vout = ventry.get(tuple(vins))
        xout = xentry.get(tuple(xins))
        if vout is None or xout is None:
            return ()
        _, tau_t = asg[lay.target_addr]
        if dict(tau_t).get(tuple(Om[a[1]] for a in tat.spec.colours)) != (vout[1], xout[1]):
            return ()
    return (POINT,)


# ---------------------------------------------------------------------------
# convolution


def convolve(X, Y, bound=None):
    """Combine two gradings over a common base into a grading over the
    corepresented pair base of the terminal grading on X's objects.

    A pull-push composite: regrade X over that pair base, pull Y back to
    it, and take the right push of the pulled-back grading along the
    regraded one; only the final step raises the dimension.
    """
    U = X.base
    if Y.base != U:
        raise ValueError("convolution needs a shared grading base")
    m = U.n
    if m > 1:
        raise ValueError("convolution is tabulated for bases of dimension <= 1")
    if m == 0:
        Tm = terminal_graded(U, bound=bound)
    else:
        Tm = terminal_graded(U, {u: X.objects.get(u, ()) for u in U.label_set(0)}, bound=bound)
    XP, _ = to_projection(X)
    TT, pT = to_projection(Tm)
    if m == 0:
        r = morphism_from_maps(XP, TT, lambda e: (e[0], POINT))
    else:
        r = morphism_from_maps(XP, TT, lambda c: c, lambda d, ak, sk, tk, l: (l[0], POINT))
    Xr = from_projection(XP, r)
    A = pullback(pT, Y, bound)
    B = push_left(Tm, Xr)
    BP, _ = to_projection(B)
    Rm = morphism_from_maps(BP, TT, lambda c: c[1][0], lambda d, ak, sk, tk, l: l[1][0])
    W = from_projection(BP, Rm)
    _, qW = to_projection(W)
    RA = pullback(qW, A, bound)
    return push_right(W, RA, bound)


# ---------------------------------------------------------------------------
# algebras of a corepresented presentation


def _colour_systems(U, budget):
    """All object systems with at most ``budget`` names in total."""
    cols = U.label_set(0)
    out = []
    for sizes in product(range(budget + 1), repeat=len(cols)):
        if not 0 < sum(sizes) <= budget:
            continue
        out.append({u: tuple(f"a{i}" for i in range(s)) for u, s in zip(cols, sizes) if s})
    return out


def enumerate_algebras(U, V, budget=2, colours=None, bound=None):
    """Pairs (colour system, morphism) presenting algebras: refine U's
    colours by the system and enumerate strict morphisms into V."""
    systems = [dict(colours)] if colours is not None else _colour_systems(U, budget)
    out = []
    for sys_ in systems:
        T = detheorize_T(U, sys_)
        for F in enumerate_morphisms(T, V, bound):
            out.append((sys_, F))
    return out


@dataclass(frozen=True)
class AlgebraPresentation:
    """An action of a corepresented presentation on indexed sets.

    For a two-dimensional ``over``: ``objects`` maps colours to tuples,
    ``fibres`` maps (unary arity key, pair colour boundary, degree) to
    tuples, and ``action`` maps (binary arity key, pair colours, chain
    degrees, target degree, top label) to dicts from input element
    tuples to output elements.  For a one-dimensional ``over``:
    ``fibres`` maps colours to tuples and ``action`` maps (unary arity
    key, colours including the forced output colour) to input/output
    dicts; ``objects`` is unused.
    """

    over: TheoryPresentation
    objects: dict
    fibres: dict
    action: dict


def _degree_monoid(W, bound=None):
    """Reconstruct the elements-and-composition core of a
    one-dimensional presentation with singleton-or-empty tables."""
    if W.n != 1:
        raise ValueError("needs a one-dimensional presentation")
    bound = W.arity_bound if bound is None else bound
    cols = W.label_set(0)
    comp = {}
    for P in enumerate_arities(1, bound, W.variance):
        ak = canonical_key(P)
        entry = {}
        for ins in product(cols, repeat=P.top):
            outs = [u for u in cols if W.label_set(1, ak, (ins + (u,),))]
            if len(outs) == 1:
                entry[ins] = outs[0]
        if P.top == 0 and not entry:
            continue
        comp[(ak, ())] = entry
    return TheoryPresentation(0, W.variance, 0, W.arity_bound, {}, {DIM0_KEY: cols}, comp)


def _algebra_pair_1(alg, bound):
    W = alg.over
    bound = W.arity_bound if bound is None else bound
    B = _degree_monoid(W, bound)
    elems = tuple((u, xi) for u in W.label_set(0) for xi in alg.fibres.get(u, ()))
    comp = {}
    for P in enumerate_arities(1, bound, W.variance):
        ak = canonical_key(P)
        bentry = B.composition.get((ak, ()))
        if bentry is None:
            continue
        entry = {}
        for ins in product(elems, repeat=P.top):
            us = tuple(e[0] for e in ins)
            u_out = bentry.get(us)
            if u_out is None:
                continue
            out = alg.action.get((ak, us + (u_out,)), {}).get(tuple(e[1] for e in ins))
            if out is not None:
                entry[ins] = (u_out, out)
        comp[(ak, ())] = entry
    Y = TheoryPresentation(0, W.variance, 0, W.arity_bound, {}, {DIM0_KEY: elems}, comp)
    return Y, TheoryMorphism(Y, B, {0: {DIM0_KEY: {e: e[0] for e in elems}}})


def _algebra_pair_2(alg, bound):
    W = alg.over
    bound = W.arity_bound if bound is None else bound
    cols = tuple((u, x) for u in W.label_set(0) for x in alg.objects.get(u, ()))
    strata = {0: {DIM0_KEY: cols}, 1: {}}
    top = {}
    actions = {0: {DIM0_KEY: {c: c[0] for c in cols}}, 1: {}, 2: {}}
    Y = TheoryPresentation(2, W.variance, 2, W.arity_bound, strata, top, {})
    for a in enumerate_arities(1, bound, W.variance):
        ak = canonical_key(a)
        for pc in product(cols, repeat=a.top + 1):
            base_cols = tuple(c[0] for c in pc)
            labs = tuple(
                (lam, xi)
                for lam in W.label_set(1, ak, (base_cols,))
                for xi in alg.fibres.get((ak, pc, lam), ())
            )
            strata[1][(ak, (pc,))] = labs
            actions[1][(ak, (pc,))] = {lab: lab[0] for lab in labs}
    for a in enumerate_arities(2, bound, W.variance):
        lay = layout(a)
        ak = canonical_key(a)
        for asg in boundary_assignments(Y, lay):
            wkey = whole_key(lay, lambda ad: asg[ad][0])
            skey = whole_key(lay, asg.__getitem__)
            okey = tuple(asg[("c", i)] for i in range(lay.colour_count))
            lchain = tuple(asg[ad][0] for ad in lay.chain_addrs)
            xins = tuple(asg[ad][1] for ad in lay.chain_addrs)
            lam_t, xi_t = asg[lay.target_addr]
            labs = tuple(
                mu
                for mu in W.label_set(2, ak, wkey)
                if alg.action.get((ak, okey, lchain, lam_t, mu), {}).get(xins) == xi_t
            )
            top[(ak, skey)] = labs
            actions[2][(ak, skey)] = {mu: mu for mu in labs}
    for P in enumerate_arities(3, bound, W.variance):
        lay = layout(P)
        ak = canonical_key(P)
        for asg in boundary_assignments(Y, lay, top_level=1):
            wentry = W.composition.get((ak, lower_key(lay, lambda ad: asg[ad][0])))
            if wentry is None:
                continue
            sets = [
                Y.label_set(2, canonical_key(lay.atom(ad).spec.arity), atom_key(lay.atom(ad).spec, asg.__getitem__))
                for ad in lay.chain_addrs
            ]
            entry = {}
            for ins in product(*sets):
                entry[ins] = wentry[ins]
            Y.composition[(ak, lower_key(lay, asg.__getitem__))] = entry
    return Y, TheoryMorphism(Y, W, actions)


def algebra_pair(alg, bound=None):
    """The pair theory of an algebra with its degree projection.

    Independent of the graded route: the pair theory lives one
    dimension above the acting presentation's base and reads the action
    tables directly.
    """
    if alg.over.n == 2:
        return _algebra_pair_2(alg, bound)
    if alg.over.n == 1:
        return _algebra_pair_1(alg, bound)
    raise ValueError("algebra presentations cover acting dimensions 1 and 2")


def validate_algebra(alg, bound=None):
    Y, q = algebra_pair(alg, bound)
    return _pair_report(Y, q, bound)


# ---------------------------------------------------------------------------
# bounded enumeration of presentations (for the counting theorems)


def enumerate_graded_presentations(U, objects, cap, bound=None):
    """All graded candidates over a one-dimensional base with the given
    objects and fibre sizes up to ``cap`` (composition degrees forced by
    the base, fibre outputs free); filter with :func:`validate_graded`.
    """
    if U.n == 0:
        yield from _enumerate_graded_0(U, cap, bound)
        return
    if U.n != 1:
        raise ValueError("implemented for bases of dimension <= 1")
    bound = U.arity_bound if bound is None else bound
    pairs = tuple((u, x) for u in U.label_set(0) for x in objects.get(u, ()))
    keyset, slots = [], []
    for a in enumerate_arities(1, bound, U.variance):
        ak = canonical_key(a)
        for pc in product(pairs, repeat=a.top + 1):
            keyset.append((ak, (pc,)))
            bcols = tuple(c[0] for c in pc)
            for v in U.label_set(1, ak, (bcols,)):
                slots.append((ak, (pc,), v))
    comp_shapes = []
    for P in enumerate_arities(2, bound, U.variance):
        lay = layout(P)
        ak2 = canonical_key(P)
        for pcols in product(pairs, repeat=lay.colour_count):
            asg = {("c", i): c for i, c in enumerate(pcols)}
            bentry = U.composition.get((ak2, (tuple(c[0] for c in pcols), ())))
            if bentry is None:
                continue
            chain = [
                (canonical_key(lay.atom(ad).spec.arity), atom_key(lay.atom(ad).spec, asg.__getitem__))
                for ad in lay.chain_addrs
            ]
            tat = lay.atom(lay.target_addr)
            comp_shapes.append((
                (ak2, (pcols, ())),
                chain,
                (canonical_key(tat.spec.arity), atom_key(tat.spec, asg.__getitem__)),
                bentry,
            ))
    for sizes in product(range(cap + 1), repeat=len(slots)):
        top = {key: {} for key in keyset}
        for (ak, gk, v), s in zip(slots, sizes):
            top[(ak, gk)][v] = tuple(f"m{i}" for i in range(s))
        entry_slots, comp_keys, dead = [], [], False
        for key, chain, (tak, tgk), bentry in comp_shapes:
            comp_keys.append(key)
            csets = [
                [(v, y) for v, ys in top.get((cak, cgk), {}).items() for y in ys]
                for cak, cgk in chain
            ]
            for ins in product(*csets):
                vout = bentry[tuple(e[0] for e in ins)]
                tfib = top.get((tak, tgk), {}).get(vout, ())
                if not tfib:
                    dead = True
                    break
                entry_slots.append((key, ins, vout, tfib))
            if dead:
                break
        if dead:
            continue
        for choice in product(*[tfib for *_, tfib in entry_slots]):
            comp = {key: {} for key in comp_keys}
            for (key, ins, vout, _), y in zip(entry_slots, choice):
                comp[key][ins] = (vout, y)
            yield GradedTheoryPresentation(U, dict(objects), {}, dict(top), comp)


def _enumerate_graded_0(U, cap, bound):
    """Graded candidates over a 0-dimensional base: element fibres up
    to ``cap`` with composites forced in degree and free in the fibre."""
    bound = U.arity_bound if bound is None else bound
    elems = U.label_set(0)
    shapes = [
        (canonical_key(P), P.top, U.composition.get((canonical_key(P), ())))
        for P in enumerate_arities(1, bound, U.variance)
    ]
    for sizes in product(range(cap + 1), repeat=len(elems)):
        fib = {a: tuple(f"m{i}" for i in range(s)) for a, s in zip(elems, sizes)}
        pairs = tuple((a, x) for a in elems for x in fib[a])
        entry_slots, comp_keys, dead = [], [], False
        for ak, top, bentry in shapes:
            if bentry is None:
                continue
            comp_keys.append((ak, ()))
            for ins in product(pairs, repeat=top):
                vout = bentry[tuple(e[0] for e in ins)]
                if not fib[vout]:
                    dead = True
                    break
                entry_slots.append(((ak, ()), ins, vout, fib[vout]))
            if dead:
                break
        if dead:
            continue
        for choice in product(*[tf for *_, tf in entry_slots]):
            comp = {key: {} for key in comp_keys}
            for (key, ins, vout, _), y in zip(entry_slots, choice):
                comp[key][ins] = (vout, y)
            yield GradedTheoryPresentation(U, {}, {}, {DIM0_KEY: fib}, comp)


def _enumerate_algebras_1(W, cap, bound):
    """Algebra candidates over a one-dimensional acting presentation:
    fibres over its colours plus one total map per forced boundary."""
    bound = W.arity_bound if bound is None else bound
    cols = W.label_set(0)
    B = _degree_monoid(W, bound)
    shapes = [
        (canonical_key(P), P.top, B.composition.get((canonical_key(P), ())))
        for P in enumerate_arities(1, bound, W.variance)
    ]
    for sizes in product(range(cap + 1), repeat=len(cols)):
        fibres = {u: tuple(f"m{i}" for i in range(s)) for u, s in zip(cols, sizes)}
        keys, options, dead = [], [], False
        for ak, top, bentry in shapes:
            if bentry is None:
                continue
            for us in product(cols, repeat=top):
                u_out = bentry.get(us)
                if u_out is None:
                    continue
                dom = list(product(*[fibres[u] for u in us]))
                cod = fibres[u_out]
                if dom and not cod:
                    dead = True
                    break
                keys.append((ak, us + (u_out,)))
                options.append(
                    [dict(zip(dom, outs)) for outs in product(cod, repeat=len(dom))]
                    if dom
                    else [{}]
                )
            if dead:
                break
        if dead:
            continue
        for combo in product(*options):
            yield AlgebraPresentation(W, {}, fibres, dict(zip(keys, combo)))


def enumerate_algebra_presentations(W, objects, cap, bound=None):
    """All algebra candidates over a two-dimensional acting presentation
    with the given objects and fibre sizes up to ``cap`` (one total
    action map per compatible boundary); filter with
    :func:`validate_algebra`."""
    if W.n == 1:
        yield from _enumerate_algebras_1(W, cap, bound)
        return
    if W.n != 2:
        raise ValueError("implemented for acting dimensions 1 and 2")
    bound = W.arity_bound if bound is None else bound
    cols = tuple((u, x) for u in W.label_set(0) for x in objects.get(u, ()))
    fslots = []
    for a in enumerate_arities(1, bound, W.variance):
        ak = canonical_key(a)
        for pc in product(cols, repeat=a.top + 1):
            bcols = tuple(c[0] for c in pc)
            for lam in W.label_set(1, ak, (bcols,)):
                fslots.append((ak, pc, lam))
    shapes = []
    for a in enumerate_arities(2, bound, W.variance):
        lay = layout(a)
        ak2 = canonical_key(a)
        for pcols in product(cols, repeat=lay.colour_count):
            pasg = {("c", i): c for i, c in enumerate(pcols)}
            atoms = [lay.atom(ad) for ad in lay.chain_addrs] + [lay.atom(lay.target_addr)]
            infos = []
            for at in atoms:
                cak = canonical_key(at.spec.arity)
                pck = tuple(pasg[a2] for a2 in at.spec.colours)
                infos.append((at.address, cak, pck, W.label_set(1, cak, (tuple(e[0] for e in pck),))))
            for lams in product(*[info[3] for info in infos]):
                wasg = {("c", i): pcols[i][0] for i in range(lay.colour_count)}
                for (addr, _, _, _), lam in zip(infos, lams):
                    wasg[addr] = lam
                wkey = whole_key(lay, wasg.__getitem__)
                chainslots = [
                    (cak, pck, lam) for (_, cak, pck, _), lam in zip(infos[:-1], lams[:-1])
                ]
                tslot = (infos[-1][1], infos[-1][2], lams[-1])
                for mu in W.label_set(2, ak2, wkey):
                    shapes.append(((ak2, pcols, lams[:-1], lams[-1], mu), chainslots, tslot))
    for sizes in product(range(cap + 1), repeat=len(fslots)):
        fibres = {slot: tuple(f"m{i}" for i in range(s)) for slot, s in zip(fslots, sizes)}
        keys, options, dead = [], [], False
        for key, chainslots, tslot in shapes:
            dom = list(product(*[fibres.get(cs, ()) for cs in chainslots]))
            cod = fibres.get(tslot, ())
            if dom and not cod:
                dead = True
                break
            funcs = (
                [dict(zip(dom, outs)) for outs in product(cod, repeat=len(dom))]
                if dom
                else [{}]
            )
            keys.append(key)
            options.append(funcs)
        if dead:
            continue
        for combo in product(*options):
            yield AlgebraPresentation(W, dict(objects), fibres, dict(zip(keys, combo)))
