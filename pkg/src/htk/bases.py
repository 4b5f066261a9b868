"""Grading bases beyond finite sets, and one-dimensional theories over them.

A *base skeleton* here is a finite symmetric monoidal category whose
objects and morphisms decompose freely and uniquely into indecomposable
pieces.  We hard-wire that freeness into the representation: an object
is a sorted tuple of generator names, and a morphism is a sorted tuple
of *anchored components*, each an instance of an indecomposable
morphism recording exactly which source and target slots it occupies.
Decomposing a morphism is reading off its components; recomposing is
sorting them back together.  The freeness conditions thereby become
finite slot-bookkeeping checks (:func:`validate_base`).

Two skeletons are tabulated.  :func:`bord1_skeleton` has words of
oriented points as objects and path components of one-dimensional
bordisms (intervals and circles) as morphism components.
:func:`cocorr_fin_skeleton` has finite sets as objects and one-vertex
blocks of finite-set cospans as components.

A theory graded by such a base (:class:`BGradedOneTheory`) assigns
colour sets to the indecomposable objects and label sets to the
indecomposable morphisms at each boundary colouring; its operations can
consume *and* produce several colours at once.  Over the cospan base
this is exactly a coloured properad (:func:`properad_adapter`), and
over the bordism base every finite category yields such a theory
(:func:`zc_build`) whose degree-preserving points are enumerated by
:func:`field_theories`.

Implementation theorem (derived for this code base, checked in the
tests against independent enumeration): the field theories of the
theory built from a finite category C are in bijection with the
isomorphism arrows of C.  In particular their number equals the number
of objects of C exactly when every isomorphism in C is an identity.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement, islice, permutations, product

from .theory import ValidationReport, Violation

POINT = "•"


# ---------------------------------------------------------------------------
# finite categories (inputs for the bordism-graded construction)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CategoryPresentation:
    """A finite category as labelled hom tables.

    ``compose`` maps ``((x, y, z), (f, g))`` with ``f: x -> y`` and
    ``g: y -> z`` to the composite arrow ``x -> z``.
    """

    objects: tuple
    hom: dict
    identity: dict
    compose: dict


def validate_category(C):
    """Exhaustive identity/closure/associativity check on a finite category."""
    v = []
    for x in C.objects:
        i = C.identity.get(x)
        if i is None or i not in C.hom.get((x, x), ()):
            v.append(Violation("identity", (x, x), x, "identity arrow", i))
    arrows = [(x, y, f) for (x, y), fs in C.hom.items() for f in fs]
    for x, y, f in arrows:
        for z in C.objects:
            for g in C.hom.get((y, z), ()):
                if ((x, y, z), (f, g)) not in C.compose:
                    v.append(Violation("closure", (x, y, z), (f, g), "composite", None))
                elif C.compose[((x, y, z), (f, g))] not in C.hom.get((x, z), ()):
                    v.append(
                        Violation(
                            "typing", (x, y, z), (f, g), "arrow in hom",
                            C.compose[((x, y, z), (f, g))],
                        )
                    )
    for x, y, f in arrows:
        ix, iy = C.identity.get(x), C.identity.get(y)
        if ix is not None and C.compose.get(((x, x, y), (ix, f))) != f:
            v.append(Violation("unit", (x, y), f, f, C.compose.get(((x, x, y), (ix, f)))))
        if iy is not None and C.compose.get(((x, y, y), (f, iy))) != f:
            v.append(Violation("unit", (x, y), f, f, C.compose.get(((x, y, y), (f, iy)))))
    if not v:
        for x, y, f in arrows:
            for z in C.objects:
                for g in C.hom.get((y, z), ()):
                    for w in C.objects:
                        for h in C.hom.get((z, w), ()):
                            lhs = C.compose[((x, z, w), (C.compose[((x, y, z), (f, g))], h))]
                            rhs = C.compose[((x, y, w), (f, C.compose[((y, z, w), (g, h))]))]
                            if lhs != rhs:
                                v.append(Violation("associativity", (x, y, z, w), (f, g, h), lhs, rhs))
    return ValidationReport("pass" if not v else "fail", tuple(v), ())


def category_from_tables(objects, hom, identity, compose):
    return CategoryPresentation(tuple(objects), dict(hom), dict(identity), dict(compose))


def unit_category():
    return category_from_tables(
        ("*",), {("*", "*"): ("id",)}, {"*": "id"}, {(("*", "*", "*"), ("id", "id")): "id"}
    )


def discrete_finite_category(k):
    obs = tuple(f"x{i}" for i in range(k))
    hom = {(a, b): (("id",) if a == b else ()) for a in obs for b in obs}
    comp = {((a, a, a), ("id", "id")): "id" for a in obs}
    return category_from_tables(obs, hom, {a: "id" for a in obs}, comp)


def codiscrete_category(k):
    """Exactly one arrow between any ordered pair of objects."""
    obs = tuple(f"x{i}" for i in range(k))
    hom = {(a, b): ((a, b),) for a in obs for b in obs}
    comp = {((a, b, c), ((a, b), (b, c))): (a, c) for a in obs for b in obs for c in obs}
    return category_from_tables(obs, hom, {a: (a, a) for a in obs}, comp)


def walking_arrow():
    obs = ("a", "b")
    hom = {("a", "a"): ("id",), ("b", "b"): ("id",), ("a", "b"): ("f",), ("b", "a"): ()}
    comp = {
        (("a", "a", "a"), ("id", "id")): "id",
        (("b", "b", "b"), ("id", "id")): "id",
        (("a", "a", "b"), ("id", "f")): "f",
        (("a", "b", "b"), ("f", "id")): "f",
    }
    return category_from_tables(obs, hom, {"a": "id", "b": "id"}, comp)


def walking_idempotent():
    hom = {("*", "*"): ("id", "e")}
    comp = {
        (("*", "*", "*"), ("id", "id")): "id",
        (("*", "*", "*"), ("id", "e")): "e",
        (("*", "*", "*"), ("e", "id")): "e",
        (("*", "*", "*"), ("e", "e")): "e",
    }
    return category_from_tables(("*",), hom, {"*": "id"}, comp)


def cyclic_group_category(k):
    """The cyclic group of order k as a one-object category."""
    hom = {("*", "*"): tuple(range(k))}
    comp = {(("*", "*", "*"), (a, b)): (a + b) % k for a in range(k) for b in range(k)}
    return category_from_tables(("*",), hom, {"*": 0}, comp)


def chain_category(k):
    """The poset 0 < 1 < ... < k-1 as a category."""
    obs = tuple(f"x{i}" for i in range(k))
    hom = {(obs[i], obs[j]): (((i, j),) if i <= j else ()) for i in range(k) for j in range(k)}
    comp = {
        ((obs[i], obs[j], obs[l]), ((i, j), (j, l))): (i, l)
        for i in range(k)
        for j in range(i, k)
        for l in range(j, k)
    }
    return category_from_tables(obs, hom, {obs[i]: (i, i) for i in range(k)}, comp)


def enumerate_categories(max_obj, max_arrows, hom_cap=None):
    """Yield every labelled finite category within the given size box.

    Objects are ``x0..x{k-1}``; arrow labels are positional.  The
    composition table is filled by backtracking with incremental
    associativity pruning; identity composites are forced up front.
    ``hom_cap`` bounds each individual hom-set (without it, a single
    large endomorphism monoid makes the table space astronomical).
    """
    for k in range(1, max_obj + 1):
        obs = tuple(f"x{i}" for i in range(k))
        slots = [(a, b) for a in obs for b in obs]
        base = k  # identities
        cap = hom_cap if hom_cap is not None else max_arrows

        def profiles(i, left):
            if i == len(slots):
                yield ()
                return
            a, b = slots[i]
            lo = 1 if a == b else 0
            for n in range(lo, min(cap, lo + left) + 1):
                for rest in profiles(i + 1, left - (n - lo)):
                    yield (n,) + rest

        for prof in profiles(0, max_arrows - base):
            hom = {}
            for (a, b), n in zip(slots, prof):
                hom[(a, b)] = tuple(("a", a, b, m) for m in range(n))
            ident = {a: ("a", a, a, 0) for a in obs}
            arrows = [(x, y, f) for (x, y), fs in hom.items() for f in fs]
            comp = {}
            free = []
            for x, y, f in arrows:
                for z in obs:
                    for g in hom[(y, z)]:
                        if f == ident[x]:
                            comp[((x, y, z), (f, g))] = g
                        elif g == ident[z]:
                            comp[((x, y, z), (f, g))] = f
                        else:
                            free.append(((x, y, z), (f, g)))

            def assoc_ok(comp):
                for x, y, f in arrows:
                    for z in obs:
                        for g in hom[(y, z)]:
                            fg = comp.get(((x, y, z), (f, g)))
                            if fg is None:
                                continue
                            for w in obs:
                                for h in hom[(z, w)]:
                                    gh = comp.get(((y, z, w), (g, h)))
                                    l = comp.get(((x, z, w), (fg, h)))
                                    if gh is None:
                                        continue
                                    r = comp.get(((x, y, w), (f, gh)))
                                    if l is not None and r is not None and l != r:
                                        return False
                return True

            def fill(i):
                if i == len(free):
                    yield category_from_tables(obs, hom, ident, comp)
                    return
                (x, y, z), (f, g) = free[i]
                for h in hom[(x, z)]:
                    comp[((x, y, z), (f, g))] = h
                    if assoc_ok(comp):
                        yield from fill(i + 1)
                    del comp[((x, y, z), (f, g))]

            yield from fill(0)


# ---------------------------------------------------------------------------
# base skeletons with free decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BasePresentation:
    """A finite monoidal skeleton in canonical free-decomposition form.

    ``objects`` are sorted tuples over ``ind_objects``.  A morphism is a
    sorted tuple of anchored components ``(kind, src_slots, tgt_slots)``.
    ``ind_morphisms`` maps the detached shape of a single component to
    its (source object, target object) signature.  ``compose`` maps
    ``((a, b, c), (f, g))`` with ``f: a -> b``, ``g: b -> c`` to the
    composite, and is partial where the composite leaves the tabulated
    bounds.
    """

    ind_objects: tuple
    objects: tuple
    morphisms: dict
    ind_morphisms: dict
    identity: dict
    compose: dict


def detached_shape(src_obj, tgt_obj, comp):
    """The indecomposable shape of an anchored component."""
    kind, ss, ts = comp
    if kind == "c":
        return ("c", len(ss), len(ts))
    return (kind, tuple(src_obj[i] for i in ss), tuple(tgt_obj[j] for j in ts))


def tensor_objects(o1, o2):
    """Merge two objects; returns the merge and both slot relocations."""
    tagged = [(s, 0, i) for i, s in enumerate(o1)] + [(s, 1, j) for j, s in enumerate(o2)]
    tagged.sort(key=lambda t: t[0])
    obj = tuple(s for s, _, _ in tagged)
    pos = {(side, i): p for p, (_, side, i) in enumerate(tagged)}
    return obj, pos


def tensor_morphisms(src1, tgt1, f1, src2, tgt2, f2):
    """Disjoint union of two morphisms with slots relocated into the merge."""
    src, spos = tensor_objects(src1, src2)
    tgt, tpos = tensor_objects(tgt1, tgt2)

    def move(side, comp):
        kind, ss, ts = comp
        return (
            kind,
            tuple(sorted(spos[(side, i)] for i in ss)),
            tuple(sorted(tpos[(side, j)] for j in ts)),
        )

    comps = [move(0, c) for c in f1] + [move(1, c) for c in f2]
    return src, tgt, tuple(sorted(comps))


# -- oriented points and one-dimensional bordisms ---------------------------


def _flow(side, sym):
    """Whether an interval end at a boundary slot is an inflow or outflow.

    ``side`` is "s" for the morphism's source boundary, "t" for its
    target; the orientation symbol of the point decides the direction.
    """
    if side == "s":
        return "in" if sym == "u" else "out"
    return "out" if sym == "u" else "in"


def _interval_ends(src_obj, tgt_obj, comp):
    """The (inflow, outflow) ends of an interval component.

    Each end is ``(side, slot)`` with side "s" or "t".  Returns None
    for components that do not have exactly one end of each direction.
    """
    ine = oute = None
    for side, obj, slots in (("s", src_obj, comp[1]), ("t", tgt_obj, comp[2])):
        for i in slots:
            if _flow(side, obj[i]) == "in":
                if ine is not None:
                    return None
                ine = (side, i)
            else:
                if oute is not None:
                    return None
                oute = (side, i)
    if ine is None or oute is None:
        return None
    return ine, oute


def _bord_chains(a, b, c, f, g):
    """Trace the intervals of a two-layer bordism composite.

    Returns ``(chains, loops)``.  A chain is a flow-ordered list of
    ``(owner, comp, in_port, out_port)`` starting and ending on the
    outer boundary; ports are ``("a", i)``, ``("b", i)`` or ``("c", i)``.
    Loops are the closed cycles created in the middle.
    """

    def port(owner, side, i):
        if owner == "f":
            return ("a", i) if side == "s" else ("b", i)
        return ("b", i) if side == "s" else ("c", i)

    nodes = []
    by_in = {}
    for owner, (so, to), mor in (("f", (a, b), f), ("g", (b, c), g)):
        for comp in mor:
            if comp[0] != "i":
                continue
            ends = _interval_ends(so, to, comp)
            ine, oute = ends
            node = (owner, comp, port(owner, *ine), port(owner, *oute))
            nodes.append(node)
            by_in[node[2]] = node

    chains, loops, seen = [], [], set()

    def walk(node):
        path = []
        while id(node) not in seen:
            seen.add(id(node))
            path.append(node)
            nxt = by_in.get(node[3])
            if nxt is None:
                return path, False
            node = nxt
        return path, True

    for node in nodes:
        if id(node) in seen or node[2][0] == "b":
            continue
        path, closed = walk(node)
        chains.append(path)
    for node in nodes:
        if id(node) not in seen:
            path, _ = walk(node)
            loops.append(path)
    return chains, loops


@lru_cache(maxsize=None)
def bord1_skeleton(max_points=2, max_circles=1):
    """Oriented point-words and their interval/circle matchings.

    Objects are sorted words over the two orientations "d"/"u" with at
    most ``max_points`` letters.  A morphism is a perfect pairing of
    inflow ends with outflow ends (each pair an interval), together with
    up to ``max_circles`` free circles; composition follows the paths
    through the shared boundary and counts newly closed loops as
    circles, and is omitted where the circle count leaves the bound.
    """
    syms = ("d", "u")
    objects = tuple(
        obj
        for n in range(max_points + 1)
        for obj in combinations_with_replacement(syms, n)
    )
    circ = ("o", (), ())

    morphisms = {}
    for src in objects:
        for tgt in objects:
            ins = [("s", i) for i, s in enumerate(src) if _flow("s", s) == "in"]
            ins += [("t", j) for j, s in enumerate(tgt) if _flow("t", s) == "in"]
            outs = [("s", i) for i, s in enumerate(src) if _flow("s", s) == "out"]
            outs += [("t", j) for j, s in enumerate(tgt) if _flow("t", s) == "out"]
            found = set()
            if len(ins) == len(outs):
                for perm in permutations(outs):
                    comps = []
                    for (side1, i1), (side2, i2) in zip(ins, perm):
                        ss = tuple(sorted(i for s, i in ((side1, i1), (side2, i2)) if s == "s"))
                        ts = tuple(sorted(i for s, i in ((side1, i1), (side2, i2)) if s == "t"))
                        comps.append(("i", ss, ts))
                    for n in range(max_circles + 1):
                        found.add(tuple(sorted(comps + [circ] * n)))
            morphisms[(src, tgt)] = tuple(sorted(found))

    ind = {}
    for (s, t), ms in morphisms.items():
        for m in ms:
            if len(m) == 1:
                ind[detached_shape(s, t, m[0])] = (s, t)

    identity = {
        obj: tuple(sorted(("i", (i,), (i,)) for i in range(len(obj)))) for obj in objects
    }

    compose = {}
    for A in objects:
        for B in objects:
            for C in objects:
                for fm in morphisms[(A, B)]:
                    for gm in morphisms[(B, C)]:
                        chains, loops = _bord_chains(A, B, C, fm, gm)
                        circles = len(loops)
                        circles += sum(1 for x in fm if x[0] == "o")
                        circles += sum(1 for x in gm if x[0] == "o")
                        if circles > max_circles:
                            continue
                        comps = []
                        for path in chains:
                            ports = (path[0][2], path[-1][3])
                            ss = tuple(sorted(i for tag, i in ports if tag == "a"))
                            ts = tuple(sorted(i for tag, i in ports if tag == "c"))
                            comps.append(("i", ss, ts))
                        h = tuple(sorted(comps + [circ] * circles))
                        compose[((A, B, C), (fm, gm))] = h
    return BasePresentation(syms, objects, morphisms, ind, identity, compose)


# -- finite sets and their cospans ------------------------------------------


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [part[i] + [first]] + part[i + 1 :]
        yield [[first]] + part


def _cospan_clusters(f, g):
    """Group the blocks of a two-layer cospan composite by connectivity.

    Returns a list of ``(f_indices, g_indices, result_component)``
    triples, one per element of the composed middle set.
    """
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    for i in range(len(f)):
        parent[("f", i)] = ("f", i)
    for j in range(len(g)):
        parent[("g", j)] = ("g", j)
    g_by_mid = {}
    for j, comp in enumerate(g):
        for m in comp[1]:
            g_by_mid[m] = j
    for i, comp in enumerate(f):
        for m in comp[2]:
            union(("f", i), ("g", g_by_mid[m]))

    clusters = {}
    for node in parent:
        clusters.setdefault(find(node), []).append(node)
    out = []
    for members in clusters.values():
        fi = tuple(sorted(i for side, i in members if side == "f"))
        gi = tuple(sorted(j for side, j in members if side == "g"))
        ss = tuple(sorted(s for i in fi for s in f[i][1]))
        ts = tuple(sorted(t for j in gi for t in g[j][2]))
        out.append((fi, gi, ("c", ss, ts)))
    out.sort(key=lambda t: t[2])
    return out


@lru_cache(maxsize=None)
def cocorr_fin_skeleton(bound=2):
    """Finite sets and iso-classes of cospans with a bounded middle set.

    A morphism from an s-element set to a t-element set is a partition
    of the s + t slots into blocks (one per middle element; blocks with
    no slots are allowed) with at most ``bound`` blocks in total.
    Composition glues along the shared set and merges connected blocks,
    and is omitted when the merged middle exceeds the bound.
    """
    objects = tuple(("pt",) * k for k in range(bound + 1))

    morphisms = {}
    for src in objects:
        for tgt in objects:
            items = [("s", i) for i in range(len(src))] + [("t", j) for j in range(len(tgt))]
            found = set()
            for part in _set_partitions(items):
                if len(part) > bound:
                    continue
                comps = []
                for block in part:
                    ss = tuple(sorted(i for side, i in block if side == "s"))
                    ts = tuple(sorted(j for side, j in block if side == "t"))
                    comps.append(("c", ss, ts))
                for e in range(bound - len(part) + 1):
                    found.add(tuple(sorted(comps + [("c", (), ())] * e)))
            morphisms[(src, tgt)] = tuple(sorted(found))

    ind = {}
    for (s, t), ms in morphisms.items():
        for m in ms:
            if len(m) == 1:
                ind[detached_shape(s, t, m[0])] = (s, t)

    identity = {
        obj: tuple(sorted(("c", (i,), (i,)) for i in range(len(obj)))) for obj in objects
    }

    compose = {}
    for A in objects:
        for B in objects:
            for C in objects:
                for fm in morphisms[(A, B)]:
                    for gm in morphisms[(B, C)]:
                        clusters = _cospan_clusters(fm, gm)
                        if len(clusters) > bound:
                            continue
                        h = tuple(sorted(comp for _, _, comp in clusters))
                        compose[((A, B, C), (fm, gm))] = h
    return BasePresentation(("pt",), objects, morphisms, ind, identity, compose)


def validate_base(B, assoc_cap=200_000):
    """Check the free-decomposition and category laws of a skeleton."""
    v = []
    genset = set(B.ind_objects)
    objset = set(B.objects)
    for obj in B.objects:
        if tuple(sorted(obj)) != obj or not set(obj) <= genset:
            v.append(Violation("object-form", obj, obj, "sorted generator word", obj))
    maxlen = max((len(o) for o in B.objects), default=0)
    for o1 in B.objects:
        for o2 in B.objects:
            if len(o1) + len(o2) <= maxlen and tensor_objects(o1, o2)[0] not in objset:
                v.append(Violation("object-closure", (o1, o2), tensor_objects(o1, o2)[0], "object", None))

    for (s, t), ms in B.morphisms.items():
        if len(set(ms)) != len(ms):
            v.append(Violation("unique-decomposition", (s, t), ms, "distinct morphisms", None))
        for m in ms:
            if tuple(sorted(m)) != m:
                v.append(Violation("canonical-form", (s, t), m, tuple(sorted(m)), m))
            used_s, used_t = [], []
            for comp in m:
                shape = detached_shape(s, t, comp)
                sig = B.ind_morphisms.get(shape)
                if sig is None:
                    v.append(Violation("component-shape", (s, t), comp, "indecomposable", shape))
                used_s.extend(comp[1])
                used_t.extend(comp[2])
            if sorted(used_s) != list(range(len(s))) or sorted(used_t) != list(range(len(t))):
                v.append(Violation("slot-partition", (s, t), m, "each slot once", (used_s, used_t)))

    for obj in B.objects:
        i = B.identity.get(obj)
        if i is None or i not in B.morphisms.get((obj, obj), ()):
            v.append(Violation("identity", (obj, obj), obj, "identity morphism", i))

    for ((a, b, c), (f, g)), h in B.compose.items():
        if (
            f not in B.morphisms.get((a, b), ())
            or g not in B.morphisms.get((b, c), ())
            or h not in B.morphisms.get((a, c), ())
        ):
            v.append(Violation("composition-typing", (a, b, c), (f, g), "tabulated morphisms", h))

    for (a, b), ms in B.morphisms.items():
        ia, ib = B.identity.get(a), B.identity.get(b)
        for f in ms:
            if ia is not None and B.compose.get(((a, a, b), (ia, f))) != f:
                v.append(Violation("unit", (a, b), f, f, B.compose.get(((a, a, b), (ia, f)))))
            if ib is not None and B.compose.get(((a, b, b), (f, ib))) != f:
                v.append(Violation("unit", (a, b), f, f, B.compose.get(((a, b, b), (f, ib)))))

    checked = 0
    for ((a, b, c), (f, g)), fg in B.compose.items():
        if checked > assoc_cap:
            break
        for d in B.objects:
            for k in B.morphisms.get((c, d), ()):
                gk = B.compose.get(((b, c, d), (g, k)))
                l = B.compose.get(((a, c, d), (fg, k)))
                if gk is None:
                    continue
                r = B.compose.get(((a, b, d), (f, gk)))
                checked += 1
                if l is not None and r is not None and l != r:
                    v.append(Violation("associativity", (a, b, c, d), (f, g, k), l, r))

    # monoidal closure: the slot-shifted union of two morphisms is tabulated,
    # except where its component count exceeds anything the bounded hom-set
    # tabulates (circles and empty blocks make the tables partial there)
    for (s1, t1), ms1 in B.morphisms.items():
        for (s2, t2), ms2 in B.morphisms.items():
            if len(s1) + len(s2) > maxlen or len(t1) + len(t2) > maxlen:
                continue
            for f1 in ms1[:2]:
                for f2 in ms2[:2]:
                    src, tgt, fm = tensor_morphisms(s1, t1, f1, s2, t2, f2)
                    pool = B.morphisms.get((src, tgt), ())
                    cap = max((len(m) for m in pool), default=0)
                    if fm not in pool and len(fm) <= cap:
                        v.append(Violation("tensor-closure", (src, tgt), (f1, f2), "morphism", fm))
    return ValidationReport("pass" if not v else "fail", tuple(v), ())


# ---------------------------------------------------------------------------
# theories graded by a base skeleton
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BGradedOneTheory:
    """Colour and label tables over a base skeleton.

    ``multimaps`` maps ``(shape, src_cols, tgt_cols)`` — an
    indecomposable morphism shape with a colouring of its boundary — to
    the tuple of operation labels of that degree.  ``composition`` is a
    rule ``(inst, (cols_a, cols_b, cols_c), labs_f, labs_g) -> labs_h``
    aligned with the base composite, intensional rather than tabulated
    because saturating it over all colourings is infeasible at the
    scales the enumeration checks require.  ``units`` optionally
    declares an identity label per ``(generator, colour)``.
    """

    base: BasePresentation
    colours: dict
    multimaps: dict
    composition: object = field(compare=False)
    units: dict = field(default_factory=dict)


def _component_key(src_obj, tgt_obj, cols_s, cols_t, comp):
    shape = detached_shape(src_obj, tgt_obj, comp)
    return (
        shape,
        tuple(cols_s[i] for i in comp[1]),
        tuple(cols_t[j] for j in comp[2]),
    )


def terminal_bgraded(B):
    """One colour per generator, one label everywhere."""
    colours = {g: ("*",) for g in B.ind_objects}
    multimaps = {}
    for shape, (so, to) in B.ind_morphisms.items():
        multimaps[(shape, ("*",) * len(so), ("*",) * len(to))] = (POINT,)

    def comp(inst, cols, lf, lg):
        h = B.compose.get(inst)
        if h is None:
            return None
        return (POINT,) * len(h)

    units = {(g, "*"): POINT for g in B.ind_objects}
    return BGradedOneTheory(B, colours, multimaps, comp, units)


def bgraded_validate(B, X, colour_cap=200, label_cap=200, assoc_cap=2000):
    """Typing, closure, unit and associativity report for a graded theory."""
    v = []
    warnings = []
    if set(X.colours) != set(B.ind_objects):
        v.append(Violation("colour-keys", None, set(X.colours), set(B.ind_objects), set(X.colours)))
        return ValidationReport("fail", tuple(v), ())

    expected_keys = set()
    for shape, (so, to) in B.ind_morphisms.items():
        for cs in product(*(X.colours[s] for s in so)):
            for ct in product(*(X.colours[t] for t in to)):
                expected_keys.add((shape, cs, ct))
    missing = expected_keys - set(X.multimaps)
    stray = set(X.multimaps) - expected_keys
    for key in sorted(missing, key=repr):
        v.append(Violation("multimap-domain", key, key, "entry", None))
    for key in sorted(stray, key=repr):
        v.append(Violation("multimap-domain", key, key, None, "stray entry"))
    if v:
        return ValidationReport("fail", tuple(v), ())

    def families(src, tgt, cs, ct, mor):
        sets = [X.multimaps[_component_key(src, tgt, cs, ct, comp)] for comp in mor]
        if any(not s for s in sets):
            return None
        return product(*sets)

    for inst, h in B.compose.items():
        (a, b, c), (f, g) = inst
        colit = product(
            product(*(X.colours[s] for s in a)),
            product(*(X.colours[s] for s in b)),
            product(*(X.colours[s] for s in c)),
        )
        for ca, cb, cc in islice(colit, colour_cap):
            ff = families(a, b, ca, cb, f)
            gf = families(b, c, cb, cc, g)
            if ff is None or gf is None:
                continue
            for lf, lg in islice(product(ff, gf), label_cap):
                out = X.composition(inst, (ca, cb, cc), lf, lg)
                if out is None or len(out) != len(h):
                    v.append(Violation("composition-shape", inst, (ca, cb, cc, lf, lg), len(h), out))
                    continue
                for comp, lab in zip(h, out):
                    if lab not in X.multimaps[_component_key(a, c, ca, cc, comp)]:
                        v.append(Violation("composition-typing", inst, (comp, lab), "label of degree", lab))

    checked = 0
    for inst, fg in B.compose.items():
        if checked > assoc_cap:
            break
        (a, b, c), (f, g) = inst
        for d in B.objects:
            for k in B.morphisms.get((c, d), ()):
                gk = B.compose.get(((b, c, d), (g, k)))
                if gk is None or ((a, c, d), (fg, k)) not in B.compose:
                    continue
                if ((a, b, d), (f, gk)) not in B.compose:
                    continue
                colit = product(
                    product(*(X.colours[s] for s in a)),
                    product(*(X.colours[s] for s in b)),
                    product(*(X.colours[s] for s in c)),
                    product(*(X.colours[s] for s in d)),
                )
                for ca, cb, cc, cd in islice(colit, 4):
                    ff = families(a, b, ca, cb, f)
                    gf = families(b, c, cb, cc, g)
                    kf = families(c, d, cc, cd, k)
                    if ff is None or gf is None or kf is None:
                        continue
                    for lf, lg, lk in islice(product(ff, gf, kf), 4):
                        checked += 1
                        lfg = X.composition(inst, (ca, cb, cc), lf, lg)
                        lgk = X.composition(((b, c, d), (g, k)), (cb, cc, cd), lg, lk)
                        if lfg is None or lgk is None:
                            continue
                        lhs = X.composition(((a, c, d), (fg, k)), (ca, cc, cd), lfg, lk)
                        rhs = X.composition(((a, b, d), (f, gk)), (ca, cb, cd), lf, lgk)
                        if lhs != rhs:
                            v.append(Violation("associativity", (a, b, c, d), (f, g, k), lhs, rhs))

    if not X.units:
        warnings = ("no unit declared",)
    else:
        for (g, x), u in X.units.items():
            idm = B.identity.get((g,))
            if idm is None or len(idm) != 1:
                continue
            key = _component_key((g,), (g,), (x,), (x,), idm[0])
            if u not in X.multimaps.get(key, ()):
                v.append(Violation("unit", key, u, "declared unit in tables", u))
    return ValidationReport("pass" if not v else "fail", tuple(v), tuple(warnings))


# ---------------------------------------------------------------------------
# coloured properads over the cospan base
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProperadTables:
    """Multi-input multi-output operation tables over a colour set.

    ``operations`` maps ``(in_cols, out_cols)`` to labels.
    ``compose_rule(fparts, gparts, out_sig)`` gives the label of a
    merged block from the labelled parts of its two layers; parts are
    ``(in_cols, out_cols, label)`` triples.
    """

    colours: tuple
    operations: dict
    compose_rule: object = field(compare=False)
    units: dict = field(default_factory=dict)


def terminal_properad(bound=2):
    ops = {
        (("*",) * s, ("*",) * t): (POINT,)
        for s in range(bound + 1)
        for t in range(bound + 1)
    }
    return ProperadTables(("*",), ops, lambda fp, gp, sig: POINT, {"*": POINT})


def assoc_properad(bound=2):
    """One colour, one many-to-one operation in every positive input arity."""
    ops = {}
    for s in range(bound + 1):
        for t in range(bound + 1):
            ops[(("*",) * s, ("*",) * t)] = ("m",) if t == 1 and s >= 1 else ()

    def rule(fparts, gparts, sig):
        if len(sig[1]) == 1 and len(sig[0]) >= 1:
            return "m"
        return None

    return ProperadTables(("*",), ops, rule, {"*": "m"})


def properad_adapter(P, bound=2, base=None):
    """Read properad tables as a theory graded by the cospan skeleton.

    The degree of an operation with given inputs and outputs is the
    one-vertex cospan joining them; composition merges blocks through
    the shared set and delegates the merged label to the properad's own
    rule.
    """
    B = base if base is not None else cocorr_fin_skeleton(bound)
    colours = {"pt": tuple(P.colours)}
    multimaps = {}
    for shape, (so, to) in B.ind_morphisms.items():
        for cs in product(P.colours, repeat=len(so)):
            for ct in product(P.colours, repeat=len(to)):
                multimaps[(shape, cs, ct)] = tuple(P.operations.get((cs, ct), ()))

    def comp(inst, cols, lf, lg):
        (a, b, c), (f, g) = inst
        h = B.compose.get(inst)
        if h is None:
            return None
        ca, cb, cc = cols
        labelled = []
        for fi, gi, res in _cospan_clusters(f, g):
            fparts = tuple(
                (
                    tuple(ca[i] for i in f[k][1]),
                    tuple(cb[j] for j in f[k][2]),
                    lf[k],
                )
                for k in fi
            )
            gparts = tuple(
                (
                    tuple(cb[i] for i in g[k][1]),
                    tuple(cc[j] for j in g[k][2]),
                    lg[k],
                )
                for k in gi
            )
            sig = (tuple(ca[i] for i in res[1]), tuple(cc[j] for j in res[2]))
            lab = P.compose_rule(fparts, gparts, sig)
            if lab is None:
                return None
            labelled.append((res, lab))
        out = []
        pool = sorted(labelled, key=repr)
        for comp_h in h:
            for idx, (res, lab) in enumerate(pool):
                if res == comp_h:
                    out.append(lab)
                    del pool[idx]
                    break
            else:
                return None
        return tuple(out)

    units = {("pt", x): u for x, u in P.units.items()}
    return BGradedOneTheory(B, colours, multimaps, comp, units)


def properad_tables(X):
    """The inverse reading: recover properad tables from a graded theory."""
    B = X.base
    cols = tuple(X.colours.get("pt", ()))
    ops = {}
    for (shape, cs, ct), labs in X.multimaps.items():
        if shape[0] == "c":
            ops[(cs, ct)] = tuple(labs)

    def rule(fparts, gparts, sig):
        # lay the two layers out as base morphisms and delegate
        a = ("pt",) * sum(len(p[0]) for p in fparts)
        b = ("pt",) * sum(len(p[1]) for p in fparts)
        c = ("pt",) * len(sig[1])
        so = to = 0
        f = []
        for ic, oc, _ in fparts:
            f.append(("c", tuple(range(so, so + len(ic))), tuple(range(to, to + len(oc)))))
            so += len(ic)
            to += len(oc)
        so = to = 0
        g = []
        for ic, oc, _ in gparts:
            g.append(("c", tuple(range(so, so + len(ic))), tuple(range(to, to + len(oc)))))
            so += len(ic)
            to += len(oc)
        fm, gm = tuple(sorted(f)), tuple(sorted(g))
        inst = ((a, b, c), (fm, gm))
        if inst not in B.compose or len(B.compose[inst]) != 1:
            return None
        ca = tuple(x for ic, _, _ in fparts for x in ic)
        cb = tuple(x for _, oc, _ in fparts for x in oc)
        lf = tuple(lab for comp in fm for (icc, occ, lab) in [fparts[f.index(comp)]])
        lg = tuple(lab for comp in gm for (icc, occ, lab) in [gparts[g.index(comp)]])
        out = X.composition(inst, (ca, cb, sig[1]), lf, lg)
        return out[0] if out else None

    units = {x: u for (gname, x), u in X.units.items() if gname == "pt"}
    return ProperadTables(cols, ops, rule, units)


# ---------------------------------------------------------------------------
# a bordism-graded theory from a finite category
# ---------------------------------------------------------------------------


def _loop_classes(C):
    """Endomorphism arrows modulo swapping the order of a two-step loop.

    Set-level shadow of the trace construction: elements are pairs
    (object, endomorphism); whenever f: x -> y and g: y -> x, the loop
    read at x is identified with the loop read at y.  Returns a map
    from pairs to canonical class representatives.
    """
    items = [(x, e) for x in C.objects for e in C.hom.get((x, x), ())]
    parent = {i: i for i in items}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for x in C.objects:
        for y in C.objects:
            for f in C.hom.get((x, y), ()):
                for g in C.hom.get((y, x), ()):
                    gf = C.compose[((x, y, x), (f, g))]
                    fg = C.compose[((y, x, y), (g, f))]
                    a, b = find((x, gf)), find((y, fg))
                    if a != b:
                        parent[a] = b
    reps = {}
    for i in items:
        root = find(i)
        reps.setdefault(root, []).append(i)
    cls = {}
    for root, members in reps.items():
        rep = min(members, key=repr)
        for m in members:
            cls[m] = rep
    return cls


def zc_build(C, base=None, hochschild=False):
    """Grade a finite category by the one-dimensional bordism skeleton.

    Both orientations of a point carry the category's objects as
    colours; an interval carries the hom-set from the colour at its
    inflow end to the colour at its outflow end; a circle carries a
    single label, or the loop classes of the category when
    ``hochschild`` is set.  Composition is composition in the category
    along the flow of each path, with closed loops evaluated into the
    circle labels.
    """
    B = base if base is not None else bord1_skeleton(3, 1)
    obs = tuple(C.objects)
    cls = _loop_classes(C) if hochschild else None
    circ_labels = tuple(sorted(set(cls.values()), key=repr)) if hochschild else (POINT,)
    colours = {"d": obs, "u": obs}

    multimaps = {}
    for shape, (so, to) in B.ind_morphisms.items():
        if shape[0] == "o":
            multimaps[(shape, (), ())] = circ_labels
            continue
        ends = _interval_ends(so, to, ("i", tuple(range(len(so))), tuple(range(len(to)))))
        ine, oute = ends
        for cs in product(obs, repeat=len(so)):
            for ct in product(obs, repeat=len(to)):
                x = cs[ine[1]] if ine[0] == "s" else ct[ine[1]]
                y = cs[oute[1]] if oute[0] == "s" else ct[oute[1]]
                multimaps[(shape, cs, ct)] = tuple(C.hom.get((x, y), ()))

    def port_colour(cols, p):
        tag, i = p
        return cols[{"a": 0, "b": 1, "c": 2}[tag]][i]

    def comp(inst, cols, lf, lg):
        (a, b, c), (f, g) = inst
        h = B.compose.get(inst)
        if h is None:
            return None
        lab_of = {}
        circ_f, circ_g = [], []
        for comp_m, lab in zip(f, lf):
            (circ_f.append(lab) if comp_m[0] == "o" else lab_of.__setitem__(("f", comp_m), lab))
        for comp_m, lab in zip(g, lg):
            (circ_g.append(lab) if comp_m[0] == "o" else lab_of.__setitem__(("g", comp_m), lab))

        def fold(path):
            cur = None
            x0 = port_colour(cols, path[0][2])
            pos = x0
            for owner, comp_m, ip, op in path:
                lab = lab_of[(owner, comp_m)]
                y = port_colour(cols, op)
                if cur is None:
                    cur = lab
                else:
                    key = ((x0, pos, y), (cur, lab))
                    if key not in C.compose:
                        return None, None
                    cur = C.compose[key]
                pos = y
            return cur, (x0, pos)

        chains, loops = _bord_chains(a, b, c, f, g)
        interval_labels = {}
        for path in chains:
            lab, endpoints = fold(path)
            if lab is None:
                return None
            ports = (path[0][2], path[-1][3])
            ss = tuple(sorted(i for tag, i in ports if tag == "a"))
            ts = tuple(sorted(i for tag, i in ports if tag == "c"))
            interval_labels[("i", ss, ts)] = lab
        circles = list(circ_f) + list(circ_g)
        for path in loops:
            lab, endpoints = fold(path)
            if lab is None:
                return None
            if hochschild:
                circles.append(cls[(endpoints[0], lab)])
            else:
                circles.append(POINT)
        circles.sort(key=repr)
        out = []
        for comp_m in h:
            if comp_m[0] == "o":
                out.append(circles.pop(0))
            else:
                if comp_m not in interval_labels:
                    return None
                out.append(interval_labels[comp_m])
        return tuple(out)

    units = {}
    for g in ("d", "u"):
        for x in obs:
            units[(g, x)] = C.identity[x]
    return BGradedOneTheory(B, colours, multimaps, comp, units)


# ---------------------------------------------------------------------------
# field theories: degree-preserving points of a graded theory
# ---------------------------------------------------------------------------


def field_theories(Z, budget=1_000_000):
    """All degree- and unit-preserving morphisms from the terminal grading.

    A candidate is one colour per generator and one label per
    indecomposable morphism shape (at the induced colouring); it is kept
    when every tabulated base composition instance maps the induced
    label families to each other.  Raises RuntimeError past ``budget``
    examined candidates.
    """
    B = Z.base
    gens = tuple(B.ind_objects)
    shapes = sorted(B.ind_morphisms)

    id_shape = {}
    for g in gens:
        idm = B.identity.get((g,))
        if idm is not None and len(idm) == 1:
            id_shape[detached_shape((g,), (g,), idm[0])] = g

    insts = []
    for inst, h in B.compose.items():
        (a, b, c), (f, g) = inst
        insts.append(
            (
                inst,
                tuple(detached_shape(a, b, comp) for comp in f),
                tuple(detached_shape(b, c, comp) for comp in g),
                tuple(detached_shape(a, c, comp) for comp in h),
                (a, b, c),
            )
        )

    out = []
    seen = 0
    for colchoice in product(*(Z.colours[g] for g in gens)):
        cols = dict(zip(gens, colchoice))
        opts = []
        dead = False
        for shape in shapes:
            so, to = B.ind_morphisms[shape]
            cs = tuple(cols[s] for s in so)
            ct = tuple(cols[t] for t in to)
            labs = Z.multimaps.get((shape, cs, ct), ())
            if shape in id_shape and Z.units:
                forced = Z.units.get((id_shape[shape], cols[id_shape[shape]]))
                labs = (forced,) if forced in labs else ()
            if not labs:
                dead = True
                break
            opts.append(labs)
        if dead:
            continue
        for labchoice in product(*opts):
            seen += 1
            if seen > budget:
                raise RuntimeError("field theory enumeration budget exceeded")
            lab = dict(zip(shapes, labchoice))
            good = True
            for inst, nf, ng, nh, (a, b, c) in insts:
                ca = tuple(cols[s] for s in a)
                cb = tuple(cols[s] for s in b)
                cc = tuple(cols[s] for s in c)
                lf = tuple(lab[n] for n in nf)
                lg = tuple(lab[n] for n in ng)
                lh = tuple(lab[n] for n in nh)
                if Z.composition(inst, (ca, cb, cc), lf, lg) != lh:
                    good = False
                    break
            if good:
                out.append((dict(cols), dict(lab)))
    return out
