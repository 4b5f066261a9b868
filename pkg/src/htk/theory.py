"""Finite presentations of set-enriched higher theories.

A presentation of dimension n stores label sets for multimaps of every
dimension up to n, keyed by an elemental arity together with a full
boundary typing, plus composition tables keyed by one-higher arities.
Everything is bounded: tables cover exactly the arities whose index sets
stay within ``arity_bound``, and operations never extrapolate past it.
Builders accept an ``extra`` arity pool for the few constructions whose
lookups outrun the bound (delooping flattens two index levels into one,
so its source must be tabulated at a handful of larger arities).

Boundary typings are nested tuples produced by :func:`whole_key` /
:func:`atom_key`; both walk a layout's addresses in the same canonical
order, so keys built for a stored arity and keys recovered from an atom
inside a bigger arity agree positionally.
"""

from dataclasses import dataclass, field
from itertools import product

from .arity import (
    Arity,
    Level,
    canonical_key,
    concrete,
    decompose,
    decompose_general,
    enumerate_arities,
    layout,
    resolve_leaf,
    slot_ctx,
)
from .ordcomb import PLANAR, SYMMETRIC

DIM0_KEY = ("", ())


@dataclass(frozen=True)
class TheoryPresentation:
    """A bounded presentation of an n-dimensional theory.

    ``strata[d]`` maps ``(arity key, boundary key)`` to the tuple of
    dimension-d multimap labels for 1 <= d < n; ``strata[0]`` holds the
    colour tuple under ``DIM0_KEY``.  ``top_mul`` is the same table for
    dimension n.  ``composition`` maps ``(arity key of an (n+1)-arity,
    lower boundary key)`` to a dict from input-label tuples (in chain
    address order) to the output label.  For n = 0 the element set lives
    in ``top_mul[DIM0_KEY]`` and composition is keyed by 1-arities with
    an empty lower key.
    """

    n: int
    variance: str
    colour_depth: int
    arity_bound: int
    strata: dict
    top_mul: dict
    composition: dict

    def label_set(self, d, akey="", tkey=()):
        if d == 0:
            akey, tkey = DIM0_KEY
        table = self.top_mul if d == self.n else self.strata[d]
        return table.get((akey, tkey), ())


# ---------------------------------------------------------------------------
# boundary keys


def atom_key(spec, val):
    """The boundary key of an atom, reading labels through ``val``."""
    if spec.arity.k == 1:
        return (tuple(val(a) for a in spec.colours),)
    return (
        tuple(val(a) for a in spec.colours),
        tuple(tuple(val(a) for a in g) for g in spec.lower),
        tuple(val(a) for a in spec.chain),
        val(spec.target),
    )


def whole_key(lay, val):
    """The boundary key of a whole arity from an assignment on its layout."""
    ar = lay.arity
    cols = tuple(val(("c", i)) for i in range(lay.colour_count))
    if ar.k == 1:
        return (cols,)
    return (
        cols,
        tuple(tuple(val(at.address) for at in lay.atoms[nu]) for nu in range(1, ar.k - 1)),
        tuple(val(a) for a in lay.chain_addrs),
        val(lay.target_addr),
    )


def lower_key(lay, val):
    """The part of a composition arity's boundary below the top pair."""
    if lay.arity.k == 1:
        return ()
    return (
        tuple(val(("c", i)) for i in range(lay.colour_count)),
        tuple(tuple(val(at.address) for at in lay.atoms[nu]) for nu in range(1, lay.arity.k - 1)),
    )


def _site(spec, val):
    """(composition table key, input labels, output address) for a leaf."""
    if spec.arity.k == 1:
        key = (canonical_key(spec.arity), ())
        return key, tuple(val(a) for a in spec.colours[:-1]), spec.colours[-1]
    lk = (
        tuple(val(a) for a in spec.colours),
        tuple(tuple(val(a) for a in g) for g in spec.lower),
    )
    return (canonical_key(spec.arity), lk), tuple(val(a) for a in spec.chain), spec.target


def boundary_assignments(T, lay, top_level=None):
    """All consistent label assignments to a layout's boundary addresses.

    Colours draw from the dimension-0 set; each atom draws from the label
    set its own arity and (already assigned) boundary key select.  Only
    atoms at levels <= ``top_level`` are assigned (default: all).
    """
    k = lay.arity.k
    if top_level is None:
        top_level = k - 1
    atoms = [at for nu in range(1, top_level + 1) for at in lay.atoms.get(nu, ())]

    def rec(i, asg):
        if i == len(atoms):
            yield dict(asg)
            return
        at = atoms[i]
        opts = T.label_set(at.address[1], canonical_key(at.spec.arity), atom_key(at.spec, asg.__getitem__))
        for lab in opts:
            asg[at.address] = lab
            yield from rec(i + 1, asg)
        asg.pop(at.address, None)

    for cols in product(T.label_set(0), repeat=lay.colour_count):
        yield from rec(0, {("c", i): c for i, c in enumerate(cols)})


# ---------------------------------------------------------------------------
# construction by saturation


def arity_pool(d, bound, variance, extra=None):
    """The bounded dimension-d arities plus any extras, deduplicated."""
    pool = list(enumerate_arities(d, bound, variance))
    seen = {canonical_key(a) for a in pool}
    for a in (extra or {}).get(d, ()):
        ck = canonical_key(a)
        if ck not in seen:
            seen.add(ck)
            pool.append(a)
    return pool


def build_theory(n, variance, bound, colours, label_rule, comp_rule, colour_depth=None, extra=None):
    """Construct a presentation by enumerating every bounded key.

    ``label_rule(d, arity, lay, asg)`` returns the labels of dimension-d
    multimaps with the given fully typed boundary (1 <= d <= n);
    ``comp_rule(arity, lay, asg, inputs)`` returns the composite label
    for a composition instance, where ``asg`` covers the lower boundary
    plus the chain addresses.  For n = 0 ``colours`` is the element set.
    """
    strata = {d: {} for d in range(n)}
    top_mul = {}
    if n > 0:
        strata[0][DIM0_KEY] = tuple(colours)
    else:
        top_mul[DIM0_KEY] = tuple(colours)
    T = TheoryPresentation(
        n, variance, n if colour_depth is None else colour_depth, bound, strata, top_mul, {}
    )
    for d in range(1, n + 1):
        table = top_mul if d == n else strata[d]
        for ar in arity_pool(d, bound, variance, extra):
            lay = layout(ar)
            ak = canonical_key(ar)
            for asg in boundary_assignments(T, lay):
                table[(ak, whole_key(lay, asg.__getitem__))] = tuple(label_rule(d, ar, lay, asg))
    for P in arity_pool(n + 1, bound, variance, extra):
        lay = layout(P)
        ak = canonical_key(P)
        if n == 0:
            entry = {}
            for inputs in product(T.label_set(0), repeat=P.top):
                entry[inputs] = comp_rule(P, lay, {}, inputs)
            T.composition[(ak, ())] = entry
            continue
        for asg in boundary_assignments(T, lay, top_level=n - 1):
            sets = []
            for addr in lay.chain_addrs:
                at = lay.atom(addr)
                sets.append(T.label_set(n, canonical_key(at.spec.arity), atom_key(at.spec, asg.__getitem__)))
            entry = {}
            for inputs in product(*sets):
                full = dict(asg)
                full.update(zip(lay.chain_addrs, inputs))
                entry[inputs] = comp_rule(P, lay, full, inputs)
            T.composition[(ak, lower_key(lay, asg.__getitem__))] = entry
    return T


# ---------------------------------------------------------------------------
# multimap sets and composition


def mul(T, a, tkey):
    """The label set of an elemental arity at a boundary key."""
    return T.label_set(a.k, canonical_key(a), tkey)


def mul_general(T, ga, tkeys):
    """All label tuples of a non-elemental arity: the product over its
    elemental components, with ``tkeys`` mapping footprints to boundary
    keys of the components."""
    parts = decompose_general(ga)
    return tuple(product(*[mul(T, part, tkeys[fp]) for fp, part in parts]))


def compose(T, a, asg, inputs):
    """Compose top-dimension labels along an elemental (n+1)-arity.

    ``asg`` assigns labels to the lower boundary addresses of the
    arity's layout; ``inputs`` lists the chain labels in chain-address
    order.  A missing table entry signals an under-specified
    presentation and raises ``KeyError``.
    """
    if a.k != T.n + 1:
        raise ValueError("composition needs a one-higher arity")
    lay = layout(a)
    key = (canonical_key(a), lower_key(lay, lambda ad: asg[ad]))
    entry = T.composition.get(key)
    if entry is None or tuple(inputs) not in entry:
        raise KeyError(f"no composition entry for {key}")
    return entry[tuple(inputs)]


def compose_general(T, ga, parts_data):
    """Compose along a non-elemental (n+1)-arity fiberwise.

    ``parts_data`` pairs each component (in decomposition order) with
    its (asg, inputs); the result is the tuple of componentwise
    composites.
    """
    parts = decompose_general(ga)
    if len(parts) != len(parts_data):
        raise ValueError("component data length mismatch")
    return tuple(
        compose(T, part, asg, inputs)
        for (_, part), (asg, inputs) in zip(parts, parts_data)
    )


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    law: str
    arity_key: str
    witness: tuple
    expected: object
    actual: object

    def line(self):
        return f"{self.law} at {self.arity_key}: witness={self.witness!r} expected={self.expected!r} actual={self.actual!r}"


@dataclass
class ValidationReport:
    status: str
    violations: list
    warnings: list = field(default_factory=list)

    def lines(self):
        out = [v.line() for v in self.violations]
        out.extend(f"warning: {w}" for w in self.warnings)
        return out


def _report(violations, warnings):
    return ValidationReport("fail" if violations else "pass", violations, warnings)


def _check_strata(T, bound, viol):
    for d in range(1, T.n + 1):
        table = T.top_mul if d == T.n else T.strata[d]
        singleton = d < T.n - T.colour_depth
        for ar in enumerate_arities(d, bound, T.variance):
            lay = layout(ar)
            ak = canonical_key(ar)
            for asg in boundary_assignments(T, lay):
                key = (ak, whole_key(lay, asg.__getitem__))
                if key not in table:
                    viol.append(Violation("missing-stratum", ak, (key[1],), "entry", "absent"))
                elif singleton and len(table[key]) != 1:
                    viol.append(Violation("colour-depth", ak, (key[1],), 1, len(table[key])))
    if 0 < T.n - T.colour_depth and len(T.label_set(0)) != 1:
        viol.append(Violation("colour-depth", "", (), 1, len(T.label_set(0))))


def _check_closure(T, bound, viol, warn):
    no_unit = False
    for P in enumerate_arities(T.n + 1, bound, T.variance):
        lay = layout(P)
        ak = canonical_key(P)
        if T.n == 0:
            entry = T.composition.get((ak, ()))
            if entry is None:
                if P.top == 0:
                    no_unit = True
                else:
                    viol.append(Violation("missing-composition", ak, ((), ()), "table", "absent"))
                continue
            for inputs in product(T.label_set(0), repeat=P.top):
                if inputs not in entry:
                    viol.append(Violation("missing-composition", ak, (inputs,), "entry", "absent"))
                elif entry[inputs] not in T.label_set(0):
                    viol.append(Violation("composition-typing", ak, (inputs,), "element", entry[inputs]))
            continue
        tgt = lay.atom(lay.target_addr)
        for asg in boundary_assignments(T, lay, top_level=T.n - 1):
            lk = lower_key(lay, asg.__getitem__)
            entry = T.composition.get((ak, lk))
            if entry is None:
                if P.top == 0:
                    no_unit = True
                else:
                    viol.append(Violation("missing-composition", ak, (lk,), "table", "absent"))
                continue
            sets = [
                T.label_set(T.n, canonical_key(lay.atom(ad).spec.arity), atom_key(lay.atom(ad).spec, asg.__getitem__))
                for ad in lay.chain_addrs
            ]
            out_set = T.label_set(T.n, canonical_key(tgt.spec.arity), atom_key(tgt.spec, asg.__getitem__))
            for inputs in product(*sets):
                if inputs not in entry:
                    viol.append(Violation("missing-composition", ak, (lk, inputs), "entry", "absent"))
                elif entry[inputs] not in out_set:
                    viol.append(Violation("composition-typing", ak, (lk, inputs), tuple(out_set), entry[inputs]))
    if no_unit:
        warn.append("no unit declared (nullary composition entries absent)")


def _free_assignments(T, lay, C):
    """Assignments of the free data of an associativity instance: the
    full boundary below the top-adjacent level plus the labels sitting
    over the initial bracket position of that level."""
    n = T.n
    if n == 0:
        toks = C.levels[0].entries[0]
        for vals in product(T.label_set(0), repeat=len(toks)):
            yield {lay.refs[t]: v for t, v in zip(toks, vals)}
        return
    free_atoms = [lay.atom(ad) for t in C.levels[n].entries[0] for ad in lay.refs[t].values()]

    def rec(i, asg):
        if i == len(free_atoms):
            yield dict(asg)
            return
        at = free_atoms[i]
        for lab in T.label_set(n, canonical_key(at.spec.arity), atom_key(at.spec, asg.__getitem__)):
            asg[at.address] = lab
            yield from rec(i + 1, asg)
        asg.pop(at.address, None)

    for asg in boundary_assignments(T, lay, top_level=n - 1):
        yield from rec(0, asg)


def _site_template(spec):
    """Precomputed address structure of a composition instance."""
    ak = canonical_key(spec.arity)
    if spec.arity.k == 1:
        return (ak, None, None, spec.colours[:-1], spec.colours[-1], spec.arity.top == 0)
    return (ak, spec.colours, spec.lower, spec.chain, spec.target, spec.arity.top == 0)


def _site_eval(tpl, state):
    """(table key, input labels, output address) from a template."""
    ak, cols, lows, chain, out_addr, _ = tpl
    if cols is None:
        return (ak, ()), tuple(state[a] for a in chain), out_addr
    lk = (
        tuple(state[a] for a in cols),
        tuple(tuple(state[a] for a in g) for g in lows),
    )
    return (ak, lk), tuple(state[a] for a in chain), out_addr


def _check_associativity(T, bound, viol, warn, sample=1):
    """Composing stage by stage along the top-adjacent nerve must agree
    with composing along its total composite, for every one-higher-still
    elemental arity within bound.  Instances with empty stages exercise
    the unit entries; they are skipped (with a warning) when no unit is
    declared.  ``sample`` > 1 checks every sample-th shape only.
    """
    n = T.n
    skipped_units = False
    for A in enumerate_arities(n + 2, bound, T.variance)[::sample]:
        C = concrete(A)
        lay = layout(A)
        lv = C.levels[n]
        top_tok = lv.entries[-1][0]
        final = lay.refs[top_tok] if n == 0 else next(iter(lay.refs[top_tok].values()))
        stages = [
            [
                _site_template(resolve_leaf(leaf, lay.refs))
                for leaf in decompose(slot_ctx(C.levels, n + 1, j - 1, j))
            ]
            for j in range(1, len(lv.maps) + 1)
        ]
        rhs_tpl = _site_template(
            resolve_leaf(decompose(slot_ctx(C.levels, n + 1, 0, len(lv.maps)))[0], lay.refs)
        )
        ak = canonical_key(A)
        for init in _free_assignments(T, lay, C):
            state = dict(init)
            bad = False
            for specs in stages:
                for tpl in specs:
                    key, ins, out_addr = _site_eval(tpl, state)
                    out = T.composition.get(key, {}).get(ins)
                    if out is None:
                        if tpl[5] and key not in T.composition:
                            skipped_units = True
                        else:
                            viol.append(Violation("missing-composition", key[0], (key[1], ins), "entry", "absent"))
                        bad = True
                        break
                    state[out_addr] = out
                if bad:
                    break
            if bad:
                continue
            key, ins, out_addr = _site_eval(rhs_tpl, init)
            rhs = T.composition.get(key, {}).get(ins)
            if rhs is None:
                if rhs_tpl[5] and key not in T.composition:
                    skipped_units = True
                    continue
                viol.append(Violation("missing-composition", key[0], (key[1], ins), "entry", "absent"))
                continue
            if state[final] != rhs:
                wit = tuple(sorted(init.items(), key=repr))
                viol.append(Violation("associativity", ak, wit, rhs, state[final]))
    if skipped_units:
        warn.append("associativity instances needing undeclared units were skipped")


def _check_relabelings(T, bound, viol):
    """Bijective bottom-level relabelings must act by bijections.

    Implemented for dimension 1; in higher dimensions the property
    follows from associativity and units within the bound.
    """
    if T.n != 1 or T.variance != SYMMETRIC:
        return
    for P in enumerate_arities(2, bound, T.variance):
        sizes, maps = P.levels[0].sizes, P.levels[0].maps
        if P.top != 2 or sizes[0] != sizes[1] or len(set(maps[0])) != sizes[0]:
            continue
        lay = layout(P)
        ak = canonical_key(P)
        for asg in boundary_assignments(T, lay, top_level=0):
            lk = lower_key(lay, asg.__getitem__)
            entry = T.composition.get((ak, lk))
            if entry is None:
                continue
            # chain atoms over the first stage are the unary relabeling
            # slots; fill them with the declared identities
            ids = {}
            ok = True
            for ad in lay.chain_addrs:
                at = lay.atom(ad)
                if at.slot[1] != 1:
                    continue
                ckey = (canonical_key(Arity(2, 0, (Level((1,), ()),))), ((asg[at.spec.colours[0]],), ()))
                ident = T.composition.get(ckey, {}).get(())
                if ident is None:
                    ok = False
                    break
                ids[ad] = ident
            if not ok:
                continue
            imgs = {}
            for inputs in entry:
                if all(inputs[i] == ids[ad] for i, ad in enumerate(lay.chain_addrs) if ad in ids):
                    rest = tuple(inputs[i] for i, ad in enumerate(lay.chain_addrs) if ad not in ids)
                    imgs[rest] = entry[inputs]
            vals = list(imgs.values())
            if len(set(vals)) != len(vals):
                viol.append(Violation("relabeling-bijection", ak, (lk,), "injective", tuple(vals)))


def validate_theory(T, bound=None, assoc_sample=1):
    """Check totality, closure, unit presence, and associativity of a
    presentation over all arities within the bound.

    ``assoc_sample`` thins the associativity sweep to every sample-th
    shape; anything other than 1 is an explicitly partial check (the
    shape space grows steeply with the bound).
    """
    bound = T.arity_bound if bound is None else bound
    viol, warn = [], []
    _check_strata(T, bound, viol)
    _check_closure(T, bound, viol, warn)
    if not viol:
        _check_associativity(T, bound, viol, warn, assoc_sample)
        _check_relabelings(T, bound, viol)
    if assoc_sample != 1:
        warn.append(f"associativity checked on 1/{assoc_sample} of shapes")
    return _report(viol, warn)


# ---------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True)
class TheoryMorphism:
    """A strict morphism: per-dimension label actions.

    ``actions[d]`` maps each source table key ``(akey, tkey)`` to a dict
    sending source labels to target labels (``DIM0_KEY`` at dimension 0).
    """

    source: TheoryPresentation
    target: TheoryPresentation
    actions: dict

    def act(self, d, akey, tkey, label):
        if d == 0:
            akey, tkey = DIM0_KEY
        return self.actions[d][(akey, tkey)][label]


def map_assignment(F, lay, asg):
    """Push a boundary assignment on a source layout through a morphism."""
    out = {("c", i): F.act(0, "", (), asg[("c", i)]) for i in range(lay.colour_count)}
    for nu in sorted(lay.atoms):
        for at in lay.atoms[nu]:
            if at.address not in asg:
                continue
            tkey = atom_key(at.spec, asg.__getitem__)
            out[at.address] = F.act(nu, canonical_key(at.spec.arity), tkey, asg[at.address])
    return out


def identity_morphism(T):
    actions = {0: {DIM0_KEY: {c: c for c in T.label_set(0)}}}
    for d in range(1, T.n + 1):
        table = T.top_mul if d == T.n else T.strata[d]
        actions[d] = {key: {lab: lab for lab in labs} for key, labs in table.items()}
    return TheoryMorphism(T, T, actions)


def validate_morphism(F, bound=None):
    S, T = F.source, F.target
    viol, warn = [], []
    if S.n != T.n or S.variance != T.variance:
        return _report([Violation("morphism-shape", "", (), (T.n, T.variance), (S.n, S.variance))], warn)
    bound = min(S.arity_bound, T.arity_bound) if bound is None else bound
    for c in S.label_set(0):
        img = F.actions.get(0, {}).get(DIM0_KEY, {}).get(c)
        if img is None or img not in T.label_set(0):
            viol.append(Violation("morphism-typing", "", (c,), "colour", img))
    if viol:
        return _report(viol, warn)
    for d in range(1, S.n + 1):
        for ar in enumerate_arities(d, bound, S.variance):
            lay = layout(ar)
            ak = canonical_key(ar)
            for asg in boundary_assignments(S, lay):
                skey = whole_key(lay, asg.__getitem__)
                tkey = whole_key(lay, map_assignment(F, lay, asg).__getitem__)
                tset = T.label_set(d, ak, tkey)
                for lab in S.label_set(d, ak, skey):
                    img = F.actions.get(d, {}).get((ak, skey), {}).get(lab)
                    if img is None or img not in tset:
                        viol.append(Violation("morphism-typing", ak, (skey, lab), tuple(tset), img))
    if viol:
        return _report(viol, warn)
    n = S.n
    for P in enumerate_arities(n + 1, bound, S.variance):
        lay = layout(P)
        ak = canonical_key(P)
        if n == 0:
            entry = S.composition.get((ak, ()), {})
            tentry = T.composition.get((ak, ()), {})
            f0 = F.actions[0][DIM0_KEY]
            for inputs, out in entry.items():
                got = tentry.get(tuple(f0[x] for x in inputs))
                if got != f0[out]:
                    viol.append(Violation("morphism-composition", ak, (inputs,), f0[out], got))
            continue
        for asg in boundary_assignments(S, lay, top_level=n - 1):
            lk = lower_key(lay, asg.__getitem__)
            entry = S.composition.get((ak, lk), {})
            tasg = map_assignment(F, lay, asg)
            tentry = T.composition.get((ak, lower_key(lay, tasg.__getitem__)), {})
            for inputs, out in entry.items():
                fins = []
                for ad, lab in zip(lay.chain_addrs, inputs):
                    at = lay.atom(ad)
                    fins.append(F.act(n, canonical_key(at.spec.arity), atom_key(at.spec, asg.__getitem__), lab))
                tat = lay.atom(lay.target_addr)
                fout = F.act(n, canonical_key(tat.spec.arity), atom_key(tat.spec, asg.__getitem__), out)
                got = tentry.get(tuple(fins))
                if got != fout:
                    viol.append(Violation("morphism-composition", ak, (lk, inputs), fout, got))
    return _report(viol, warn)


def _sorted_keys(table):
    return sorted(table, key=repr)


def enumerate_morphisms(S, T, bound=None, budget=2_000_000):
    """All strict morphisms S -> T, in a deterministic order.

    Backtracks over colour images, then label images dimension by
    dimension (each constrained by the translated boundary key), and
    keeps only assignments whose composition squares commute.  Raises
    ``RuntimeError`` once more than ``budget`` search nodes are visited.
    """
    if S.n != T.n or S.variance != T.variance:
        return []
    bound = min(S.arity_bound, T.arity_bound) if bound is None else bound
    found = []
    nodes = [0]

    def fail_budget():
        raise RuntimeError("morphism enumeration budget exceeded")

    def rec_dims(d, actions):
        if d > S.n:
            F = TheoryMorphism(S, T, {k: {kk: dict(vv) for kk, vv in v.items()} for k, v in actions.items()})
            if validate_morphism(F, bound).status == "pass":
                found.append(F)
            return
        table = S.top_mul if d == S.n else S.strata[d]
        items = []
        for key in _sorted_keys(table):
            ak, skey = key
            lay = layout(_arity_of_key(S, d, ak))
            asg = _assignment_of_key(lay, skey)
            for lab in table[key]:
                items.append((ak, skey, lab, lay, asg))

        def rec_items(i):
            nodes[0] += 1
            if nodes[0] > budget:
                fail_budget()
            if i == len(items):
                rec_dims(d + 1, actions)
                return
            ak, skey, lab, lay, asg = items[i]
            F = TheoryMorphism(S, T, actions)
            tkey = whole_key(lay, map_assignment(F, lay, asg).__getitem__)
            for img in T.label_set(d, ak, tkey):
                actions[d].setdefault((ak, skey), {})[lab] = img
                rec_items(i + 1)
                del actions[d][(ak, skey)][lab]

        actions[d] = {}
        rec_items(0)
        del actions[d]

    def rec_colours(cols, i):
        nodes[0] += 1
        if nodes[0] > budget:
            fail_budget()
        src = S.label_set(0)
        if i == len(src):
            rec_dims(1, {0: {DIM0_KEY: dict(cols)}})
            return
        for img in T.label_set(0):
            cols[src[i]] = img
            rec_colours(cols, i + 1)
            del cols[src[i]]

    rec_colours({}, 0)
    return found


def _arity_of_key(T, d, akey):
    for ar in enumerate_arities(d, T.arity_bound, T.variance):
        if canonical_key(ar) == akey:
            return ar
    raise KeyError(akey)


def arity_of_key(T, d, akey):
    """The enumerated arity with the given canonical key."""
    return _arity_of_key(T, d, akey)


def _assignment_of_key(lay, tkey):
    """Rebuild an address assignment from a whole-arity boundary key."""
    asg = {("c", i): c for i, c in enumerate(tkey[0])}
    if lay.arity.k == 1:
        return asg
    _, lower, chain, target = tkey
    for nu, labs in enumerate(lower, start=1):
        for at, lab in zip(lay.atoms[nu], labs):
            asg[at.address] = lab
    for ad, lab in zip(lay.chain_addrs, chain):
        asg[ad] = lab
    asg[lay.target_addr] = target
    return asg


# ---------------------------------------------------------------------------
# endomorphism theory


def _suspend(b):
    """The one-higher arity hanging an arity over a single colour chain."""
    m = b.levels[0].sizes[0] if b.k >= 2 else b.top
    bottom = Level((1,) * (m + 1), ((1,),) * m)
    return Arity(b.k + 1, b.top, (bottom,) + b.levels)


def _suspend_assignment(layb, laysa, asg, x):
    """Transport an assignment through the level shift of a suspension."""
    out = {("c", i): x for i in range(laysa.colour_count)}
    if len(laysa.atoms.get(1, ())) != layb.colour_count:
        raise AssertionError("suspension colour/atom count mismatch")
    for i in range(layb.colour_count):
        out[laysa.atoms[1][i].address] = asg[("c", i)]
    for nu in sorted(layb.atoms):
        if len(laysa.atoms[nu + 1]) != len(layb.atoms[nu]):
            raise AssertionError("suspension atom count mismatch")
        for i, at in enumerate(layb.atoms[nu]):
            if at.address in asg:
                out[laysa.atoms[nu + 1][i].address] = asg[at.address]
    return out


def _shift_addr(addr):
    return ("a", addr[1] + 1, addr[2])


def endo_planar(T, x):
    """The planar endomorphism theory of a colour: one dimension lower,
    with every datum read off the suspended arities at that colour."""
    if T.n < 1:
        raise ValueError("needs dimension >= 1")
    if x not in T.label_set(0):
        raise ValueError("not a colour")
    n2 = T.n - 1
    strata = {d: {} for d in range(n2)}
    top_mul = {}
    d0 = T.label_set(1, canonical_key(Arity(1, 1, ())), ((x, x),))
    if n2 > 0:
        strata[0][DIM0_KEY] = tuple(d0)
    else:
        top_mul[DIM0_KEY] = tuple(d0)
    V = TheoryPresentation(n2, PLANAR, n2, T.arity_bound, strata, top_mul, {})
    for d in range(1, n2 + 1):
        table = top_mul if d == n2 else strata[d]
        for b in enumerate_arities(d, T.arity_bound, PLANAR):
            layb, laysa = layout(b), layout(_suspend(b))
            bk, sk = canonical_key(b), canonical_key(_suspend(b))
            for asg in boundary_assignments(V, layb):
                tasg = _suspend_assignment(layb, laysa, asg, x)
                table[(bk, whole_key(layb, asg.__getitem__))] = T.label_set(
                    d + 1, sk, whole_key(laysa, tasg.__getitem__)
                )
    for P in enumerate_arities(n2 + 1, T.arity_bound, PLANAR):
        layb, laysa = layout(P), layout(_suspend(P))
        bk, sk = canonical_key(P), canonical_key(_suspend(P))
        if P.k > 1 and tuple(_shift_addr(a) for a in layb.chain_addrs) != laysa.chain_addrs:
            raise AssertionError("suspension chain order mismatch")
        if n2 == 0:
            tentry = T.composition[(sk, lower_key(laysa, lambda a: x))]
            entry = {}
            for inputs in product(tuple(d0), repeat=P.top):
                entry[inputs] = tentry[inputs]
            V.composition[(bk, ())] = entry
            continue
        for asg in boundary_assignments(V, layb, top_level=n2 - 1):
            tasg = _suspend_assignment(layb, laysa, asg, x)
            tentry = T.composition[(sk, lower_key(laysa, tasg.__getitem__))]
            entry = {}
            sets = [
                V.label_set(n2, canonical_key(layb.atom(ad).spec.arity), atom_key(layb.atom(ad).spec, asg.__getitem__))
                for ad in layb.chain_addrs
            ]
            for inputs in product(*sets):
                entry[inputs] = tentry[inputs]
            V.composition[(bk, lower_key(layb, asg.__getitem__))] = entry
    return V
