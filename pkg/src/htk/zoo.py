"""Stock theories: terminal, associative, initial, discrete, cyclic.

Each constructor saturates the bounded tables through
:func:`htk.theory.build_theory`, so every presentation here is total
within its bound by construction.
"""

from itertools import permutations

from .theory import build_theory
from .ordcomb import SYMMETRIC


def terminal_theory(n, colours=("*",), bound=2, variance=SYMMETRIC, extra=None):
    """Every multimap set a singleton over the given colours."""
    return build_theory(
        n,
        variance,
        bound,
        colours if n > 0 else ("*",),
        lambda d, ar, lay, asg: ("*",),
        lambda P, lay, asg, inputs: "*",
        extra=extra,
    )


def cyclic_monoid_theory(k, bound=2, extra=None):
    """The cyclic group of order k as a 0-dimensional theory."""
    return build_theory(
        0,
        SYMMETRIC,
        bound,
        tuple(range(k)),
        lambda d, ar, lay, asg: (),
        lambda P, lay, asg, inputs: sum(inputs) % k,
        extra=extra,
    )


def _orders_label(d, ar, lay, asg):
    if ar.top == 0:
        return ((),)
    return tuple(permutations(range(1, ar.top + 1)))


def _orders_compose(P, lay, asg, inputs):
    """Concatenate input orderings along the chain of a 2-arity.

    Walking the bottom nerve backwards from its singleton last entry,
    each element's temporal position is refined by the ordering carried
    by the atom producing it; the result is the induced ordering on the
    first entry, written in its positional labels.
    """
    lv = lay.conc.levels[0]
    orders = dict(zip(lay.chain_addrs, inputs))
    seq = list(lv.entries[len(lv.maps)])
    by_site = {}
    for ad in lay.chain_addrs:
        at = lay.atom(ad)
        by_site[(at.slot[1], at.footprint[0][1])] = orders[ad]
    for p in range(len(lv.maps), 0, -1):
        nxt = []
        for y in seq:
            fib = tuple(t for t in lv.entries[p - 1] if lv.maps[p - 1][t] == y)
            nxt.extend(fib[i - 1] for i in by_site[(p, y)])
        seq = nxt
    pos = {t: i + 1 for i, t in enumerate(lv.entries[0])}
    return tuple(pos[t] for t in seq)


def assoc_operad(bound=2, extra=None):
    """One colour; multimaps on a finite set are its total orderings and
    composition concatenates them."""
    return build_theory(1, SYMMETRIC, bound, ("*",), _orders_label, _orders_compose, extra=extra)


def discrete_category(k, bound=2, labels=None, extra=None):
    """k objects with only identity maps, as a 1-dimensional theory."""
    cols = tuple(labels) if labels is not None else tuple(f"x{i}" for i in range(k))

    def rule(d, ar, lay, asg):
        if ar.top == 1 and asg[("c", 0)] == asg[("c", 1)]:
            return ("id",)
        return ()

    return build_theory(1, SYMMETRIC, bound, cols, rule, lambda P, lay, asg, inputs: "id", extra=extra)


def init_operad(bound=2, extra=None):
    """One colour carrying only the unary identity."""
    return discrete_category(1, bound, labels=("*",), extra=extra)
