"""Command-line surface and the canonical "htk-theory/1" file format.

Files are canonical JSON: sorted object keys, compact separators, all
tables flattened to entry lists sorted by the canonical encoding of
their keys, and no floating point anywhere.  Equal presentations
serialize to byte-identical files, which the golden tests rely on.

Exit codes: 0 success, 1 violations or construction errors, 2 parse,
format or usage errors.  ``HTK_BOUND`` overrides the default arity
bound of 2 wherever no ``--bound`` flag is given.
"""

import argparse
import json
import os
import sys

from .bases import (
    chain_category,
    codiscrete_category,
    cyclic_group_category,
    discrete_finite_category,
    field_theories,
    unit_category,
    walking_arrow,
    walking_idempotent,
    zc_build,
)
from .constructions import deloop, detheorize_T, disc_monoidal, monoidal_as_dim0, theta
from .graded import (
    GradedTheoryPresentation,
    convolve,
    enumerate_algebras,
    product_graded,
    pullback,
    push_left,
    push_right,
    terminal_graded,
    to_projection,
    validate_graded,
)
from .theory import (
    TheoryPresentation,
    endo_planar,
    enumerate_morphisms,
    validate_theory,
)
from .zoo import (
    assoc_operad,
    cyclic_monoid_theory,
    discrete_category,
    init_operad,
    terminal_theory,
)

FORMAT = "htk-theory/1"


class FormatError(Exception):
    """A file that does not parse as a canonical presentation."""


# ---------------------------------------------------------------------------
# canonical encoding


def _enc(x):
    if isinstance(x, tuple):
        return [_enc(e) for e in x]
    if isinstance(x, (str, int, bool)) or x is None:
        return x
    raise FormatError(f"unencodable value {x!r}")


def _dec(x):
    if isinstance(x, list):
        return tuple(_dec(e) for e in x)
    return x


def _skey(x):
    return json.dumps(_enc(x), sort_keys=True, separators=(",", ":"))


def _table(d):
    return [[_enc(k), _enc(v)] for k, v in sorted(d.items(), key=lambda kv: _skey(kv[0]))]


def _untable(entries):
    return {_dec(k): _dec(v) for k, v in entries}


def _nested(d):
    return [[_enc(k), _table(v)] for k, v in sorted(d.items(), key=lambda kv: _skey(kv[0]))]


def _unnested(entries):
    return {_dec(k): _untable(v) for k, v in entries}


def theory_to_obj(T):
    return {
        "format": FORMAT,
        "kind": "theory",
        "dimension": T.n,
        "variance": T.variance,
        "colour_depth": T.colour_depth,
        "arity_bound": T.arity_bound,
        "strata": [[d, _table(T.strata[d])] for d in sorted(T.strata)],
        "top_mul": _table(T.top_mul),
        "composition": _nested(T.composition),
    }


def obj_to_theory(obj):
    return TheoryPresentation(
        obj["dimension"],
        obj["variance"],
        obj["colour_depth"],
        obj["arity_bound"],
        {d: _untable(entries) for d, entries in obj["strata"]},
        _untable(obj["top_mul"]),
        _unnested(obj["composition"]),
    )


def graded_to_obj(X):
    return {
        "format": FORMAT,
        "kind": "graded",
        "base": theory_to_obj(X.base),
        "objects": _table(X.objects),
        "strata": [[d, _nested(X.strata[d])] for d in sorted(X.strata)],
        "top_mul": _nested(X.top_mul),
        "composition": _nested(X.composition),
    }


def obj_to_graded(obj):
    return GradedTheoryPresentation(
        obj_to_theory(obj["base"]),
        _untable(obj["objects"]),
        {d: _unnested(entries) for d, entries in obj["strata"]},
        _unnested(obj["top_mul"]),
        _unnested(obj["composition"]),
    )


def serialize(P):
    if isinstance(P, GradedTheoryPresentation):
        obj = graded_to_obj(P)
    else:
        obj = theory_to_obj(P)
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def parse(text):
    try:
        obj = json.loads(text)
    except ValueError as e:
        raise FormatError(f"not valid JSON: {e}") from None
    if not isinstance(obj, dict) or obj.get("format") != FORMAT:
        raise FormatError(f"missing format tag {FORMAT!r}")
    try:
        if obj.get("kind") == "graded":
            return obj_to_graded(obj)
        if obj.get("kind") == "theory":
            return obj_to_theory(obj)
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f"malformed presentation: {e}") from None
    raise FormatError(f"unknown kind {obj.get('kind')!r}")


def _load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return parse(fh.read())
    except OSError as e:
        raise FormatError(str(e)) from None


def _emit(P, out):
    text = serialize(P)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# registries


def _bound(args):
    if getattr(args, "bound", None) is not None:
        return args.bound
    env = os.environ.get("HTK_BOUND")
    return int(env) if env else 2


def build_named(name, bound, extra=None):
    """A presentation from a ``family[:parameter]`` zoo name."""
    head, _, arg = name.partition(":")
    if head == "terminal":
        return terminal_theory(int(arg or 1), bound=bound, extra=extra)
    if head == "cyclic":
        return cyclic_monoid_theory(int(arg or 2), bound=bound, extra=extra)
    if head in ("assoc", "orders"):
        return assoc_operad(bound=bound, extra=extra)
    if head == "init":
        return init_operad(bound=bound, extra=extra)
    if head == "discrete":
        return discrete_category(int(arg or 2), bound=bound, extra=extra)
    if head == "disc-monoid":
        return monoidal_as_dim0(disc_monoidal(int(arg or 2)), bound=bound, extra=extra)
    if head == "terminal-graded":
        return terminal_graded(build_named(arg, bound), bound=bound)
    if head == "product-graded":
        sub, _, k = arg.rpartition("*")
        return product_graded(build_named(sub, bound), int(k or 2), bound=bound)
    raise FormatError(f"unknown zoo name {name!r}")


_CATEGORIES = {
    "unit": lambda arg: unit_category(),
    "discrete": lambda arg: discrete_finite_category(int(arg or 2)),
    "codiscrete": lambda arg: codiscrete_category(int(arg or 2)),
    "walking-arrow": lambda arg: walking_arrow(),
    "walking-idempotent": lambda arg: walking_idempotent(),
    "cyclic-group": lambda arg: cyclic_group_category(int(arg or 2)),
    "chain": lambda arg: chain_category(int(arg or 2)),
}


def _category_named(name):
    head, _, arg = name.partition(":")
    if head not in _CATEGORIES:
        raise FormatError(f"unknown category name {name!r}")
    return _CATEGORIES[head](arg)


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args):
    P = _load(args.path)
    bound = _bound(args)
    if isinstance(P, GradedTheoryPresentation):
        report = validate_graded(P, bound)
    else:
        report = validate_theory(P, bound)
    for v in report.violations:
        print(f"{v.law} at {v.arity_key!r}: expected {v.expected!r}, got {v.actual!r}")
    for w in report.warnings:
        print(f"warning: {w}")
    return 0 if report.status == "pass" else 1


def cmd_build(args):
    bound = _bound(args)
    P = build_named(args.name, bound)
    if args.deloop_ready:
        from .constructions import deloop_support

        if isinstance(P, GradedTheoryPresentation):
            raise FormatError("--deloop-ready applies to plain theories only")
        P = build_named(args.name, bound, deloop_support(P.n, bound))
    _emit(P, args.output)
    return 0


def cmd_apply(args):
    bound = _bound(args)
    verb = args.verb
    inputs = [_load(p) for p in args.inputs]
    if verb == "theta":
        out = theta(inputs[0], bound)
    elif verb == "deloop":
        out = deloop(inputs[0], bound=bound)
    elif verb == "detheorize":
        colours = dict(_dec(json.loads(args.colours))) if args.colours else None
        out = detheorize_T(inputs[0], colours)
    elif verb == "endo":
        colour = json.loads(args.colour) if args.colour else None
        out = endo_planar(inputs[0], _dec(colour))
    elif verb == "pullback":
        _, p = to_projection(inputs[0])
        out = pullback(p, inputs[1], bound)
    elif verb == "pushL":
        out = push_left(inputs[0], inputs[1])
    elif verb == "pushR":
        out = push_right(inputs[0], inputs[1], bound)
    elif verb == "convolve":
        out = convolve(inputs[0], inputs[1], bound)
    else:
        raise FormatError(f"unknown apply verb {verb!r}")
    _emit(out, args.output)
    return 0


def cmd_enum(args):
    bound = _bound(args)
    if args.what == "functors":
        S, T = _load(args.args[0]), _load(args.args[1])
        n = len(enumerate_morphisms(S, T, bound, args.budget))
    elif args.what == "algebras":
        U, V = _load(args.args[0]), _load(args.args[1])
        n = len(enumerate_algebras(U, V, budget=args.colour_budget, bound=bound))
    elif args.what == "field-theories":
        C = _category_named(args.args[0])
        n = len(field_theories(zc_build(C), budget=args.budget))
    else:
        raise FormatError(f"unknown enumeration {args.what!r}")
    print(n)
    return 0


def _suite_roundtrip_grading(bound):
    from .graded import from_projection, relabel_graded

    claims = []
    instances = [
        ("terminal/orders", terminal_graded(assoc_operad(bound=bound))),
        ("product/cyclic", product_graded(cyclic_monoid_theory(2, bound=bound), 2)),
        ("product/init", product_graded(init_operad(bound=bound), 2)),
        ("terminal/discrete", terminal_graded(discrete_category(2, bound=bound))),
        ("product/orders", product_graded(assoc_operad(bound=bound), 2)),
    ]
    for name, X in instances:
        Y, p = to_projection(X)
        X2 = from_projection(Y, p)
        back = relabel_graded(X2, lambda u, x: x[1], lambda d, v, y: y[1])
        claims.append((f"roundtrip {name}", serialize(back) == serialize(X)))
    for name, X in (("terminal/orders", instances[0][1]), ("product/cyclic", instances[1][1])):
        VP, _ = to_projection(X)
        B = push_left(X, terminal_graded(VP, bound=bound))
        back = relabel_graded(B, lambda u, x: x[0][1], lambda d, v, y: y[0][1])
        claims.append((f"unit push over {name}", serialize(back) == serialize(X)))
    return claims


def _suite_theta_lax(bound):
    claims = []
    for k, m in ((2, 2), (2, 3)):
        homs = sum(1 for _ in _monoid_maps(k, m))
        A = theta(monoidal_as_dim0(disc_monoidal(k), bound=bound), bound)
        B = theta(monoidal_as_dim0(disc_monoidal(m), bound=bound), bound)
        got = len(enumerate_morphisms(A, B, bound))
        claims.append((f"lax count Z/{k}->Z/{m}: {homs} == {got}", homs == got))
    return claims


def _monoid_maps(k, m):
    from itertools import product as iproduct

    for img in iproduct(range(m), repeat=k):
        if img[0] != 0:
            continue
        if all(img[(a + b) % k] == (img[a] + img[b]) % m for a in range(k) for b in range(k)):
            yield img


_SUITES = {
    "roundtrip-grading": _suite_roundtrip_grading,
    "theta-lax-equivalence": _suite_theta_lax,
}


def cmd_check(args):
    if args.suite not in _SUITES:
        print(f"unknown suite {args.suite!r}")
        return 2
    claims = _SUITES[args.suite](_bound(args))
    failed = 0
    for name, ok in sorted(claims):
        print(f"{'pass' if ok else 'FAIL'}: {name}")
        failed += 0 if ok else 1
    print(f"{len(claims) - failed}/{len(claims)} claims pass")
    return 0 if failed == 0 else 1


def cmd_fmt(args):
    P = _load(args.path)
    _emit(P, args.output)
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(prog="htk", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a presentation file")
    p.add_argument("path")
    p.add_argument("--bound", type=int)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("build", help="write a zoo presentation")
    p.add_argument("name")
    p.add_argument("-o", "--output")
    p.add_argument("--bound", type=int)
    p.add_argument(
        "--deloop-ready",
        action="store_true",
        help="tabulate the extra arities the deloop construction consults",
    )
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("apply", help="apply a construction to files")
    p.add_argument(
        "verb",
        choices=["theta", "deloop", "pullback", "pushL", "pushR", "convolve", "detheorize", "endo"],
    )
    p.add_argument("inputs", nargs="+")
    p.add_argument("-o", "--output")
    p.add_argument("--bound", type=int)
    p.add_argument("--colours", help="JSON pair list for detheorize")
    p.add_argument("--colour", help="JSON colour for endo")
    p.set_defaults(fn=cmd_apply)

    p = sub.add_parser("enum", help="count functors, algebras or field theories")
    p.add_argument("what", choices=["functors", "algebras", "field-theories"])
    p.add_argument("args", nargs="+")
    p.add_argument("--budget", type=int, default=1_000_000)
    p.add_argument(
        "--colour-budget",
        type=int,
        default=2,
        help="colour refinement budget for the algebra enumeration",
    )
    p.add_argument("--bound", type=int)
    p.set_defaults(fn=cmd_enum)

    p = sub.add_parser("check", help="run a named verification suite")
    p.add_argument("suite")
    p.add_argument("--bound", type=int)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("fmt", help="rewrite a file in canonical form")
    p.add_argument("path")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_fmt)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except FormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (KeyError, ValueError, RuntimeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
