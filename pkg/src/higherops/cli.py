"""Command line front end.

    higherops trees  --n 2 --max-tips 3 --max-nodes 6
    higherops verify --suite pisigma --n 4
    higherops pi0    --n 1 --k 3 --bound 4
    higherops sym    --input A.json --k 2 --bound 3
    higherops nerve  --n 1 --k 2 --p 1 --bound 2
    higherops dot    --what h --n 2 --k 2 --bound 3

Exit codes: 0 success, 1 a verification failed, 2 bad usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import factorial

from . import hcat, itmon, nops, omegan, ordmaps, symops, trees as trees_mod

SCHEMA_VERSION = 1
SUITES = ("factorize", "pisigma", "permutations", "chi", "endomorphism", "internal", "mtilde", "freeop")


class UsageError(Exception):
    pass


def _positive(name, value, zero=False):
    if value is None:
        return
    if value < 0 or (value == 0 and not zero):
        raise UsageError(f"--{name.replace('_', '-')} must be {'non-negative' if zero else 'positive'}, got {value}")


def _emit(args, text):
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _header(args, **bounds):
    items = " ".join(f"{k}={v}" for k, v in bounds.items() if v is not None)
    return f"# {args.command}: {items}\n"


def _tree_universe(args, n, k):
    if args.max_nodes is not None or args.max_tips is not None:
        return hcat.decoration_trees(n, args.max_tips if args.max_tips is not None else max(k, 2),
                                     args.max_nodes)
    return hcat.connecting_trees(n, k) if k >= 1 else hcat.decoration_trees(n, 2)


# -- commands

def cmd_trees(args):
    _positive("n", args.n, zero=True)
    _positive("max_tips", args.max_tips, zero=True)
    _positive("max_nodes", args.max_nodes, zero=True)
    max_tips = 3 if args.max_tips is None else args.max_tips
    try:
        ts = trees_mod.enumerate_trees(args.n, max_tips, args.max_nodes, pruned=args.pruned)
    except ValueError as err:
        raise UsageError(str(err))
    if args.format == "json":
        doc = {"schema_version": SCHEMA_VERSION, "kind": "trees", "n": args.n,
               "max_tips": max_tips, "max_nodes": args.max_nodes, "pruned": args.pruned,
               "trees": [trees_mod.format_tree(T) for T in ts]}
        _emit(args, json.dumps(doc, indent=1) + "\n")
    elif args.format == "dot":
        _emit(args, "".join(trees_mod.to_dot(T, f"t{i}") for i, T in enumerate(ts)))
    else:
        out = [_header(args, n=args.n, max_tips=max_tips, max_nodes=args.max_nodes, pruned=args.pruned),
               f"# {len(ts)} trees\n"]
        out.extend(trees_mod.format_tree(T) + "\n" for T in ts)
        _emit(args, "".join(out))
    return 0


def _suite_factorize(n, bound):
    bad = 0
    for a in range(n + 1):
        for k in range(1, bound + 1):
            for s in ordmaps.all_maps(a, k):
                p, v = ordmaps.factorize(s)
                hits = [(p2, v2) for p2 in ordmaps.permutations(a) for v2 in ordmaps.monotone_maps(a, k)
                        if ordmaps.compose(p2, v2) == s and _fiber_order(p2, s)]
                if hits != [(p, v)]:
                    bad += 1
    return bad == 0, f"unique factorization of maps [n] -> [k], n <= {n}, k <= {bound}"


def _fiber_order(p, s):
    for i in range(1, p.dom + 1):
        for j in range(i + 1, p.dom + 1):
            if s(i) == s(j) and p(i) > p(j):
                return False
    return True


def _suite_pisigma(n, bound):
    ok = all(ordmaps.verify_pisigma(s, w)
             for a in range(n + 1) for b in range(n + 1) for c in range(n + 1)
             for s in ordmaps.monotone_maps(a, b) for w in ordmaps.monotone_maps(b, c))
    return ok, f"pi(sigma omega) identity for monotone pairs, sizes <= {n}"


def _suite_permutations(n, bound):
    op = symops.permutation_operad(n)
    report = symops.validate(op, max_total=n)
    return not report, f"permutation operad axioms, total size <= {n}" + (f": {report[0]}" if report else "")


def _suite_chi(n, bound):
    ts = trees_mod.tree_universe(n, bound)
    count = bad = 0
    for S in ts:
        for T in ts:
            for s in omegan.hom(T, S):
                count += 1
                bad += symops.chi(s) != omegan.pi(s).inverse()
    return not bad, f"chi = pi^-1 on {count} morphisms between {n}-trees with <= {bound} tips"


def _suite_endomorphism(n, bound):
    ts = hcat.connecting_trees(n, bound)
    A = symops.endomorphism_n_operad((0, 1), n, ts)
    B = symops.desymmetrise(symops.endomorphism_operad((0, 1), bound), n, ts)
    ms = A.morphisms()
    ta, tb = A.tabulate(ms), B.tabulate(ms)
    ok = ta == tb and A.unit == B.unit
    return ok, f"End_{n}(x) = Des_{n}(End(x)) for |x| = 2: {len(ta)} table entries, pruned {n}-trees with <= {bound} tips"


def _suite_internal(n, bound):
    count, failures = itmon.verify_internal_operad(n, trees_mod.tree_universe(n, bound))
    return not failures, f"internal {n}-operad in m~^{n}: {count} morphisms, {len(failures)} failures"


def _suite_mtilde(n, bound):
    bad = 0
    for k in range(1, bound + 1):
        objs = itmon.objects(n, k)
        for A in objs:
            R = itmon.reachable(A)
            bad += sum((B in R) != itmon.leq(A, B) for B in objs)
    return bad == 0, f"pairwise order = interchange reachability on m~^{n}_k, k <= {bound}"


def _suite_freeop(n, bound):
    ts = hcat.connecting_trees(n, bound)
    C = {trees_mod.M(n, 0, 2): ["a"], trees_mod.U(n): ["u"]}
    bad = [T for T in ts if not hcat.freeop_count_check(C, T, 2, ts)[2]]
    return not bad, f"free {n}-operad counts against H^{n}_T sums, depth 2, 2 generators, <= {bound} tips"


_SUITE_DEFAULTS = {
    "factorize": (5, 4), "pisigma": (4, 4), "permutations": (4, 4), "chi": (2, 4),
    "endomorphism": (2, 3), "internal": (2, 4), "mtilde": (2, 3), "freeop": (2, 3),
}


def cmd_verify(args):
    if args.input:
        return _verify_file(args)
    suites = list(dict.fromkeys(args.suite)) if args.suite else list(SUITES)
    for s in suites:
        if s not in SUITES:
            raise UsageError(f"unknown suite {s!r}; choose from {', '.join(SUITES)}")
    _positive("n", args.n)
    _positive("bound", args.bound)
    lines, failed = [], 0
    for s in suites:
        n, b = _SUITE_DEFAULTS[s]
        n = args.n if args.n is not None else n
        b = args.bound if args.bound is not None else b
        ok, text = globals()[f"_suite_{s}"](n, b)
        failed += not ok
        lines.append(f"{'PASS' if ok else 'FAIL'} {s}: {text}\n")
    _emit(args, _header(args, suites=",".join(suites), n=args.n, bound=args.bound) + "".join(lines))
    return 1 if failed else 0


def _verify_file(args):
    try:
        with open(args.input) as fh:
            text = fh.read()
        kind = json.loads(text).get("kind")
    except (OSError, ValueError) as err:
        raise UsageError(f"cannot read {args.input}: {err}")
    if kind == "symmetric_operad":
        op = symops.from_json(text)
        report = symops.validate(op)
    elif kind == "n_operad":
        op = nops.from_json(text)
        report = nops.validate(op)
    else:
        raise UsageError(f"{args.input} is neither a symmetric_operad nor an n_operad document")
    out = [_header(args, input=args.input, kind=kind)]
    out.extend(f"FAIL {line}\n" for line in report)
    if not report:
        out.append("PASS all identities hold on the stored tables\n")
    _emit(args, "".join(out))
    return 1 if report else 0


def cmd_pi0(args):
    _positive("n", args.n)
    _positive("k", args.k, zero=True)
    _positive("bound", args.bound)
    bound = args.bound or 3
    ts = _tree_universe(args, args.n, args.k)
    count, report = hcat.pi0(args.n, args.k, bound, ts)
    if args.format == "json":
        report = dict(report, counts={str(k): v for k, v in report["counts"].items()})
        _emit(args, json.dumps({"schema_version": SCHEMA_VERSION, "kind": "pi0", **report}, indent=1) + "\n")
    elif args.format == "csv":
        rows = [{"n": args.n, "k": args.k, "vertex_bound": v, "decorations": len(ts), "components": c}
                for v, c in sorted(report["counts"].items())]
        _emit(args, hcat.counts_csv(rows, ["n", "k", "vertex_bound", "decorations", "components"]))
    else:
        _emit(args, _header(args, n=args.n, k=args.k, bound=bound, decorations=len(ts))
              + f"components {count}\n"
              + "counts " + " ".join(f"{v}:{c}" for v, c in sorted(report["counts"].items())) + "\n"
              + f"stable {str(report['stable']).lower()}\n")
    return 0


def cmd_sym(args):
    _positive("k", args.k, zero=True)
    _positive("bound", args.bound)
    bound = args.bound or 3
    if not args.input:
        raise UsageError("sym needs --input with an n-operad document")
    try:
        with open(args.input) as fh:
            A = nops.from_json(fh.read())
    except (OSError, ValueError, KeyError) as err:
        raise UsageError(f"cannot read {args.input}: {err}")
    if args.n is not None and args.n != A.n:
        raise UsageError(f"--n {args.n} does not match the operad height {A.n}")
    try:
        classes = hcat.symmetrise(A, args.k, bound)
    except ValueError as err:
        raise UsageError(str(err))
    out = [_header(args, input=args.input, n=A.n, k=args.k, bound=bound), f"classes {len(classes)}\n"]
    if A.n == 1:
        out.append(f"expected k!|A_k| = {factorial(args.k) * sum(len(v) for T, v in A.elements.items() if T.tips() == args.k)}\n")
    if args.format == "json":
        doc = {"schema_version": SCHEMA_VERSION, "kind": "symmetrisation", "n": A.n, "k": args.k,
               "vertex_bound": bound, "classes": [hcat.render(r) for r, _ in classes]}
        _emit(args, json.dumps(doc, indent=1) + "\n")
    else:
        out.extend(f"{hcat.render(r)}\t{size}\n" for r, size in classes)
        _emit(args, "".join(out))
    return 0


def cmd_nerve(args):
    _positive("n", args.n)
    _positive("k", args.k, zero=True)
    _positive("bound", args.bound)
    if args.p is None or not 0 <= args.p <= 2:
        raise UsageError("--p must be 0, 1 or 2")
    bound = args.bound or 2
    ts = hcat.decoration_trees(args.n, args.max_tips if args.max_tips is not None else 2, args.max_nodes)
    lhs, rhs = hcat.nerve_compare(args.n, args.k, args.p, bound, ts)
    if args.format == "csv":
        _emit(args, hcat.counts_csv([{"n": args.n, "k": args.k, "p": args.p, "vertex_bound": bound,
                                      "chains": lhs, "sym_bar": rhs}],
                                    ["n", "k", "p", "vertex_bound", "chains", "sym_bar"]))
    else:
        _emit(args, _header(args, n=args.n, k=args.k, p=args.p, bound=bound, decorations=len(ts))
              + f"chains {lhs}\nsym_bar {rhs}\n{'equal' if lhs == rhs else 'different'}\n")
    return 0 if lhs == rhs or args.n > 1 else 1


def cmd_dot(args):
    _positive("n", args.n)
    _positive("k", args.k, zero=True)
    _positive("bound", args.bound)
    what = args.what or "h"
    if what == "h":
        ts = _tree_universe(args, args.n, args.k)
        text = hcat.category_dot(args.n, args.k, args.bound or 2, ts)
    elif what in ("mtilde", "poset"):
        text = itmon.hasse_dot(args.n, args.k)
    elif what == "tree":
        if not args.input:
            raise UsageError("dot --what tree needs --input with a tree in text form")
        text = trees_mod.to_dot(trees_mod.parse_tree(open(args.input).read()))
    else:
        raise UsageError(f"unknown --what {what!r}; choose h, poset or tree")
    _emit(args, text)
    return 0


COMMANDS = {"trees": cmd_trees, "verify": cmd_verify, "pi0": cmd_pi0, "sym": cmd_sym,
            "nerve": cmd_nerve, "dot": cmd_dot}


def build_parser():
    parser = argparse.ArgumentParser(prog="higherops", description="Finite checks for higher operads.")
    sub = parser.add_subparsers(dest="command")
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--n", type=int, default=None if name in ("verify", "sym") else 1)
        p.add_argument("--k", type=int, default=2)
        p.add_argument("--p", type=int, default=0)
        p.add_argument("--bound", type=int)
        p.add_argument("--depth", type=int, default=2)
        p.add_argument("--max-tips", type=int)
        p.add_argument("--max-nodes", type=int)
        p.add_argument("--input")
        p.add_argument("--output")
        p.add_argument("--format", choices=("text", "json", "dot", "csv"), default="text")
        p.add_argument("--suite", action="append", help="repeatable; default all")
        p.add_argument("--what")
        p.add_argument("--pruned", action="store_true")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if not args.command:
        parser.print_usage(sys.stderr)
        return 2
    try:
        return COMMANDS[args.command](args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
