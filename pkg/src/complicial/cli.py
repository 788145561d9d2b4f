"""Command-line front end.

Objects are named by construction expressions such as ``comp(3,1)``,
``gray(deltat(1),delta(2))`` or ``nerve(cats/z2.json,zero_trivial)``; any
argument ending in ``.json`` is read as a file instead.  Results are written
as canonical JSON.

Exit codes: 0 pass, 1 fail, 2 inconclusive, 3 usage error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path
from typing import Sequence

from . import certifier, lifting, strata, tensors, zoo
from .delta_ops import Operator
from .serialize import (
    dumps,
    map_to_json,
    operator_to_json,
    set_from_json,
    set_to_json,
    subset_to_json,
)
from .strata import SimplexRef, StratifiedMap, StratifiedSet, Subset, ref_label

__all__ = ["main", "evaluate", "parse", "ExpressionError", "REPORT_SCHEMA", "EXIT"]

REPORT_SCHEMA = "report/1"
EXIT = {"pass": 0, "fail": 1, "inconclusive": 2, "usage": 3}


class ExpressionError(ValueError):
    pass


# -- expressions ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<punct>[(),\[\]])|(?P<word>[^\s(),\[\]]+))")


def _tokens(text: str) -> list:
    out, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExpressionError(f"cannot read {text[pos:]!r}")
        out.append(m.group("punct") or m.group("word"))
        pos = m.end()
    return out


def parse(text: str):
    """Syntax tree: an atom string, a list, or ``(head, [args])``."""
    toks = _tokens(text)
    if not toks:
        raise ExpressionError("empty expression")
    pos = 0

    def expr():
        nonlocal pos
        if pos >= len(toks):
            raise ExpressionError(f"unexpected end of {text!r}")
        t = toks[pos]
        pos += 1
        if t == "[":
            items = []
            while toks[pos:pos + 1] != ["]"]:
                items.append(expr())
                if toks[pos:pos + 1] == [","]:
                    pos += 1
            pos += 1
            return items
        if t in "(),]":
            raise ExpressionError(f"unexpected {t!r} in {text!r}")
        if toks[pos:pos + 1] == ["("]:
            pos += 1
            args = []
            while True:
                if pos >= len(toks):
                    raise ExpressionError(f"unclosed '(' in {text!r}")
                if toks[pos] == ")":
                    pos += 1
                    break
                args.append(expr())
                if toks[pos:pos + 1] == [","]:
                    pos += 1
                elif toks[pos:pos + 1] != [")"]:
                    raise ExpressionError(f"expected ',' or ')' in {text!r}")
            return (t, args)
        return t

    tree = expr()
    if pos != len(toks):
        raise ExpressionError(f"trailing input in {text!r}")
    return tree


def _int(a) -> int:
    if isinstance(a, str) and re.fullmatch(r"-?\d+", a):
        return int(a)
    raise ExpressionError(f"expected an integer, got {a!r}")


def _load_set(path: str) -> StratifiedSet:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ExpressionError(f"cannot read {path}: {exc}") from exc
    return set_from_json(doc)


def _category(a) -> zoo.FiniteCategory:
    if isinstance(a, str):
        if a.endswith(".json"):
            return zoo.FiniteCategory.load(a)
        if a == "terminal":
            return zoo.terminal_category()
    elif isinstance(a, tuple):
        head, args = a
        if head == "poset" and len(args) == 1:
            return zoo.poset_category(_int(args[0]))
        if head == "cyclic" and len(args) == 1:
            return zoo.cyclic_group(_int(args[0]))
        if head == "chaotic":
            return zoo.chaotic_category([str(x) for x in args])
    raise ExpressionError(f"not a category: {a!r}")


def _as_set(v) -> StratifiedSet:
    return v.as_set() if isinstance(v, Subset) else v


def _arity(head: str, args: list, n: int) -> None:
    if len(args) != n:
        raise ExpressionError(f"{head} takes {n} argument(s), got {len(args)}")


def evaluate(tree, D: int = 3):
    """Evaluate a syntax tree (or expression text) to a set or a subset.

    ``D`` is the truncation used by constructions that need one (nerves).
    """
    if isinstance(tree, str) and ("(" in tree or " " in tree):
        tree = parse(tree)
    if isinstance(tree, str):
        if tree.endswith(".json"):
            return _load_set(tree)
        if tree == "E2":
            return zoo.build_E("E2")
        if tree == "E2p":
            return zoo.build_E("E2_prime")
        if tree == "point":
            return zoo.point()
        raise ExpressionError(f"unknown name {tree!r}")
    if not isinstance(tree, tuple):
        raise ExpressionError(f"not a construction: {tree!r}")
    head, args = tree
    try:
        return _apply(head, args, D)
    except ExpressionError:
        raise
    except (ValueError, KeyError) as exc:
        raise ExpressionError(f"{head}: {exc}") from exc


_NK = {
    "comp": lambda n, k: zoo.build_complicial(n, k),
    "compP": lambda n, k: zoo.build_complicial(n, k, "prime"),
    "compPP": lambda n, k: zoo.build_complicial(n, k, "double_prime"),
    "chorn": lambda n, k: zoo.build_complicial(n, k, "horn"),
    "chornP": lambda n, k: zoo.build_complicial(n, k, "horn_prime"),
    "shorn": lambda n, k: zoo.build_basic("simplicial_horn", n, k),
}
_TENSORS = {"gray": "gray", "lax": "lax", "pre": "pretensor", "pretensor": "pretensor", "boxdot": "boxdot"}


def _apply(head: str, args: list, D: int):
    if head in ("delta", "deltat", "bdry"):
        _arity(head, args, 1)
        kind = {"delta": "standard", "deltat": "standard_thin", "bdry": "boundary"}[head]
        return zoo.build_basic(kind, _int(args[0]))
    if head in _NK:
        _arity(head, args, 2)
        return _NK[head](_int(args[0]), _int(args[1]))
    if head == "gen":
        _arity(head, args, 2)
        if not isinstance(args[1], list):
            raise ExpressionError("gen needs a list of indices, e.g. gen(4,[0,2])")
        return zoo.build_generalized(_int(args[0]), [_int(k) for k in args[1]])[0]
    if head == "genhorn":
        _arity(head, args, 2)
        return zoo.build_generalized(_int(args[0]), [_int(k) for k in args[1]])[1]
    if head == "E":
        _arity(head, args, 2)
        return zoo.build_E("E_p_n", args[0], _int(args[1]))
    if head == "nerve":
        if len(args) not in (1, 2):
            raise ExpressionError("nerve takes a category and an optional stratification")
        return zoo.nerve(_category(args[0]), D, args[1] if len(args) == 2 else "minimal")
    if head in ("triv", "sst", "sk"):
        _arity(head, args, 2)
        fn = {"triv": zoo.triv, "sst": zoo.sst, "sk": zoo.sk}[head]
        return fn(_int(args[0]), _as_set(evaluate(args[1], D)))
    if head == "dual":
        _arity(head, args, 1)
        return zoo.dual_set(_as_set(evaluate(args[0], D)))
    if head == "estrat":
        _arity(head, args, 1)
        return zoo.estrat(_as_set(evaluate(args[0], D)))
    if head == "minimal":
        _arity(head, args, 1)
        return _as_set(evaluate(args[0], D)).with_thin(())
    if head == "trunc":
        _arity(head, args, 2)
        return _as_set(evaluate(args[1], D)).retruncate(_int(args[0]))
    if head == "join":
        _arity(head, args, 2)
        return tensors.join(_as_set(evaluate(args[0], D)), _as_set(evaluate(args[1], D)))
    if head in _TENSORS:
        _arity(head, args, 2)
        return tensors.tensor(_TENSORS[head], _as_set(evaluate(args[0], D)), _as_set(evaluate(args[1], D)))
    if head == "incl":
        _arity(head, args, 2)
        return _embed(_as_set(evaluate(args[0], D)), _as_set(evaluate(args[1], D)))
    if head == "corner":
        _arity(head, args, 3)
        e, i = evaluate(args[0], D), evaluate(args[1], D)
        if not (isinstance(e, Subset) and isinstance(i, Subset)):
            raise ExpressionError("corner needs two inclusions, e.g. incl(chorn(2,1),comp(2,1))")
        kind = _TENSORS.get(args[2], args[2])
        return tensors.corner_domain(e, i, kind)[0]
    if head in ("Pd", "dPd", "Ptd", "dPtd"):
        _arity(head, args, 2)
        P = _as_set(evaluate(args[0], D))
        if not isinstance(P, strata.ProductSet):
            raise ExpressionError(f"{head} needs a product of two simplices")
        F = tensors.DepthFiltration(P)
        d = F.bullet if args[1] == "bullet" else _int(args[1])
        s = F.slice(d)
        return {"Pd": s.P_d, "dPd": s.boundary, "Ptd": s.tilde, "dPtd": s.boundary_tilde}[head]
    raise ExpressionError(f"unknown construction {head!r}")


def _embed(S: StratifiedSet, T: StratifiedSet) -> Subset:
    """``S`` as a subset of ``T``, matching generators by name."""
    for g in S.dim_of:
        if g not in T.dim_of or T.dim_of[g] != S.dim_of[g]:
            raise ExpressionError(f"{g!r} is not a generator of the same dimension in the ambient set")
        if tuple(S.faces[g]) != tuple(T.faces[g]):
            raise ExpressionError(f"faces of {g!r} differ from the ambient set")
        if g in S.thin and g not in T.thin:
            raise ExpressionError(f"{g!r} is thin but not thin in the ambient set")
    U = Subset(T, frozenset(S.dim_of), frozenset(S.thin))
    rep = U.check()
    if not rep.ok:
        raise ExpressionError(f"not a subset: {rep.problems[:3]}")
    return U


# -- reports ------------------------------------------------------------------------


def jsonable(obj):
    """Best-effort JSON rendering of witnesses and details."""
    if isinstance(obj, SimplexRef):
        return ref_label(obj)
    if isinstance(obj, StratifiedMap):
        return map_to_json(obj)
    if isinstance(obj, Subset):
        return subset_to_json(obj)
    if isinstance(obj, StratifiedSet):
        return set_to_json(obj)
    if isinstance(obj, Operator):
        return operator_to_json(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [jsonable(v) for v in obj]
        return sorted(items, key=repr) if isinstance(obj, (set, frozenset)) else items
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return repr(obj)


def _report(check: str, parameters: dict, v: lifting.Verdict) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "check": check,
        "parameters": parameters,
        "verdict": v.status,
        "witness": jsonable(v.witness),
        "details": jsonable(v.details),
        "truncation": v.truncation,
        "budget_spent": v.budget_spent,
    }


def _emit(doc: dict, args) -> None:
    text = dumps(doc)
    if args.out:
        Path(args.out).write_text(text)
    if args.format == "summary":
        keys = ("check", "verdict", "truncation")
        print(" ".join(f"{k}={doc[k]}" for k in keys if k in doc) or text, end="\n")
    elif not args.out:
        sys.stdout.write(text)


# -- commands ----------------------------------------------------------------------------


def _budget(args):
    return None if args.budget is not None and args.budget < 0 else args.budget


def cmd_build(args) -> int:
    X = _as_set(evaluate(args.expr, args.trunc))
    if args.dim is not None:
        X = X.retruncate(args.dim)
    doc = set_to_json(X)
    if args.format == "summary":
        print(f"counts={list(X.counts())} thin={len(X.thin)} truncation={X.truncation}")
        if args.out:
            Path(args.out).write_text(dumps(doc))
        return 0
    text = dumps(doc)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_check(args) -> int:
    name = args.name
    inputs = [evaluate(x, args.trunc) for x in args.inputs]
    budget = _budget(args)
    params = {"inputs": args.inputs, "flavor": args.flavor, "dim": args.dim, "budget": args.budget}
    need = {"iso": 2, "rlp": 2}.get(name, 1)
    if len(inputs) != need:
        raise ExpressionError(f"check {name} takes {need} input(s)")
    X = _as_set(inputs[0])
    if name == "validate":
        rep = strata.validate(X)
        v = lifting.Verdict("pass" if rep.ok else "fail", rep.problems[:1] or None, 0, rep.problems, X.truncation)
    elif name == "compliciality":
        v = lifting.check_compliciality(X, args.flavor, args.dim, budget)
    elif name == "well-tempered":
        ok, bad = strata.is_well_tempered(X, args.dim)
        v = lifting.Verdict("pass" if ok else "fail", bad, 0, [], X.truncation if args.dim is None else args.dim)
    elif name == "strict":
        v = lifting.check_strict(X, args.dim, budget)
    elif name == "quasi-category":
        v = lifting.check_quasi_category(X, args.dim, budget)
    elif name == "equivalence-edges":
        v = lifting.check_equivalence_edges(X, budget)
    elif name == "iso":
        res = strata.isomorphic(X, _as_set(inputs[1]), budget if budget is not None else 10**9)
        status = {"iso": "pass", "not-iso": "fail"}.get(res.status, "inconclusive")
        v = lifting.Verdict(status, res.mapping, res.nodes, [], X.truncation)
    elif name == "rlp":
        e = inputs[0]
        if not isinstance(e, Subset):
            raise ExpressionError("rlp needs an inclusion first, e.g. incl(chorn(2,1),comp(2,1))")
        v = lifting.has_rlp_object(_as_set(inputs[1]), e, budget)
    else:
        raise ExpressionError(f"unknown check {name!r}")
    _emit(_report(name, params, v), args)
    return EXIT[v.status]


def _targets(args):
    target = evaluate(args.target, args.trunc)
    if isinstance(target, Subset):
        T, goal = target.ambient, target
    else:
        T, goal = target, strata.whole(target)
    start = evaluate(args.start, args.trunc)
    start = _embed(_as_set(start), T)
    return T, goal, start


def cmd_certify(args) -> int:
    T, goal, start = _targets(args)
    extras = None
    if args.extras == "J_q":
        extras = "J_q"
    elif args.extras and args.extras.startswith("J_"):
        extras = ("J_n", int(args.extras[2:]))
    D = args.dim if args.dim is not None else max(T.max_dim(), 1)
    catalog = certifier.elementary_catalog(D, args.flavor, extras)
    result = certifier.certify(goal, start, args.flavor, catalog, _budget(args))
    if isinstance(result, certifier.Certificate):
        doc = certifier.certificate_to_json(result)
        text = dumps(doc)
        if args.out:
            Path(args.out).write_text(text)
        if args.format == "summary":
            print(f"verdict=pass steps={len(result.steps)} flavor={result.flavor}")
        elif not args.out:
            sys.stdout.write(text)
        return 0
    params = {"target": args.target, "start": args.start, "flavor": args.flavor, "budget": args.budget}
    _emit(_report("certify", params, result), args)
    return EXIT[result.status]


def cmd_replay(args) -> int:
    cert = certifier.certificate_from_json(json.loads(Path(args.cert).read_text()))
    params = {"certificate": args.cert}
    if args.target:
        T, goal, start = _targets(args)
        same = (T.signature() == cert.target.signature()
                and goal.members == cert.goal.members and goal.flags == cert.goal.flags
                and start.members == cert.start.members and start.flags == cert.start.flags)
        if not same:
            v = lifting.Verdict("fail", "certificate is about a different inclusion", 0, [], T.truncation)
            _emit(_report("replay", params, v), args)
            return EXIT["fail"]
    v = certifier.replay(cert)
    _emit(_report("replay", params, v), args)
    return EXIT[v.status]


def cmd_maps(args) -> int:
    X = _as_set(evaluate(args.source, args.trunc))
    T = _as_set(evaluate(args.target, args.trunc))
    found = lifting.enumerate_maps(X, T, budget=_budget(args))
    status = "inconclusive" if found.status == "inconclusive" else "pass"
    doc = {
        "schema": REPORT_SCHEMA,
        "check": "maps",
        "parameters": {"source": args.source, "target": args.target, "budget": args.budget},
        "verdict": status,
        "count": len(found.maps),
        "budget_spent": found.nodes,
    }
    if args.list:
        doc["maps"] = [map_to_json(f) for f in found.maps]
    if args.format == "summary" or (args.count and not args.list):
        print(len(found.maps))
        if args.out:
            Path(args.out).write_text(dumps(doc))
    else:
        _emit(doc, args)
    return EXIT[status]


def cmd_closure(args) -> int:
    X = _as_set(evaluate(args.X, args.trunc))
    A = _as_set(evaluate(args.A, args.trunc))
    D = 2 if args.dim is None else args.dim
    C = lifting.closure_truncation(args.kind, X, A, D, _budget(args))
    if args.format == "summary":
        print(f"counts={list(C.counts())} thin={len(C.thin)} truncation={C.truncation}")
        if args.out:
            Path(args.out).write_text(dumps(set_to_json(C)))
        return 0
    text = dumps(set_to_json(C))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# -- argument parsing ----------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT["usage"], f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--trunc", type=int, default=3, help="truncation for nerves (default 3)")
    p.add_argument("--dim", type=int, default=None, help="dimension bound D")
    p.add_argument("--budget", type=int, default=lifting.DEFAULT_BUDGET, help="search nodes; negative for none")
    p.add_argument("--out", default=None, help="write the JSON document here")
    p.add_argument("--format", choices=("json", "summary"), default="json")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="complicial", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build", help="build a construction and print its set file")
    p.add_argument("expr")
    _common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("check", help="run a structural or lifting check")
    p.add_argument("name", choices=("validate", "compliciality", "well-tempered", "strict", "quasi-category",
                                    "equivalence-edges", "iso", "rlp"))
    p.add_argument("inputs", nargs="+")
    p.add_argument("--flavor", choices=certifier.FLAVORS, default="all")
    _common(p)
    p.set_defaults(func=cmd_check)

    for name, func in (("certify", cmd_certify), ("replay", cmd_replay)):
        p = sub.add_parser(name, help=f"{name} a cell-complex certificate")
        if name == "certify":
            p.add_argument("target")
            p.add_argument("--start", required=True)
            p.add_argument("--flavor", choices=certifier.FLAVORS, default="all")
            p.add_argument("--extras", default=None, help="J_q or J_<n>")
        else:
            p.add_argument("cert")
            p.add_argument("--target", default=None)
            p.add_argument("--start", default=None)
        _common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("maps", help="count or list stratified maps")
    p.add_argument("source")
    p.add_argument("target")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--count", action="store_true")
    g.add_argument("--list", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_maps)

    p = sub.add_parser("closure", help="bounded hom, lax or décalage closure")
    p.add_argument("kind", choices=lifting.CLOSURE_KINDS)
    p.add_argument("X")
    p.add_argument("A")
    _common(p)
    p.set_defaults(func=cmd_closure)
    return top


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "replay" and bool(args.target) != bool(args.start):
        parser.error("--target and --start go together")
    try:
        return args.func(args)
    except (ExpressionError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"complicial: error: {exc}", file=sys.stderr)
        return EXIT["usage"]


if __name__ == "__main__":
    sys.exit(main())
