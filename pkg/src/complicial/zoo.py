"""Constructors for the named stratified sets and the functors acting on them.

Simplices of standard simplices are named by the images of their injective
operators, so the edge ``(0, 2)`` of ``Δ[2]`` is ``"02"``.  Members of the
equivalence family are named by their symbol strings (``"-+-"``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Mapping

from .delta_ops import Operator, compose, dual, ez_factor, identity, is_admissible, monos
from .strata import (
    SimplexRef,
    StratifiedMap,
    StratifiedSet,
    Subset,
    generated_subset,
)

__all__ = [
    "mono_name",
    "parse_mono",
    "operator_ref",
    "simplex_map",
    "simplex_set",
    "build_basic",
    "build_complicial",
    "horn_inclusion",
    "thinness_inclusion",
    "thin_horn_inclusion",
    "boundary_inclusion",
    "simplicial_horn_inclusion",
    "thin_simplex_inclusion",
    "build_generalized",
    "generalized_thin",
    "verify_kvec_conditions",
    "valid_kvecs",
    "build_E",
    "E_inclusion",
    "symmetry",
    "FiniteCategory",
    "poset_category",
    "cyclic_group",
    "chaotic_category",
    "terminal_category",
    "nerve",
    "triv",
    "sst",
    "sk",
    "dual_set",
    "estrat",
    "point",
    "empty_set",
]


# -- standard simplices ----------------------------------------------------


def mono_name(images: Iterable[int], n: int) -> str:
    images = tuple(images)
    if n < 10:
        return "".join(map(str, images))
    return ",".join(map(str, images))


def parse_mono(name: str, n: int) -> Operator:
    images = [int(c) for c in name] if n < 10 else [int(c) for c in name.split(",")]
    return Operator(len(images) - 1, n, images)


def operator_ref(alpha: Operator) -> SimplexRef:
    """The simplex of ``Δ[cod]`` named by the operator ``alpha``."""
    epi, mono = ez_factor(alpha)
    return SimplexRef(mono_name(mono.images, alpha.cod), epi)


def simplex_map(alpha: Operator, source: StratifiedSet | None = None,
                target: StratifiedSet | None = None) -> StratifiedMap:
    """The map ``Δ[dom] -> Δ[cod]`` induced by ``alpha``."""
    source = simplex_set(alpha.dom) if source is None else source
    target = simplex_set(alpha.cod) if target is None else target
    return StratifiedMap(
        source,
        target,
        {g: operator_ref(compose(alpha, parse_mono(g, alpha.dom))) for g in source.dim_of},
    )


def simplex_set(
    n: int,
    thin: Callable[[Operator], bool] = lambda mu: False,
    D: int | None = None,
    keep: Callable[[Operator], bool] = lambda mu: True,
) -> StratifiedSet:
    """The faces of ``Δ[n]`` selected by ``keep`` (face closed), with the
    non-degenerate simplices satisfying ``thin`` flagged."""
    D = n if D is None else D
    generators, faces, flags = [], {}, []
    for r in range(min(n, D) + 1):
        level = []
        for mu in monos(r, n):
            if not keep(mu):
                continue
            name = mono_name(mu.images, n)
            level.append(name)
            if r > 0:
                faces[name] = tuple(
                    SimplexRef(mono_name(mu.images[:i] + mu.images[i + 1 :], n), identity(r - 1))
                    for i in range(r + 1)
                )
                if thin(mu):
                    flags.append(name)
        generators.append(level)
    return StratifiedSet(D, generators, faces, flags, skeletal=D >= n)


def point() -> StratifiedSet:
    return simplex_set(0)


def empty_set(D: int = 0) -> StratifiedSet:
    return StratifiedSet(D, [], {}, (), skeletal=True)


def _top(n: int) -> Callable[[Operator], bool]:
    return lambda mu: mu.dom == n


def build_basic(kind: str, n: int, k: int | None = None, D: int | None = None) -> StratifiedSet:
    if n < 0:
        raise ValueError("n must be >= 0")
    D = n if D is None else D
    if kind == "standard":
        return simplex_set(n, D=D)
    if kind == "standard_thin":
        if n == 0:
            raise ValueError("a 0-simplex cannot be thin")
        return simplex_set(n, thin=_top(n), D=D)
    if kind == "boundary":
        return simplex_set(n, D=D, keep=lambda mu: mu.dom < n)
    if kind == "simplicial_horn":
        if k is None or not 0 <= k <= n:
            raise ValueError(f"horn index {k} out of range for n={n}")
        return simplicial_horn_inclusion(n, k, D).as_set()
    raise ValueError(f"unknown basic kind {kind!r}")


def _admissible(n: int, k: int) -> Callable[[Operator], bool]:
    return lambda mu: is_admissible(mu, k)[0]


def _complicial_thin(n: int, k: int, variant: str) -> Callable[[Operator], bool]:
    adm = _admissible(n, k)
    if variant in ("plain", "horn"):
        return adm
    if variant in ("prime", "horn_prime"):
        primed = {j for j in (k - 1, k + 1) if 0 <= j <= n}
        return lambda mu: adm(mu) or (n >= 2 and mu.dom == n - 1 and mu.missing()[0] in primed)
    if variant == "double_prime":
        return lambda mu: adm(mu) or (n >= 2 and mu.dom == n - 1)
    raise ValueError(f"unknown complicial variant {variant!r}")


def _check_nk(n: int, k: int) -> None:
    if n < 0 or not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")


def _horn_seeds(n: int, skip: Iterable[int]) -> list:
    skip = set(skip)
    return [mono_name([j for j in range(n + 1) if j != i], n) for i in range(n + 1) if i not in skip]


def build_complicial(n: int, k: int, variant: str = "plain", D: int | None = None) -> StratifiedSet:
    """``Δ^k[n]`` and its primed variants, or (``horn*``) the matching horns."""
    _check_nk(n, k)
    if variant in ("horn", "horn_prime"):
        base = simplex_set(n, _complicial_thin(n, k, variant), D)
        return generated_subset(base, _horn_seeds(n, [k])).as_set()
    return simplex_set(n, _complicial_thin(n, k, variant), D)


def horn_inclusion(n: int, k: int, D: int | None = None) -> Subset:
    """``Λ^k[n] ⊆ Δ^k[n]``."""
    _check_nk(n, k)
    if n < 1:
        raise ValueError("horn extensions start at n = 1")
    return generated_subset(simplex_set(n, _complicial_thin(n, k, "plain"), D), _horn_seeds(n, [k]))


def thinness_inclusion(n: int, k: int, D: int | None = None) -> Subset:
    """``Δ^k[n]' ⊆ Δ^k[n]''``."""
    _check_nk(n, k)
    if n < 2:
        raise ValueError("thinness extensions start at n = 2")
    codomain = simplex_set(n, _complicial_thin(n, k, "double_prime"), D)
    prime = _complicial_thin(n, k, "prime")
    flags = {g for g in codomain.thin if prime(parse_mono(g, n))}
    return Subset(codomain, frozenset(codomain.dim_of), frozenset(flags))


def thin_horn_inclusion(n: int, k: int, D: int | None = None) -> Subset:
    """``Λ^k[n]' ⊆ Δ^k[n]''``."""
    _check_nk(n, k)
    codomain = simplex_set(n, _complicial_thin(n, k, "double_prime"), D)
    prime = _complicial_thin(n, k, "prime")
    horn = generated_subset(codomain, _horn_seeds(n, [k]))
    flags = {g for g in horn.members if g in codomain.thin and prime(parse_mono(g, n))}
    return Subset(codomain, horn.members, frozenset(flags))


def boundary_inclusion(n: int, D: int | None = None) -> Subset:
    """``∂Δ[n] ⊆ Δ[n]``."""
    X = simplex_set(n, D=D)
    return Subset(X, frozenset(g for g in X.dim_of if X.dim_of[g] < n), frozenset())


def simplicial_horn_inclusion(n: int, k: int, D: int | None = None) -> Subset:
    """``Λ^k[n] ⊆ Δ[n]`` with minimal stratifications."""
    _check_nk(n, k)
    return generated_subset(simplex_set(n, D=D), _horn_seeds(n, [k]))


def thin_simplex_inclusion(n: int, D: int | None = None) -> Subset:
    """``Δ[n] ⊆ Δ[n]_t`` (entire)."""
    if n < 1:
        raise ValueError("thin simplex inclusions start at n = 1")
    X = simplex_set(n, thin=_top(n), D=D)
    return Subset(X, frozenset(X.dim_of), frozenset())


# -- generalised complicial simplices ---------------------------------------


def valid_kvecs(n: int) -> list:
    """All non-empty index families in ``[n]`` with gaps of at least two."""
    out = []
    for size in range(1, n + 2):
        for kv in combinations(range(n + 1), size):
            if all(b - a >= 2 for a, b in zip(kv, kv[1:])):
                out.append(kv)
    return out


def _check_kvec(n: int, kvec) -> tuple:
    kvec = tuple(kvec)
    if not kvec:
        raise ValueError("index family must be non-empty")
    if any(not 0 <= k <= n for k in kvec):
        raise ValueError(f"indices {kvec} leave [0,{n}]")
    if any(b - a < 2 for a, b in zip(kvec, kvec[1:])):
        raise ValueError(f"indices {kvec} must increase with gaps of at least two")
    return kvec


def _kvec_rules(n: int, kvec, thin: set, mark: Callable[[Operator], None] | None) -> list:
    """Evaluate the two closure rules against ``thin`` (a set of monos).

    Returns the violations; with ``mark`` given, missing flags are added
    instead of reported.
    """
    problems = []
    for r in range(1, n + 1):
        for mu in monos(r, n):
            for k in kvec:
                ok, l = is_admissible(mu, k)
                if not ok:
                    continue
                if mu not in thin:
                    if mark is None:
                        problems.append(("not-thin", mu.images, k))
                    else:
                        mark(mu)
                drop_l = Operator(r - 1, n, mu.images[:l] + mu.images[l + 1 :])
                if drop_l not in thin:
                    continue
                for j in (l - 1, l + 1):
                    if 0 <= j <= r:
                        nb = Operator(r - 1, n, mu.images[:j] + mu.images[j + 1 :])
                        if r - 1 >= 1 and nb not in thin:
                            if mark is None:
                                problems.append(("face-not-thin", mu.images, k, j))
                            else:
                                mark(nb)
    return problems


def generalized_thin(n: int, kvec) -> frozenset:
    """Least stratification of ``Δ[n]`` meeting the ``kvec`` conditions."""
    kvec = _check_kvec(n, kvec)
    thin: set = set()
    while True:
        before = len(thin)
        _kvec_rules(n, kvec, thin, thin.add)
        if len(thin) == before:
            return frozenset(thin)


def build_generalized(n: int, kvec, D: int | None = None) -> tuple:
    """``(Δ^kvec[n], Λ^kvec)``; the horn is the regular subset generated by
    the codimension-one faces not indexed by ``kvec``."""
    kvec = _check_kvec(n, kvec)
    thin = generalized_thin(n, kvec)
    N = simplex_set(n, thin=lambda mu: mu in thin, D=D)
    return N, generated_subset(N, _horn_seeds(n, kvec))


def verify_kvec_conditions(N: StratifiedSet, kvec) -> tuple:
    """``(verdict, violations)`` for an entire superset ``N`` of a standard simplex."""
    n = N.max_dim()
    kvec = _check_kvec(n, kvec)
    thin = {parse_mono(g, n) for g in N.thin}
    problems = _kvec_rules(n, kvec, thin, None)
    return not problems, problems


# -- the equivalence family ---------------------------------------------------


def _alternating(p: str, length: int) -> str:
    other = "+" if p == "-" else "-"
    return "".join(p if i % 2 == 0 else other for i in range(length))


def _collapse_runs(word: str) -> SimplexRef:
    """Normal form of a symbol string in the chaotic nerve."""
    runs, images = [], []
    for c in word:
        if not runs or runs[-1] != c:
            runs.append(c)
        images.append(len(runs) - 1)
    top = len(runs) - 1
    return SimplexRef("".join(runs), Operator(len(word) - 1, top, images))


def _word_set(words: Iterable[str], D: int, thin_from: int | None, skeletal: bool) -> StratifiedSet:
    by_dim: dict = {}
    for w in words:
        by_dim.setdefault(len(w) - 1, []).append(w)
    generators = [sorted(by_dim.get(d, []), key=lambda w: (w[0] != "-", w)) for d in range(D + 1)]
    faces = {}
    for level in generators:
        for w in level:
            if len(w) > 1:
                faces[w] = tuple(_collapse_runs(w[:i] + w[i + 1 :]) for i in range(len(w)))
    thin = [] if thin_from is None else [w for w in faces if len(w) - 1 >= thin_from]
    return StratifiedSet(D, generators, faces, thin, skeletal)


def _negate(p: str) -> str:
    return "+" if p == "-" else "-"


def build_E(variant: str, p: str = "-", n: int = 0, D: int | None = None, minimal: bool = False) -> StratifiedSet:
    """Members of the equivalence family, 0-trivial unless ``minimal``.

    ``variant`` is ``"E_p_n"`` (needs ``p``, ``n``), ``"E_n"`` (both parities up
    to ``n``), ``"E"`` (the whole family truncated at ``D``), ``"E2_prime"`` or
    ``"E2"``.
    """
    thin_from = None if minimal else 1
    if variant == "E_p_n":
        if p not in "-+" or len(p) != 1:
            raise ValueError(f"parity must be '-' or '+', got {p!r}")
        D = n if D is None else D
        if D < n:
            raise ValueError("truncation must be at least n")
        words = [_alternating(p, j + 1) for j in range(n + 1)]
        words += [_alternating(_negate(p), j + 1) for j in range(n)]
        return _word_set(words, D, thin_from, skeletal=True)
    if variant in ("E_n", "E"):
        top = n if variant == "E_n" else D
        if top is None:
            raise ValueError("the whole family needs a truncation")
        D = top if D is None else D
        words = [_alternating(q, j + 1) for q in "-+" for j in range(top + 1)]
        return _word_set(words, D, thin_from, skeletal=variant == "E_n")
    if variant == "E2":
        return build_E("E_n", n=2, D=D, minimal=minimal)
    if variant == "E2_prime":
        D = 2 if D is None else D
        e = identity(1)
        v0 = identity(0)
        generators = [["-", "+"], ["v", "w", "v'"], ["a", "a'"]]
        faces = {
            "v": (SimplexRef("+", v0), SimplexRef("-", v0)),
            "w": (SimplexRef("-", v0), SimplexRef("+", v0)),
            "v'": (SimplexRef("+", v0), SimplexRef("-", v0)),
            "a": (SimplexRef("w", e), SimplexRef("-", Operator(1, 0, (0, 0))), SimplexRef("v", e)),
            "a'": (SimplexRef("v'", e), SimplexRef("+", Operator(1, 0, (0, 0))), SimplexRef("w", e)),
        }
        thin = [] if minimal else ["v", "w", "v'", "a", "a'"]
        return StratifiedSet(D, generators, faces, thin, skeletal=True)
    raise ValueError(f"unknown E variant {variant!r}")


def E_inclusion(p: str, n: int, minimal: bool = False) -> Subset:
    """``E^p_n ⊆ E^p_{n+1}`` as a regular subset."""
    big = build_E("E_p_n", p, n + 1, minimal=minimal)
    small = build_E("E_p_n", p, n, minimal=minimal)
    return generated_subset(big, small.all_generators())


def _relabel(X: StratifiedSet, rename: Callable[[str], str]) -> tuple:
    gens = [[rename(g) for g in level] for level in X.generators]
    faces = {
        rename(g): tuple(SimplexRef(rename(f.generator), f.degeneracy) for f in fs) for g, fs in X.faces.items()
    }
    return StratifiedSet(X.truncation, gens, faces, [rename(t) for t in X.thin], X.skeletal)


def symmetry(variant: str, X: StratifiedSet) -> StratifiedMap:
    """Parity swap (``negate``) or symbol reversal (``reverse``) on a member
    of the equivalence family.

    ``negate`` is an isomorphism from ``X`` onto its parity-swapped copy;
    ``reverse`` is an isomorphism from the alternating dual of ``X`` onto the
    copy with every word reversed.
    """
    if any(set(g) - set("+-") for g in X.dim_of):
        raise ValueError("symmetries act on sets whose generators are symbol strings")
    if variant == "negate":
        rename = lambda w: w.translate(str.maketrans("+-", "-+"))
        source = X
    elif variant == "reverse":
        rename = lambda w: w[::-1]
        source = dual_set(X)
    else:
        raise ValueError(f"unknown symmetry {variant!r}")
    target = _relabel(source, rename)
    return StratifiedMap(source, target, {g: target.gen(rename(g)) for g in source.dim_of})


# -- nerves of finite categories -------------------------------------------------


@dataclass
class FiniteCategory:
    """Objects, named morphisms and a composition table.

    ``composition[(f, g)]`` is the composite "first ``f`` then ``g``".
    """

    objects: tuple
    morphisms: dict  # name -> (source, target)
    identities: dict  # object -> identity morphism name
    composition: dict  # (f, g) -> name

    def composable(self, f: str, g: str) -> bool:
        return self.morphisms[f][1] == self.morphisms[g][0]

    def check(self) -> list:
        problems = []
        for o in self.objects:
            i = self.identities.get(o)
            if i is None or self.morphisms.get(i) != (o, o):
                problems.append(("identity", o))
        if problems:
            return problems
        for f, (s, t) in self.morphisms.items():
            if self.composition.get((self.identities[s], f)) != f or self.composition.get((f, self.identities[t])) != f:
                problems.append(("unit", f))
        for f in self.morphisms:
            for g in self.morphisms:
                if not self.composable(f, g):
                    continue
                fg = self.composition.get((f, g))
                if fg is None or self.morphisms.get(fg) != (self.morphisms[f][0], self.morphisms[g][1]):
                    problems.append(("composite", f, g))
        if problems:
            return problems
        for f in self.morphisms:
            for g in self.morphisms:
                if not self.composable(f, g):
                    continue
                for h in self.morphisms:
                    if self.composable(g, h):
                        lhs = self.composition[(self.composition[(f, g)], h)]
                        rhs = self.composition[(f, self.composition[(g, h)])]
                        if lhs != rhs:
                            problems.append(("associativity", f, g, h))
        return problems

    def opposite(self) -> "FiniteCategory":
        return FiniteCategory(
            self.objects,
            {f: (t, s) for f, (s, t) in self.morphisms.items()},
            dict(self.identities),
            {(g, f): h for (f, g), h in self.composition.items()},
        )

    def to_json(self) -> dict:
        return {
            "objects": list(self.objects),
            "morphisms": [{"name": f, "source": s, "target": t} for f, (s, t) in sorted(self.morphisms.items())],
            "identities": dict(sorted(self.identities.items())),
            "composition": [[f, g, h] for (f, g), h in sorted(self.composition.items())],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "FiniteCategory":
        cat = cls(
            tuple(data["objects"]),
            {m["name"]: (m["source"], m["target"]) for m in data["morphisms"]},
            dict(data["identities"]),
            {(f, g): h for f, g, h in data["composition"]},
        )
        problems = cat.check()
        if problems:
            raise ValueError(f"not a category: {problems[:5]}")
        return cat

    @classmethod
    def load(cls, path: str) -> "FiniteCategory":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def poset_category(n: int) -> FiniteCategory:
    """The ordinal ``[n]`` as a category; ``i <= j`` is named ``"i<j"``."""
    objs = tuple(str(i) for i in range(n + 1))
    mor = {f"{i}<{j}": (str(i), str(j)) for i in range(n + 1) for j in range(i, n + 1)}
    ids = {str(i): f"{i}<{i}" for i in range(n + 1)}
    comp = {}
    for i in range(n + 1):
        for j in range(i, n + 1):
            for k in range(j, n + 1):
                comp[(f"{i}<{j}", f"{j}<{k}")] = f"{i}<{k}"
    return FiniteCategory(objs, mor, ids, comp)


def cyclic_group(order: int) -> FiniteCategory:
    """``Z/order`` as a one-object category with unit ``"e"``; the generator is
    ``"g"`` for order 2 and the powers are ``"g1"``, ``"g2"``, ... otherwise."""
    names = ["e"] + [f"g{i}" if order > 2 else "g" for i in range(1, order)]
    mor = {name: ("*", "*") for name in names}
    comp = {(names[i], names[j]): names[(i + j) % order] for i in range(order) for j in range(order)}
    return FiniteCategory(("*",), mor, {"*": "e"}, comp)


def chaotic_category(objects: Iterable[str]) -> FiniteCategory:
    """Exactly one morphism ``a>b`` between any two objects."""
    objs = tuple(objects)
    mor = {f"{a}>{b}": (a, b) for a in objs for b in objs}
    comp = {(f"{a}>{b}", f"{b}>{c}"): f"{a}>{c}" for a in objs for b in objs for c in objs}
    return FiniteCategory(objs, mor, {a: f"{a}>{a}" for a in objs}, comp)


def terminal_category() -> FiniteCategory:
    return FiniteCategory(("*",), {"id": ("*", "*")}, {"*": "id"}, {("id", "id"): "id"})


def _normalize_chain(C: FiniteCategory, start: str, chain: tuple) -> SimplexRef:
    ids = set(C.identities.values())
    kept = [f for f in chain if f not in ids]
    images, level = [0], 0
    for f in chain:
        if f not in ids:
            level += 1
        images.append(level)
    if not kept:
        name = start
    elif len(kept) == 1:
        name = kept[0]
    else:
        name = ";".join(kept)
    return SimplexRef(name, Operator(len(chain), level, images))


def nerve(C: FiniteCategory, D: int, strat: str = "minimal") -> StratifiedSet:
    """Classical nerve truncated at ``D``.

    Generators in dimension ``r >= 1`` are chains of ``r`` composable
    non-identity morphisms, named by joining morphism names with ``;``.
    """
    problems = C.check()
    if problems:
        raise ValueError(f"not a category: {problems[:5]}")
    ids = set(C.identities.values())
    arrows = sorted(f for f in C.morphisms if f not in ids)
    clash = set(C.objects) & set(arrows)
    if clash:
        raise ValueError(f"object and morphism names overlap: {sorted(clash)}")
    chains = [[(o,) for o in C.objects], [(f,) for f in arrows]]
    for r in range(2, D + 2):
        chains.append([c + (f,) for c in chains[-1] for f in arrows if C.composable(c[-1], f)])
    skeletal = not chains[D + 1]
    generators, faces = [], {}
    for r in range(D + 1):
        level = []
        for c in chains[r]:
            name = c[0] if r <= 1 else ";".join(c)
            level.append(name)
            if r == 1:
                s, t = C.morphisms[c[0]]
                faces[name] = (SimplexRef(t, identity(0)), SimplexRef(s, identity(0)))
            elif r >= 2:
                fs = []
                for i in range(r + 1):
                    if i == 0:
                        sub, start = c[1:], C.morphisms[c[1]][0]
                    elif i == r:
                        sub, start = c[:-1], C.morphisms[c[0]][0]
                    else:
                        sub = c[: i - 1] + (C.composition[(c[i - 1], c[i])],) + c[i + 1 :]
                        start = C.morphisms[c[0]][0]
                    fs.append(_normalize_chain(C, start, sub))
                faces[name] = tuple(fs)
        generators.append(level)
    X = StratifiedSet(D, generators, faces, (), skeletal)
    if strat == "minimal":
        return X
    if strat == "zero_trivial":
        return triv(0, X)
    if strat == "natural":
        return triv(1, X)
    if strat == "estrat":
        return estrat(X)
    raise ValueError(f"unknown nerve stratification {strat!r}")


# -- functors -------------------------------------------------------------------


def triv(n: int, X: StratifiedSet) -> StratifiedSet:
    """Make every simplex of dimension above ``n`` thin."""
    extra = {g for g, d in X.dim_of.items() if d > n and d >= 1}
    return X.with_thin(X.thin | extra)


def sst(n: int, X: StratifiedSet) -> Subset:
    """Regular subset of simplices whose faces above dimension ``n`` are all thin."""
    members = set()
    for g, d in X.dim_of.items():
        if all(X.dim_of[h] <= n or h in X.thin for h in X.sub_generators(g)):
            members.add(g)
    members = frozenset(members)
    return Subset(X, members, X.thin & members)


def sk(n: int, X: StratifiedSet) -> Subset:
    members = frozenset(g for g, d in X.dim_of.items() if d <= n)
    return Subset(X, members, X.thin & members)


def dual_set(X: StratifiedSet) -> StratifiedSet:
    """Same simplices and flags with faces re-indexed by ``i -> r - i``."""
    faces = {}
    for g, fs in X.faces.items():
        r = len(fs) - 1
        faces[g] = tuple(SimplexRef(fs[r - i].generator, dual(fs[r - i].degeneracy)) for i in range(r + 1))
    return StratifiedSet(X.truncation, X.generators, faces, X.thin, X.skeletal)


def estrat(X: StratifiedSet, budget: int = 1_000_000) -> StratifiedSet:
    """The stratification making thin every simplex above dimension 1 and
    exactly those edges that admit an inverse witness from the minimal
    two-simplex equivalence."""
    from .lifting import enumerate_maps

    if X.truncation < 2:
        raise ValueError("edge witnesses need truncation at least 2")
    bare = X.with_thin(())
    witness_source = build_E("E2", minimal=True)
    thin = {g for g, d in X.dim_of.items() if d >= 2}
    for e in X.generators[1]:
        found = enumerate_maps(witness_source, bare, partial={"-+": bare.gen(e)}, budget=budget, limit=1)
        if found.status == "inconclusive":
            raise RuntimeError(f"edge witness search for {e} exhausted its budget")
        if found.maps:
            thin.add(e)
    return X.with_thin(thin)
