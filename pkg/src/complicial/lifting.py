"""Map enumeration and lifting-property verdicts.

Everything here reduces to one backtracking engine, :func:`enumerate_maps`,
which assigns generators in order of increasing dimension and prunes on
face and thinness constraints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import islice
from typing import Callable, Mapping

from .delta_ops import Operator, compose, degeneracy, face, identity
from .strata import (
    ProductSet,
    SimplexRef,
    StratifiedMap,
    StratifiedSet,
    Subset,
    is_well_tempered,
    ref_label,
)
from . import zoo

__all__ = [
    "Verdict",
    "MapSearch",
    "LiftingProblem",
    "enumerate_maps",
    "enumerate_extensions",
    "has_rlp_object",
    "has_rlp_map",
    "flavor_indices",
    "check_compliciality",
    "check_thinness_extension",
    "check_equivalence_edge",
    "check_equivalence_edges",
    "check_strict",
    "check_quasi_category",
    "closure_truncation",
    "check_simple_homotopy",
    "HomotopyInverse",
    "search_homotopy_inverse",
    "identity_map",
    "CLOSURE_KINDS",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 2_000_000


@dataclass
class Verdict:
    status: str  # "pass" | "fail" | "inconclusive"
    witness: object = None
    budget_spent: int = 0
    details: list = field(default_factory=list)
    truncation: int | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def __bool__(self) -> bool:
        return self.passed


@dataclass
class MapSearch:
    maps: list
    status: str  # "complete" | "limit" | "inconclusive"
    nodes: int = 0


class _Budget(Exception):
    pass


class _Counter:
    def __init__(self, budget: int | None):
        self.budget = budget
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise _Budget


def _section(eps: Operator) -> Operator:
    """A mono ``s`` with ``eps o s == id``: the first preimage of each value."""
    first: dict = {}
    for i, v in enumerate(eps.images):
        first.setdefault(v, i)
    return Operator(eps.cod, eps.dom, (first[v] for v in range(eps.cod + 1)))


def _propagate(X: StratifiedSet, T: StratifiedSet, partial: Mapping[str, SimplexRef]) -> dict | None:
    """Close a partial assignment under faces; ``None`` if inconsistent."""
    out = dict(partial)
    stack = list(partial)
    while stack:
        g = stack.pop()
        y = out[g]
        for i, f in enumerate(X.faces[g]):
            forced_face = T.face(y, i)
            if f.degeneracy.is_identity:
                forced = forced_face
            else:
                forced = T.act(forced_face, _section(f.degeneracy))
                if T.act(forced, f.degeneracy) != forced_face:
                    return None
            have = out.get(f.generator)
            if have is None:
                out[f.generator] = forced
                stack.append(f.generator)
            elif have != forced:
                return None
    return out


def _image(T: StratifiedSet, assign: dict, f: SimplexRef) -> SimplexRef:
    y = assign[f.generator]
    return y if f.degeneracy.is_identity else T.act(y, f.degeneracy)


def _search(X: StratifiedSet, T: StratifiedSet, partial: Mapping[str, SimplexRef] | None,
            counter: _Counter, limit: int | None, accept: Callable[[dict], bool] | None = None):
    """Yield complete assignments (dicts); raises ``_Budget`` on exhaustion.

    ``limit`` is advisory; callers stop consuming once they have enough.
    """
    if X.max_dim() > T.truncation and T.skeletal:
        T = T.retruncate(X.max_dim())
    if X.max_dim() > T.truncation:
        raise ValueError(f"source has {X.max_dim()}-dimensional generators but target is truncated at {T.truncation}")
    fixed = {}
    if partial:
        for g, y in partial.items():
            if g not in X.dim_of:
                raise ValueError(f"{g!r} is not a generator of the source")
            if y.dim != X.dim_of[g]:
                raise ValueError(f"{g!r} assigned a simplex of the wrong dimension")
        closed = _propagate(X, T, partial)
        if closed is None:
            return
        fixed = closed
    order = [g for level in X.generators for g in level]
    assign: dict = {}

    def rec(pos: int):
        if pos == len(order):
            if accept is None or accept(assign):
                yield dict(assign)
            return
        counter.tick()
        g = order[pos]
        d = X.dim_of[g]
        if d == 0:
            cands = (fixed[g],) if g in fixed else T.simplices(0)
        else:
            bd = tuple(_image(T, assign, f) for f in X.faces[g])
            cands = T.simplices_with_boundary(d).get(bd, ())
            if g in fixed:
                cands = (fixed[g],) if fixed[g] in cands else ()
        thin = g in X.thin
        for c in cands:
            if thin and not T.is_thin(c):
                continue
            assign[g] = c
            yield from rec(pos + 1)
        assign.pop(g, None)

    yield from rec(0)


def enumerate_maps(X: StratifiedSet, T: StratifiedSet, partial: Mapping[str, SimplexRef] | None = None,
                   budget: int | None = DEFAULT_BUDGET, limit: int | None = None,
                   accept: Callable[[dict], bool] | None = None) -> MapSearch:
    """All stratified maps ``X -> T`` extending ``partial``, in canonical order."""
    counter = _Counter(budget)
    maps = []
    try:
        for a in _search(X, T, partial, counter, limit, accept):
            maps.append(StratifiedMap(X, T, a))
            if limit is not None and len(maps) >= limit:
                return MapSearch(maps, "limit", counter.nodes)
    except _Budget:
        return MapSearch(maps, "inconclusive", counter.nodes)
    return MapSearch(maps, "complete", counter.nodes)


def enumerate_extensions(f: StratifiedMap, V: StratifiedSet | Subset, budget: int | None = DEFAULT_BUDGET,
                         limit: int | None = None) -> MapSearch:
    """All maps ``V -> target`` restricting to ``f`` on the generators of its source."""
    if isinstance(V, Subset):
        V = V.ambient
    for g in f.assignment:
        if g not in V.dim_of:
            raise ValueError(f"{g!r} is not a generator of the extension domain")
    return enumerate_maps(V, f.target, partial=f.assignment, budget=budget, limit=limit)


@dataclass
class LiftingProblem:
    e: Subset
    p: StratifiedMap
    u: StratifiedMap
    v: StratifiedMap

    def commutes(self) -> bool:
        return all(self.p(self.u.assignment[g]) == self.v.assignment[g] for g in self.e.members)


def has_rlp_object(T: StratifiedSet, e: Subset, budget: int | None = DEFAULT_BUDGET) -> Verdict:
    """Does every map ``U -> T`` extend along ``U ⊆ V``?"""
    U = e.as_set()
    counter = _Counter(budget)
    checked = 0
    try:
        for a in _search(U, T, None, counter, None):
            checked += 1
            for _ in _search(e.ambient, T, a, counter, 1):
                break
            else:
                return Verdict("fail", StratifiedMap(U, T, a), counter.nodes, [{"checked": checked}], T.truncation)
    except _Budget:
        return Verdict("inconclusive", None, counter.nodes, [{"checked": checked}], T.truncation)
    return Verdict("pass", None, counter.nodes, [{"checked": checked}], T.truncation)


def has_rlp_map(p: StratifiedMap, e: Subset, budget: int | None = DEFAULT_BUDGET) -> Verdict:
    """Does every lifting problem of ``e`` against ``p`` have a diagonal?"""
    A, B = p.source, p.target
    U, V = e.as_set(), e.ambient
    counter = _Counter(budget)
    try:
        for ua in _search(U, A, None, counter, None):
            pushed = {g: p(y) for g, y in ua.items()}
            for va in _search(V, B, pushed, counter, None):
                def over_v(w: dict, va=va) -> bool:
                    return all(p(w[g]) == va[g] for g in va)

                for _ in _search(V, A, ua, counter, 1, accept=over_v):
                    break
                else:
                    problem = LiftingProblem(e, p, StratifiedMap(U, A, ua), StratifiedMap(V, B, va))
                    return Verdict("fail", problem, counter.nodes, [], A.truncation)
    except _Budget:
        return Verdict("inconclusive", None, counter.nodes, [], A.truncation)
    return Verdict("pass", None, counter.nodes, [], A.truncation)


def flavor_indices(n: int, flavor: str) -> list:
    """Horn indices ``k`` of dimension ``n`` belonging to a flavor."""
    ks = range(n + 1)
    if flavor == "all":
        return list(ks)
    if flavor == "inner":
        return [k for k in ks if 0 < k < n]
    if flavor == "left":
        return [k for k in ks if k < n]
    if flavor == "right":
        return [k for k in ks if k > 0]
    raise ValueError(f"unknown flavor {flavor!r}")


def check_thinness_extension(T: StratifiedSet, n: int, k: int) -> Verdict:
    """Closed form: a thin ``x`` whose faces flagged in ``Δ^k[n]'`` are all
    thin has thin ``x.δ_k``."""
    if n < 2 or not 0 <= k <= n:
        raise ValueError(f"no thinness extension for n={n}, k={k}")
    if n > T.truncation:
        raise ValueError(f"n={n} exceeds truncation {T.truncation}")
    source = zoo.build_complicial(n, k, "prime")
    flagged = [zoo.parse_mono(g, n) for g in sorted(source.thin) if source.dim_of[g] < n]
    checked = 0
    for x in T.simplices(n):
        if not T.is_thin(x):
            continue
        if all(T.is_thin(T.act(x, mu)) for mu in flagged):
            checked += 1
            if not T.is_thin(T.face(x, k)):
                return Verdict("fail", x, checked, [{"n": n, "k": k}], T.truncation)
    return Verdict("pass", None, checked, [{"n": n, "k": k}], T.truncation)


def check_compliciality(T: StratifiedSet, flavor: str = "all", D: int | None = None,
                        budget: int | None = DEFAULT_BUDGET) -> Verdict:
    """RLP against every elementary anodyne extension of dimension ``<= D``."""
    D = T.truncation if D is None else D
    if D > T.truncation:
        raise ValueError(f"D={D} exceeds truncation {T.truncation}")
    details, spent, status, witness = [], 0, "pass", None
    for n in range(1, D + 1):
        for k in flavor_indices(n, flavor):
            remaining = None if budget is None else max(budget - spent, 0)
            v = has_rlp_object(T, zoo.horn_inclusion(n, k), remaining)
            spent += v.budget_spent
            details.append({"kind": "horn", "n": n, "k": k, "status": v.status})
            if v.status == "fail" and status != "fail":
                status, witness = "fail", ("horn", n, k, v.witness)
            elif v.status == "inconclusive" and status == "pass":
                status = "inconclusive"
            if n >= 2:
                t = check_thinness_extension(T, n, k)
                details.append({"kind": "thinness", "n": n, "k": k, "status": t.status})
                if t.status == "fail" and status != "fail":
                    status, witness = "fail", ("thinness", n, k, t.witness)
    return Verdict(status, witness, spent, details, D)


# -- equivalences -----------------------------------------------------------


def check_equivalence_edge(T: StratifiedSet, x: SimplexRef, budget: int | None = DEFAULT_BUDGET) -> Verdict:
    """Is there a map from the 0-trivial two-simplex equivalence sending ``-+`` to ``x``?"""
    if x.dim != 1:
        raise ValueError("equivalence witnesses are for 1-simplices")
    E2 = zoo.build_E("E2")
    found = enumerate_maps(E2, T, {"-+": x}, budget=budget, limit=1)
    if found.maps:
        return Verdict("pass", found.maps[0], found.nodes, [], T.truncation)
    if found.status == "inconclusive":
        return Verdict("inconclusive", None, found.nodes, [], T.truncation)
    return Verdict("fail", x, found.nodes, [], T.truncation)


def check_equivalence_edges(T: StratifiedSet, budget: int | None = DEFAULT_BUDGET) -> Verdict:
    """Every thin 1-simplex admits an equivalence witness."""
    spent = 0
    for e in T.generators[1] if T.truncation >= 1 else ():
        if e not in T.thin:
            continue
        v = check_equivalence_edge(T, T.gen(e), budget)
        spent += v.budget_spent
        if not v.passed:
            return Verdict(v.status, T.gen(e) if v.status == "fail" else None, spent, [], T.truncation)
    return Verdict("pass", None, spent, [], T.truncation)


# -- strictness -------------------------------------------------------------


def _unique_filler_route(T: StratifiedSet, D: int, budget: int | None) -> tuple:
    """Every complicial horn has exactly one filler and every thinness
    extension lifts, found by search.  Returns ``(status, witness, nodes)``."""
    counter = _Counter(budget)
    try:
        for n in range(1, D + 1):
            for k in range(n + 1):
                e = zoo.horn_inclusion(n, k)
                U = e.as_set()
                for a in _search(U, T, None, counter, None):
                    fillers = list(islice(_search(e.ambient, T, a, counter, 2), 2))
                    if len(fillers) != 1:
                        return "fail", ("horn", n, k, StratifiedMap(U, T, a)), counter.nodes
                if n < 2:
                    continue
                e = zoo.thinness_inclusion(n, k)
                U = e.as_set()
                for a in _search(U, T, None, counter, None):
                    for _ in _search(e.ambient, T, a, counter, 1):
                        break
                    else:
                        return "fail", ("thinness", n, k, StratifiedMap(U, T, a)), counter.nodes
    except _Budget:
        return "inconclusive", None, counter.nodes
    return "pass", None, counter.nodes


def check_strict(T: StratifiedSet, D: int | None = None, budget: int | None = DEFAULT_BUDGET) -> Verdict:
    """Strictness by two independent routes, which must agree.

    Route one: weak compliciality plus well-temperedness.  Route two: unique
    fillers for every complicial horn and lifts for every thinness
    extension, both by search.
    """
    D = T.truncation if D is None else D
    weak = check_compliciality(T, "all", D, budget)
    tempered, bad = is_well_tempered(T, D)
    if weak.status == "inconclusive":
        route_one = "inconclusive"
    else:
        route_one = "pass" if weak.passed and tempered else "fail"
    route_two, witness_two, nodes = _unique_filler_route(T, D, budget)
    details = [
        {"route": "weak+well-tempered", "status": route_one, "compliciality": weak.status,
         "well_tempered": tempered},
        {"route": "unique-fillers", "status": route_two},
    ]
    spent = weak.budget_spent + nodes
    if "inconclusive" in (route_one, route_two):
        return Verdict("inconclusive", None, spent, details, D)
    if route_one != route_two:
        raise AssertionError(f"strictness routes disagree: {details}")
    witness = None
    if route_one == "fail":
        witness = ("not-well-tempered", bad) if not tempered else (weak.witness or witness_two)
    return Verdict(route_one, witness, spent, details, D)


def check_quasi_category(X: StratifiedSet, D: int | None = None, budget: int | None = DEFAULT_BUDGET) -> Verdict:
    """Inner horn fillers in the underlying simplicial set.

    When those all exist and ``D >= 2`` the details also carry the verdict of
    weak compliciality for the equivalence stratification of ``X``.
    """
    D = X.truncation if D is None else D
    bare = X.with_thin(())
    details, status, witness, spent = [], "pass", None, 0
    for n in range(2, D + 1):
        for k in range(1, n):
            v = has_rlp_object(bare, zoo.simplicial_horn_inclusion(n, k), budget)
            spent += v.budget_spent
            details.append({"kind": "inner-horn", "n": n, "k": k, "status": v.status})
            if v.status == "fail" and status != "fail":
                status, witness = "fail", ("horn", n, k, v.witness)
            elif v.status == "inconclusive" and status == "pass":
                status = "inconclusive"
    if status == "pass" and D >= 2:
        companion = check_compliciality(zoo.estrat(bare), "all", D, budget)
        spent += companion.budget_spent
        details.append({"kind": "estrat-compliciality", "status": companion.status})
    return Verdict(status, witness, spent, details, D)


# -- bounded closures -----------------------------------------------------------

CLOSURE_KINDS = ("hom", "lax_l", "lax_r", "dec_l", "dec_r")


def _closure_factor(kind: str, X: StratifiedSet, S: StratifiedSet) -> StratifiedSet:
    """``X ⊙ S`` for the tensor matching ``kind``; ``S`` is a standard simplex."""
    from . import tensors

    if kind == "hom":
        return tensors.gray(X, S)
    if kind == "lax_l":
        return tensors.pretensor(X, S)
    if kind == "lax_r":
        return tensors.pretensor(S, X)
    if kind == "dec_l":
        return tensors.join(X, S)
    if kind == "dec_r":
        return tensors.join(S, X)
    raise ValueError(f"unknown closure kind {kind!r}")


def _simplex_on_left(kind: str) -> bool:
    return kind in ("lax_r", "dec_r")


def _canonical_name(assignment: Mapping[str, SimplexRef]) -> str:
    return "{" + ",".join(f"{g}:{ref_label(y)}" for g, y in sorted(assignment.items())) + "}"


class _Closure:
    """The factors ``X ⊙ Δ[n]`` and the maps ``1 ⊙ alpha`` between them."""

    def __init__(self, kind: str, X: StratifiedSet, top: int):
        self.kind = kind
        self.X = X
        self.plain = [_closure_factor(kind, X, zoo.simplex_set(n)) for n in range(top + 1)]
        self.thin = [None] + [_closure_factor(kind, X, zoo.build_basic("standard_thin", n)) for n in range(1, top + 1)]
        self._maps: dict = {}

    def along(self, alpha: Operator) -> StratifiedMap:
        """``1 ⊙ alpha`` from ``X ⊙ Δ[dom]`` to ``X ⊙ Δ[cod]``."""
        from . import tensors

        key = (alpha.dom, alpha.cod, alpha.images)
        hit = self._maps.get(key)
        if hit is not None:
            return hit
        Zs, Zt = self.plain[alpha.dom], self.plain[alpha.cod]
        s = zoo.simplex_map(alpha)
        if _simplex_on_left(self.kind):
            ident = StratifiedMap(Zs.right, Zt.right, {g: Zt.right.gen(g) for g in Zs.right.dim_of})
            out = tensors.tensor_map(Zs, Zt, s, ident)
        else:
            ident = StratifiedMap(Zs.left, Zt.left, {g: Zt.left.gen(g) for g in Zs.left.dim_of})
            out = tensors.tensor_map(Zs, Zt, ident, s)
        self._maps[key] = out
        return out


def closure_truncation(kind: str, X: StratifiedSet, A: StratifiedSet, D_out: int,
                       budget: int | None = DEFAULT_BUDGET) -> StratifiedSet:
    """Bounded hom / lax / décalage closure of ``A`` by ``X``.

    The ``n``-simplices (``n <= D_out``) are the stratified maps
    ``X ⊙ Δ[n] -> A``, thin when they remain stratified on ``X ⊙ Δ[n]_t``.
    Faces are restriction along ``1 ⊙ δ_i``; a simplex is degenerate at
    ``j`` exactly when it equals ``(x . δ_j) . σ_j``.  Generators are named
    by the canonical serialization of their maps.
    """
    if not X.skeletal:
        raise ValueError("closures need a finite (skeletal) first argument")
    C = _Closure(kind, X, D_out)
    need = max(Z.max_dim() for Z in C.plain)
    if need > A.truncation and A.skeletal:
        A = A.retruncate(need)
    if need > A.truncation:
        raise ValueError(f"A must be truncated at >= {need} for D_out={D_out}")
    spent = 0
    levels = []
    for n in range(D_out + 1):
        found = enumerate_maps(C.plain[n], A, budget=None if budget is None else max(budget - spent, 0))
        spent += found.nodes
        if found.status == "inconclusive":
            raise RuntimeError(f"closure enumeration exhausted its budget at n={n}")
        levels.append(found.maps)

    def pull(a: StratifiedMap, alpha: Operator) -> StratifiedMap:
        return a.compose_after(C.along(alpha))

    normal: list = []
    generators: list = []
    faces: dict = {}
    thin: list = []
    for n, maps in enumerate(levels):
        norm_n, gens_n = {}, []
        for a in maps:
            key = _canonical_name(a.assignment)
            nf = None
            for j in range(n):
                down = pull(a, face(n, j))
                if pull(down, degeneracy(n - 1, j)) == a:
                    lower = normal[n - 1][_canonical_name(down.assignment)]
                    nf = SimplexRef(lower.generator, compose(lower.degeneracy, degeneracy(n - 1, j)))
                    break
            if nf is None:
                nf = SimplexRef(key, identity(n))
                gens_n.append(key)
                if n >= 1:
                    faces[key] = tuple(
                        normal[n - 1][_canonical_name(pull(a, face(n, i)).assignment)] for i in range(n + 1)
                    )
                    Zt = C.thin[n]
                    if all(A.is_thin(a.assignment[g]) for g in Zt.thin):
                        thin.append(key)
            norm_n[key] = nf
        normal.append(norm_n)
        generators.append(sorted(gens_n))
    return StratifiedSet(D_out, generators, faces, thin, skeletal=False)


# -- homotopies ------------------------------------------------------------------


def _homotopy_partial(H: ProductSet, f: StratifiedMap, g: StratifiedMap) -> dict:
    """Pin ``h(x, 0) = f(x)`` and ``h(x, 1) = g(x)``."""
    partial = {}
    for name, (x, t) in H.pairs.items():
        if t.degeneracy.cod == 0:
            partial[name] = (f if t.generator == "0" else g)(x)
    return partial


def check_simple_homotopy(f: StratifiedMap, g: StratifiedMap, budget: int | None = DEFAULT_BUDGET) -> Verdict:
    """Search for ``h : X ⊛ Δ[1]_t -> A`` with ``h(-,0) = f`` and ``h(-,1) = g``."""
    from . import tensors

    X, A = f.source, f.target
    H = tensors.gray(X, zoo.build_basic("standard_thin", 1))
    found = enumerate_maps(H, A, _homotopy_partial(H, f, g), budget=budget, limit=1)
    if found.maps:
        return Verdict("pass", found.maps[0], found.nodes, [], H.truncation)
    if found.status == "inconclusive":
        return Verdict("inconclusive", None, found.nodes, [], H.truncation)
    return Verdict("fail", (f, g), found.nodes, [], H.truncation)


@dataclass
class HomotopyInverse:
    inverse: StratifiedMap
    homotopy_source: StratifiedMap  # on X ⊛ Δ[1]_t, between e'e and the identity
    homotopy_target: StratifiedMap  # on Y ⊛ Δ[1]_t, between ee' and the identity
    source_direction: str  # "forward": from e'e to id; "backward": the reverse
    target_direction: str
    deformation_retraction: bool


def identity_map(X: StratifiedSet) -> StratifiedMap:
    return StratifiedMap(X, X, {g: X.gen(g) for g in X.dim_of})


def _homotopy_either(f: StratifiedMap, g: StratifiedMap, budget) -> tuple:
    v = check_simple_homotopy(f, g, budget)
    if v.passed:
        return v.witness, "forward"
    w = check_simple_homotopy(g, f, budget)
    if w.passed:
        return w.witness, "backward"
    if "inconclusive" in (v.status, w.status):
        raise RuntimeError("homotopy search exhausted its budget")
    return None, None


def _fibrewise(e: StratifiedMap, h: StratifiedMap) -> bool:
    """``e(h(x, t)) == e(x)`` for every generator ``(x, t)``."""
    return all(e(h.assignment[name]) == e(x) for name, (x, _) in h.source.pairs.items())


def search_homotopy_inverse(e: StratifiedMap, budget: int | None = DEFAULT_BUDGET) -> HomotopyInverse | None:
    """Look for ``e' : Y -> X`` with ``e'e`` and ``ee'`` simply homotopic to identities.

    Sections of ``e`` are tried first, so that a deformation retraction is
    reported whenever one exists among the candidates.
    """
    X, Y = e.source, e.target
    candidates = enumerate_maps(Y, X, budget=budget)
    if candidates.status == "inconclusive":
        raise RuntimeError("inverse candidate enumeration exhausted its budget")
    idX, idY = identity_map(X), identity_map(Y)

    def is_section(m: StratifiedMap) -> bool:
        return all(e(m.assignment[g]) == Y.gen(g) for g in Y.dim_of)

    for m in sorted(candidates.maps, key=lambda m: not is_section(m)):
        hx, dx = _homotopy_either(m.compose_after(e), idX, budget)
        if hx is None:
            continue
        hy, dy = _homotopy_either(e.compose_after(m), idY, budget)
        if hy is None:
            continue
        retraction = is_section(m) and _fibrewise(e, hx)
        return HomotopyInverse(m, hx, hy, dx, dy, retraction)
    return None
