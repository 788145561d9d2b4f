"""Cell-complex certificates for inclusions of stratified subsets.

A certificate presents ``start ⊆ goal`` (both subsets of one ambient set) as
a finite sequence of glueing squares, each attaching a copy of an elementary
anodyne extension along a map into the ambient set.  Only subset-shaped
pushouts are searched: nothing is ever quotiented.

:func:`replay` re-checks a certificate from scratch and shares no state with
:func:`certify`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import zoo
from .lifting import DEFAULT_BUDGET, Verdict, enumerate_maps
from .serialize import (
    ref_from_json,
    ref_to_json,
    set_from_json,
    set_to_json,
    subset_from_json,
    subset_to_json,
)
from .strata import (
    StratifiedMap,
    StratifiedSet,
    Subset,
    is_glueing_square,
    whole,
)

__all__ = [
    "FLAVORS",
    "CERTIFICATE_SCHEMA",
    "ElementaryKind",
    "CellStep",
    "Certificate",
    "flavor_of",
    "flavor_join",
    "admits",
    "elementary_catalog",
    "custom_entry",
    "thin_horn_entry",
    "thin_simplex_entry",
    "equivalence_entry",
    "certify",
    "replay",
    "certificate_to_json",
    "certificate_from_json",
]

FLAVORS = ("inner", "left", "right", "all")
CERTIFICATE_SCHEMA = "certificate/1"


def flavor_of(n: int, k: int) -> str:
    """Tag of an elementary extension with horn index ``k`` in dimension ``n``."""
    if 0 < k < n:
        return "inner"
    if k == 0 and n > 0:
        return "left"
    if k == n and n > 0:
        return "right"
    raise ValueError(f"no flavor for n={n}, k={k}")


def flavor_join(tags: Iterable[str]) -> str:
    """Least flavor admitting every tag; ``inner`` for no tags."""
    out = "inner"
    for t in tags:
        if t not in FLAVORS:
            raise ValueError(f"unknown flavor {t!r}")
        if t == out or t == "inner":
            continue
        out = t if out == "inner" else "all"
    return out


def admits(flavor: str, tag: str) -> bool:
    """Whether a catalog of ``flavor`` contains extensions tagged ``tag``."""
    return flavor == "all" or tag == "inner" or tag == flavor


# -- the catalog --------------------------------------------------------------


@dataclass(frozen=True)
class ElementaryKind:
    """One elementary extension: ``horn(n,k)``, ``thinness(n,k)`` or a custom
    inclusion ``corner ⊆ corner.ambient``."""

    kind: str
    n: int = 0
    k: int = 0
    name: str = ""
    flavor_tag: str = "inner"
    corner: Subset | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.kind == "horn":
            if not (self.n >= 1 and 0 <= self.k <= self.n):
                raise ValueError(f"horn({self.n},{self.k}) out of range")
        elif self.kind == "thinness":
            if not (self.n >= 2 and 0 <= self.k <= self.n):
                raise ValueError(f"thinness({self.n},{self.k}) out of range")
        elif self.kind == "custom":
            if self.corner is None or not self.name:
                raise ValueError("custom entries need a name and a corner subset")
            if self.flavor_tag not in FLAVORS:
                raise ValueError(f"unknown flavor {self.flavor_tag!r}")
            return
        else:
            raise ValueError(f"unknown elementary kind {self.kind!r}")
        object.__setattr__(self, "flavor_tag", flavor_of(self.n, self.k))
        if not self.name:
            object.__setattr__(self, "name", f"{self.kind}({self.n},{self.k})")

    @property
    def dim(self) -> int:
        return self.corner.ambient.max_dim() if self.kind == "custom" else self.n

    def build(self) -> Subset:
        """The inclusion itself, freshly constructed."""
        if self.kind == "horn":
            return zoo.horn_inclusion(self.n, self.k)
        if self.kind == "thinness":
            return zoo.thinness_inclusion(self.n, self.k)
        return self.corner


_KIND_ORDER = {"horn": 0, "thinness": 1, "custom": 2}


def custom_entry(name: str, corner: Subset, flavor: str) -> ElementaryKind:
    return ElementaryKind("custom", name=name, flavor_tag=flavor, corner=corner)


def thin_horn_entry(n: int, k: int) -> ElementaryKind:
    """``Λ^k[n]' ⊆ Δ^k[n]''`` as one step."""
    return custom_entry(f"thin_horn({n},{k})", zoo.thin_horn_inclusion(n, k), flavor_of(n, k))


def thin_simplex_entry(r: int) -> ElementaryKind:
    """``Δ[r] ⊆ Δ[r]_t``."""
    return custom_entry(f"thin_simplex({r})", zoo.thin_simplex_inclusion(r), "all")


def equivalence_entry() -> ElementaryKind:
    """The entire inclusion of the minimally stratified ``E_2`` into ``E_2``."""
    E2 = zoo.build_E("E2")
    return custom_entry("E2_min", Subset(E2, frozenset(E2.dim_of), frozenset()), "all")


def elementary_catalog(D: int, flavor: str = "all", extras=None) -> list:
    """Elementary extensions of dimension ``<= D`` admitted by ``flavor``.

    ``extras`` is ``None``, ``("J_n", n)`` (thin simplex inclusions in
    dimensions ``n < r <= D``) or ``"J_q"`` (those for ``n = 1`` plus the
    equivalence entry).
    """
    if flavor not in FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}")
    out = []
    for n in range(1, D + 1):
        for k in range(n + 1):
            if admits(flavor, flavor_of(n, k)):
                out.append(ElementaryKind("horn", n, k))
    for n in range(2, D + 1):
        for k in range(n + 1):
            if admits(flavor, flavor_of(n, k)):
                out.append(ElementaryKind("thinness", n, k))
    if extras is None or extras == "none":
        return out
    if extras == "J_q":
        out += [thin_simplex_entry(r) for r in range(2, D + 1)]
        out.append(equivalence_entry())
        return out
    if isinstance(extras, (tuple, list)) and len(extras) == 2 and extras[0] == "J_n":
        out += [thin_simplex_entry(r) for r in range(int(extras[1]) + 1, D + 1)]
        return out
    raise ValueError(f"unknown extras {extras!r}")


# -- certificates ---------------------------------------------------------------


@dataclass(frozen=True)
class CellStep:
    """One attachment.  ``simplex`` names the ambient generator the
    elementary's top simplex lands on (horn and thinness steps); custom steps
    carry their full attaching ``assignment``."""

    elementary: ElementaryKind
    simplex: str | None
    assignment: tuple  # sorted (name, SimplexRef) pairs
    new_members: tuple
    new_flags: tuple


@dataclass
class Certificate:
    target: StratifiedSet
    start: Subset
    goal: Subset
    steps: list
    flavor: str
    catalog: list = field(default_factory=list)

    @property
    def customs(self) -> dict:
        return {s.elementary.name: s.elementary for s in self.steps if s.elementary.kind == "custom"}


def _yoneda(T: StratifiedSet, C: StratifiedSet, g: str, n: int) -> StratifiedMap:
    """The map from a copy ``C`` of ``Δ[n]`` sending its top simplex to ``g``."""
    return StratifiedMap(C, T, {mu: T.along_mono(g, zoo.parse_mono(mu, n)) for mu in C.dim_of})


def _within(S: Subset, G: Subset) -> bool:
    return S.members <= G.members and S.flags <= G.flags


class _Elementaries:
    """Cached codomains and attaching maps for the search."""

    def __init__(self, T: StratifiedSet, catalog: Sequence[ElementaryKind], budget: int | None):
        self.T = T
        self.corners = {e: e.build() for e in catalog}
        self.catalog = sorted(catalog, key=lambda e: (e.dim, _KIND_ORDER[e.kind], e.k, e.name))
        self.custom_maps: dict = {}
        self.nodes = 0
        for e in self.catalog:
            if e.kind == "custom":
                C = self.corners[e].ambient
                if C.max_dim() > T.truncation:
                    self.custom_maps[e] = []
                    continue
                found = enumerate_maps(C, T, budget=budget)
                self.nodes += found.nodes
                if found.status == "inconclusive":
                    raise _OutOfBudget
                self.custom_maps[e] = sorted(found.maps, key=lambda f: sorted(f.assignment.items()))

    def moves(self, S: Subset, G: Subset):
        """Candidate ``(elementary, simplex, attach)`` triples at ``S``, in
        canonical order; glueing is checked by the caller."""
        T = self.T
        fresh = G.members - S.members
        for e in self.catalog:
            if e.kind == "horn":
                for g in T.generators[e.n] if e.n <= T.truncation else ():
                    if g not in fresh:
                        continue
                    faces = T.faces[g]
                    fk = faces[e.k]
                    if fk.is_degenerate or fk.generator in S.members:
                        continue
                    if any(f.generator not in S.members for i, f in enumerate(faces) if i != e.k):
                        continue
                    yield e, g, _yoneda(T, self.corners[e].ambient, g, e.n)
            elif e.kind == "thinness":
                for g in T.generators[e.n] if e.n <= T.truncation else ():
                    if g not in S.flags:
                        continue
                    if all(f.generator in S.flags or f.is_degenerate for f in T.faces[g]):
                        continue
                    yield e, g, _yoneda(T, self.corners[e].ambient, g, e.n)
            else:
                for f in self.custom_maps[e]:
                    yield e, None, f


class _OutOfBudget(Exception):
    pass


def _make_step(e: ElementaryKind, simplex, attach: StratifiedMap, rep) -> CellStep:
    assignment = () if e.kind != "custom" else tuple(sorted(attach.assignment.items()))
    return CellStep(e, simplex, assignment, rep.new_members, rep.new_flags)


def certify(target: StratifiedSet | Subset, start: Subset, flavor: str = "all",
            catalog: Sequence[ElementaryKind] | None = None,
            budget: int | None = DEFAULT_BUDGET) -> Certificate | Verdict:
    """Search for a certificate that ``start`` grows into ``target``.

    ``target`` is either the ambient set (the goal is all of it) or a subset
    of the same ambient set as ``start``.  States are visited depth first in
    canonical order; each visited state costs one unit of ``budget``.
    """
    G = whole(target) if isinstance(target, StratifiedSet) else target
    T = G.ambient
    if start.ambient is not T:
        raise ValueError("start and target must share an ambient set")
    rep = start.check()
    if not rep.ok:
        raise ValueError(f"start is not a valid subset: {rep.problems[:3]}")
    if not _within(start, G):
        raise ValueError("start is not contained in the goal")
    if catalog is None:
        catalog = elementary_catalog(max(T.max_dim(), 1), flavor)
    catalog = [e for e in catalog if admits(flavor, e.flavor_tag)]
    try:
        engine = _Elementaries(T, catalog, budget)
    except _OutOfBudget:
        return Verdict("inconclusive", None, budget or 0, [{"reason": "custom map enumeration"}], T.truncation)

    dead: set = set()
    visited = [0]
    trail: list = []

    def key(S: Subset) -> tuple:
        return (S.members, S.flags)

    def dfs(S: Subset) -> bool:
        visited[0] += 1
        if budget is not None and visited[0] > budget:
            raise _OutOfBudget
        if S == G:
            return True
        for e, simplex, attach in engine.moves(S, G):
            glue = is_glueing_square(attach, engine.corners[e], S)
            if not glue.ok:
                continue
            R = glue.result
            if R == S or not _within(R, G) or key(R) in dead:
                continue
            trail.append(_make_step(e, simplex, attach, glue))
            if dfs(R):
                return True
            trail.pop()
        dead.add(key(S))
        return False

    try:
        found = dfs(start)
    except _OutOfBudget:
        return Verdict("inconclusive", None, visited[0] + engine.nodes,
                       [{"reason": "budget", "states": visited[0]}], T.truncation)
    except RecursionError:
        return Verdict("inconclusive", None, visited[0] + engine.nodes,
                       [{"reason": "recursion depth"}], T.truncation)
    if not found:
        return Verdict("fail", None, visited[0] + engine.nodes,
                       [{"reason": "reachable states exhausted", "states": len(dead)}], T.truncation)
    steps = list(trail)
    return Certificate(T, start, G, steps, flavor_join(s.elementary.flavor_tag for s in steps), list(catalog))


# -- replay -------------------------------------------------------------------------


def _rebuild(e: ElementaryKind) -> ElementaryKind:
    if e.kind == "custom":
        return e
    return ElementaryKind(e.kind, e.n, e.k)


def replay(cert: Certificate) -> Verdict:
    """Re-validate every step of ``cert`` independently of the search."""
    T = cert.target
    details: list = []

    def bad(i, reason: str) -> Verdict:
        details.append({"step": i, "error": reason})
        return Verdict("fail", {"step": i, "error": reason}, len(details), details, T.truncation)

    if cert.flavor not in FLAVORS:
        return bad(None, f"unknown claimed flavor {cert.flavor!r}")
    if cert.start.ambient is not T or cert.goal.ambient is not T:
        return bad(None, "start or goal is not a subset of the target")
    for S in (cert.start, cert.goal):
        rep = S.check()
        if not rep.ok:
            return bad(None, f"invalid subset: {rep.problems[:3]}")
    S = cert.start
    for i, step in enumerate(cert.steps):
        e = _rebuild(step.elementary)
        if not admits(cert.flavor, e.flavor_tag):
            return bad(i, f"{e.name} has flavor {e.flavor_tag}, not admitted by claimed {cert.flavor}")
        corner = e.build()
        C = corner.ambient
        if e.kind == "custom":
            names = {g for g, _ in step.assignment}
            if names != set(C.dim_of):
                return bad(i, "custom assignment does not cover the elementary")
            attach = StratifiedMap(C, T, dict(step.assignment))
        else:
            if step.simplex not in T.dim_of or T.dim_of[step.simplex] != e.n:
                return bad(i, f"{step.simplex!r} is not an {e.n}-simplex of the target")
            attach = _yoneda(T, C, step.simplex, e.n)
        glue = is_glueing_square(attach, corner, S)
        if not glue.ok:
            return bad(i, f"not a glueing square: {glue.reason}")
        R = glue.result
        if R == S:
            return bad(i, "step adds nothing")
        if not _within(R, cert.goal):
            return bad(i, "step leaves the goal")
        if tuple(step.new_members) != glue.new_members or tuple(step.new_flags) != glue.new_flags:
            return bad(i, "recorded new cells differ from the recomputed ones")
        details.append({"step": i, "elementary": e.name, "new_members": list(glue.new_members),
                        "new_flags": list(glue.new_flags)})
        S = R
    if S != cert.goal:
        return bad(len(cert.steps), "final state differs from the goal")
    return Verdict("pass", None, len(cert.steps), details, T.truncation)


# -- serialization ----------------------------------------------------------------------


def _elementary_to_json(e: ElementaryKind) -> dict:
    if e.kind == "custom":
        return {"kind": "custom", "name": e.name}
    return {"kind": e.kind, "n": e.n, "k": e.k}


def certificate_to_json(cert: Certificate) -> dict:
    customs = {
        name: {
            "flavor": e.flavor_tag,
            "codomain": set_to_json(e.corner.ambient),
            "corner": subset_to_json(e.corner),
        }
        for name, e in sorted(cert.customs.items())
    }
    steps = []
    for s in cert.steps:
        rec = {"elementary": _elementary_to_json(s.elementary),
               "new_members": list(s.new_members), "new_flags": list(s.new_flags)}
        if s.simplex is not None:
            rec["simplex"] = s.simplex
        if s.assignment:
            rec["assignment"] = {g: ref_to_json(y) for g, y in s.assignment}
        steps.append(rec)
    return {
        "schema": CERTIFICATE_SCHEMA,
        "flavor": cert.flavor,
        "target": set_to_json(cert.target),
        "start": subset_to_json(cert.start),
        "goal": subset_to_json(cert.goal),
        "customs": customs,
        "steps": steps,
    }


def certificate_from_json(doc: Mapping) -> Certificate:
    if doc.get("schema") != CERTIFICATE_SCHEMA:
        raise ValueError(f"expected a {CERTIFICATE_SCHEMA!r} document, got {doc.get('schema')!r}")
    T = set_from_json(doc["target"])
    customs = {}
    for name, c in doc.get("customs", {}).items():
        C = set_from_json(c["codomain"])
        customs[name] = custom_entry(name, subset_from_json(c["corner"], C), c["flavor"])
    steps = []
    for rec in doc["steps"]:
        el = rec["elementary"]
        if el["kind"] == "custom":
            e = customs[el["name"]]
            assignment = tuple(sorted((g, ref_from_json(y, T.dim_of)) for g, y in rec["assignment"].items()))
        else:
            e = ElementaryKind(el["kind"], el["n"], el["k"])
            assignment = ()
        steps.append(CellStep(e, rec.get("simplex"), assignment,
                              tuple(rec["new_members"]), tuple(rec["new_flags"])))
    return Certificate(T, subset_from_json(doc["start"], T), subset_from_json(doc["goal"], T),
                       steps, doc["flavor"])
