"""Truncated stratified simplicial sets in Eilenberg-Zilber normal form.

A set is presented by its non-degenerate simplices ("generators"), each
with a stable string name, a face table whose entries are normal forms
``(generator, surjective degeneracy)`` and a set of thin generators.
Degenerate simplices are implicit and always thin.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

from .delta_ops import (
    Operator,
    compose,
    epis,
    ez_factor,
    face,
    identity,
    monos,
)

__all__ = [
    "SimplexRef",
    "StratifiedSet",
    "StratifiedMap",
    "Subset",
    "Report",
    "ref",
    "ref_label",
    "act",
    "is_thin",
    "validate",
    "validate_map",
    "generated_subset",
    "whole",
    "subset_union",
    "subset_intersection",
    "direct_image",
    "inverse_image",
    "GlueingReport",
    "is_glueing_square",
    "product_underlying",
    "ProductSet",
    "IsoResult",
    "isomorphic",
    "pre_degenerate",
    "degenerate_at",
    "is_well_tempered",
    "EMPTY_OP",
]

EMPTY_OP = Operator(-1, -1, ())


class SimplexRef(NamedTuple):
    generator: str
    degeneracy: Operator

    @property
    def dim(self) -> int:
        return self.degeneracy.dom

    @property
    def is_degenerate(self) -> bool:
        return not self.degeneracy.is_identity


def ref(name: str, dim: int) -> SimplexRef:
    """The generator ``name`` itself, as a simplex of dimension ``dim``."""
    return SimplexRef(name, identity(dim))


def ref_label(x: SimplexRef) -> str:
    eps = x.degeneracy
    if eps.is_identity:
        return x.generator
    sep = "" if eps.cod < 10 else "."
    return x.generator + "@" + sep.join(map(str, eps.images))


class StratifiedSet:
    """A stratified simplicial set truncated at dimension ``truncation``.

    ``skeletal`` records that no non-degenerate simplices exist above the
    truncation, so the set may be re-truncated upwards without loss.
    """

    def __init__(
        self,
        truncation: int,
        generators: Iterable[Iterable[str]],
        faces: Mapping[str, Iterable[SimplexRef]],
        thin: Iterable[str] = (),
        skeletal: bool = False,
    ) -> None:
        gens = [tuple(level) for level in generators]
        if truncation < 0:
            raise ValueError("truncation must be >= 0")
        while len(gens) < truncation + 1:
            gens.append(())
        if len(gens) > truncation + 1:
            if any(gens[truncation + 1 :]):
                raise ValueError("generators above the truncation")
            gens = gens[: truncation + 1]
        self.truncation = truncation
        self.generators: tuple = tuple(gens)
        self.dim_of: dict = {}
        for d, level in enumerate(self.generators):
            for g in level:
                if g in self.dim_of:
                    raise ValueError(f"duplicate generator name {g!r}")
                self.dim_of[g] = d
        self.faces: dict = {g: tuple(faces.get(g, ())) for g in self.dim_of}
        self.thin: frozenset = frozenset(thin)
        self.skeletal = skeletal
        self._face_cache: dict = {}
        self._simplices: dict = {}
        self._by_faces: dict = {}

    # -- basic queries -------------------------------------------------
    def __repr__(self) -> str:
        return f"StratifiedSet(D={self.truncation}, counts={self.counts()}, thin={len(self.thin)})"

    def counts(self) -> tuple:
        return tuple(len(level) for level in self.generators)

    def all_generators(self) -> list:
        return [g for level in self.generators for g in level]

    def __contains__(self, name: str) -> bool:
        return name in self.dim_of

    def gen(self, name: str) -> SimplexRef:
        return SimplexRef(name, identity(self.dim_of[name]))

    def max_dim(self) -> int:
        top = -1
        for d, level in enumerate(self.generators):
            if level:
                top = d
        return top

    def face_ref(self, name: str, i: int) -> SimplexRef:
        return self.faces[name][i]

    # -- the simplicial action -------------------------------------------
    def along_mono(self, name: str, mono: Operator) -> SimplexRef:
        """Normal form of ``g . mono`` for a generator ``g``."""
        key = (name, mono.images)
        hit = self._face_cache.get(key)
        if hit is not None:
            return hit
        if mono.is_identity:
            out = SimplexRef(name, mono)
        else:
            j = mono.missing()[-1]
            rest = Operator(mono.dom, mono.cod - 1, (v if v < j else v - 1 for v in mono.images))
            out = self.act(self.faces[name][j], rest)
        self._face_cache[key] = out
        return out

    def act(self, x: SimplexRef, alpha: Operator) -> SimplexRef:
        g, eps = x
        if alpha.cod != eps.dom:
            raise ValueError(f"cannot act by {alpha} on a {eps.dom}-simplex")
        epi, mono = ez_factor(compose(eps, alpha))
        y = self.along_mono(g, mono)
        if epi.is_identity:
            return y
        return SimplexRef(y.generator, compose(y.degeneracy, epi))

    def face(self, x: SimplexRef, i: int) -> SimplexRef:
        return self.act(x, face(x.dim, i))

    def is_thin(self, x: SimplexRef) -> bool:
        return (not x.degeneracy.is_identity) or x.generator in self.thin

    # -- enumeration -----------------------------------------------------
    def simplices(self, r: int) -> tuple:
        """All ``r``-simplices, degenerate ones included, in a fixed order."""
        cached = self._simplices.get(r)
        if cached is not None:
            return cached
        if r > self.truncation:
            raise ValueError(f"dimension {r} exceeds truncation {self.truncation}")
        out = []
        for d in range(min(r, self.truncation) + 1):
            for eps in epis(r, d):
                for g in self.generators[d]:
                    out.append(SimplexRef(g, eps))
        result = tuple(out)
        self._simplices[r] = result
        return result

    def boundary_of(self, x: SimplexRef) -> tuple:
        return tuple(self.face(x, i) for i in range(x.dim + 1))

    def simplices_with_boundary(self, r: int) -> dict:
        """Index ``r``-simplices (``r >= 1``) by their tuple of faces."""
        cached = self._by_faces.get(r)
        if cached is not None:
            return cached
        index: dict = {}
        for x in self.simplices(r):
            index.setdefault(self.boundary_of(x), []).append(x)
        self._by_faces[r] = index
        return index

    def sub_generators(self, name: str) -> set:
        """Generators of all faces of ``name``, itself included."""
        seen = {name}
        stack = [name]
        while stack:
            g = stack.pop()
            for f in self.faces[g]:
                if f.generator not in seen:
                    seen.add(f.generator)
                    stack.append(f.generator)
        return seen

    def with_thin(self, thin: Iterable[str]) -> "StratifiedSet":
        """Same underlying simplicial set, new stratification."""
        return StratifiedSet(self.truncation, self.generators, self.faces, thin, self.skeletal)

    def retruncate(self, D: int) -> "StratifiedSet":
        if D > self.truncation and not self.skeletal:
            raise ValueError(f"cannot raise the truncation of a non-skeletal set from {self.truncation} to {D}")
        gens = list(self.generators[: D + 1])
        keep = {g for level in gens for g in level}
        return StratifiedSet(
            D,
            gens,
            {g: f for g, f in self.faces.items() if g in keep},
            self.thin & keep,
            skeletal=self.skeletal or self.max_dim() <= D,
        )

    def signature(self) -> tuple:
        """Hashable structural fingerprint, order-sensitive on names."""
        return (
            self.truncation,
            self.generators,
            tuple(sorted((g, tuple((f.generator, f.degeneracy.images) for f in fs)) for g, fs in self.faces.items())),
            tuple(sorted(self.thin)),
        )


def act(X: StratifiedSet, x: SimplexRef, alpha: Operator) -> SimplexRef:
    return X.act(x, alpha)


def is_thin(X: StratifiedSet, x: SimplexRef) -> bool:
    return X.is_thin(x)


@dataclass
class Report:
    """Outcome of a structural check."""

    ok: bool
    problems: list = field(default_factory=list)
    truncation: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate(X: StratifiedSet) -> Report:
    problems = []
    for d, level in enumerate(X.generators):
        for g in level:
            fs = X.faces[g]
            if d == 0:
                if fs:
                    problems.append(("vertex-with-faces", g))
                if g in X.thin:
                    problems.append(("thin-vertex", g))
                continue
            if len(fs) != d + 1:
                problems.append(("face-count", g, len(fs)))
                continue
            for i, f in enumerate(fs):
                if f.generator not in X.dim_of:
                    problems.append(("unknown-face", g, i, f.generator))
                    continue
                eps = f.degeneracy
                if eps.dom != d - 1 or eps.cod != X.dim_of[f.generator] or not eps.is_epi:
                    problems.append(("bad-normal-form", g, i))
    if problems:
        return Report(False, problems, X.truncation)
    for t in X.thin:
        if t not in X.dim_of:
            problems.append(("unknown-thin", t))
    for d in range(2, X.truncation + 1):
        for g in X.generators[d]:
            x = X.gen(g)
            for j in range(d + 1):
                for i in range(j):
                    lhs = X.face(X.face(x, j), i)
                    rhs = X.face(X.face(x, i), j - 1)
                    if lhs != rhs:
                        problems.append(("simplicial-identity", g, i, j))
    return Report(not problems, problems, X.truncation)


class StratifiedMap:
    """Generator-wise assignment of simplices of ``target``."""

    def __init__(self, source: StratifiedSet, target: StratifiedSet, assignment: Mapping[str, SimplexRef]):
        self.source = source
        self.target = target
        self.assignment = dict(assignment)

    def __call__(self, x: SimplexRef) -> SimplexRef:
        y = self.assignment[x.generator]
        if x.degeneracy.is_identity:
            return y
        return self.target.act(y, x.degeneracy)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, StratifiedMap) and self.assignment == other.assignment

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.assignment.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{g}->{ref_label(v)}" for g, v in sorted(self.assignment.items()))
        return f"StratifiedMap({body})"

    def compose_after(self, other: "StratifiedMap") -> "StratifiedMap":
        """``self o other``."""
        return StratifiedMap(other.source, self.target, {g: self(v) for g, v in other.assignment.items()})


def validate_map(f: StratifiedMap) -> Report:
    X, T = f.source, f.target
    problems = []
    for g in X.all_generators():
        if g not in f.assignment:
            problems.append(("unassigned", g))
            continue
        y = f.assignment[g]
        d = X.dim_of[g]
        if y.generator not in T.dim_of or y.dim != d or y.degeneracy.cod != T.dim_of[y.generator]:
            problems.append(("bad-image", g))
            continue
        if d > 0:
            for i, fx in enumerate(X.faces[g]):
                if fx.generator not in f.assignment:
                    continue
                if f(fx) != T.face(y, i):
                    problems.append(("face-mismatch", g, i))
        if g in X.thin and not T.is_thin(y):
            problems.append(("thinness", g, ref_label(y)))
    return Report(not problems, problems, X.truncation)


@dataclass(frozen=True)
class Subset:
    """Face-closed set of generators of ``ambient`` with thin flags."""

    ambient: StratifiedSet
    members: frozenset
    flags: frozenset

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", frozenset(self.members))
        object.__setattr__(self, "flags", frozenset(self.flags))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Subset)
            and self.ambient is other.ambient
            and self.members == other.members
            and self.flags == other.flags
        )

    def __hash__(self) -> int:
        return hash((id(self.ambient), self.members, self.flags))

    def __contains__(self, x) -> bool:
        name = x.generator if isinstance(x, SimplexRef) else x
        return name in self.members

    def is_thin(self, x: SimplexRef) -> bool:
        return (not x.degeneracy.is_identity) or x.generator in self.flags

    def check(self) -> Report:
        X = self.ambient
        problems = []
        for g in self.members:
            if g not in X.dim_of:
                problems.append(("unknown-member", g))
                continue
            for f in X.faces[g]:
                if f.generator not in self.members:
                    problems.append(("not-face-closed", g, f.generator))
        for g in self.flags:
            if g not in self.members:
                problems.append(("flag-on-non-member", g))
            elif g not in X.thin:
                problems.append(("flag-not-ambient", g))
        return Report(not problems, problems, X.truncation)

    @property
    def is_regular(self) -> bool:
        return self.flags == self.ambient.thin & self.members

    @property
    def is_entire(self) -> bool:
        return len(self.members) == len(self.ambient.dim_of)

    def as_set(self) -> StratifiedSet:
        X = self.ambient
        gens = [[g for g in level if g in self.members] for level in X.generators]
        return StratifiedSet(
            X.truncation,
            gens,
            {g: X.faces[g] for g in self.members},
            self.flags,
            skeletal=X.skeletal,
        )

    def inclusion(self) -> StratifiedMap:
        """The inclusion of ``as_set()`` into the ambient set."""
        S = self.as_set()
        return StratifiedMap(S, self.ambient, {g: S.gen(g) for g in self.members})


def whole(X: StratifiedSet) -> Subset:
    return Subset(X, frozenset(X.dim_of), X.thin)


def generated_subset(X: StratifiedSet, seeds: Iterable, mode: str = "regular") -> Subset:
    """Smallest face-closed subset containing ``seeds``.

    ``mode='regular'`` inherits the ambient flags; ``mode='entire-from-flags'``
    additionally makes every generator a member and keeps the ambient flags of
    the seeds (and their faces) only.
    """
    names = set()
    for s in seeds:
        name = s.generator if isinstance(s, SimplexRef) else s
        names |= X.sub_generators(name)
    members = frozenset(names)
    if mode == "regular":
        return Subset(X, members, X.thin & members)
    if mode == "entire-from-flags":
        return Subset(X, frozenset(X.dim_of), X.thin & members)
    raise ValueError(f"unknown mode {mode!r}")


def _same_ambient(A: Subset, B: Subset) -> None:
    if A.ambient is not B.ambient:
        raise ValueError("subsets live in different ambient sets")


def subset_union(A: Subset, B: Subset) -> Subset:
    _same_ambient(A, B)
    return Subset(A.ambient, A.members | B.members, A.flags | B.flags)


def subset_intersection(A: Subset, B: Subset) -> Subset:
    _same_ambient(A, B)
    return Subset(A.ambient, A.members & B.members, A.flags & B.flags)


def direct_image(f: StratifiedMap, U: Subset) -> Subset:
    """Image of ``U``: members are the generators of image simplices; a
    generator is flagged when it is the image of a flagged member."""
    T = f.target
    members, flags = set(), set()
    for g in U.members:
        y = f.assignment[g]
        members |= T.sub_generators(y.generator)
        if g in U.flags and y.degeneracy.is_identity:
            flags.add(y.generator)
    return Subset(T, frozenset(members), frozenset(flags))


def inverse_image(f: StratifiedMap, V: Subset) -> Subset:
    """Members map into ``V``; a member is flagged when its image is thin in ``V``."""
    members, flags = set(), set()
    for g, y in f.assignment.items():
        if y.generator in V.members:
            members.add(g)
            if V.is_thin(y):
                flags.add(g)
    return Subset(f.source, frozenset(members), frozenset(flags))


@dataclass
class GlueingReport:
    ok: bool
    reason: str = ""
    result: Subset | None = None
    new_members: tuple = ()
    new_flags: tuple = ()

    def __bool__(self) -> bool:
        return self.ok


def is_glueing_square(attach: StratifiedMap, corner: Subset, V: Subset) -> GlueingReport:
    """Is ``corner -> V`` / ``C -> V u attach(C)`` a pushout square?

    ``attach`` maps the codomain ``C`` of an inclusion ``corner ⊆ C`` into the
    ambient set of ``V``.  For an injective ``attach`` this is the usual glueing
    condition: the pullback of ``V`` along ``attach`` (members whose image lies
    in ``V``, flagged when thin in both ``C`` and ``V``) must equal ``corner``.
    Non-injective attaching maps are admitted provided they are injective on
    the cells that are new, since the square is then still a pushout.
    """
    C = attach.source
    T = attach.target
    if corner.ambient is not C:
        return GlueingReport(False, "corner is not a subset of the attached set")
    if V.ambient is not T:
        return GlueingReport(False, "V is not a subset of the attaching target")
    rep = validate_map(attach)
    if not rep.ok:
        return GlueingReport(False, f"attaching map is not stratified: {rep.problems[:3]}")
    pre_members, pre_flags = set(), set()
    for g, y in attach.assignment.items():
        if y.generator in V.members:
            pre_members.add(g)
            if g in C.thin and V.is_thin(y):
                pre_flags.add(g)
    if pre_members != corner.members:
        extra = sorted(pre_members - corner.members)
        short = sorted(corner.members - pre_members)
        return GlueingReport(False, f"preimage members differ: extra={extra[:4]} missing={short[:4]}")
    if pre_flags != corner.flags:
        extra = sorted(pre_flags - corner.flags)
        short = sorted(corner.flags - pre_flags)
        return GlueingReport(False, f"preimage flags differ: extra={extra[:4]} missing={short[:4]}")
    new_members: dict = {}
    for g, y in attach.assignment.items():
        if g in corner.members:
            continue
        if y.is_degenerate:
            return GlueingReport(False, f"new cell {g} lands on a degenerate simplex")
        if y.generator in new_members:
            return GlueingReport(False, f"new cells {new_members[y.generator]} and {g} collide")
        new_members[y.generator] = g
    new_flags: dict = {}
    for g in C.thin:
        y = attach.assignment[g]
        if g in corner.flags:
            continue
        if y.generator in new_flags and new_flags[y.generator] != g:
            return GlueingReport(False, f"new thin cells {new_flags[y.generator]} and {g} collide")
        new_flags[y.generator] = g
    result = Subset(T, V.members | frozenset(new_members), V.flags | frozenset(new_flags))
    return GlueingReport(
        True,
        "",
        result,
        tuple(sorted(new_members)),
        tuple(sorted(set(new_flags) - V.flags)),
    )


# -- products -------------------------------------------------------------


class ProductSet(StratifiedSet):
    """Underlying simplicial product, generators named by their coordinates."""

    def __init__(self, left: StratifiedSet, right: StratifiedSet, truncation: int, pairs: dict, faces: dict,
                 generators: list, thin: Iterable[str] = (), skeletal: bool = False):
        super().__init__(truncation, generators, faces, thin, skeletal)
        self.left = left
        self.right = right
        self.pairs = pairs  # name -> (SimplexRef in left, SimplexRef in right)
        self.name_of = {v: k for k, v in pairs.items()}

    def with_thin(self, thin: Iterable[str]) -> "ProductSet":
        return ProductSet(self.left, self.right, self.truncation, self.pairs, self.faces,
                          self.generators, thin, self.skeletal)

    def normalize_pair(self, x: SimplexRef, y: SimplexRef) -> SimplexRef:
        """Normal form of the pair ``(x, y)`` of equal-dimensional simplices."""
        (gx, ex), (gy, ey) = x, y
        r = ex.dom
        images, level = [0], 0
        for i in range(r):
            if not (ex.images[i] == ex.images[i + 1] and ey.images[i] == ey.images[i + 1]):
                level += 1
            images.append(level)
        c = Operator(r, level, images)
        keep = [0] + [i + 1 for i in range(r) if images[i + 1] != images[i]]
        ex2 = Operator(level, ex.cod, (ex.images[i] for i in keep))
        ey2 = Operator(level, ey.cod, (ey.images[i] for i in keep))
        name = self.name_of[(SimplexRef(gx, ex2), SimplexRef(gy, ey2))]
        return SimplexRef(name, c)


def _resolve_truncation(X: StratifiedSet, Y: StratifiedSet, D: int | None) -> tuple:
    if D is None:
        if X.skeletal and Y.skeletal:
            D = max(X.max_dim(), 0) + max(Y.max_dim(), 0)
        elif X.skeletal:
            D = Y.truncation
        elif Y.skeletal:
            D = X.truncation
        else:
            D = min(X.truncation, Y.truncation)
    for Z in (X, Y):
        if Z.truncation < D and not Z.skeletal:
            raise ValueError(f"factor truncated at {Z.truncation} cannot support a product truncated at {D}")
    skeletal = X.skeletal and Y.skeletal and max(X.max_dim(), 0) + max(Y.max_dim(), 0) <= D
    return D, skeletal


def product_underlying(X: StratifiedSet, Y: StratifiedSet, D: int | None = None) -> ProductSet:
    """The simplicial product, with no thin generators."""
    D, skeletal = _resolve_truncation(X, Y, D)
    Xs = X.retruncate(D) if X.truncation != D else X
    Ys = Y.retruncate(D) if Y.truncation != D else Y
    pairs: dict = {}
    generators: list = []
    for r in range(D + 1):
        level = []
        for x in Xs.simplices(r):
            for y in Ys.simplices(r):
                ex, ey = x.degeneracy.images, y.degeneracy.images
                if any(ex[i] == ex[i + 1] and ey[i] == ey[i + 1] for i in range(r)):
                    continue
                name = f"({ref_label(x)},{ref_label(y)})"
                pairs[name] = (x, y)
                level.append(name)
        level.sort()
        generators.append(level)
    P = ProductSet(Xs, Ys, D, pairs, {}, generators, (), skeletal)
    for name, (x, y) in pairs.items():
        r = x.dim
        if r == 0:
            continue
        P.faces[name] = tuple(P.normalize_pair(Xs.face(x, i), Ys.face(y, i)) for i in range(r + 1))
    return P


# -- isomorphism search ------------------------------------------------------


@dataclass
class IsoResult:
    status: str  # "iso", "not-iso", "inconclusive"
    mapping: dict | None = None
    nodes: int = 0

    def __bool__(self) -> bool:
        return self.status == "iso"


def isomorphic(
    X: StratifiedSet,
    Y: StratifiedSet,
    budget: int = 200_000,
    subsets: tuple | None = None,
) -> IsoResult:
    """Search for a face- and flag-preserving bijection of generators.

    ``subsets=(A, B)`` additionally requires ``A`` (a subset of ``X``) to be
    carried exactly onto ``B`` (a subset of ``Y``), members and flags.
    Generators are assigned from the top dimension down; faces of an assigned
    generator are forced, so choices happen only at maximal simplices.
    """
    if X.counts()[: X.max_dim() + 1] != Y.counts()[: Y.max_dim() + 1]:
        return IsoResult("not-iso")
    if X.truncation != Y.truncation and not (X.skeletal and Y.skeletal):
        return IsoResult("not-iso")
    if len(X.thin) != len(Y.thin):
        return IsoResult("not-iso")

    def colour(Z: StratifiedSet, S: Subset | None, g: str) -> tuple:
        d = Z.dim_of[g]
        shape = tuple(sorted(f.degeneracy.images for f in Z.faces[g]))
        degenerate_faces = tuple(not f.degeneracy.is_identity for f in Z.faces[g])
        tag = (g in S.members, g in S.flags) if S is not None else ()
        return (d, g in Z.thin, degenerate_faces, shape, tag)

    A, B = subsets if subsets is not None else (None, None)
    cx = {g: colour(X, A, g) for g in X.dim_of}
    cy = {g: colour(Y, B, g) for g in Y.dim_of}
    if sorted(cx.values()) != sorted(cy.values()):
        return IsoResult("not-iso")
    by_colour: dict = {}
    for g, c in cy.items():
        by_colour.setdefault(c, []).append(g)
    order = sorted(X.dim_of, key=lambda g: (-X.dim_of[g], g))
    fwd: dict = {}
    back: dict = {}
    nodes = [0]

    def assign(g: str, h: str, trail: list) -> bool:
        stack = [(g, h)]
        while stack:
            a, b = stack.pop()
            if a in fwd:
                if fwd[a] != b:
                    return False
                continue
            if b in back or cx[a] != cy[b]:
                return False
            fwd[a] = b
            back[b] = a
            trail.append(a)
            for fa, fb in zip(X.faces[a], Y.faces[b]):
                if fa.degeneracy != fb.degeneracy:
                    return False
                stack.append((fa.generator, fb.generator))
        return True

    def undo(trail: list) -> None:
        for a in trail:
            del back[fwd.pop(a)]

    class Budget(Exception):
        pass

    def search(pos: int) -> bool:
        while pos < len(order) and order[pos] in fwd:
            pos += 1
        if pos == len(order):
            return True
        nodes[0] += 1
        if nodes[0] > budget:
            raise Budget
        g = order[pos]
        for h in by_colour.get(cx[g], ()):
            if h in back:
                continue
            trail: list = []
            if assign(g, h, trail) and search(pos + 1):
                return True
            undo(trail)
        return False

    try:
        found = search(0)
    except Budget:
        return IsoResult("inconclusive", None, nodes[0])
    if not found:
        return IsoResult("not-iso", None, nodes[0])
    # independent confirmation
    f = StratifiedMap(X, Y, {g: Y.gen(h) for g, h in fwd.items()})
    b = StratifiedMap(Y, X, {h: X.gen(g) for g, h in fwd.items()})
    if not (validate_map(f).ok and validate_map(b).ok):
        raise AssertionError("isomorphism search produced an invalid map")
    return IsoResult("iso", dict(fwd), nodes[0])


# -- pre-degeneracy and well-temperedness --------------------------------------


def degenerate_at(X: StratifiedSet, x: SimplexRef, k: int) -> bool:
    r = x.dim
    if not 0 <= k < r:
        raise ValueError(f"k={k} out of range for a {r}-simplex")
    eps = x.degeneracy
    return eps.images[k] == eps.images[k + 1]


def pre_degenerate(X: StratifiedSet, x: SimplexRef, k: int) -> bool:
    """Every face of ``x`` whose vertices include ``k`` and ``k+1`` is thin."""
    r = x.dim
    if not 0 <= k < r:
        raise ValueError(f"k={k} out of range for a {r}-simplex")
    for s in range(1, r + 1):
        for mu in monos(s, r):
            images = mu.images
            if k in images and k + 1 in images and not X.is_thin(X.act(x, mu)):
                return False
    return True


def is_well_tempered(X: StratifiedSet, D: int | None = None) -> tuple:
    """``(verdict, witness)``; the witness is ``(simplex, k)`` when it fails."""
    D = X.truncation if D is None else D
    for r in range(1, D + 1):
        for x in X.simplices(r):
            for k in range(r):
                if pre_degenerate(X, x, k) and not degenerate_at(X, x, k):
                    return False, (x, k)
    return True, None
