"""Joins, the four product stratifications, corners, shuffles and the depth
filtration of a product of two standard simplices.

Products are built on :func:`strata.product_underlying`; a generator is a
pair of simplices that are never degenerate at the same index.  Joins
are built from augmented factors: every factor gets a set of
``(-1)``-simplices, either its connected components (``canonical``) or a
single point ``*`` (``trivial``, under which every vertex counts as thin).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable

from .delta_ops import Operator, compose, ordinal_sum, partition_ops
from .strata import (
    EMPTY_OP,
    ProductSet,
    SimplexRef,
    StratifiedMap,
    StratifiedSet,
    Subset,
    product_underlying,
    ref_label,
)
from . import zoo

__all__ = [
    "KINDS",
    "JoinSet",
    "join",
    "gray",
    "lax",
    "pretensor",
    "boxdot",
    "tensor",
    "product_flags",
    "product_map",
    "join_map",
    "tensor_map",
    "corner_domain",
    "Shuffle",
    "shuffles",
    "depth",
    "corners",
    "verify_P_conditions",
    "least_P_flags",
    "DepthFiltration",
    "FiltrationSlice",
    "depth_filtration",
]

KINDS = ("gray", "lax", "pretensor", "boxdot")

ThinTest = Callable[[SimplexRef], bool]


# -- product stratifications -------------------------------------------------------


def _factors_through(Z: StratifiedSet, z: SimplexRef, sub: Operator, retract: Operator) -> SimplexRef | None:
    """``z' = z . sub`` when ``z == z' . retract``, else ``None``."""
    z1 = Z.act(z, sub)
    return z1 if Z.act(z1, retract) == z else None


def _thin_pair(kind: str, X: StratifiedSet, Y: StratifiedSet, x: SimplexRef, y: SimplexRef,
               thin_x: ThinTest, thin_y: ThinTest) -> bool:
    r = x.dim
    if r == 0:
        return False
    if kind == "gray":
        return thin_x(x) and thin_y(y)
    if kind == "lax":
        for p in range(r + 1):
            incl_1, incl_2, _, _ = partition_ops(p, r - p)
            if not (thin_x(X.act(x, incl_1)) or thin_y(Y.act(y, incl_2))):
                return False
        return True
    if kind in ("pretensor", "boxdot"):
        ex, ey = x.degeneracy.images, y.degeneracy.images
        for k in range(1, r):
            if ex[k - 1] == ex[k] and ey[k] == ey[k + 1]:
                return True
        for p in range(r + 1):
            incl_1, incl_2, retr_1, retr_2 = partition_ops(p, r - p)
            x1 = _factors_through(X, x, incl_1, retr_1)
            if x1 is None:
                continue
            y1 = _factors_through(Y, y, incl_2, retr_2)
            if y1 is None:
                continue
            if thin_x(x1) or thin_y(y1):
                return True
            if kind == "boxdot" and 0 < p < r:
                return True
        return False
    raise ValueError(f"unknown tensor kind {kind!r}")


def product_flags(kind: str, P: ProductSet, thin_x: ThinTest | None = None,
                  thin_y: ThinTest | None = None) -> frozenset:
    """Thin generators of ``P`` under ``kind``, given thinness in each factor."""
    thin_x = thin_x or P.left.is_thin
    thin_y = thin_y or P.right.is_thin
    return frozenset(
        name for name, (x, y) in P.pairs.items() if _thin_pair(kind, P.left, P.right, x, y, thin_x, thin_y)
    )


def tensor(kind: str, X: StratifiedSet, Y: StratifiedSet, D: int | None = None) -> ProductSet:
    if kind not in KINDS:
        raise ValueError(f"unknown tensor kind {kind!r}")
    P = product_underlying(X, Y, D)
    return P.with_thin(product_flags(kind, P))


def gray(X: StratifiedSet, Y: StratifiedSet, D: int | None = None) -> ProductSet:
    """Product stratification: thin when both coordinates are thin."""
    return tensor("gray", X, Y, D)


def lax(X: StratifiedSet, Y: StratifiedSet, D: int | None = None) -> ProductSet:
    """Thin when every partition ``p+q`` has a thin front ``p``-face in ``X``
    or a thin back ``q``-face in ``Y``."""
    return tensor("lax", X, Y, D)


def pretensor(X: StratifiedSet, Y: StratifiedSet, D: int | None = None) -> ProductSet:
    return tensor("pretensor", X, Y, D)


def boxdot(X: StratifiedSet, Y: StratifiedSet, D: int | None = None) -> ProductSet:
    return tensor("boxdot", X, Y, D)


def product_map(P: ProductSet, Q: ProductSet, f: StratifiedMap, g: StratifiedMap) -> StratifiedMap:
    """``f x g`` from ``P`` to ``Q`` on underlying products."""
    return StratifiedMap(P, Q, {name: Q.normalize_pair(f(x), g(y)) for name, (x, y) in P.pairs.items()})


# -- joins ------------------------------------------------------------------------


def _components(X: StratifiedSet) -> dict:
    """Vertex -> component label (the least vertex name in the component)."""
    if X.truncation < 1 and not X.skeletal:
        raise ValueError("components of a set truncated at 0 are not determined")
    parent = {v: v for v in X.generators[0]}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in (X.generators[1] if X.truncation >= 1 else ()):
        a, b = (find(f.generator) for f in X.faces[e])
        if a != b:
            parent[max(a, b)] = min(a, b)
    return {v: "c:" + find(v) for v in X.generators[0]}


class _Augmented:
    def __init__(self, X: StratifiedSet, mode: str):
        if mode == "canonical":
            self.comp_of = _components(X)
            self.thin_vertices = False
        elif mode == "trivial":
            self.comp_of = {v: "*" for v in X.generators[0]}
            self.thin_vertices = True
        else:
            raise ValueError(f"unknown augmentation {mode!r}")
        self.mode = mode
        self.minus_one = sorted(set(self.comp_of.values())) if mode == "canonical" else ["*"]
        self.X = X

    def ref(self, label: str) -> SimplexRef:
        return SimplexRef(label, EMPTY_OP)

    def face(self, x: SimplexRef, i: int) -> SimplexRef:
        if x.dim == 0:
            return SimplexRef(self.comp_of[x.generator], EMPTY_OP)
        return self.X.face(x, i)

    def is_thin(self, x: SimplexRef, base: ThinTest | None = None) -> bool:
        if x.dim < 0:
            return False
        if x.dim == 0:
            return self.thin_vertices
        return (base or self.X.is_thin)(x)

    def generators(self, p: int) -> list:
        if p == -1:
            return [SimplexRef(c, EMPTY_OP) for c in self.minus_one]
        return [self.X.gen(g) for g in self.X.generators[p]]


def _label(x: SimplexRef) -> str:
    return x.generator if x.dim < 0 else ref_label(x)


class JoinSet(StratifiedSet):
    """A join, remembering each generator as a pair ``<x|y>``."""

    def __init__(self, left: _Augmented, right: _Augmented, truncation: int, parts: dict, faces: dict,
                 generators: list, thin: Iterable[str] = (), skeletal: bool = False):
        super().__init__(truncation, generators, faces, thin, skeletal)
        self.left_aug = left
        self.right_aug = right
        self.left = left.X
        self.right = right.X
        self.parts = parts  # name -> (x, y) with dimension -1 allowed
        self.name_of = {(x.generator, y.generator): name for name, (x, y) in parts.items()}

    def with_thin(self, thin: Iterable[str]) -> "JoinSet":
        return JoinSet(self.left_aug, self.right_aug, self.truncation, self.parts, self.faces,
                       self.generators, thin, self.skeletal)

    def normalize(self, x: SimplexRef, y: SimplexRef) -> SimplexRef:
        return SimplexRef(self.name_of[(x.generator, y.generator)], ordinal_sum(x.degeneracy, y.degeneracy))


def _join_truncation(X: StratifiedSet, Y: StratifiedSet, D: int | None) -> tuple:
    if X.skeletal and Y.skeletal:
        honest = max(X.max_dim() + Y.max_dim() + 1, 0)
    else:
        honest = min(Z.truncation for Z in (X, Y) if not Z.skeletal)
    if D is None:
        D = honest
    elif D > honest:
        raise ValueError(f"join of these factors is only determined up to dimension {honest}")
    skeletal = X.skeletal and Y.skeletal and X.max_dim() + Y.max_dim() + 1 <= D
    return D, skeletal


def _join_flags(J: JoinSet, thin_x: ThinTest | None = None, thin_y: ThinTest | None = None,
                members: Iterable[str] | None = None) -> frozenset:
    out = set()
    for name in (J.parts if members is None else members):
        x, y = J.parts[name]
        if x.dim + y.dim + 1 == 0:
            continue
        if J.left_aug.is_thin(x, thin_x) or J.right_aug.is_thin(y, thin_y):
            out.add(name)
    return frozenset(out)


def join(X: StratifiedSet, Y: StratifiedSet, aug: tuple = ("canonical", "canonical"),
         D: int | None = None) -> JoinSet:
    """``X ⊕ Y``: generators ``<x|y>`` of dimension ``dim x + dim y + 1``."""
    if isinstance(aug, str):
        aug = (aug, aug)
    A, B = _Augmented(X, aug[0]), _Augmented(Y, aug[1])
    D, skeletal = _join_truncation(X, Y, D)
    parts: dict = {}
    generators: list = []
    for r in range(D + 1):
        level = []
        for p in range(-1, r + 1):
            q = r - p - 1
            if p > X.truncation or q > Y.truncation:
                continue
            for x in A.generators(p):
                for y in B.generators(q):
                    name = f"<{_label(x)}|{_label(y)}>"
                    parts[name] = (x, y)
                    level.append(name)
        generators.append(sorted(level))
    J = JoinSet(A, B, D, parts, {}, generators, (), skeletal)
    for name, (x, y) in parts.items():
        p, q = x.dim, y.dim
        r = p + q + 1
        if r == 0:
            continue
        fs = []
        for i in range(r + 1):
            if i <= p:
                fs.append(J.normalize(A.face(x, i), y))
            else:
                fs.append(J.normalize(x, B.face(y, i - p - 1)))
        J.faces[name] = tuple(fs)
    return J.with_thin(_join_flags(J))


def _component_map(src: _Augmented, tgt: _Augmented, f: StratifiedMap) -> dict:
    out = {}
    for v, c in src.comp_of.items():
        out.setdefault(c, tgt.comp_of[f.assignment[v].generator])
    for c in src.minus_one:
        out.setdefault(c, "*" if tgt.mode == "trivial" else None)
    return out


def join_map(J: JoinSet, K: JoinSet, f: StratifiedMap, g: StratifiedMap) -> StratifiedMap:
    """``f ⊕ g`` from ``J`` to ``K``."""
    cf = _component_map(J.left_aug, K.left_aug, f)
    cg = _component_map(J.right_aug, K.right_aug, g)

    def image(h: StratifiedMap, comps: dict, z: SimplexRef) -> SimplexRef:
        if z.dim < 0:
            if comps[z.generator] is None:
                raise ValueError(f"no image for the (-1)-simplex {z.generator}")
            return SimplexRef(comps[z.generator], EMPTY_OP)
        return h(z)

    return StratifiedMap(
        J, K, {name: K.normalize(image(f, cf, x), image(g, cg, y)) for name, (x, y) in J.parts.items()}
    )


def tensor_map(Z: StratifiedSet, W: StratifiedSet, f: StratifiedMap, g: StratifiedMap) -> StratifiedMap:
    if isinstance(Z, JoinSet):
        return join_map(Z, W, f, g)
    return product_map(Z, W, f, g)


# -- corners ---------------------------------------------------------------------


def _aug_members(J: JoinSet, side: str, S: Subset, mode: str) -> set:
    aug = J.left_aug if side == "left" else J.right_aug
    if mode == "all":
        return set(aug.minus_one)
    if mode == "inherit":
        return {aug.comp_of[v] for v in S.members if v in aug.comp_of}
    if mode == "none":
        return set()
    raise ValueError(f"unknown augmentation membership {mode!r}")


def corner_domain(e: Subset, i: Subset, kind: str, aug_e: str = "inherit", aug_i: str = "inherit",
                  D: int | None = None) -> tuple:
    """``(U⊙Y) ∪ (V⊙X)`` inside ``V⊙Y`` for ``e: U ⊆ V`` and ``i: X ⊆ Y``.

    Returns ``(domain, codomain)``.  For joins, ``aug_e``/``aug_i`` choose the
    ``(-1)``-simplices of ``U`` and ``X``: those under some member
    (``inherit``), all of the ambient's (``all``) or none.
    """
    V, Y = e.ambient, i.ambient
    if kind == "join":
        W = join(V, Y, D=D)
        u_minus = _aug_members(W, "left", e, aug_e)
        x_minus = _aug_members(W, "right", i, aug_i)
        in_u = lambda x: x.generator in (u_minus if x.dim < 0 else e.members)
        in_x = lambda y: y.generator in (x_minus if y.dim < 0 else i.members)
        uy = [n for n, (x, y) in W.parts.items() if in_u(x) and x.dim + y.dim >= -1]
        vx = [n for n, (x, y) in W.parts.items() if in_x(y) and x.dim + y.dim >= -1]
        flags = _join_flags(W, e.is_thin, None, uy) | _join_flags(W, None, i.is_thin, vx)
        members = frozenset(uy) | frozenset(vx)
        return Subset(W, members, flags & W.thin), W
    W = tensor(kind, V, Y, D)
    uy = {n for n, (x, y) in W.pairs.items() if x.generator in e.members}
    vx = {n for n, (x, y) in W.pairs.items() if y.generator in i.members}
    Pu = W.with_thin(())
    flags_uy = {n for n in product_flags(kind, Pu, e.is_thin, Y.is_thin) if n in uy}
    flags_vx = {n for n in product_flags(kind, Pu, V.is_thin, i.is_thin) if n in vx}
    return Subset(W, frozenset(uy | vx), frozenset(flags_uy | flags_vx) & W.thin), W


# -- shuffles ---------------------------------------------------------------------


@dataclass(frozen=True)
class Shuffle:
    """A non-degenerate top simplex ``(alpha, beta)`` of ``Δ[n] x Δ[m]``."""

    n: int
    m: int
    alpha: Operator
    beta: Operator

    def __post_init__(self) -> None:
        for i in range(self.n + self.m + 1):
            if self.alpha(i) + self.beta(i) != i:
                raise ValueError("coordinates of a shuffle must sum to the index")

    @property
    def moves(self) -> str:
        """``R`` for a step in the first coordinate, ``U`` in the second."""
        a = self.alpha.images
        return "".join("R" if a[i + 1] > a[i] else "U" for i in range(self.n + self.m))

    @classmethod
    def from_moves(cls, n: int, m: int, moves: str) -> "Shuffle":
        if len(moves) != n + m or moves.count("R") != n or set(moves) - set("RU"):
            raise ValueError(f"{moves!r} is not a lattice path to ({n},{m})")
        a, b = [0], [0]
        for c in moves:
            a.append(a[-1] + (c == "R"))
            b.append(b[-1] + (c == "U"))
        return cls(n, m, Operator(n + m, n, a), Operator(n + m, m, b))


def shuffles(n: int, m: int) -> list:
    """All ``C(n+m, n)`` shuffles, ordered by move string (``R`` before ``U``)."""
    out = []
    for rs in combinations(range(n + m), n):
        moves = "".join("R" if i in rs else "U" for i in range(n + m))
        out.append(Shuffle.from_moves(n, m, moves))
    return sorted(out, key=lambda s: s.moves)


def depth(s: Shuffle) -> int:
    return sum(min(s.alpha(i), s.m - s.beta(i)) for i in range(s.n + s.m + 1))


def corners(s: Shuffle) -> tuple:
    """``(left_upper, right_lower)`` vertex indices."""
    a, b = s.alpha.images, s.beta.images
    top = s.n + s.m
    lu = tuple(i for i in range(1, top) if a[i - 1] == a[i] and b[i] == b[i + 1])
    rl = tuple(i for i in range(1, top) if b[i - 1] == b[i] and a[i] == a[i + 1])
    return lu, rl


# -- the depth filtration ------------------------------------------------------------


def _simplex_dims(P: ProductSet) -> tuple:
    n, m = P.left.max_dim(), P.right.max_dim()
    for Z, d in ((P.left, n), (P.right, m)):
        if Z.counts()[: d + 1] != zoo.simplex_set(d).counts():
            raise ValueError("expected a product of two standard simplices")
    return n, m


def _as_operator(Z: StratifiedSet, x: SimplexRef, n: int) -> Operator:
    return compose(zoo.parse_mono(x.generator, n), x.degeneracy)


def _upper_left(P: ProductSet, n: int, m: int):
    """Yield ``(name, l)`` for each non-degenerate simplex and upper-left corner index."""
    for name, (x, y) in P.pairs.items():
        r = x.dim
        phi, psi = _as_operator(P.left, x, n), _as_operator(P.right, y, m)
        for l in range(1, r):
            if phi(l - 1) == phi(l) and psi(l) == psi(l + 1):
                yield name, l


def verify_P_conditions(P: ProductSet) -> tuple:
    """``(verdict, violations)`` for the two corner conditions on ``P``."""
    n, m = _simplex_dims(P)
    problems = []
    for name, l in _upper_left(P, n, m):
        g = P.gen(name)
        if name not in P.thin:
            problems.append(("not-thin", name, l))
        if P.is_thin(P.face(g, l)):
            for j in (l - 1, l + 1):
                if not P.is_thin(P.face(g, j)):
                    problems.append(("face-not-thin", name, l, j))
    return not problems, problems


def least_P_flags(P: ProductSet) -> frozenset:
    """The smallest set of flags on the underlying product meeting both conditions."""
    n, m = _simplex_dims(P)
    corners_of = list(_upper_left(P, n, m))
    thin: set = set()

    def is_thin(z: SimplexRef) -> bool:
        return z.is_degenerate or z.generator in thin

    changed = True
    while changed:
        changed = False
        for name, l in corners_of:
            g = P.gen(name)
            if name not in thin:
                thin.add(name)
                changed = True
            if is_thin(P.face(g, l)):
                for j in (l - 1, l + 1):
                    f = P.face(g, j)
                    if not is_thin(f):
                        thin.add(f.generator)
                        changed = True
    return frozenset(thin)


@dataclass
class FiltrationSlice:
    d: int
    P_d: Subset
    boundary: Subset
    tilde: Subset
    boundary_tilde: Subset


class DepthFiltration:
    """Subsets of ``P`` generated by shuffles of bounded depth."""

    def __init__(self, P: ProductSet):
        self.P = P
        self.n, self.m = _simplex_dims(P)
        ok, _ = verify_P_conditions(P)
        if not ok:
            warnings.warn("stratification fails the corner conditions; filtration results may not be anodyne")
        n, m = self.n, self.m
        top_x = zoo.mono_name(range(n + 1), n)
        top_y = zoo.mono_name(range(m + 1), m)
        self.shuffles = shuffles(n, m)
        self.shuffle_names = {
            s: P.name_of[(SimplexRef(top_x, s.alpha), SimplexRef(top_y, s.beta))] for s in self.shuffles
        }
        bd = frozenset(
            name for name, (x, y) in P.pairs.items()
            if P.left.dim_of[x.generator] < n or P.right.dim_of[y.generator] < m
        )
        self.boundary = Subset(P, bd, P.thin & bd)
        bare = P.with_thin(())
        self.lax_flags = product_flags("lax", bare, lambda z: z.is_degenerate, lambda z: z.is_degenerate)
        if not self.lax_flags <= P.thin:
            warnings.warn("the minimal lax flags are not all thin in P")

    @property
    def bullet(self) -> int:
        return self.n * self.m - 1

    def P_d(self, d: int) -> Subset:
        if not -1 <= d <= self.n * self.m:
            raise ValueError(f"depth {d} outside -1..{self.n * self.m}")
        seeds = [self.shuffle_names[s] for s in self.shuffles if depth(s) <= d]
        members: set = set()
        for g in seeds:
            members |= self.P.sub_generators(g)
        members = frozenset(members)
        return Subset(self.P, members, self.P.thin & members)

    def slice(self, d: int) -> FiltrationSlice:
        P = self.P
        Pd = self.P_d(d)
        bd = Subset(P, Pd.members & self.boundary.members, Pd.flags & self.boundary.flags)
        everything = frozenset(P.dim_of)
        lax_ok = self.lax_flags & P.thin
        tilde = Subset(P, everything, lax_ok | Pd.flags)
        btilde = Subset(P, everything, lax_ok | bd.flags)
        return FiltrationSlice(d, Pd, bd, tilde, btilde)


def depth_filtration(P: ProductSet, d: int | None = None) -> FiltrationSlice:
    """The slice at depth ``d``; ``None`` selects ``nm - 1``."""
    F = DepthFiltration(P)
    return F.slice(F.bullet if d is None else d)

