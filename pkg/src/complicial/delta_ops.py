"""Monotone maps between finite ordinals, the simplicial operators.

An operator ``[dom] -> [cod]`` is stored as the tuple of its images.  The
ordinal ``[-1]`` is the empty ordinal, so ``dom == -1`` gives the unique
(empty) operator into ``[cod]``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Iterator, Union

__all__ = [
    "Operator",
    "identity",
    "compose",
    "elementary",
    "face",
    "degeneracy",
    "vertex",
    "terminal",
    "initial",
    "ez_factor",
    "dual",
    "ordinal_sum",
    "split_ordinal_sum",
    "partition_ops",
    "rho",
    "is_admissible",
    "all_operators",
    "monos",
    "epis",
]


class Operator:
    """A weakly monotone map ``[dom] -> [cod]``."""

    __slots__ = ("dom", "cod", "images", "_hash")

    def __init__(self, dom: int, cod: int, images) -> None:
        images = tuple(int(v) for v in images)
        if dom < -1 or cod < -1:
            raise ValueError(f"ordinals start at -1, got dom={dom} cod={cod}")
        if len(images) != dom + 1:
            raise ValueError(f"operator [{dom}]->[{cod}] needs {dom + 1} images, got {len(images)}")
        for a, b in zip(images, images[1:]):
            if a > b:
                raise ValueError(f"images {images} are not monotone")
        if images and (images[0] < 0 or images[-1] > cod):
            raise ValueError(f"images {images} leave [0,{cod}]")
        self.dom = dom
        self.cod = cod
        self.images = images
        self._hash = hash((dom, cod, images))

    @classmethod
    def _unchecked(cls, dom: int, cod: int, images: tuple) -> "Operator":
        # images already a monotone tuple of ints in range
        op = object.__new__(cls)
        op.dom, op.cod, op.images = dom, cod, images
        op._hash = hash((dom, cod, images))
        return op

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Operator):
            return NotImplemented
        return self.dom == other.dom and self.cod == other.cod and self.images == other.images

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Operator") -> bool:
        return (self.dom, self.cod, self.images) < (other.dom, other.cod, other.images)

    def __repr__(self) -> str:
        return f"Operator([{self.dom}]->[{self.cod}], {self.images})"

    @property
    def is_identity(self) -> bool:
        return self.dom == self.cod and self.images == tuple(range(self.dom + 1))

    @property
    def is_mono(self) -> bool:
        return len(set(self.images)) == len(self.images)

    @property
    def is_epi(self) -> bool:
        return set(self.images) == set(range(self.cod + 1))

    def image_set(self) -> frozenset:
        return frozenset(self.images)

    def missing(self) -> tuple:
        """Indices of ``[cod]`` not hit, in increasing order."""
        hit = set(self.images)
        return tuple(j for j in range(self.cod + 1) if j not in hit)


@lru_cache(maxsize=None)
def identity(n: int) -> Operator:
    return Operator(n, n, range(n + 1))


def compose(alpha: Operator, beta: Operator) -> Operator:
    """``alpha o beta``: first ``beta`` then ``alpha``."""
    if beta.cod != alpha.dom:
        raise ValueError(f"cannot compose {alpha} after {beta}: [{beta.cod}] != [{alpha.dom}]")
    a = alpha.images
    return Operator._unchecked(beta.dom, alpha.cod, tuple([a[i] for i in beta.images]))


def face(n: int, j: int) -> Operator:
    """delta^n_j : [n-1] -> [n], skipping ``j``."""
    if n < 0 or not 0 <= j <= n:
        raise ValueError(f"face index {j} out of range for [{n}]")
    return Operator(n - 1, n, (i if i < j else i + 1 for i in range(n)))


def degeneracy(n: int, j: int) -> Operator:
    """sigma^n_j : [n+1] -> [n], repeating ``j``."""
    if n < 0 or not 0 <= j <= n:
        raise ValueError(f"degeneracy index {j} out of range for [{n}]")
    return Operator(n + 1, n, (i if i <= j else i - 1 for i in range(n + 2)))


def vertex(n: int, i: int) -> Operator:
    """epsilon^n_i : [0] -> [n]."""
    if n < 0 or not 0 <= i <= n:
        raise ValueError(f"vertex index {i} out of range for [{n}]")
    return Operator(0, n, (i,))


def terminal(n: int) -> Operator:
    """eta^n : [n] -> [0]."""
    if n < 0:
        raise ValueError("terminal operator needs n >= 0")
    return Operator(n, 0, (0,) * (n + 1))


def initial(n: int) -> Operator:
    """iota^n : [-1] -> [n]."""
    if n < -1:
        raise ValueError("initial operator needs n >= -1")
    return Operator(-1, n, ())


def elementary(kind: str, n: int, i: int | None = None) -> Operator:
    if kind in ("face", "degeneracy", "vertex") and i is None:
        raise ValueError(f"{kind} operators need an index")
    if kind == "face":
        return face(n, i)
    if kind == "degeneracy":
        return degeneracy(n, i)
    if kind == "vertex":
        return vertex(n, i)
    if kind == "terminal":
        return terminal(n)
    if kind == "initial":
        return initial(n)
    raise ValueError(f"unknown operator kind {kind!r}")


@lru_cache(maxsize=1 << 16)
def ez_factor(alpha: Operator) -> tuple[Operator, Operator]:
    """Split ``alpha`` as ``mono o epi``; returns ``(epi, mono)``."""
    distinct = sorted(set(alpha.images))
    rank = {v: r for r, v in enumerate(distinct)}
    top = len(distinct) - 1
    epi = Operator(alpha.dom, top, (rank[v] for v in alpha.images))
    mono = Operator(top, alpha.cod, distinct)
    return epi, mono


def dual(alpha: Operator) -> Operator:
    """Alternating dual: ``i -> m - alpha(n - i)``."""
    if alpha.dom < 0 or alpha.cod < 0:
        raise ValueError("the alternating dual is only defined on non-empty ordinals")
    m = alpha.cod
    return Operator._unchecked(alpha.dom, m, tuple([m - v for v in reversed(alpha.images)]))


def ordinal_sum(alpha: Operator, beta: Operator) -> Operator:
    n, shift = alpha.dom, alpha.cod + 1
    return Operator._unchecked(
        alpha.dom + beta.dom + 1,
        alpha.cod + beta.cod + 1,
        alpha.images + tuple([v + shift for v in beta.images]),
    )


def split_ordinal_sum(alpha: Operator, n: int, m: int) -> tuple[Operator, Operator]:
    """The unique pair ``(beta, gamma)`` with ``alpha == beta (+) gamma``
    where ``beta`` lands in ``[n]`` and ``gamma`` in ``[m]``."""
    if alpha.cod != n + m + 1:
        raise ValueError(f"{alpha} does not land in [{n}]+[{m}]")
    cut = sum(1 for v in alpha.images if v <= n)
    left = Operator(cut - 1, n, alpha.images[:cut])
    right = Operator(alpha.dom - cut, m, (v - n - 1 for v in alpha.images[cut:]))
    return left, right


def partition_ops(p: int, q: int) -> tuple[Operator, Operator, Operator, Operator]:
    """The inclusions and retractions attached to splitting ``[p+q]`` at ``p``.

    Returns ``(incl_1, incl_2, retr_1, retr_2)``: ``incl_1`` and ``incl_2``
    are the initial and final segments ``[p] -> [p+q]`` and ``[q] -> [p+q]``;
    ``retr_1`` collapses everything after ``p`` onto ``p`` and ``retr_2``
    collapses everything before ``p`` onto ``0``.
    """
    if p < 0 or q < 0:
        raise ValueError("partition sizes must be non-negative")
    n = p + q
    incl_1 = Operator(p, n, range(p + 1))
    incl_2 = Operator(q, n, (j + p for j in range(q + 1)))
    retr_1 = Operator(n, p, (min(i, p) for i in range(n + 1)))
    retr_2 = Operator(n, q, (max(i - p, 0) for i in range(n + 1)))
    return incl_1, incl_2, retr_1, retr_2


CubeIndex = Union[int, str]


def rho(r: int, i: CubeIndex) -> Operator:
    """Step operators ``[r] -> [1]``; ``'-'`` and ``'+'`` give the constants 0 and 1."""
    if r < 0:
        raise ValueError("rho needs r >= 0")
    if i == "-":
        return Operator(r, 1, (0,) * (r + 1))
    if i == "+":
        return Operator(r, 1, (1,) * (r + 1))
    if isinstance(i, int) and not isinstance(i, bool) and 1 <= i <= r:
        return Operator(r, 1, (0 if j < i else 1 for j in range(r + 1)))
    raise ValueError(f"cube index {i!r} out of range for r={r}")


def is_admissible(alpha: Operator, k: int) -> tuple[bool, int | None]:
    """Whether the face ``alpha`` of ``[n]`` is ``k``-admissible.

    Returns the verdict and, when admissible, the position ``l`` with
    ``alpha(l) == k``.  The image-containment test and the witness test are
    computed independently and must agree.
    """
    n = alpha.cod
    if not alpha.is_mono:
        raise ValueError(f"{alpha} is not injective")
    if not 0 <= k <= n:
        raise ValueError(f"k={k} outside [0,{n}]")
    needed = {k - 1, k, k + 1} & set(range(n + 1))
    by_image = needed <= alpha.image_set()
    witness = None
    r = alpha.dom
    for l in range(r + 1):
        if alpha.images[l] != k:
            continue
        below = k == 0 or (l > 0 and alpha.images[l - 1] == k - 1)
        above = k == n or (l < r and alpha.images[l + 1] == k + 1)
        if below and above:
            witness = l
            break
    by_witness = witness is not None
    if by_image != by_witness:
        raise AssertionError(f"admissibility criteria disagree on {alpha}, k={k}")
    return by_image, witness


def all_operators(dom: int, cod: int) -> Iterator[Operator]:
    """Every monotone map ``[dom] -> [cod]`` in lexicographic order."""
    if dom == -1:
        yield Operator(-1, cod, ())
        return
    if cod < 0:
        return

    def extend(prefix: tuple, low: int):
        if len(prefix) == dom + 1:
            yield prefix
            return
        for v in range(low, cod + 1):
            yield from extend(prefix + (v,), v)

    for images in extend((), 0):
        yield Operator(dom, cod, images)


def monos(dom: int, cod: int) -> Iterator[Operator]:
    for images in combinations(range(cod + 1), dom + 1):
        yield Operator(dom, cod, images)


@lru_cache(maxsize=None)
def epis(dom: int, cod: int) -> tuple:
    """Surjections ``[dom] -> [cod]``, lexicographic."""
    if cod == -1:
        return (Operator(-1, -1, ()),) if dom == -1 else ()
    out = []
    for cuts in combinations(range(1, dom + 1), cod):
        images, level = [], 0
        for i in range(dom + 1):
            if level < cod and i == cuts[level]:
                level += 1
            images.append(level)
        out.append(Operator(dom, cod, images))
    return tuple(out)
