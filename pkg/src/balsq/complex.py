"""Vertex-colored simplicial complexes and the balanced squeezed construction.

A complex lives on the vertices of a ring signature: vertex ``j^(i)`` is the
variable ``x[i,j]`` and has color ``i``.  For the balanced squeezed complex
of an order ideal in P(d, m) that ring is P(d, m + 1), whose last vertex
``(m_i+1)^(i)`` of each color is the padding vertex.  Faces are int bit
masks over the ring's color-major variable enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Union

from .errors import BalsqError, NotColorSquarefreeError, PreconditionError, ResourceLimitError
from .orderideal import OrderIdeal
from .ring import Monomial, RingSignature, Variable, is_color_squarefree, sort_monomials


class ColoredVertex(NamedTuple):
    color: int
    label: int

    def __str__(self) -> str:
        return f"{self.label}^({self.color})"


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _submasks(mask: int) -> Iterator[int]:
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def _maximal(masks: Iterable[int]) -> frozenset[int]:
    pool = sorted(set(masks), key=_popcount, reverse=True)
    kept: list[int] = []
    for f in pool:
        if not any(f & g == f for g in kept):
            kept.append(f)
    return frozenset(kept)


@dataclass(frozen=True)
class SimplicialComplex:
    """A finite simplicial complex stored by its facets.

    ``SimplicialComplex(ring, [])`` is the empty complex (no faces at all);
    ``SimplicialComplex(ring, [0])`` is the void complex ``{emptyset}``.
    """

    ring: RingSignature
    facets: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "facets", _maximal(self.facets))
        if any(f >> self.ring.nvars for f in self.facets):
            raise PreconditionError(f"facet uses a vertex outside {self.ring}")

    @classmethod
    def from_masks(cls, ring: RingSignature, masks: Iterable[int]) -> "SimplicialComplex":
        return cls(ring, frozenset(masks))

    @classmethod
    def from_faces(
        cls, ring: RingSignature, faces: Iterable[Iterable[ColoredVertex | tuple[int, int]]]
    ) -> "SimplicialComplex":
        return cls(ring, frozenset(_mask_of(ring, f) for f in faces))

    # -- vertex bookkeeping ---------------------------------------------------

    def mask(self, vertices: Iterable[ColoredVertex | tuple[int, int]]) -> int:
        return _mask_of(self.ring, vertices)

    def vertices_of_mask(self, mask: int) -> tuple[ColoredVertex, ...]:
        return tuple(
            ColoredVertex(*self.ring.variables[k]) for k in range(self.ring.nvars) if mask >> k & 1
        )

    def monomial_of_mask(self, mask: int) -> Monomial:
        return Monomial.from_variables(self.vertices_of_mask(mask))

    def mask_of_monomial(self, u: Monomial) -> int:
        if not u.is_squarefree():
            raise PreconditionError(f"{u} is not squarefree")
        return _mask_of(self.ring, u.variables())

    def colors(self, mask: int) -> frozenset[int]:
        return frozenset(v.color for v in self.vertices_of_mask(mask))

    # -- faces ----------------------------------------------------------------

    @cached_property
    def _faces(self) -> frozenset[int]:
        out: set[int] = set()
        for f in self.facets:
            out.update(_submasks(f))
        return frozenset(out)

    def face_set(self) -> frozenset[int]:
        return self._faces

    def faces(self) -> list[tuple[ColoredVertex, ...]]:
        return [self.vertices_of_mask(f) for f in sorted(self._faces, key=lambda f: (_popcount(f), f))]

    def __contains__(self, face) -> bool:
        mask = face if isinstance(face, int) else self.mask(face)
        return mask in self._faces

    def sorted_facets(self) -> list[int]:
        return sorted(self.facets, key=lambda f: (_popcount(f), f))

    @property
    def vertex_mask(self) -> int:
        out = 0
        for f in self.facets:
            out |= f
        return out

    @property
    def dim(self) -> int:
        """-1 for the void complex; -2 stands in for the empty complex."""
        if not self.facets:
            return -2
        return max(_popcount(f) for f in self.facets) - 1

    def is_empty(self) -> bool:
        return not self.facets

    def is_void(self) -> bool:
        return self.facets == frozenset({0})

    def is_pure(self) -> bool:
        return len({_popcount(f) for f in self.facets}) <= 1

    def is_simplex(self) -> bool:
        return len(self.facets) == 1

    def is_balanced(self) -> bool:
        """Every face meets each color class at most once."""
        return all(_is_rainbow(self.ring, f) for f in self.facets)

    def __str__(self) -> str:
        parts = ["{" + ",".join(map(str, self.vertices_of_mask(f))) + "}" for f in self.sorted_facets()]
        return "<" + ", ".join(parts) + ">"


Face = Union[int, Iterable[ColoredVertex]]


def _mask_of(ring: RingSignature, vertices) -> int:
    out = 0
    for v in vertices:
        var = Variable(*v)
        if not ring.has_variable(var):
            raise PreconditionError(f"vertex {var.index}^({var.color}) is not in {ring}")
        out |= 1 << ring.slot(var)
    return out


def _is_rainbow(ring: RingSignature, mask: int) -> bool:
    colors = [ring.variables[k].color for k in range(ring.nvars) if mask >> k & 1]
    return len(colors) == len(set(colors))


# -- the balanced squeezed complex ----------------------------------------------


def facet_of_monomial(u: Monomial, signature: RingSignature) -> frozenset[ColoredVertex]:
    """F_d(u): the colored indices of u, padded by (m_j + 1)^(j) for every color j u misses."""
    if not is_color_squarefree(u):
        raise NotColorSquarefreeError(f"{u} is not color-squarefree")
    used = {v.color: v.index for v in u.variables()}
    return frozenset(
        ColoredVertex(i, used.get(i, signature.m[i - 1] + 1)) for i in range(1, signature.d + 1)
    )


def _as_members(U, signature) -> tuple[RingSignature, list[Monomial]]:
    if isinstance(U, OrderIdeal):
        return U.signature, list(U)
    if signature is None:
        raise PreconditionError("a signature is needed when U is a plain set of monomials")
    return signature, sort_monomials(U)


def balanced_squeezed_complex(
    U: OrderIdeal | Iterable[Monomial], signature: RingSignature | None = None
) -> SimplicialComplex:
    """The complex on the vertices of P(d, m + 1) whose facets are F_d(u), u in U."""
    signature, members = _as_members(U, signature)
    ext = signature.extended()
    return SimplicialComplex.from_faces(ext, [facet_of_monomial(u, signature) for u in members])


def link(delta: SimplicialComplex, face) -> SimplicialComplex:
    """lk(F) = {G : G disjoint from F, G union F a face}."""
    mask = face if isinstance(face, int) else delta.mask(face)
    if mask not in delta.face_set():
        raise PreconditionError("link of a non-face")
    return SimplicialComplex(delta.ring, frozenset(f & ~mask for f in delta.facets if f & mask == mask))


def deletion(delta: SimplicialComplex, vertex) -> SimplicialComplex:
    """The faces of delta not containing ``vertex``."""
    bit = vertex if isinstance(vertex, int) else delta.mask([vertex])
    return SimplicialComplex(delta.ring, frozenset(f & ~bit for f in delta.facets))


def induced_subcomplex(delta: SimplicialComplex, vertices) -> SimplicialComplex:
    """Faces of delta contained in the vertex set W."""
    w = vertices if isinstance(vertices, int) else delta.mask(vertices)
    return SimplicialComplex(delta.ring, frozenset(f & w for f in delta.facets))


# -- flag f- and h-vectors --------------------------------------------------------


@dataclass(frozen=True)
class FlagVector:
    """Entries f_S or h_S keyed by color sets S, for every S in [d]."""

    kind: str
    d: int
    values: dict[frozenset[int], int]

    def __getitem__(self, S) -> int:
        return self.values.get(frozenset(S), 0)

    def coarse(self) -> list[int]:
        """Sum over |S| = i for i = 0..d."""
        out = [0] * (self.d + 1)
        for S, v in self.values.items():
            out[len(S)] += v
        return out

    def as_json(self) -> dict[str, int]:
        return {",".join(map(str, sorted(S))): v for S, v in sorted(self.values.items(), key=_set_key)}


def _set_key(item):
    S = item[0]
    return (len(S), sorted(S))


def _all_color_sets(d: int) -> list[frozenset[int]]:
    return [
        frozenset(c) for k in range(d + 1) for c in itertools.combinations(range(1, d + 1), k)
    ]


def flag_f_vector(delta: SimplicialComplex) -> FlagVector:
    if not delta.is_balanced():
        raise PreconditionError("flag vectors need a balanced complex")
    d = delta.ring.d
    values = {S: 0 for S in _all_color_sets(d)}
    for f in delta.face_set():
        values[delta.colors(f)] += 1
    return FlagVector("f", d, values)


def flag_h_vector(delta: SimplicialComplex) -> FlagVector:
    f = flag_f_vector(delta)
    values = {}
    for S in _all_color_sets(f.d):
        values[S] = sum(
            (-1) ** (len(S) - k) * f[T]
            for k in range(len(S) + 1)
            for T in itertools.combinations(sorted(S), k)
        )
    return FlagVector("h", f.d, values)


def f_vector(delta: SimplicialComplex) -> list[int]:
    """(f_{-1}, f_0, ..., f_{dim})."""
    out = [0] * (delta.dim + 2)
    for f in delta.face_set():
        out[_popcount(f)] += 1
    return out


def h_vector(delta: SimplicialComplex) -> list[int]:
    """h from f via sum_i f_{i-1} (t-1)^(n-i) = sum_i h_i t^(n-i), n = dim + 1."""
    f = f_vector(delta)
    n = len(f) - 1
    h = [0] * (n + 1)
    for i, fi in enumerate(f):
        # coefficient of t^(n-k) in (t-1)^(n-i) is C(n-i, n-k) (-1)^(k-i)
        for k in range(i, n + 1):
            h[k] += fi * _binom(n - i, k - i) * (-1) ** (k - i)
    return h


def _binom(n: int, k: int) -> int:
    from math import comb

    return comb(n, k)


# -- vertex decomposability -------------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    """A simplex (including the void complex)."""


@dataclass(frozen=True)
class Shed:
    vertex: ColoredVertex
    link: "DecompositionTree"
    deletion: "DecompositionTree"


DecompositionTree = Union[Leaf, Shed]


def tree_depth(tree: DecompositionTree) -> int:
    if isinstance(tree, Leaf):
        return 0
    return 1 + max(tree_depth(tree.link), tree_depth(tree.deletion))


def tree_to_json(tree: DecompositionTree):
    if isinstance(tree, Leaf):
        return "simplex"
    return {
        "shed": [tree.vertex.color, tree.vertex.label],
        "link": tree_to_json(tree.link),
        "deletion": tree_to_json(tree.deletion),
    }


def _is_shedding(delta: SimplicialComplex, bit: int, lk: SimplicialComplex, dl: SimplicialComplex) -> bool:
    # the deletion must keep the full dimension: no facet of the link is a
    # facet of the deletion
    return dl.is_pure() and dl.dim == delta.dim and bit & delta.vertex_mask != 0


def verify_decomposition(delta: SimplicialComplex, tree: DecompositionTree) -> bool:
    """Replay ``tree`` on ``delta`` and check every step against the definition."""
    if isinstance(tree, Leaf):
        return delta.is_simplex()
    if not delta.is_pure():
        return False
    v = tree.vertex
    if not delta.ring.has_variable(Variable(*v)):
        return False
    bit = delta.mask([v])
    if not bit & delta.vertex_mask:
        return False
    lk, dl = link(delta, bit), deletion(delta, bit)
    if not _is_shedding(delta, bit, lk, dl):
        return False
    return verify_decomposition(lk, tree.link) and verify_decomposition(dl, tree.deletion)


def is_vertex_decomposable(
    delta: SimplicialComplex, *, max_memo: int = 1 << 20
) -> DecompositionTree | None:
    """Backtracking search for a vertex decomposition of a pure complex.

    Returns a witness tree or ``None``.  Candidate shedding vertices are
    tried in color-major order, so witnesses are reproducible.
    """
    if not delta.is_pure():
        return None
    memo: dict[frozenset[int], DecompositionTree | None] = {}

    def search(cx: SimplicialComplex) -> DecompositionTree | None:
        if cx.is_empty():
            return None
        if cx.is_simplex():
            return Leaf()
        if cx.facets in memo:
            return memo[cx.facets]
        if len(memo) >= max_memo:
            raise ResourceLimitError(f"vertex decomposability search exceeded {max_memo} memo entries")
        memo[cx.facets] = None
        found = None
        verts = cx.vertex_mask
        for k in range(cx.ring.nvars):
            bit = 1 << k
            if not verts & bit:
                continue
            lk, dl = link(cx, bit), deletion(cx, bit)
            if not _is_shedding(cx, bit, lk, dl):
                continue
            lt = search(lk)
            if lt is None:
                continue
            dt = search(dl)
            if dt is None:
                continue
            found = Shed(ColoredVertex(*cx.ring.variables[k]), lt, dt)
            break
        memo[cx.facets] = found
        return found

    return search(delta)


def squeezed_decomposition(U: OrderIdeal) -> DecompositionTree:
    """Vertex decomposition of the balanced squeezed complex built from U.

    Shedding 1^(i) for the first color with remaining variables: the link is
    the balanced complex of {u : x[i,1] u in U} with color i dropped, the
    deletion that of {u in U : x[i,1] does not divide u} with color i losing
    its first variable.  Labels are tracked so that the tree names vertices
    of the original complex.
    """
    sig = U.signature
    labels = {i: list(range(1, sig.m[i - 1] + 2)) for i in range(1, sig.d + 1)}
    return _decompose(set(U.monomials), labels)


def _decompose(members: set[Monomial], labels: dict[int, list[int]]) -> DecompositionTree:
    # members use positions: x[i,p] means the p-th remaining label of color i;
    # the last label of each color is the padding vertex
    members, labels = _compress(members, labels)
    shed_color = next((i for i in sorted(labels) if len(labels[i]) >= 2), None)
    if shed_color is None:
        return Leaf()
    i = shed_color
    first = Monomial.var(i, 1)
    vertex = ColoredVertex(i, labels[i][0])

    link_members = {u for u in members if first * u in members and i not in u.color_support()}
    link_labels = {c: ls for c, ls in labels.items() if c != i}

    del_members = set()
    for u in members:
        if first.divides(u):
            continue
        del_members.add(Monomial((Variable(v.color, v.index - 1) if v.color == i else v, e) for v, e in u.items))
    del_labels = dict(labels)
    del_labels[i] = labels[i][1:]

    return Shed(vertex, _decompose(link_members, link_labels), _decompose(del_members, del_labels))


def _compress(members: set[Monomial], labels: dict[int, list[int]]):
    """Drop labels no member uses, so the members again contain every variable."""
    used = {c: sorted({v.index for u in members for v in u.variables() if v.color == c}) for c in labels}
    if all(used[c] == list(range(1, len(labels[c]))) for c in labels):
        return members, labels
    pos = {c: {p: k + 1 for k, p in enumerate(used[c])} for c in labels}
    new_members = {Monomial.from_variables(Variable(v.color, pos[v.color][v.index]) for v in u.variables()) for u in members}
    new_labels = {c: [labels[c][p - 1] for p in used[c]] + [labels[c][-1]] for c in labels}
    return new_members, new_labels


# -- shellings --------------------------------------------------------------------


@dataclass(frozen=True)
class ShellingStep:
    monomial: Monomial | None
    facet: int
    restriction: int


def shelling_order(U: OrderIdeal) -> list[ShellingStep]:
    """Facets F_d(u) with u running through U by degree and then descending
    revlex, each prefix an order ideal; the restriction face of F_d(u) is the
    set of colored indices of u."""
    delta = balanced_squeezed_complex(U)
    steps = []
    for u in U:
        facet = delta.mask(facet_of_monomial(u, U.signature))
        steps.append(ShellingStep(u, facet, delta.mask(ColoredVertex(*v) for v in u.variables())))
    return steps


def verify_shelling(delta: SimplicialComplex, order: list[int]) -> tuple[bool, list[int]]:
    """Check that ``order`` (facet masks) is a shelling of the pure complex.

    Each new facet must meet the earlier ones in a nonempty union of its
    codimension-one faces.  Returns the verdict and the restriction faces
    (the vertices v of F whose removal lands in an earlier facet).
    """
    if sorted(order) != sorted(delta.facets) or len(set(order)) != len(order):
        return False, []
    if not delta.is_pure():
        return False, []
    restrictions = []
    for k, F in enumerate(order):
        if k == 0:
            restrictions.append(0)
            continue
        earlier = order[:k]
        meets = [F & G for G in earlier]
        size = _popcount(F)
        ridges = {m for m in meets if _popcount(m) == size - 1}
        if not ridges:
            return False, restrictions
        if not all(any(m & r == m for r in ridges) for m in meets):
            return False, restrictions
        restriction = 0
        for r in ridges:
            restriction |= F & ~r
        restrictions.append(restriction)
    return True, restrictions


# -- color-shiftedness and the inverse correspondence ------------------------------


def _replacement_targets(ring: RingSignature, allowed: int, color: int, low: int) -> list[int]:
    return [
        ring.slot(Variable(color, k))
        for k in range(low, ring.m[color - 1] + 1)
        if allowed >> ring.slot(Variable(color, k)) & 1
    ]


def is_color_shifted(delta: SimplicialComplex, vertices: int | None = None) -> bool:
    """Replacing j^(i) in a face by k^(i), k > j, gives a face.

    ``vertices`` restricts the replacement targets (default: every vertex of
    the ring); it is how an induced subcomplex on fewer labels is checked.
    Facets suffice because the complex is balanced.
    """
    ring = delta.ring
    allowed = (1 << ring.nvars) - 1 if vertices is None else vertices
    faces = delta.face_set()
    for F in delta.facets:
        for v in delta.vertices_of_mask(F):
            rest = F & ~(1 << ring.slot(Variable(*v)))
            for t in _replacement_targets(ring, allowed, v.color, v.label + 1):
                if rest | (1 << t) not in faces:
                    return False
    return True


def is_color_shifted_across_colors(delta: SimplicialComplex, vertices: int | None = None) -> bool:
    """Color-shifted, and replacing j^(i) in a face by any k^(l), l > i, with
    color l unused by the rest of the face, gives a face."""
    if not is_color_shifted(delta, vertices):
        return False
    ring = delta.ring
    allowed = (1 << ring.nvars) - 1 if vertices is None else vertices
    faces = delta.face_set()
    for F in faces:
        for v in delta.vertices_of_mask(F):
            rest = F & ~(1 << ring.slot(Variable(*v)))
            used = delta.colors(rest)
            for color in range(v.color + 1, ring.d + 1):
                if color in used:
                    continue
                for t in _replacement_targets(ring, allowed, color, 1):
                    if rest | (1 << t) not in faces:
                        return False
    return True


def order_ideal_of_complex(delta: SimplicialComplex) -> set[Monomial]:
    """U(delta): the monomial prod x[i,j] over j^(i) in F, for every face F."""
    if not delta.is_balanced():
        raise PreconditionError("U(delta) needs a balanced complex")
    return {delta.monomial_of_mask(f) for f in delta.face_set()}


def padding_free_vertices(signature: RingSignature) -> int:
    """Mask of every vertex of P(d, m + 1) except the padding vertices (m_i+1)^(i)."""
    ext = signature.extended()
    return sum(1 << ext.slot(v) for v in signature.variables)


class DecompositionError(BalsqError):
    pass
