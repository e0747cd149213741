"""Monomial ideals: Stanley-Reisner ideals, the gin closed form, stability
predicates, colon ideals, linear quotients and colored polarization."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Iterator

from .errors import BalsqError, PreconditionError
from .orderideal import OrderIdeal, complement_ideal, is_shifted
from .ring import (
    Monomial,
    RingSignature,
    Variable,
    is_color_squarefree,
    leq_cs,
    leq_s,
    require_color_squarefree,
    revlex_key,
    sort_monomials,
)

if TYPE_CHECKING:
    from .complex import SimplicialComplex


def _minimal(monomials: Iterable[Monomial]) -> frozenset[Monomial]:
    pool = sorted(set(monomials), key=lambda u: u.degree)
    kept: list[Monomial] = []
    for u in pool:
        if not any(g.divides(u) for g in kept):
            kept.append(u)
    return frozenset(kept)


@dataclass(frozen=True)
class MonomialIdeal:
    """A monomial ideal of the ring ``ring`` held by its minimal generators.

    The constructor minimalizes whatever it is given, so ``generators`` is
    always an antichain under divisibility.
    """

    ring: RingSignature
    generators: frozenset[Monomial]

    def __post_init__(self):
        gens = _minimal(self.generators)
        for g in gens:
            if not self.ring.contains(g):
                raise PreconditionError(f"generator {g} is not in {self.ring}")
        object.__setattr__(self, "generators", gens)

    def __contains__(self, u: Monomial) -> bool:
        return any(g.divides(u) for g in self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self.sorted_generators())

    def __str__(self) -> str:
        if not self.generators:
            return "(0)"
        return "(" + ", ".join(map(str, self)) + ")"

    def sorted_generators(self) -> list[Monomial]:
        return sort_monomials(self.generators)

    def is_zero(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        return Monomial.one() in self.generators

    def is_squarefree(self) -> bool:
        return all(g.is_squarefree() for g in self.generators)

    def is_color_squarefree(self) -> bool:
        return all(is_color_squarefree(g) for g in self.generators)

    def max_degree(self) -> int:
        return max((g.degree for g in self.generators), default=0)

    def extend(self, ring: RingSignature) -> "MonomialIdeal":
        """The extension ideal in a ring containing this one."""
        return MonomialIdeal(ring, self.generators)

    def __add__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        ring = self.ring if self.ring.nvars >= other.ring.nvars else other.ring
        return MonomialIdeal(ring, self.generators | other.generators)

    def restrict(self, ring: RingSignature) -> "MonomialIdeal":
        """Intersection with a subring spanned by some of the variables."""
        return MonomialIdeal(ring, {g for g in self.generators if ring.contains(g)})


def minimalize(ring: RingSignature, monomials: Iterable[Monomial]) -> MonomialIdeal:
    return MonomialIdeal(ring, frozenset(monomials))


def color_square_ideal(
    base: RingSignature, ring: RingSignature | None = None, *, squarefree: bool = False
) -> MonomialIdeal:
    """m_1^2 + ... + m_d^2 on the variables of ``base``, or with ``squarefree``
    the ideal m_1^[2] + ... + m_d^[2] of products of two distinct variables of
    one color.  ``ring`` is the ambient ring (defaults to ``base``)."""
    gens = set()
    for i in range(1, base.d + 1):
        xs = [Variable(i, j) for j in range(1, base.m[i - 1] + 1)]
        pairs = itertools.combinations(xs, 2) if squarefree else itertools.combinations_with_replacement(xs, 2)
        gens |= {Monomial.from_variables(p) for p in pairs}
    return MonomialIdeal(ring or base, gens)


# -- Stanley-Reisner correspondence -------------------------------------------


def stanley_reisner_ideal(delta: "SimplicialComplex") -> MonomialIdeal:
    """Minimal non-faces of ``delta`` as squarefree monomials; vertex j^(i) is x[i,j]."""
    faces = delta.face_set()
    nverts = delta.ring.nvars
    gens = set()
    for face in faces:
        for v in range(nverts):
            bit = 1 << v
            if face & bit:
                continue
            cand = face | bit
            if cand in faces:
                continue
            if all((cand & ~(1 << w)) in faces for w in _bits(cand)):
                gens.add(cand)
    return MonomialIdeal(delta.ring, {delta.monomial_of_mask(g) for g in gens})


def _bits(mask: int) -> Iterator[int]:
    k = 0
    while mask:
        if mask & 1:
            yield k
        mask >>= 1
        k += 1


def complex_of_ideal(I: MonomialIdeal) -> "SimplicialComplex":
    """The complex whose faces are the squarefree monomials outside I."""
    from .complex import SimplicialComplex

    if not I.is_squarefree():
        bad = next(g for g in I.sorted_generators() if not g.is_squarefree())
        raise PreconditionError(f"Stanley-Reisner ideals are squarefree; {bad} is not")
    ring = I.ring
    gen_masks = [sum(1 << ring.slot(v) for v in g.variables()) for g in I.generators]
    if 0 in gen_masks:
        return SimplicialComplex(ring, [])
    n = ring.nvars
    facets: list[int] = []

    # depth-first over vertex sets in increasing vertex order; a set is
    # extended only while it avoids every generator
    def grow(face: int, start: int) -> None:
        extended = False
        for v in range(start, n):
            cand = face | (1 << v)
            if any(g & cand == g for g in gen_masks):
                continue
            extended = True
            grow(cand, v + 1)
        if not extended:
            facets.append(face)

    grow(0, 0)
    return SimplicialComplex.from_masks(ring, facets)


def sr_ideal_formula(U: OrderIdeal) -> MonomialIdeal:
    """Stanley-Reisner ideal of the balanced squeezed complex, read off from U:
    the squarefree generators of I(U) plus x[i,l]*x[i,m_i+1]."""
    sig = U.signature
    if sig.d < 2 or min(sig.m) < 1:
        raise PreconditionError(f"needs d >= 2 and every m_i >= 1, got {sig}")
    ext = sig.extended()
    gens = {g for g in complement_ideal(U).generators if g.is_squarefree()}
    for i in range(1, sig.d + 1):
        top = sig.sentinel(i)
        for l in range(1, sig.m[i - 1] + 1):
            gens.add(Monomial.from_variables([Variable(i, l), top]))
    return MonomialIdeal(ext, gens)


# -- Phi, gin, polarization ---------------------------------------------------


def phi(u: Monomial, signature: RingSignature) -> Monomial:
    """x[i,j]^2 -> x[i,j]*x[i,m_i+1]; identity on color-squarefree monomials."""
    if is_color_squarefree(u):
        return u
    if u.degree == 2 and len(u.items) == 1:
        var = u.variables()[0]
        return Monomial.from_variables([var, signature.sentinel(var.color)])
    if u.degree == 2:
        return u
    raise PreconditionError(f"{u} is outside the domain of Phi")


def phi_map(I: MonomialIdeal) -> MonomialIdeal:
    """Phi applied to each generator; the result lives in the extended ring."""
    return MonomialIdeal(I.ring.extended(), {phi(g, I.ring) for g in I.generators})


def gin_formula(U: OrderIdeal) -> MonomialIdeal:
    """The multigraded generic initial ideal of the Stanley-Reisner ideal of
    the balanced squeezed complex, in closed form: I(U) extended to
    P(d, m + 1).  Valid only for shifted U (and stated over a field of
    characteristic zero)."""
    if not is_shifted(U):
        raise PreconditionError("gin closed form requires a shifted order ideal")
    return complement_ideal(U).extend(U.signature.extended())


def color_polarize(I: MonomialIdeal, ring: RingSignature | None = None) -> MonomialIdeal:
    """Colored polarization: within each color, the k-th smallest index j_k of a
    generator (counted with multiplicity) becomes j_k + k - 1.

    The result is squarefree; an index pushed beyond the ring's color class
    raises instead of growing the ring.
    """
    ring = ring or I.ring
    gens = set()
    for g in I.generators:
        out = []
        for color in sorted(g.color_support()):
            indices = sorted(
                itertools.chain.from_iterable([v.index] * e for v, e in g.items if v.color == color)
            )
            for k, j in enumerate(indices):
                new = j + k
                if new > ring.m[color - 1]:
                    raise PolarizationOverflow(
                        f"polarizing {g} needs x[{color},{new}] but {ring} stops at {ring.m[color - 1]}"
                    )
                out.append(Variable(color, new))
        gens.add(Monomial.from_variables(out))
    return MonomialIdeal(ring, gens)


class PolarizationOverflow(BalsqError, ValueError):
    pass


def color_shifted_complex(U: OrderIdeal) -> "SimplicialComplex":
    """The color-shifted complex of the balanced squeezed complex of a shifted U."""
    return complex_of_ideal(color_polarize(gin_formula(U)))


# -- stability predicates -----------------------------------------------------


def _replace(g: Monomial, old: Variable, new: Variable) -> Monomial:
    return g / Monomial([(old, 1)]) * Monomial([(new, 1)])


def is_strongly_color_stable(I: MonomialIdeal, *, squarefree: bool = False) -> bool:
    """x[k,l]*u in I and j < l imply x[k,j]*u in I.

    Checking generators suffices: the move is degree preserving and a
    multiple of a generator either keeps the generator intact or moves one
    of its variables.  With ``squarefree`` the condition is only imposed when
    x[k,j]*u is squarefree.
    """
    for g in I.generators:
        for var in g.variables():
            for j in range(1, var.index):
                w = _replace(g, var, Variable(var.color, j))
                if squarefree and not w.is_squarefree():
                    continue
                if w not in I:
                    return False
    return True


def is_strongly_color_stable_across_colors(
    I: MonomialIdeal, ring: RingSignature | None = None, *, squarefree: bool = False
) -> bool:
    """Strongly color-stable, and for color-squarefree x[k,l]*u in I every
    preceding variable x[i,j] with x[i,j]*u color-squarefree gives a member.

    ``ring`` fixes which variables the across-colors moves may introduce
    (default: all variables of ``I.ring``).
    """
    ring = ring or I.ring
    if not is_strongly_color_stable(I, squarefree=squarefree):
        return False
    for g in I.generators:
        if not is_color_squarefree(g):
            continue
        used = g.color_support()
        for var in g.variables():
            for color in range(1, var.color):
                if color in used:
                    continue
                for j in range(1, ring.m[color - 1] + 1):
                    if _replace(g, var, Variable(color, j)) not in I:
                        return False
    return True


def min_var(u: Monomial) -> Variable:
    """The smallest variable of a color-squarefree u (largest color)."""
    require_color_squarefree(u)
    if u.degree == 0:
        raise PreconditionError("1 has no smallest variable")
    return max(u.variables())


def sm(u: Monomial, signature: RingSignature) -> frozenset[Variable]:
    """Variables generating the colon ideal in the linear-quotient step for u:
    every variable of a color below the color of min(u) that u misses, and
    x[i,q] for q below the index u uses in color i."""
    require_color_squarefree(u)
    if u.degree == 0:
        return frozenset()
    last = min_var(u).color
    used = {v.color: v.index for v in u.variables()}
    out = set()
    for p in range(1, last + 1):
        top = used[p] - 1 if p in used else signature.m[p - 1]
        out.update(Variable(p, q) for q in range(1, top + 1))
    return frozenset(out)


def is_color_squarefree_stable_across_colors(I: MonomialIdeal) -> bool:
    """Generators color-squarefree, closed under lowering an index, and under
    replacing min(u) by any larger variable keeping u color-squarefree.

    As for the other stability predicates, generators suffice.
    """
    if not I.is_color_squarefree():
        return False
    for g in I.generators:
        if g.degree == 0:
            continue
        for var in g.variables():
            for j in range(1, var.index):
                if _replace(g, var, Variable(var.color, j)) not in I:
                    return False
        low = min_var(g)
        used = g.color_support() - {low.color}
        for color in range(1, low.color + 1):
            if color in used:
                continue
            top = low.index - 1 if color == low.color else I.ring.m[color - 1]
            for j in range(1, top + 1):
                if _replace(g, low, Variable(color, j)) not in I:
                    return False
    return True


def colon_ideal(I: MonomialIdeal, u: Monomial) -> MonomialIdeal:
    """I : u, generated by g / gcd(g, u) over the generators g."""
    return MonomialIdeal(I.ring, {g / g.gcd(u) for g in I.generators})


def variable_ideal(ring: RingSignature, variables: Iterable[Variable]) -> MonomialIdeal:
    return MonomialIdeal(ring, {Monomial([(v, 1)]) for v in variables})


@dataclass(frozen=True)
class LinearQuotientStep:
    generator: Monomial
    quotient: frozenset[Variable]


def linear_quotients_order(I: MonomialIdeal) -> list[LinearQuotientStep]:
    """Peel generators off a color-squarefree stable ideal.

    Each step removes the revlex-smallest generator v of maximal degree and
    checks that the remaining ideal J is still stable and that J : v is
    generated by the variables sm(v).  Steps are returned in removal order;
    reversed, they are an order with linear quotients.
    """
    if I.is_zero():
        raise PreconditionError("linear quotients need a nonzero ideal")
    if not is_color_squarefree_stable_across_colors(I):
        raise PreconditionError("ideal is not color-squarefree stable across colors")
    steps = []
    current = I
    while not current.is_zero():
        top = current.max_degree()
        v = min(
            (g for g in current.generators if g.degree == top),
            key=revlex_key,
        )
        J = MonomialIdeal(current.ring, current.generators - {v})
        quotient = sm(v, current.ring)
        if colon_ideal(J, v) != variable_ideal(current.ring, quotient):
            raise BalsqError(f"J : {v} = {colon_ideal(J, v)} differs from (sm({v}))")
        if not J.is_zero() and not is_color_squarefree_stable_across_colors(J):
            raise BalsqError(f"removing {v} broke stability")
        steps.append(LinearQuotientStep(v, quotient))
        current = J
    return steps


# -- helpers for comparing Phi images -----------------------------------------


def below_s(u: Monomial, signature: RingSignature) -> list[Monomial]:
    """All color-squarefree v with v <=_s u."""
    return [v for v in _same_support(u, signature) if leq_s(v, u)]


def below_cs(u: Monomial, signature: RingSignature) -> list[Monomial]:
    return [v for v in _same_support(u, signature) if leq_cs(v, u, signature)]


def _same_support(u: Monomial, signature: RingSignature) -> list[Monomial]:
    colors = sorted(u.color_support())
    return [
        Monomial.from_variables(Variable(c, j) for c, j in zip(colors, pick))
        for pick in itertools.product(*(range(1, signature.m[c - 1] + 1) for c in colors))
    ]
