"""Finely graded Betti numbers of monomial quotients P/I.

Two oracles compute them from homology:

* :func:`koszul_betti` works for any monomial ideal through upper Koszul
  simplicial complexes, one per multidegree.
* :func:`hochster_betti` works for squarefree ideals through restrictions
  of the Stanley-Reisner complex.

Three closed formulas rebuild tables from combinatorial data:
:func:`stable_betti_formula`, :func:`mapping_cone_betti_polarized` and
:func:`mapping_cone_betti_squares`.  Tables are always for the quotient, so
``beta[0, 0] = 1`` unless I is the unit ideal.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import reduce
from math import gcd
from typing import Iterable, Iterator

from .complex import SimplicialComplex
from .errors import ParseError, PreconditionError, ResourceLimitError
from .ideals import (
    MonomialIdeal,
    colon_ideal,
    color_square_ideal,
    complex_of_ideal,
    is_color_squarefree_stable_across_colors,
    sm,
)
from .ring import Monomial, RingSignature, Variable, is_color_squarefree

GRADINGS = ("fine", "zd", "z")


# -- coefficient fields ---------------------------------------------------------


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, int(p**0.5) + 1))


@dataclass(frozen=True)
class FieldConfig:
    """Exact rationals when ``prime`` is None, else GF(prime)."""

    prime: int | None = None

    def __post_init__(self):
        if self.prime is not None and not _is_prime(self.prime):
            raise PreconditionError(f"{self.prime} is not prime")

    @classmethod
    def parse(cls, text: str) -> "FieldConfig":
        text = text.strip().lower()
        if text in ("q", "qq", "rational", "rationals"):
            return cls()
        if text.startswith("gf:"):
            try:
                return cls(int(text[3:]))
            except ValueError:
                raise ParseError(f"bad field {text!r}; expected q or gf:<prime>") from None
        raise ParseError(f"bad field {text!r}; expected q or gf:<prime>")

    def __str__(self) -> str:
        return "q" if self.prime is None else f"gf:{self.prime}"


RATIONALS = FieldConfig()


def matrix_rank(rows: Iterable[dict[int, int]], field: FieldConfig = RATIONALS) -> int:
    """Rank of a sparse integer matrix given as ``{column: entry}`` rows.

    Over the rationals rows are eliminated fraction-free and divided by
    their content after every step, so entries stay small.
    """
    p = field.prime
    basis: dict[int, dict[int, int]] = {}
    for row in rows:
        row = {c: (v % p if p else v) for c, v in row.items()}
        row = {c: v for c, v in row.items() if v}
        while row:
            c = min(row)
            piv = basis.get(c)
            if piv is None:
                if p:
                    inv = pow(row[c], -1, p)
                    row = {k: v * inv % p for k, v in row.items()}
                basis[c] = row
                break
            a, b = piv[c], row[c]
            if p:
                # piv[c] == 1
                new = dict(row)
                for k, v in piv.items():
                    new[k] = (new.get(k, 0) - b * v) % p
            else:
                new = {k: v * a for k, v in row.items()}
                for k, v in piv.items():
                    new[k] = new.get(k, 0) - b * v
            row = {k: v for k, v in new.items() if v}
            if row and not p:
                g = reduce(gcd, row.values())
                if g > 1:
                    row = {k: v // g for k, v in row.items()}
    return len(basis)


# -- simplicial homology --------------------------------------------------------


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _faces_from_facets(facets: Iterable[int]) -> set[int]:
    out: set[int] = set()
    for f in facets:
        sub = f
        while True:
            out.add(sub)
            if sub == 0:
                break
            sub = (sub - 1) & f
    return out


def _maximal(masks: Iterable[int]) -> list[int]:
    kept: list[int] = []
    for f in sorted(set(masks), key=_popcount, reverse=True):
        if not any(f & g == f for g in kept):
            kept.append(f)
    return kept


def homology_of_facets(facets: Iterable[int], field: FieldConfig = RATIONALS) -> dict[int, int]:
    """Nonzero reduced Betti numbers of the complex with the given facet masks.

    An empty facet list is the empty complex (no homology at all); ``[0]`` is
    the void complex, whose only homology is in degree -1.
    """
    facets = _maximal(facets)
    if not facets:
        return {}
    if len(facets) == 1:
        return {-1: 1} if facets[0] == 0 else {}
    # a vertex in every facet makes the complex a cone
    if reduce(lambda a, b: a & b, facets):
        return {}
    faces = _faces_from_facets(facets)
    by_dim: dict[int, list[int]] = defaultdict(list)
    for f in faces:
        by_dim[_popcount(f) - 1].append(f)
    top = max(by_dim)
    index = {k: {f: n for n, f in enumerate(sorted(fs))} for k, fs in by_dim.items()}
    ranks = {}
    for k in range(0, top + 1):
        lower = index[k - 1]
        rows = []
        for f in by_dim[k]:
            row = {}
            sign = 1
            rest = f
            while rest:
                low = rest & -rest
                row[lower[f ^ low]] = sign
                sign = -sign
                rest ^= low
            rows.append(row)
        ranks[k] = matrix_rank(rows, field)
    out = {}
    for k in range(-1, top + 1):
        dim = len(by_dim[k]) - ranks.get(k, 0) - ranks.get(k + 1, 0)
        if dim:
            out[k] = dim
    return out


def reduced_homology_dims(delta: SimplicialComplex, field: FieldConfig = RATIONALS) -> dict[int, int]:
    """dim H~_k(delta) for k = -1 .. dim delta (zeros included)."""
    nonzero = homology_of_facets(delta.facets, field)
    return {k: nonzero.get(k, 0) for k in range(-1, max(delta.dim, -1) + 1)}


# -- Betti tables ---------------------------------------------------------------


@dataclass(frozen=True)
class BettiTable:
    """Multiplicities ``beta[k, a]`` of P/I.

    ``grading`` says what a degree is: a fine degree (one slot per variable of
    ``ring``), a per-color degree of length d, or a 1-tuple total degree.
    """

    ring: RingSignature
    entries: dict[tuple[int, tuple[int, ...]], int] = field(default_factory=dict)
    grading: str = "fine"

    def __post_init__(self):
        if self.grading not in GRADINGS:
            raise PreconditionError(f"unknown grading {self.grading!r}")
        clean = {key: v for key, v in self.entries.items() if v}
        if any(v < 0 for v in clean.values()):
            raise PreconditionError("negative Betti number")
        object.__setattr__(self, "entries", clean)

    def __getitem__(self, key) -> int:
        k, a = key
        return self.entries.get((k, tuple(a)), 0)

    def __eq__(self, other):
        if not isinstance(other, BettiTable):
            return NotImplemented
        return self.grading == other.grading and self.entries == other.entries

    def __hash__(self):
        return hash((self.grading, frozenset(self.entries.items())))

    @property
    def length(self) -> int:
        return max((k for k, _ in self.entries), default=-1) + 1

    def totals(self) -> list[int]:
        out = [0] * self.length
        for (k, _), v in self.entries.items():
            out[k] += v
        return out

    def coarsen(self, grading: str) -> "BettiTable":
        return coarsen(self, grading)

    def strands(self) -> dict[int, list[int]]:
        """Row r lists beta[k, k + r] for k = 0 .. length - 1."""
        z = self.coarsen("z")
        rows: dict[int, list[int]] = defaultdict(lambda: [0] * self.length)
        for (k, (deg,)), v in z.entries.items():
            rows[deg - k][k] += v
        return {r: rows[r] for r in sorted(rows)}

    def embed(self, ring: RingSignature) -> "BettiTable":
        """The same table read in a ring with more variables (fine grading only)."""
        if self.grading != "fine":
            return self
        slots = [ring.slot(v) for v in self.ring.variables]
        entries = {}
        for (k, a), v in self.entries.items():
            deg = [0] * ring.nvars
            for s, e in zip(slots, a):
                deg[s] = e
            entries[k, tuple(deg)] = v
        return BettiTable(ring, entries)

    def k_polynomial(self) -> dict[tuple[int, ...], int]:
        """sum_k (-1)^k beta[k, a] t^a, the numerator of the Hilbert series."""
        out: Counter = Counter()
        for (k, a), v in self.entries.items():
            out[a] += (-1) ** k * v
        return {a: c for a, c in out.items() if c}

    def sorted_entries(self) -> list[tuple[int, tuple[int, ...], int]]:
        return sorted((k, a, v) for (k, a), v in self.entries.items())

    def to_json(self, *, ideal_convention: bool = False) -> dict:
        shift = 1 if ideal_convention else 0
        return {
            "ring": {"d": self.ring.d, "m": list(self.ring.m)},
            "grading": self.grading,
            "convention": "ideal" if ideal_convention else "quotient",
            "totals": self.totals()[shift:],
            "entries": [[k - shift, list(a), v] for k, a, v in self.sorted_entries() if k >= shift],
        }

    def render(self, *, ideal_convention: bool = False) -> str:
        return render_text(self, ideal_convention=ideal_convention)


def _coarse_degree(ring: RingSignature, a: tuple[int, ...], grading: str) -> tuple[int, ...]:
    if grading == "fine":
        return a
    colors = ring.colors_of_slots()
    if grading == "zd":
        out = [0] * ring.d
        for c, e in zip(colors, a):
            out[c - 1] += e
        return tuple(out)
    return (sum(a),)


def coarsen(table: BettiTable, grading: str) -> BettiTable:
    order = {g: n for n, g in enumerate(GRADINGS)}
    if grading not in order:
        raise PreconditionError(f"unknown grading {grading!r}")
    if order[grading] < order[table.grading]:
        raise PreconditionError(f"cannot refine a {table.grading} table to {grading}")
    if grading == table.grading:
        return table
    out: Counter = Counter()
    for (k, a), v in table.entries.items():
        if table.grading == "zd":
            deg = (sum(a),)
        else:
            deg = _coarse_degree(table.ring, a, grading)
        out[k, deg] += v
    return BettiTable(table.ring, dict(out), grading)


@dataclass(frozen=True)
class Difference:
    k: int
    degree: tuple[int, ...]
    left: int
    right: int

    def __str__(self) -> str:
        return f"beta[{self.k}, {list(self.degree)}]: {self.left} != {self.right}"


def compare(left: BettiTable, right: BettiTable, grading: str) -> list[Difference]:
    """Every (k, degree) where the tables differ after coarsening to ``grading``."""
    if grading == "fine" and left.ring != right.ring:
        raise PreconditionError(f"fine gradings of {left.ring} and {right.ring} are incomparable")
    if grading == "zd" and left.ring.d != right.ring.d:
        raise PreconditionError("Z^d gradings need the same number of colors")
    a, b = coarsen(left, grading), coarsen(right, grading)
    keys = sorted(set(a.entries) | set(b.entries))
    return [Difference(k, deg, a[k, deg], b[k, deg]) for k, deg in keys if a[k, deg] != b[k, deg]]


def render_text(table: BettiTable, *, ideal_convention: bool = False) -> str:
    """The usual strand layout: a header of homological indices, a total row,
    then row r holding beta[k, k + r]."""
    shift = 1 if ideal_convention else 0
    totals = table.totals()[shift:]
    strands = table.strands()
    if not totals:
        return "total:\n"
    cols = range(len(totals))
    width = max(len(str(v)) for v in totals + [len(totals)]) + 1
    label_w = max(len("total:"), *(len(f"{r + shift}:") for r in strands))

    def line(label, values):
        cells = ["." if v == 0 else str(v) for v in values]
        return label.rjust(label_w) + "".join(c.rjust(width) for c in cells)

    out = [" " * label_w + "".join(str(k).rjust(width) for k in cols), line("total:", totals)]
    for r, row in strands.items():
        out.append(line(f"{r + shift}:", row[shift:]))
    return "\n".join(out) + "\n"


# -- the oracles ----------------------------------------------------------------


def _exponents(I: MonomialIdeal, g: Monomial) -> tuple[int, ...]:
    return I.ring.fine_degree(g)


def _divisors(top: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    return itertools.product(*(range(e + 1) for e in top))


def _unit_or_zero(I: MonomialIdeal) -> BettiTable | None:
    zero = (0,) * I.ring.nvars
    if I.is_unit():
        return BettiTable(I.ring, {})
    if I.is_zero():
        return BettiTable(I.ring, {(0, zero): 1})
    return None


def koszul_betti(
    I: MonomialIdeal, field: FieldConfig = RATIONALS, *, max_degrees: int = 2_000_000
) -> BettiTable:
    """Betti numbers of P/I from upper Koszul complexes.

    For a multidegree a dividing the lcm of the generators, the upper Koszul
    complex consists of the squarefree sigma with x^a / x^sigma in I, and
    beta[k+1, a](P/I) = dim H~_{k-1}.  Each generator g dividing x^a
    contributes the full simplex on the variables where a exceeds g, so the
    complex is read off as a union of simplices.  A degree that is not the
    lcm of the generators dividing it gives a cone and is skipped.
    """
    trivial = _unit_or_zero(I)
    if trivial is not None:
        return trivial
    gens = [_exponents(I, g) for g in I.generators]
    n = I.ring.nvars
    top = tuple(max(g[k] for g in gens) for k in range(n))
    count = 1
    for e in top:
        count *= e + 1
    if count > max_degrees:
        raise ResourceLimitError(f"{count} multidegrees exceed the cap of {max_degrees}")
    entries = {(0, (0,) * n): 1}
    for a in _divisors(top):
        below = [g for g in gens if all(x <= y for x, y in zip(g, a))]
        if not below:
            continue
        if tuple(max(g[k] for g in below) for k in range(n)) != a:
            continue
        facets = []
        for g in below:
            mask = 0
            for k in range(n):
                if a[k] > g[k]:
                    mask |= 1 << k
            facets.append(mask)
        for deg, dim in homology_of_facets(facets, field).items():
            entries[deg + 2, a] = dim
    return BettiTable(I.ring, entries)


def hochster_betti(I: MonomialIdeal, field: FieldConfig = RATIONALS) -> BettiTable:
    """beta[k, sigma](P/I) = dim H~_{|sigma|-k-1}(Delta restricted to sigma), Delta
    the Stanley-Reisner complex of the squarefree ideal I."""
    trivial = _unit_or_zero(I)
    if trivial is not None:
        return trivial
    delta = complex_of_ideal(I)
    n = I.ring.nvars
    support = 0
    for g in I.generators:
        for v in g.variables():
            support |= 1 << I.ring.slot(v)
    entries = {}
    sub = support
    while True:
        size = _popcount(sub)
        restricted = [f & sub for f in delta.facets]
        for deg, dim in homology_of_facets(restricted, field).items():
            k = size - deg - 1
            entries[k, tuple(sub >> v & 1 for v in range(n))] = dim
        if sub == 0:
            break
        sub = (sub - 1) & support
    return BettiTable(I.ring, entries)


# -- closed formulas ------------------------------------------------------------


def _add(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def stable_betti_formula(I: MonomialIdeal) -> BettiTable:
    """Betti numbers of P/I for a color-squarefree stable ideal, from the
    generators alone: beta[j, deg u + deg sigma] gains one for each generator
    u and each sigma in sm(u) of size j - 1."""
    trivial = _unit_or_zero(I)
    if trivial is not None:
        return trivial
    if not is_color_squarefree_stable_across_colors(I):
        raise PreconditionError("ideal is not color-squarefree stable across colors")
    ring = I.ring
    entries: Counter = Counter({(0, (0,) * ring.nvars): 1})
    for u in I.generators:
        base = ring.fine_degree(u)
        quotient = sorted(sm(u, ring))
        for size in range(len(quotient) + 1):
            for sigma in itertools.combinations(quotient, size):
                deg = _add(base, ring.fine_degree(Monomial.from_variables(sigma)))
                entries[size + 1, deg] += 1
    return BettiTable(ring, dict(entries))


def _require_cs(J: MonomialIdeal) -> None:
    bad = [g for g in J.sorted_generators() if not is_color_squarefree(g)]
    if bad:
        raise PreconditionError(f"J must be color-squarefree; {bad[0]} is not")


def polarized_target(J: MonomialIdeal) -> MonomialIdeal:
    """J + sum m_i^[2] + sum x[i,m_i+1] m_i as an ideal of the extended ring."""
    base = J.ring
    ext = base.extended()
    gens = set(J.generators) | set(color_square_ideal(base, ext, squarefree=True).generators)
    for i in range(1, base.d + 1):
        top = base.sentinel(i)
        gens |= {Monomial.from_variables([Variable(i, j), top]) for j in range(1, base.m[i - 1] + 1)}
    return MonomialIdeal(ext, gens)


def squares_target(J: MonomialIdeal) -> MonomialIdeal:
    """J + sum m_i^2 in the ring of J."""
    return J + color_square_ideal(J.ring)


def _cone_sum(
    J: MonomialIdeal, ring: RingSignature, shift_of, field: FieldConfig
) -> BettiTable:
    base = J.ring
    inner_ring_ideal = MonomialIdeal(ring, J.generators) + color_square_ideal(base, ring, squarefree=True)
    entries: Counter = Counter()
    for u in base.color_squarefree_monomials():
        colon = colon_ideal(inner_ring_ideal, u)
        shift = ring.fine_degree(shift_of(u))
        for (k, a), v in koszul_betti(colon, field).entries.items():
            entries[k + u.degree, _add(a, shift)] += v
    return BettiTable(ring, dict(entries))


def mapping_cone_betti_polarized(J: MonomialIdeal, field: FieldConfig = RATIONALS) -> BettiTable:
    """Betti numbers of P'/(J + sum m_i^[2] + sum x[i,m_i+1] m_i), P' the extended ring.

    Sum over color-squarefree u of the table of P'/(I' : u), I' = J + sum m_i^[2],
    moved up by deg u homologically and by u * prod_{i in supp u} x[i,m_i+1]
    in degree.
    """
    _require_cs(J)
    base = J.ring

    def shift(u: Monomial) -> Monomial:
        return u * Monomial.from_variables(base.sentinel(c) for c in u.color_support())

    return _cone_sum(J, base.extended(), shift, field)


def mapping_cone_betti_squares(J: MonomialIdeal, field: FieldConfig = RATIONALS) -> BettiTable:
    """Betti numbers of P/(J + sum m_i^2): as the polarized version, but in P
    and with the degree moved by u^2."""
    _require_cs(J)
    return _cone_sum(J, J.ring, lambda u: u * u, field)


# -- Hilbert series -------------------------------------------------------------


@dataclass(frozen=True)
class HilbertSeries:
    """K(t) / prod (1 - t_v): ``numerator`` maps exponent vectors to integers.

    In the fine grading there is one t_v per variable; in the Z^d grading one
    per color, and the denominator is prod_i (1 - t_i)^{m_i}; in the Z
    grading a single t with denominator (1 - t)^{nvars}.
    """

    ring: RingSignature
    numerator: dict[tuple[int, ...], int]
    grading: str = "fine"

    def coarsen(self, grading: str) -> "HilbertSeries":
        if grading == self.grading:
            return self
        if self.grading != "fine":
            if self.grading == "zd" and grading == "z":
                out: Counter = Counter()
                for a, c in self.numerator.items():
                    out[(sum(a),)] += c
                return HilbertSeries(self.ring, _clean(out), "z")
            raise PreconditionError(f"cannot refine {self.grading} to {grading}")
        out = Counter()
        for a, c in self.numerator.items():
            out[_coarse_degree(self.ring, a, grading)] += c
        return HilbertSeries(self.ring, _clean(out), grading)

    def polynomial(self) -> list[int]:
        """Coefficients of the Z-graded numerator, lowest degree first."""
        z = self.coarsen("z").numerator
        top = max((a[0] for a in z), default=0)
        return [z.get((k,), 0) for k in range(top + 1)]

    def reduced(self) -> tuple[list[int], int]:
        """Divide the Z-graded numerator by (1 - t) as often as possible.

        Returns the h-polynomial coefficients and the remaining exponent of
        (1 - t) in the denominator (the Krull dimension).
        """
        poly = self.polynomial()
        dim = self.ring.nvars
        while dim > 0 and poly and sum(poly) == 0:
            # synthetic division by (1 - t)
            quotient, acc = [], 0
            for c in poly[:-1]:
                acc += c
                quotient.append(acc)
            poly, dim = quotient, dim - 1
        while len(poly) > 1 and poly[-1] == 0:
            poly.pop()
        return poly, dim

    def coefficients(self, upto: int) -> list[int]:
        """Expand the Z-graded series: dim_k of the quotient for k = 0 .. upto."""
        from math import comb

        poly = self.polynomial()
        n = self.ring.nvars
        return [
            sum(c * comb(n - 1 + k - s, n - 1) for s, c in enumerate(poly) if s <= k) if n else (poly[k] if k < len(poly) else 0)
            for k in range(upto + 1)
        ]

    def expand_fine(self, upto: int) -> dict[tuple[int, ...], int]:
        """Fine-graded coefficients of all monomials of total degree <= upto."""
        if self.grading != "fine":
            raise PreconditionError("fine expansion needs a fine series")
        n = self.ring.nvars
        out: Counter = Counter()
        for a, c in self.numerator.items():
            rest = upto - sum(a)
            if rest < 0:
                continue
            for extra in _exponent_vectors(n, rest):
                out[_add(a, extra)] += c
        return _clean(out)


def _exponent_vectors(n: int, upto: int) -> Iterator[tuple[int, ...]]:
    for total in range(upto + 1):
        for combo in itertools.combinations_with_replacement(range(n), total):
            vec = [0] * n
            for k in combo:
                vec[k] += 1
            yield tuple(vec)


def _clean(c: Counter | dict) -> dict:
    return {a: v for a, v in sorted(c.items()) if v}


def k_polynomial(I: MonomialIdeal) -> dict[tuple[int, ...], int]:
    """Fine K-polynomial of P/I by K(P/(J + g)) = K(P/J) - t^g K(P/(J : g))."""
    n = I.ring.nvars
    memo: dict[frozenset[Monomial], Counter] = {}

    def rec(gens: frozenset[Monomial]) -> Counter:
        if gens in memo:
            return memo[gens]
        if not gens:
            out = Counter({(0,) * n: 1})
        elif Monomial.one() in gens:
            out = Counter()
        else:
            # peel off the largest generator in canonical order
            g = max(gens, key=lambda u: (u.degree, u.items))
            rest = gens - {g}
            out = Counter(rec(rest))
            colon = MonomialIdeal(I.ring, {h / h.gcd(g) for h in rest}).generators
            shift = I.ring.fine_degree(g)
            for a, c in rec(colon).items():
                out[_add(a, shift)] -= c
        memo[gens] = out
        return out

    return _clean(rec(I.generators))


def hilbert_series(I: MonomialIdeal, grading: str = "z") -> HilbertSeries:
    """Hilbert series of P/I in the requested grading."""
    return HilbertSeries(I.ring, k_polynomial(I), "fine").coarsen(grading)


def count_quotient_monomials(I: MonomialIdeal, upto: int) -> list[int]:
    """Number of monomials of each degree <= upto outside I, by brute force."""
    out = []
    for k in range(upto + 1):
        out.append(sum(1 for u in I.ring.monomials_of_degree(k) if u not in I))
    return out


def table_json(table: BettiTable, **kw) -> str:
    return json.dumps(table.to_json(**kw), sort_keys=True)
