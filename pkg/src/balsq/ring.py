"""Colored polynomial rings P(d, m), their monomials, and the orders used on them.

Variables are written ``x[i,j]``: color ``i`` in ``1..d`` and index ``j`` in
``1..m_i``.  Two total orders on variables appear:

* ``prec`` -- ``x[i,j] < x[k,l]`` iff ``i < k`` or ``i == k and j < l``.  This
  is the order used by the shifting and stability conditions.
* ``sec5`` -- exactly the reverse of ``prec``, so ``x[1,1]`` is the largest
  variable.  Reverse-lexicographic comparisons, linear quotients and the gin
  term order are all taken with respect to this one.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property, cmp_to_key
from typing import Iterable, Iterator, NamedTuple

from .errors import NotColorSquarefreeError, ParseError


class Variable(NamedTuple):
    color: int
    index: int

    def __str__(self) -> str:
        return f"x[{self.color},{self.index}]"


FineDegree = tuple[int, ...]


@dataclass(frozen=True)
class RingSignature:
    """The pair ``(d, m)`` fixing the colored polynomial ring P(d, m)."""

    d: int
    m: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))
        if self.d < 1:
            raise ValueError(f"need at least one color, got d={self.d}")
        if len(self.m) != self.d:
            raise ValueError(f"m has {len(self.m)} entries but d={self.d}")
        if any(x < 0 for x in self.m):
            raise ValueError(f"negative color class size in m={self.m}")

    def __str__(self) -> str:
        return f"P({self.d},({','.join(map(str, self.m))}))"

    @property
    def nvars(self) -> int:
        return sum(self.m)

    @cached_property
    def variables(self) -> tuple[Variable, ...]:
        """All variables, color-major and index-minor (the FineDegree slot order)."""
        return tuple(
            Variable(i, j) for i in range(1, self.d + 1) for j in range(1, self.m[i - 1] + 1)
        )

    @cached_property
    def _slot(self) -> dict[Variable, int]:
        return {v: k for k, v in enumerate(self.variables)}

    def slot(self, var: Variable) -> int:
        return self._slot[var]

    def colors_of_slots(self) -> tuple[int, ...]:
        return tuple(v.color for v in self.variables)

    def has_variable(self, var: Variable) -> bool:
        return 1 <= var.color <= self.d and 1 <= var.index <= self.m[var.color - 1]

    def contains(self, u: "Monomial") -> bool:
        return all(self.has_variable(v) for v in u.variables())

    def extended(self) -> "RingSignature":
        """P(d, m + (1,...,1)); the new variable of color i is ``x[i, m_i + 1]``."""
        return RingSignature(self.d, tuple(x + 1 for x in self.m))

    def sentinel(self, color: int) -> Variable:
        """The variable ``x[i, m_i + 1]`` that :meth:`extended` adds for ``color``."""
        return Variable(color, self.m[color - 1] + 1)

    def fine_degree(self, u: "Monomial") -> FineDegree:
        exps = [0] * self.nvars
        for var, e in u.items:
            exps[self._slot[var]] = e
        return tuple(exps)

    def monomial(self, exps: Iterable[int]) -> "Monomial":
        return Monomial(
            (var, e) for var, e in zip(self.variables, exps, strict=True) if e
        )

    def color_degree(self, u: "Monomial") -> tuple[int, ...]:
        out = [0] * self.d
        for var, e in u.items:
            out[var.color - 1] += e
        return tuple(out)

    def color_squarefree_monomials(self) -> list["Monomial"]:
        """Mon_cs(d, m), ordered by degree and then by descending revlex."""
        choices = [range(0, k + 1) for k in self.m]
        out = []
        for pick in itertools.product(*choices):
            out.append(Monomial((Variable(i + 1, j), 1) for i, j in enumerate(pick) if j))
        return sort_monomials(out)

    def monomials_of_degree(self, k: int) -> list["Monomial"]:
        out = []
        for combo in itertools.combinations_with_replacement(self.variables, k):
            out.append(Monomial.from_variables(combo))
        return sort_monomials(out)


_FACTOR = re.compile(r"\s*x\s*\[\s*(\d+)\s*,\s*(\d+)\s*\]\s*(?:\^\s*(\d+))?\s*$")


class Monomial:
    """An immutable monomial: a map from variables to positive exponents.

    The representation is the tuple of ``(variable, exponent)`` pairs sorted
    color-major, so equality and hashing are structural and independent of
    any ring signature.  Embedding into a larger signature is the identity.
    """

    __slots__ = ("items", "_hash")

    def __init__(self, pairs: Iterable[tuple[Variable, int]] = ()):
        acc: dict[Variable, int] = {}
        for var, e in pairs:
            var = Variable(*var)
            if e < 0:
                raise ValueError(f"negative exponent {e} on {var}")
            if e:
                acc[var] = acc.get(var, 0) + e
        self.items: tuple[tuple[Variable, int], ...] = tuple(sorted(acc.items()))
        self._hash = hash(self.items)

    @classmethod
    def one(cls) -> "Monomial":
        return cls()

    @classmethod
    def var(cls, color: int, index: int) -> "Monomial":
        return cls([(Variable(color, index), 1)])

    @classmethod
    def from_variables(cls, variables: Iterable[Variable | tuple[int, int]]) -> "Monomial":
        return cls((Variable(*v), 1) for v in variables)

    @classmethod
    def parse(cls, text: str) -> "Monomial":
        """Parse ``x[1,2]*x[2,2]^2`` style text; ``1`` is the empty product."""
        text = text.strip()
        if text == "1":
            return cls()
        if not text:
            raise ParseError("empty monomial")
        pairs = []
        for token in text.split("*"):
            match = _FACTOR.match(token)
            if match is None:
                raise ParseError(f"bad monomial factor {token.strip()!r} in {text!r}")
            color, index, exp = match.groups()
            exp = 1 if exp is None else int(exp)
            if int(color) < 1 or int(index) < 1 or exp < 1:
                raise ParseError(f"bad monomial factor {token.strip()!r} in {text!r}")
            pairs.append((Variable(int(color), int(index)), exp))
        return cls(pairs)

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.items == other.items

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Monomial({str(self)!r})"

    def __str__(self):
        if not self.items:
            return "1"
        return "*".join(str(v) if e == 1 else f"{v}^{e}" for v, e in self.items)

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.items + other.items)

    def __truediv__(self, other: "Monomial") -> "Monomial":
        if not other.divides(self):
            raise ValueError(f"{other} does not divide {self}")
        mine = dict(self.items)
        for var, e in other.items:
            mine[var] -= e
        return Monomial(mine.items())

    def exponent(self, var: Variable) -> int:
        for v, e in self.items:
            if v == var:
                return e
        return 0

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.items)

    def variables(self) -> tuple[Variable, ...]:
        return tuple(v for v, _ in self.items)

    def divides(self, other: "Monomial") -> bool:
        theirs = dict(other.items)
        return all(theirs.get(v, 0) >= e for v, e in self.items)

    def gcd(self, other: "Monomial") -> "Monomial":
        theirs = dict(other.items)
        return Monomial((v, min(e, theirs.get(v, 0))) for v, e in self.items)

    def lcm(self, other: "Monomial") -> "Monomial":
        acc = dict(self.items)
        for v, e in other.items:
            acc[v] = max(acc.get(v, 0), e)
        return Monomial(acc.items())

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.items)

    def color_support(self) -> frozenset[int]:
        return frozenset(v.color for v, _ in self.items)


def color_support(u: Monomial) -> frozenset[int]:
    """The set of colors i such that some x[i,j] divides u."""
    return u.color_support()


def is_color_squarefree(u: Monomial) -> bool:
    if not u.is_squarefree():
        return False
    colors = [v.color for v, _ in u.items]
    return len(colors) == len(set(colors))


def require_color_squarefree(*monomials: Monomial) -> None:
    for u in monomials:
        if not is_color_squarefree(u):
            raise NotColorSquarefreeError(f"{u} is not color-squarefree")


def _cmp(a, b) -> int:
    return (a > b) - (a < b)


def var_compare_prec(a: Variable, b: Variable) -> int:
    """-1, 0 or 1 according to the order ``x[i,j] < x[k,l]`` iff (i, j) < (k, l)."""
    return _cmp(tuple(a), tuple(b))


def var_compare_sec5(a: Variable, b: Variable) -> int:
    """The reverse of :func:`var_compare_prec`: ``x[1,1]`` is the largest variable."""
    return -var_compare_prec(a, b)


def revlex_compare(u: Monomial, v: Monomial) -> int:
    """Degree-refined reverse lexicographic comparison, variables ordered by ``sec5``.

    Lower degree is smaller.  At equal degree, look at the smallest variable
    (in the ``sec5`` order, i.e. the largest color and index) where the
    exponents differ; the monomial with the larger exponent there is smaller.
    """
    if u.degree != v.degree:
        return _cmp(u.degree, v.degree)
    eu, ev = dict(u.items), dict(v.items)
    for var in sorted(set(eu) | set(ev), reverse=True):
        a, b = eu.get(var, 0), ev.get(var, 0)
        if a != b:
            return 1 if a < b else -1
    return 0


revlex_key = cmp_to_key(revlex_compare)


def _canonical_compare(u: Monomial, v: Monomial) -> int:
    if u.degree != v.degree:
        return _cmp(u.degree, v.degree)
    return -revlex_compare(u, v)


def sort_monomials(monomials: Iterable[Monomial]) -> list[Monomial]:
    """Canonical output order: ascending degree, and within a degree the
    revlex-largest first (so ``x[1,1]`` precedes ``x[3,2]``)."""
    return sorted(monomials, key=cmp_to_key(_canonical_compare))


def _index_by_color(u: Monomial) -> dict[int, int]:
    return {v.color: v.index for v, _ in u.items}


def leq_s(u: Monomial, v: Monomial) -> bool:
    """u <=_s v: same color support and each index of u at most that of v."""
    require_color_squarefree(u, v)
    iu, iv = _index_by_color(u), _index_by_color(v)
    if iu.keys() != iv.keys():
        return False
    return all(iu[c] <= iv[c] for c in iu)


def _cs_exchanges_down(w: Monomial, signature: RingSignature) -> Iterator[Monomial]:
    """All color-squarefree monomials obtained from w by replacing one variable
    x[k,l] with a variable x[i,j] that precedes it."""
    pairs = dict(w.items)
    used = set(v.color for v in pairs)
    for var in pairs:
        rest = [x for x in pairs if x != var]
        for color in range(1, var.color + 1):
            if color != var.color and color in used:
                continue
            top = var.index - 1 if color == var.color else signature.m[color - 1]
            for j in range(1, top + 1):
                yield Monomial.from_variables(rest + [Variable(color, j)])


def leq_cs(
    u: Monomial,
    v: Monomial,
    signature: RingSignature,
    *,
    preserve_support: bool = False,
) -> bool:
    """u <=_cs v: u lies in every ideal that is strongly color-stable across
    colors and contains v, with u and v of equal color support.

    Decided as reachability: starting at v, repeatedly replace a variable by a
    preceding one while staying color-squarefree.  Intermediate monomials may
    change color support unless ``preserve_support`` is set.
    """
    require_color_squarefree(u, v)
    if u.color_support() != v.color_support():
        return False
    if u == v:
        return True
    support = v.color_support()
    seen = {v}
    stack = [v]
    while stack:
        w = stack.pop()
        for nxt in _cs_exchanges_down(w, signature):
            if nxt in seen:
                continue
            if preserve_support and nxt.color_support() != support:
                continue
            if nxt == u:
                return True
            seen.add(nxt)
            stack.append(nxt)
    return False
