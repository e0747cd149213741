"""Color-squarefree monomial order ideals and their complement ideals."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Iterator

from .errors import NotColorSquarefreeError, PreconditionError, ResourceLimitError
from .ring import (
    Monomial,
    RingSignature,
    is_color_squarefree,
    sort_monomials,
)

if TYPE_CHECKING:
    from .ideals import MonomialIdeal


def _one_step_divisors(u: Monomial) -> list[Monomial]:
    return [u / Monomial([(v, 1)]) for v in u.variables()]


def _check_inputs(signature: RingSignature, monomials: Iterable[Monomial]) -> list[Monomial]:
    out = []
    for u in monomials:
        if not is_color_squarefree(u):
            raise NotColorSquarefreeError(f"{u} is not color-squarefree")
        if not signature.contains(u):
            raise PreconditionError(f"{u} has a variable outside {signature}")
        out.append(u)
    return out


@dataclass(frozen=True)
class OrderIdeal:
    """A finite divisibility-closed set of color-squarefree monomials of P(d, m)
    containing 1 and every variable."""

    signature: RingSignature
    monomials: frozenset[Monomial]

    def __post_init__(self):
        object.__setattr__(self, "monomials", frozenset(self.monomials))
        _check_inputs(self.signature, self.monomials)
        required = [Monomial.one()] + [Monomial([(v, 1)]) for v in self.signature.variables]
        missing = [u for u in required if u not in self.monomials]
        if missing:
            raise PreconditionError(f"order ideal is missing {', '.join(map(str, missing))}")
        for u in self.monomials:
            for w in _one_step_divisors(u):
                if w not in self.monomials:
                    raise PreconditionError(f"not closed under divisibility: {u} in U but {w} not")

    def __contains__(self, u: Monomial) -> bool:
        return u in self.monomials

    def __iter__(self) -> Iterator[Monomial]:
        return iter(sort_monomials(self.monomials))

    def __len__(self) -> int:
        return len(self.monomials)

    def __str__(self) -> str:
        return "{" + ", ".join(map(str, self)) + "}"


def violations(signature: RingSignature, monomials: Iterable[Monomial]) -> list[str]:
    """Every reason the given set fails to be an order ideal (empty if it is one)."""
    members = set(monomials)
    out = []
    for u in sort_monomials(members):
        if not is_color_squarefree(u):
            out.append(f"{u} is not color-squarefree")
        elif not signature.contains(u):
            out.append(f"{u} has a variable outside {signature}")
        else:
            out.extend(
                f"{w} divides {u} but is missing" for w in _one_step_divisors(u) if w not in members
            )
    out.extend(f"{u} is missing" for u in _base(signature) if u not in members)
    return list(dict.fromkeys(out))


def _divisor_closure(seeds: Iterable[Monomial]) -> set[Monomial]:
    out: set[Monomial] = set()
    stack = list(seeds)
    while stack:
        u = stack.pop()
        if u in out:
            continue
        out.add(u)
        stack.extend(_one_step_divisors(u))
    return out


def _base(signature: RingSignature) -> list[Monomial]:
    return [Monomial.one()] + [Monomial([(v, 1)]) for v in signature.variables]


def from_monomials(signature: RingSignature, monomials: Iterable[Monomial] = ()) -> OrderIdeal:
    """The divisibility closure of ``monomials`` together with 1 and all variables."""
    seeds = _check_inputs(signature, monomials)
    return OrderIdeal(signature, frozenset(_divisor_closure(seeds + _base(signature))))


def _shift_moves(u: Monomial, signature: RingSignature, across_colors: bool) -> Iterator[Monomial]:
    """Monomials that condition (iii) (or its across-colors version) forces
    into U once u is in U."""
    used = u.color_support()
    for var in u.variables():
        rest = u / Monomial([(var, 1)])
        yield from (
            rest * Monomial.var(var.color, j)
            for j in range(var.index + 1, signature.m[var.color - 1] + 1)
        )
        if across_colors:
            for color in range(var.color + 1, signature.d + 1):
                if color in used:
                    continue
                for j in range(1, signature.m[color - 1] + 1):
                    yield rest * Monomial.var(color, j)


def _is_closed(U: OrderIdeal, across_colors: bool) -> bool:
    return all(
        w in U.monomials
        for u in U.monomials
        for w in _shift_moves(u, U.signature, across_colors)
    )


def is_shifted(U: OrderIdeal) -> bool:
    """Whether replacing any x[k,l] in a member by x[k,j], l < j <= m_k, stays in U."""
    return _is_closed(U, across_colors=False)


def is_shifted_across_colors(U: OrderIdeal) -> bool:
    """Whether U is shifted and closed under replacing a variable by any later
    variable (in the ``prec`` order) that keeps the monomial color-squarefree."""
    return _is_closed(U, across_colors=True)


def smallest_shifted_closure(
    signature: RingSignature,
    monomials: Iterable[Monomial] = (),
    *,
    across_colors: bool = False,
) -> OrderIdeal:
    """Least shifted order ideal containing ``monomials``, 1 and the variables."""
    seeds = _check_inputs(signature, monomials) + _base(signature)
    out: set[Monomial] = set()
    stack = list(seeds)
    while stack:
        u = stack.pop()
        if u in out:
            continue
        out.add(u)
        stack.extend(_one_step_divisors(u))
        stack.extend(_shift_moves(u, signature, across_colors))
    return OrderIdeal(signature, frozenset(out))


def complement_ideal(U: OrderIdeal) -> "MonomialIdeal":
    """I(U): the monomial ideal generated by all monomials of P(d, m) outside U.

    A monomial outside U is a minimal generator exactly when every divisor
    obtained by removing one variable lies in U, so the candidates are the
    products of a member of U with a single variable.
    """
    from .ideals import MonomialIdeal

    members = U.monomials
    variables = [Monomial([(v, 1)]) for v in U.signature.variables]
    gens = set()
    for u in members:
        for x in variables:
            w = u * x
            if w in members or w in gens:
                continue
            if all(p in members for p in _one_step_divisors(w)):
                gens.add(w)
    return MonomialIdeal(U.signature, gens)


def d_max(U: OrderIdeal) -> int:
    return max(u.degree for u in U.monomials)


def d_max_ideal(I: "MonomialIdeal") -> int:
    """Largest degree of a minimal generator (0 for the zero ideal)."""
    return max((g.degree for g in I.generators), default=0)


def mon_cs(signature: RingSignature) -> OrderIdeal:
    """All color-squarefree monomials of the signature as an order ideal."""
    return OrderIdeal(signature, frozenset(signature.color_squarefree_monomials()))


def enumerate_order_ideals(
    signature: RingSignature,
    *,
    shifted: bool | None = None,
    across_colors: bool | None = None,
    max_count: int | None = None,
    seed: int = 0,
    exhaustive_threshold: int = 64,
    max_exhaustive: int = 1_000_000,
    samples: int = 2000,
) -> Iterator[OrderIdeal]:
    """Yield order ideals of P(d, m) containing 1 and all variables.

    When ``|Mon_cs|`` is at most ``exhaustive_threshold`` every order ideal is
    visited (in a deterministic order) and ``max_exhaustive`` bounds the number
    visited before a :class:`ResourceLimitError`.  Larger signatures fall back
    to ``samples`` seeded random draws, deduplicated.  ``shifted`` and
    ``across_colors`` filter on the respective predicate when not ``None``.
    """

    def wanted(U: OrderIdeal) -> bool:
        if shifted is not None and is_shifted(U) != shifted:
            return False
        if across_colors is not None and is_shifted_across_colors(U) != across_colors:
            return False
        return True

    cs = signature.color_squarefree_monomials()
    source = (
        _exhaustive(signature, cs, max_exhaustive)
        if len(cs) <= exhaustive_threshold
        else _sampled(signature, cs, seed, samples, shifted, across_colors)
    )
    emitted = 0
    for U in source:
        if max_count is not None and emitted >= max_count:
            return
        if wanted(U):
            emitted += 1
            yield U


def _exhaustive(signature: RingSignature, cs: list[Monomial], limit: int) -> Iterator[OrderIdeal]:
    base = set(_base(signature))
    optional = [u for u in cs if u not in base]
    visited = 0

    def rec(k: int, chosen: set[Monomial]) -> Iterator[OrderIdeal]:
        nonlocal visited
        if k == len(optional):
            visited += 1
            if visited > limit:
                raise ResourceLimitError(
                    f"more than {limit} order ideals in {signature}; lower the signature or raise the cap"
                )
            yield OrderIdeal(signature, frozenset(chosen))
            return
        u = optional[k]
        yield from rec(k + 1, chosen)
        # optional is sorted by degree, so all divisors were decided already
        if all(p in chosen for p in _one_step_divisors(u)):
            chosen.add(u)
            yield from rec(k + 1, chosen)
            chosen.remove(u)

    yield from rec(0, set(base))


def _sampled(
    signature: RingSignature,
    cs: list[Monomial],
    seed: int,
    samples: int,
    shifted: bool | None,
    across_colors: bool | None,
) -> Iterator[OrderIdeal]:
    rng = random.Random(seed)
    optional = [u for u in cs if u.degree >= 2]
    seen: set[frozenset[Monomial]] = set()
    for _ in range(samples):
        k = rng.randint(0, min(len(optional), 4))
        seeds = rng.sample(optional, k)
        if across_colors:
            U = smallest_shifted_closure(signature, seeds, across_colors=True)
        elif shifted:
            U = smallest_shifted_closure(signature, seeds)
        else:
            U = from_monomials(signature, seeds)
        if U.monomials in seen:
            continue
        seen.add(U.monomials)
        yield U

