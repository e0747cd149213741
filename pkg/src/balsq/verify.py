"""Property batteries over a corpus of small order ideals and ideals.

Each battery is a function ``item -> list of problems``; an empty list
means the property held.  :func:`run_batteries` drives them over the corpus
and reports the first counterexample of each failing battery.
"""

from __future__ import annotations

import itertools
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from . import betti as B
from .complex import (
    balanced_squeezed_complex,
    deletion,
    flag_f_vector,
    flag_h_vector,
    h_vector,
    induced_subcomplex,
    is_color_shifted,
    is_color_shifted_across_colors,
    link,
    padding_free_vertices,
    shelling_order,
    squeezed_decomposition,
    verify_decomposition,
    verify_shelling,
    Shed,
)
from .ideals import (
    MonomialIdeal,
    colon_ideal,
    color_shifted_complex,
    gin_formula,
    is_color_squarefree_stable_across_colors,
    is_strongly_color_stable,
    is_strongly_color_stable_across_colors,
    linear_quotients_order,
    phi_map,
    sr_ideal_formula,
    stanley_reisner_ideal,
    variable_ideal,
)
from .orderideal import (
    OrderIdeal,
    complement_ideal,
    d_max,
    d_max_ideal,
    enumerate_order_ideals,
    is_shifted,
    is_shifted_across_colors,
    smallest_shifted_closure,
)
from .ring import Monomial, RingSignature, is_color_squarefree

RUNNING_TOP = "x[1,2]*x[2,2]*x[3,2]"


def running_example() -> OrderIdeal:
    sig = RingSignature(3, (2, 2, 2))
    return smallest_shifted_closure(sig, [Monomial.parse(RUNNING_TOP)])


# -- corpus ---------------------------------------------------------------------


def default_signatures(max_d: int = 3, max_m: int = 2) -> list[RingSignature]:
    return [
        RingSignature(d, m)
        for d in range(1, max_d + 1)
        for m in itertools.product(range(1, max_m + 1), repeat=d)
    ]


def order_ideal_corpus(
    signatures: Iterable[RingSignature] | None = None,
    *,
    max_items: int = 200,
    per_signature: int = 24,
    seed: int = 0,
) -> list[OrderIdeal]:
    """A deterministic corpus: every order ideal of the small signatures,
    and an even mix of shifted and arbitrary samples for the larger ones.
    The running example always comes first."""
    sigs = list(signatures) if signatures is not None else default_signatures()
    out: list[OrderIdeal] = []
    seen: set = set()

    def push(U: OrderIdeal) -> None:
        key = (U.signature, U.monomials)
        if key not in seen and len(out) < max_items:
            seen.add(key)
            out.append(U)

    if any(s == RingSignature(3, (2, 2, 2)) for s in sigs):
        push(running_example())
    rng = random.Random(seed)
    for sig in sigs:
        cs = sig.color_squarefree_monomials()
        if len(cs) <= 12:
            pool = list(enumerate_order_ideals(sig))
            if len(pool) > per_signature:
                shifted = [U for U in pool if is_shifted(U)]
                other = [U for U in pool if not is_shifted(U)]
                half = per_signature // 2
                pick = rng.sample(shifted, min(half, len(shifted)))
                pick += rng.sample(other, min(per_signature - len(pick), len(other)))
                pool = sorted(pick, key=lambda U: (len(U), sorted(map(str, U))))
            for U in pool:
                push(U)
        else:
            half = per_signature // 2
            sub_seed = rng.randrange(1 << 30)
            for U in enumerate_order_ideals(
                sig, shifted=True, max_count=half, seed=sub_seed, exhaustive_threshold=0, samples=400
            ):
                push(U)
            for U in enumerate_order_ideals(
                sig, shifted=False, max_count=per_signature - half, seed=sub_seed + 1,
                exhaustive_threshold=0, samples=400,
            ):
                push(U)
    return out


def _antichains(monos: list[Monomial]) -> Iterator[list[Monomial]]:
    n = len(monos)
    for mask in range(1, 1 << n):
        chosen = [monos[k] for k in range(n) if mask >> k & 1]
        if all(not a.divides(b) for a, b in itertools.permutations(chosen, 2)):
            yield chosen


def stable_ideal_corpus(
    signatures: Iterable[RingSignature] = (RingSignature(2, (2, 2)), RingSignature(3, (1, 1, 1)))
) -> list[MonomialIdeal]:
    """Every nonzero color-squarefree stable-across-colors ideal generated in
    the color-squarefree monomials of the given signatures."""
    out = []
    for sig in signatures:
        nonunit = [u for u in sig.color_squarefree_monomials() if u.degree]
        for gens in _antichains(nonunit):
            I = MonomialIdeal(sig, gens)
            if is_color_squarefree_stable_across_colors(I):
                out.append(I)
    return out


def cs_part(I: MonomialIdeal) -> MonomialIdeal:
    return MonomialIdeal(I.ring, {g for g in I.generators if is_color_squarefree(g)})


def cone_corpus(order_ideals: Iterable[OrderIdeal], *, max_items: int = 200) -> list[MonomialIdeal]:
    """Color-squarefree ideals J for the mapping-cone batteries: the
    color-squarefree part of each I(U), then the stable ideals."""
    out: list[MonomialIdeal] = []
    seen = set()
    for J in itertools.chain((cs_part(complement_ideal(U)) for U in order_ideals), stable_ideal_corpus()):
        key = (J.ring, J.generators)
        if key in seen:
            continue
        seen.add(key)
        out.append(J)
        if len(out) >= max_items:
            break
    return out


# -- batteries on order ideals ----------------------------------------------------

Problems = list[str]


def _brute_complement(U: OrderIdeal) -> Problems:
    I = complement_ideal(U)
    top = d_max(U) + 1
    probs = []
    for k in range(top + 1):
        for u in U.signature.monomials_of_degree(k):
            if (u in I) == (u in U):
                probs.append(f"{u}: in U={u in U}, in I(U)={u in I}")
    return probs


def check_degree_bounds(U: OrderIdeal) -> Problems:
    """Shifted iff I(U) strongly color-stable (and likewise across colors);
    I(U) contains every m_i^2; 2 <= d_max(I(U)) <= d_max(U) + 1."""
    I = complement_ideal(U)
    probs = _brute_complement(U)
    if is_shifted(U) != is_strongly_color_stable(I):
        probs.append(f"shifted={is_shifted(U)} but strongly color-stable={not is_shifted(U)}")
    if is_shifted_across_colors(U) != is_strongly_color_stable_across_colors(I):
        probs.append("across-colors shiftedness and stability disagree")
    for v in U.signature.variables:
        for w in U.signature.variables:
            if v.color == w.color and Monomial.from_variables([v]) * Monomial.from_variables([w]) not in I:
                probs.append(f"{v}*{w} missing from I(U)")
    if not 2 <= d_max_ideal(I) <= d_max(U) + 1:
        probs.append(f"d_max(I(U))={d_max_ideal(I)} outside [2, {d_max(U) + 1}]")
    return probs


def check_structure(U: OrderIdeal) -> Problems:
    delta = balanced_squeezed_complex(U)
    probs = []
    if not delta.is_pure() or delta.dim != U.signature.d - 1:
        probs.append(f"not pure of dimension d-1: dim={delta.dim}")
    if len(delta.facets) != len(U):
        probs.append(f"{len(delta.facets)} facets for {len(U)} monomials")
    if not delta.is_balanced():
        probs.append("not balanced")
    return probs


def check_hvector(U: OrderIdeal) -> Problems:
    delta = balanced_squeezed_complex(U)
    h = flag_h_vector(delta)
    probs = []
    for S, v in h.values.items():
        want = sum(1 for u in U if u.color_support() == S)
        if v != want:
            probs.append(f"h_{sorted(S)}={v}, expected {want}")
    coarse = h_vector(delta)
    want = [sum(1 for u in U if u.degree == i) for i in range(U.signature.d + 1)]
    if coarse != want:
        probs.append(f"h={coarse}, expected {want}")
    return probs


def check_decomposition(U: OrderIdeal) -> Problems:
    delta = balanced_squeezed_complex(U)
    tree = squeezed_decomposition(U)
    probs = []
    if not verify_decomposition(delta, tree):
        probs.append("constructive decomposition does not verify")
    if isinstance(tree, Shed):
        bit = delta.mask([tree.vertex])
        lk, dl = link(delta, bit), deletion(delta, bit)
        f, fl, fd = flag_f_vector(delta), flag_f_vector(lk), flag_f_vector(dl)
        h, hl, hd = flag_h_vector(delta), flag_h_vector(lk), flag_h_vector(dl)
        for S in f.values:
            rest = S - {tree.vertex.color}
            if f[S] != fd[S] + (fl[rest] if tree.vertex.color in S else 0):
                probs.append(f"flag f recursion fails at {sorted(S)}")
            if h[S] != hd[S] + (hl[rest] if tree.vertex.color in S else 0):
                probs.append(f"flag h recursion fails at {sorted(S)}")
    return probs


def check_shelling(U: OrderIdeal) -> Problems:
    delta = balanced_squeezed_complex(U)
    steps = shelling_order(U)
    ok, restrictions = verify_shelling(delta, [s.facet for s in steps])
    probs = []
    if not ok:
        return ["shelling order does not verify"]
    if restrictions != [s.restriction for s in steps]:
        probs.append("inferred restriction faces differ from the colored indices of u")
    counts: dict = {}
    for r in restrictions:
        S = delta.colors(r)
        counts[S] = counts.get(S, 0) + 1
    h = flag_h_vector(delta)
    if any(h[S] != counts.get(S, 0) for S in h.values):
        probs.append("restriction faces do not reproduce the flag h-vector")
    return probs


def check_color_shifted(U: OrderIdeal) -> Problems:
    delta = balanced_squeezed_complex(U)
    if is_shifted(U) != is_color_shifted(delta):
        return [f"U shifted={is_shifted(U)} but complex color-shifted={is_color_shifted(delta)}"]
    return []


def check_comparison(U: OrderIdeal) -> Problems:
    """The four equivalent conditions for shiftedness."""
    sig = U.signature
    if sig.d < 2 or min(sig.m) < 1:
        return []
    delta = balanced_squeezed_complex(U)
    restricted = stanley_reisner_ideal(delta).restrict(sig)
    values = {
        "U shifted": is_shifted(U),
        "I(U) strongly color-stable": is_strongly_color_stable(complement_ideal(U)),
        "complex color-shifted": is_color_shifted(delta),
        "SR ideal in P(d,m) strongly color-stable": is_strongly_color_stable(restricted, squarefree=True),
    }
    if len(set(values.values())) > 1:
        return [f"conditions disagree: {values}"]
    return []


def check_across_colors(U: OrderIdeal) -> Problems:
    sig = U.signature
    delta = balanced_squeezed_complex(U)
    vhat = padding_free_vertices(sig)
    induced = induced_subcomplex(delta, vhat)
    values = {
        "U shifted across colors": is_shifted_across_colors(U),
        "I(U) stable across colors": is_strongly_color_stable_across_colors(complement_ideal(U)),
        "induced complex color-shifted across colors": is_color_shifted_across_colors(induced, vhat),
    }
    if len(set(values.values())) > 1:
        return [f"conditions disagree: {values}"]
    return []


def check_sr(U: OrderIdeal, *, mutant: bool = False) -> Problems:
    sig = U.signature
    if sig.d < 2 or min(sig.m) < 1:
        return []
    oracle = stanley_reisner_ideal(balanced_squeezed_complex(U))
    formula = sr_ideal_formula(U)
    if mutant:
        drop = formula.sorted_generators()[-1]
        formula = MonomialIdeal(formula.ring, formula.generators - {drop})
    probs = []
    if formula != oracle:
        missing = sorted(map(str, oracle.generators - formula.generators))
        extra = sorted(map(str, formula.generators - oracle.generators))
        probs.append(f"formula differs from minimal non-faces: missing {missing}, extra {extra}")
    if phi_map(complement_ideal(U)) != oracle:
        probs.append("Phi(I(U)) differs from the Stanley-Reisner ideal")
    return probs


def check_hilbert(U: OrderIdeal) -> Problems:
    sig = U.signature
    if sig.d < 2 or min(sig.m) < 1:
        return []
    want = [sum(1 for u in U if u.degree == i) for i in range(sig.d + 1)]
    while len(want) > 1 and want[-1] == 0:
        want.pop()
    probs = []
    targets = [("SR ideal", sr_ideal_formula(U))]
    if is_shifted(U):
        targets.append(("gin", gin_formula(U)))
    for name, I in targets:
        hs = B.hilbert_series(I)
        poly, dim = hs.reduced()
        if poly != want or dim != sig.d:
            probs.append(f"{name}: h-polynomial {poly} / (1-t)^{dim}, expected {want} / (1-t)^{sig.d}")
        if hs.coefficients(4) != B.count_quotient_monomials(I, 4):
            probs.append(f"{name}: series disagrees with direct counting")
    return probs


def check_gin_betti(U: OrderIdeal, field_config: B.FieldConfig = B.RATIONALS) -> Problems:
    sig = U.signature
    if not is_shifted(U) or sig.d < 2 or min(sig.m) < 1:
        return []
    sr = B.koszul_betti(sr_ideal_formula(U), field_config)
    gin = B.koszul_betti(gin_formula(U), field_config)
    shifted = B.koszul_betti(stanley_reisner_ideal(color_shifted_complex(U)), field_config)
    probs = []
    diff = B.compare(sr, gin, "zd")
    if diff:
        probs.append(f"SR vs gin at Z^d: {diff[0]}")
    diff = B.compare(sr, shifted, "z")
    if diff:
        probs.append(f"SR vs color-shifted at Z: {diff[0]}")
    if sr.k_polynomial() != B.k_polynomial(sr_ideal_formula(U)):
        probs.append("Betti table does not reproduce the K-polynomial")
    return probs


def check_oracles(U: OrderIdeal) -> Problems:
    """Hochster = upper Koszul on the squarefree ideals attached to U."""
    sig = U.signature
    ideals = []
    if sig.d >= 2 and min(sig.m) >= 1:
        ideals.append(("SR ideal", sr_ideal_formula(U)))
        if is_shifted(U):
            ideals.append(("color-shifted SR ideal", stanley_reisner_ideal(color_shifted_complex(U))))
    ideals.append(("cs part of I(U)", cs_part(complement_ideal(U))))
    probs = []
    for name, I in ideals:
        if B.hochster_betti(I) != B.koszul_betti(I):
            probs.append(f"{name}: Hochster and Koszul tables differ")
    return probs


def check_field(U: OrderIdeal) -> Problems:
    sig = U.signature
    if sig.d < 2 or min(sig.m) < 1:
        return []
    I = sr_ideal_formula(U)
    if B.koszul_betti(I) != B.koszul_betti(I, B.FieldConfig(32003)):
        return ["rational and GF(32003) tables differ"]
    return []


# -- batteries on ideals ------------------------------------------------------------


def check_stable_formula(I: MonomialIdeal) -> Problems:
    probs = []
    if B.stable_betti_formula(I) != B.koszul_betti(I):
        probs.append("formula differs from the Koszul oracle")
    try:
        steps = linear_quotients_order(I)
    except Exception as exc:  # the order asserts the colon identity itself
        return probs + [f"linear quotients: {exc}"]
    current = set(I.generators)
    for step in steps:
        current.discard(step.generator)
        J = MonomialIdeal(I.ring, current)
        if colon_ideal(J, step.generator) != variable_ideal(I.ring, step.quotient):
            probs.append(f"J : {step.generator} is not (sm)")
    return probs


def check_cone_polarized(J: MonomialIdeal) -> Problems:
    target = B.polarized_target(J)
    if B.mapping_cone_betti_polarized(J) != B.koszul_betti(target):
        return ["polarized mapping-cone table differs from the Koszul oracle"]
    return []


def check_cone_squares(J: MonomialIdeal) -> Problems:
    target = B.squares_target(J)
    squares = B.mapping_cone_betti_squares(J)
    probs = []
    if squares != B.koszul_betti(target):
        probs.append("squares mapping-cone table differs from the Koszul oracle")
    polarized = B.koszul_betti(B.polarized_target(J))
    if B.compare(B.koszul_betti(target), polarized, "zd"):
        probs.append("squares and polarized squares differ at Z^d")
    return probs


def check_iso_hilbert(J: MonomialIdeal) -> Problems:
    """For each color, sum_j HS(R_i / (m_i^[2] : x[i,j]))(-deg x[i,j] x[i,m_i+1])
    equals HS((x[i,m_i+1] m_i + m_i^[2]) / m_i^[2]), in one color's ring."""
    sig = J.ring
    probs = []
    for i in range(1, sig.d + 1):
        mi = sig.m[i - 1]
        ring = RingSignature(1, (mi + 1,))
        sq = MonomialIdeal(ring, {Monomial.var(1, a) * Monomial.var(1, b) for a in range(1, mi + 1) for b in range(a + 1, mi + 1)})
        lhs: dict = {}
        for j in range(1, mi + 1):
            colon = colon_ideal(sq, Monomial.var(1, j))
            shift = ring.fine_degree(Monomial.var(1, j) * Monomial.var(1, mi + 1))
            for a, c in B.k_polynomial(colon).items():
                key = B._add(a, shift)
                lhs[key] = lhs.get(key, 0) + c
        big = sq + MonomialIdeal(ring, {Monomial.var(1, j) * Monomial.var(1, mi + 1) for j in range(1, mi + 1)})
        # HS(big / sq) = HS(P / sq) - HS(P / big)
        rhs = dict(B.k_polynomial(sq))
        for a, c in B.k_polynomial(big).items():
            rhs[a] = rhs.get(a, 0) - c
        if {a: c for a, c in lhs.items() if c} != {a: c for a, c in rhs.items() if c}:
            probs.append(f"color {i}: Hilbert series of the two sides differ")
    return probs


# -- driver ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Battery:
    name: str
    description: str
    check: Callable
    domain: str  # "order" or "stable" or "cone"


BATTERIES: dict[str, Battery] = {
    b.name: b
    for b in [
        Battery("bounds", "complement ideal and its degree bounds", check_degree_bounds, "order"),
        Battery("structure", "purity, facet count, balancedness", check_structure, "order"),
        Battery("hvector", "flag h-vector counts monomials by color support", check_hvector, "order"),
        Battery("decomposition", "constructive vertex decomposition verifies", check_decomposition, "order"),
        Battery("shelling", "shelling order and restriction faces", check_shelling, "order"),
        Battery("color-shifted", "U shifted iff complex color-shifted", check_color_shifted, "order"),
        Battery("comparison", "four equivalent shiftedness conditions", check_comparison, "order"),
        Battery("across-colors", "across-colors equivalences", check_across_colors, "order"),
        Battery("sr", "Stanley-Reisner ideal formula", check_sr, "order"),
        Battery("hilbert", "Hilbert series of SR ideal and gin", check_hilbert, "order"),
        Battery("gin-betti", "Betti equalities for SR ideal, gin and color-shifted complex", check_gin_betti, "order"),
        Battery("oracles", "Hochster and Koszul oracles agree", check_oracles, "order"),
        Battery("field", "rational and GF(32003) tables agree", check_field, "order"),
        Battery("stable-formula", "Betti numbers of stable ideals from generators", check_stable_formula, "stable"),
        Battery("cone-polarized", "mapping cones with polarized squares", check_cone_polarized, "cone"),
        Battery("cone-squares", "mapping cones with squares", check_cone_squares, "cone"),
        Battery("iso-hilbert", "Hilbert series identity behind the mapping cones", check_iso_hilbert, "cone"),
    ]
}


@dataclass
class BatteryResult:
    name: str
    checked: int = 0
    failures: int = 0
    counterexample: str | None = None
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        return {
            "property": self.name,
            "checked": self.checked,
            "failures": self.failures,
            "passed": self.passed,
            "counterexample": self.counterexample,
        }


@dataclass
class VerifyOptions:
    properties: list[str] | None = None
    max_items: int = 200
    per_signature: int = 24
    seed: int = 0
    mutant: str | None = None
    signatures: list[RingSignature] | None = None
    threads: int | None = None
    extra: dict = field(default_factory=dict)


def _describe(item) -> str:
    if isinstance(item, OrderIdeal):
        return f"U in {item.signature}: {item}"
    return f"I in {item.ring}: {item}"


def _run_one(args) -> Problems:
    name, item, mutant = args
    battery = BATTERIES[name]
    if name == "sr" and mutant == "drop-sr-generator":
        return check_sr(item, mutant=True)
    return battery.check(item)


def thread_count(requested: int | None = None) -> int:
    if requested is not None:
        return max(1, requested)
    try:
        return max(1, int(os.environ.get("BALSQ_THREADS", "1")))
    except ValueError:
        return 1


def run_batteries(options: VerifyOptions | None = None) -> list[BatteryResult]:
    options = options or VerifyOptions()
    names = options.properties or list(BATTERIES)
    unknown = [n for n in names if n not in BATTERIES]
    if unknown:
        raise KeyError(f"unknown properties: {', '.join(unknown)}")
    domains = {BATTERIES[n].domain for n in names}
    orders = order_ideal_corpus(
        options.signatures, max_items=options.max_items, per_signature=options.per_signature, seed=options.seed
    )
    corpora = {"order": orders}
    if "stable" in domains:
        corpora["stable"] = stable_ideal_corpus()
    if "cone" in domains:
        corpora["cone"] = cone_corpus(orders, max_items=options.max_items)
    workers = thread_count(options.threads)
    results = []
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        for name in names:
            items = corpora[BATTERIES[name].domain]
            result = BatteryResult(name)
            start = time.perf_counter()
            jobs = [(name, item, options.mutant) for item in items]
            outcomes = pool.map(_run_one, jobs, chunksize=4) if pool else map(_run_one, jobs)
            for item, probs in zip(items, outcomes):
                result.checked += 1
                if probs:
                    result.failures += 1
                    if result.counterexample is None:
                        result.counterexample = f"{_describe(item)}; {probs[0]}"
            result.seconds = time.perf_counter() - start
            results.append(result)
    finally:
        if pool:
            pool.shutdown()
    return results
