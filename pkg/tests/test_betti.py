import itertools

import pytest

from balsq.betti import (
    BettiTable,
    FieldConfig,
    HilbertSeries,
    RATIONALS,
    coarsen,
    compare,
    count_quotient_monomials,
    hilbert_series,
    hochster_betti,
    homology_of_facets,
    k_polynomial,
    koszul_betti,
    mapping_cone_betti_polarized,
    mapping_cone_betti_squares,
    matrix_rank,
    polarized_target,
    reduced_homology_dims,
    squares_target,
    stable_betti_formula,
)
from balsq.complex import ColoredVertex as V, SimplicialComplex, balanced_squeezed_complex
from balsq.errors import BalsqError, PreconditionError, ResourceLimitError
from balsq.ideals import (
    MonomialIdeal,
    color_polarize,
    color_shifted_complex,
    color_square_ideal,
    colon_ideal,
    gin_formula,
    sr_ideal_formula,
    stanley_reisner_ideal,
)
from balsq.orderideal import complement_ideal, enumerate_order_ideals, mon_cs
from balsq.ring import Monomial, RingSignature
from balsq.verify import cs_part, stable_ideal_corpus

from conftest import all_monomials, monos

TOTALS = [1, 18, 56, 79, 60, 24, 4]
STRANDS = {0: [1, 0, 0, 0, 0, 0, 0], 1: [0, 18, 53, 69, 48, 18, 3], 2: [0, 0, 3, 9, 9, 3, 0], 3: [0, 0, 0, 1, 3, 3, 1]}


def ideal(sig, *texts):
    return MonomialIdeal(sig, frozenset(monos(*texts)))


def lower_koszul_betti(I):
    """beta[k, a](P/I) = dim H~_{k-2} of {sigma squarefree : x^(a - sigma) in I},
    built face by face from the definition (no union-of-simplices shortcut)."""
    ring = I.ring
    n = ring.nvars
    gens = [ring.fine_degree(g) for g in I.generators]
    top = tuple(max(g[k] for g in gens) for k in range(n))
    entries = {(0, (0,) * n): 1}
    for a in itertools.product(*(range(e + 1) for e in top)):
        support = [k for k in range(n) if a[k]]
        faces = []
        for r in range(len(support) + 1):
            for sigma in itertools.combinations(support, r):
                rest = list(a)
                for k in sigma:
                    rest[k] -= 1
                if ring.monomial(rest) in I:
                    faces.append(sum(1 << k for k in sigma))
        for deg, dim in homology_of_facets(faces).items():
            entries[deg + 2, a] = dim
    return BettiTable(ring, entries)


def test_matrix_rank():
    assert matrix_rank([{0: 1, 1: 1}, {0: 1, 1: 1}]) == 1
    assert matrix_rank([{0: 2}, {1: 3}, {0: 4, 1: 6}]) == 2
    assert matrix_rank([]) == 0
    # rank drops modulo 2
    rows = [{0: 1, 1: 1}, {0: 1, 1: -1}]
    assert matrix_rank(rows) == 2
    assert matrix_rank(rows, FieldConfig(2)) == 1


def test_field_config():
    assert FieldConfig.parse("q") == RATIONALS
    assert FieldConfig.parse("gf:7").prime == 7
    for bad in ("gf:8", "gf:x", "r"):
        with pytest.raises(BalsqError):
            FieldConfig.parse(bad)


def test_homology_examples():
    ring = RingSignature(2, (2, 2))
    cycle = SimplicialComplex.from_faces(ring, [[V(1, a), V(2, b)] for a in (1, 2) for b in (1, 2)])
    assert reduced_homology_dims(cycle) == {-1: 0, 0: 0, 1: 1}
    points = SimplicialComplex.from_faces(ring, [[V(1, 1)], [V(1, 2)]])
    assert reduced_homology_dims(points) == {-1: 0, 0: 1}
    assert homology_of_facets([]) == {}
    assert homology_of_facets([0]) == {-1: 1}
    for d in (1, 2, 3, 4):
        cross = balanced_squeezed_complex(mon_cs(RingSignature(d, (1,) * d)))
        dims = reduced_homology_dims(cross)
        assert dims[d - 1] == 1 and sum(dims.values()) == 1


def test_projective_plane_torsion():
    # 6-vertex RP^2: H~_1 = Z/2, so over GF(2) both H~_1 and H~_2 appear
    tris = [(0, 1, 3), (1, 3, 4), (1, 2, 4), (2, 4, 0), (2, 0, 3), (3, 4, 5), (0, 4, 5), (0, 1, 5), (1, 2, 5), (2, 3, 5)]
    facets = [sum(1 << v for v in t) for t in tris]
    assert homology_of_facets(facets) == {}
    assert homology_of_facets(facets, FieldConfig(2)) == {1: 1, 2: 1}


def test_small_tables():
    sig = RingSignature(2, (2, 2))
    cycle = ideal(sig, "x[1,1]*x[1,2]", "x[2,1]*x[2,2]")
    for method in (koszul_betti, hochster_betti):
        t = method(cycle)
        assert t.totals() == [1, 2, 1]
        assert t[2, (1, 1, 1, 1)] == 1
    sq = koszul_betti(ideal(sig, "x[1,1]^2"))
    assert sq.totals() == [1, 1] and sq[1, (2, 0, 0, 0)] == 1
    J = ideal(sig, "x[1,1]*x[2,1]", "x[1,1]*x[2,2]", "x[1,2]*x[2,1]")
    assert koszul_betti(J).totals() == [1, 3, 2]
    assert koszul_betti(MonomialIdeal(sig, frozenset())).totals() == [1]
    assert koszul_betti(ideal(sig, "1")).totals() == []
    with pytest.raises(PreconditionError):
        hochster_betti(ideal(sig, "x[1,1]^2"))
    with pytest.raises(ResourceLimitError):
        koszul_betti(ideal(sig, "x[1,1]^3*x[2,2]^3"), max_degrees=4)


@pytest.mark.parametrize("sig", [RingSignature(2, (1, 1)), RingSignature(1, (3,)), RingSignature(2, (2, 1))])
def test_koszul_against_definition(sig):
    pool = [u for u in all_monomials(sig, 2) if u.degree > 0]
    for gens in itertools.islice(itertools.combinations(pool, 3), 150):
        I = MonomialIdeal(sig, frozenset(gens))
        assert koszul_betti(I) == lower_koszul_betti(I)


def test_running_table(running):
    delta = balanced_squeezed_complex(running)
    sr = stanley_reisner_ideal(delta)
    table = koszul_betti(sr)
    assert table.coarsen("z").totals() == TOTALS
    assert table.strands() == STRANDS
    assert hochster_betti(sr) == table
    gin = koszul_betti(gin_formula(running))
    assert gin.totals() == TOTALS
    assert compare(table, gin.embed(sr.ring) if gin.ring != sr.ring else gin, "zd") == []
    text = table.render()
    assert text.splitlines()[1].split() == ["total:"] + [str(v) for v in TOTALS]
    assert text.splitlines()[-1].split() == ["3:", ".", ".", ".", "1", "3", "3", "1"]
    ideal_text = table.render(ideal_convention=True)
    assert ideal_text.splitlines()[1].split() == ["total:"] + [str(v) for v in TOTALS[1:]]


def test_coarsen_and_compare():
    sig = RingSignature(2, (1, 1))
    t = BettiTable(sig, {(0, (0, 0)): 1, (1, (1, 0)): 1, (1, (0, 1)): 1, (2, (1, 1)): 1})
    assert coarsen(t, "zd").entries == {(0, (0, 0)): 1, (1, (1, 0)): 1, (1, (0, 1)): 1, (2, (1, 1)): 1}
    assert coarsen(t, "z").entries == {(0, (0,)): 1, (1, (1,)): 2, (2, (2,)): 1}
    with pytest.raises(PreconditionError):
        coarsen(coarsen(t, "z"), "fine")
    with pytest.raises(PreconditionError):
        BettiTable(sig, {(0, (0, 0)): -1})
    u = BettiTable(sig, {(0, (0, 0)): 1, (1, (1, 0)): 2})
    diffs = compare(t, u, "fine")
    assert [(d.k, d.degree) for d in diffs] == [(1, (0, 1)), (1, (1, 0)), (2, (1, 1))]
    assert len(compare(t, u, "z")) == 1
    with pytest.raises(PreconditionError):
        compare(t, BettiTable(RingSignature(2, (2, 1)), {}), "fine")
    js = t.to_json()
    assert js["totals"] == [1, 2, 1] and js["entries"][0] == [0, [0, 0], 1]
    assert t.to_json(ideal_convention=True)["totals"] == [2, 1]


def test_stable_formula_examples():
    sig = RingSignature(2, (1, 1))
    assert stable_betti_formula(ideal(sig, "x[1,1]*x[2,1]")).totals() == [1, 1]
    sig = RingSignature(2, (2, 2))
    J = ideal(sig, "x[1,1]*x[2,1]", "x[1,1]*x[2,2]", "x[1,2]*x[2,1]")
    t = stable_betti_formula(J)
    assert t.totals() == [1, 3, 2]
    second = {a for (k, a) in t.entries if k == 2}
    assert second == {sig.fine_degree(Monomial.parse("x[1,1]*x[2,1]*x[2,2]")), sig.fine_degree(Monomial.parse("x[1,1]*x[1,2]*x[2,1]"))}
    assert t == koszul_betti(J)
    with pytest.raises(PreconditionError):
        stable_betti_formula(ideal(sig, "x[1,2]"))


def test_stable_formula_corpus():
    for I in stable_ideal_corpus():
        assert stable_betti_formula(I) == koszul_betti(I)


def test_cones_small():
    sig = RingSignature(1, (1,))
    zero = MonomialIdeal(sig, frozenset())
    assert mapping_cone_betti_polarized(zero).totals() == [1, 1]
    assert polarized_target(zero).generators == {Monomial.parse("x[1,1]*x[1,2]")}
    sig = RingSignature(1, (2,))
    zero = MonomialIdeal(sig, frozenset())
    t = mapping_cone_betti_squares(zero)
    assert t.totals() == [1, 3, 2]
    assert t == koszul_betti(squares_target(zero))
    with pytest.raises(PreconditionError):
        mapping_cone_betti_squares(ideal(sig, "x[1,1]*x[1,2]"))


def test_cones_running(running):
    J = cs_part(complement_ideal(running))
    assert len(J) == 9
    target = polarized_target(J)
    assert target == sr_ideal_formula(running)
    pol = mapping_cone_betti_polarized(J)
    assert pol.coarsen("z").totals() == TOTALS
    assert pol == koszul_betti(target)
    sq = mapping_cone_betti_squares(J)
    assert squares_target(J) == complement_ideal(running)
    assert sq == koszul_betti(squares_target(J))
    assert compare(pol, sq, "zd") == []


@pytest.mark.parametrize("sig", [RingSignature(2, (2, 1)), RingSignature(3, (1, 1, 1)), RingSignature(2, (1, 2))])
def test_cones_corpus(sig):
    for U in enumerate_order_ideals(sig, max_count=20):
        J = cs_part(complement_ideal(U))
        pol = mapping_cone_betti_polarized(J)
        sq = mapping_cone_betti_squares(J)
        assert pol == koszul_betti(polarized_target(J))
        assert sq == koszul_betti(squares_target(J))
        assert compare(pol, sq, "zd") == []


@pytest.mark.parametrize("sig", [RingSignature(2, (2, 2)), RingSignature(3, (1, 2, 1))])
def test_betti_equalities(sig):
    for U in enumerate_order_ideals(sig, shifted=True, max_count=15):
        sr = koszul_betti(sr_ideal_formula(U))
        gin = koszul_betti(gin_formula(U))
        assert compare(sr, gin, "zd") == []
        shifted = koszul_betti(stanley_reisner_ideal(color_shifted_complex(U)))
        assert compare(sr, shifted, "z") == []


def test_hilbert_running(running):
    sr = sr_ideal_formula(running)
    hs = hilbert_series(sr)
    assert hs.reduced() == ([1, 6, 3, 1], 3)
    gin = hilbert_series(gin_formula(running))
    assert gin.polynomial() == hs.polynomial()
    assert hs.coefficients(4) == count_quotient_monomials(sr, 4)
    zero = MonomialIdeal(RingSignature(2, (1, 1)), frozenset())
    assert hilbert_series(zero).polynomial() == [1]


def test_k_polynomial_is_euler_characteristic(running):
    for I in [sr_ideal_formula(running), gin_formula(running), complement_ideal(running)]:
        assert koszul_betti(I).k_polynomial() == k_polynomial(I)


def test_fine_expansion():
    sig = RingSignature(2, (2, 1))
    I = ideal(sig, "x[1,1]*x[2,1]", "x[1,2]^2")
    coeffs = HilbertSeries(sig, k_polynomial(I), "fine").expand_fine(4)
    for u in all_monomials(sig, 4):
        assert coeffs.get(sig.fine_degree(u), 0) == (0 if u in I else 1)


@pytest.mark.parametrize("sig", [RingSignature(2, (2, 2)), RingSignature(3, (1, 2, 1))])
def test_polarization_keeps_zd_hilbert(sig):
    for U in enumerate_order_ideals(sig, shifted=True, max_count=20):
        gin = gin_formula(U)
        pol = color_polarize(gin)
        assert hilbert_series(gin, "zd").numerator == hilbert_series(pol, "zd").numerator


@pytest.mark.parametrize("m", [1, 2, 3])
def test_iso_hilbert_identity(m):
    base = RingSignature(1, (m,))
    ring = base.extended()
    sq = color_square_ideal(base, ring, squarefree=True)
    top = base.sentinel(1)
    # the sum of shifted quotients R/(m^[2] : x_j)(-deg x_j x_top)
    lhs: dict = {}
    for j in range(1, m + 1):
        x = Monomial.var(1, j)
        shift = ring.fine_degree(x * Monomial([(top, 1)]))
        for a, c in k_polynomial(colon_ideal(sq, x)).items():
            key = tuple(p + q for p, q in zip(a, shift))
            lhs[key] = lhs.get(key, 0) + c
    # (x_top m + m^[2]) / m^[2] has K-polynomial K(m^[2]) - K(x_top m + m^[2])
    bigger = sq + MonomialIdeal(ring, frozenset(Monomial.var(1, j) * Monomial([(top, 1)]) for j in range(1, m + 1)))
    rhs = dict(k_polynomial(sq))
    for a, c in k_polynomial(bigger).items():
        rhs[a] = rhs.get(a, 0) - c
    assert {a: c for a, c in lhs.items() if c} == {a: c for a, c in rhs.items() if c}


def test_gf_agrees(running):
    sr = sr_ideal_formula(running)
    assert koszul_betti(sr, FieldConfig(32003)) == koszul_betti(sr)
