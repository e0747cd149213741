import pytest

from balsq.orderideal import is_shifted
from balsq.ring import RingSignature
from balsq.verify import (
    BATTERIES,
    VerifyOptions,
    check_sr,
    cone_corpus,
    order_ideal_corpus,
    run_batteries,
    running_example,
    stable_ideal_corpus,
)


def test_corpus_shape():
    corpus = order_ideal_corpus()
    assert len(corpus) == 200
    assert corpus[0] == running_example()
    assert all(U.signature.d <= 3 and max(U.signature.m) <= 2 for U in corpus)
    assert sum(is_shifted(U) for U in corpus) >= 100
    assert len({(U.signature, U.monomials) for U in corpus}) == 200


def test_corpus_is_seeded():
    a = order_ideal_corpus(max_items=60, seed=4)
    assert a == order_ideal_corpus(max_items=60, seed=4)
    assert a != order_ideal_corpus(max_items=60, seed=5)


def test_stable_corpus():
    corpus = stable_ideal_corpus()
    rings = {I.ring for I in corpus}
    assert rings == {RingSignature(2, (2, 2)), RingSignature(3, (1, 1, 1))}
    assert all(I.is_color_squarefree() for I in corpus)
    cones = cone_corpus(order_ideal_corpus(max_items=30), max_items=40)
    assert len(cones) == 40 and all(J.is_color_squarefree() for J in cones)


def test_mutant_is_caught():
    assert check_sr(running_example()) == []
    assert check_sr(running_example(), mutant=True)
    result, = run_batteries(VerifyOptions(properties=["sr"], max_items=5, mutant="drop-sr-generator"))
    assert not result.passed and "missing" in result.counterexample


def test_unknown_battery():
    with pytest.raises(KeyError):
        run_batteries(VerifyOptions(properties=["bogus"]))


@pytest.mark.parametrize("name", sorted(BATTERIES))
def test_each_battery_on_a_slice(name):
    result, = run_batteries(VerifyOptions(properties=[name], max_items=25))
    assert result.checked > 0
    assert result.passed, result.counterexample


def test_parallel_matches_serial():
    opts = dict(properties=["structure", "sr", "oracles"], max_items=20)
    serial = [r.to_json() for r in run_batteries(VerifyOptions(**opts, threads=1))]
    parallel = [r.to_json() for r in run_batteries(VerifyOptions(**opts, threads=2))]
    assert serial == parallel
