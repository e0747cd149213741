import itertools

import pytest

from balsq.orderideal import smallest_shifted_closure
from balsq.ring import Monomial, RingSignature


def mono(text: str) -> Monomial:
    return Monomial.parse(text)


def monos(*texts: str) -> list[Monomial]:
    return [Monomial.parse(t) for t in texts]


def all_monomials(sig: RingSignature, upto: int) -> list[Monomial]:
    return [u for k in range(upto + 1) for u in sig.monomials_of_degree(k)]


@pytest.fixture(scope="session")
def sig222():
    return RingSignature(3, (2, 2, 2))


@pytest.fixture(scope="session")
def running(sig222):
    return smallest_shifted_closure(sig222, [mono("x[1,2]*x[2,2]*x[3,2]")])


SMALL_SIGNATURES = [
    RingSignature(d, m) for d in (1, 2, 3) for m in itertools.product((1, 2), repeat=d)
]
