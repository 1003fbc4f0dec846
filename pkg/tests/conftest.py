import pytest

from quatsys.numfield import IdealHNF, factor_rational_prime, hurwitz_field, rationals
from quatsys.orders import hurwitz_algebra, hurwitz_order, standard_order


@pytest.fixture(scope="session")
def K():
    return hurwitz_field()


@pytest.fixture(scope="session")
def QQ():
    return rationals()


@pytest.fixture(scope="session")
def D(K):
    return hurwitz_algebra(K)


@pytest.fixture(scope="session")
def QH(D):
    return hurwitz_order(D)


@pytest.fixture(scope="session")
def O_std(D):
    return standard_order(D)


@pytest.fixture(scope="session")
def P7(K):
    return IdealHNF.principal(K, K.from_rational(2) - K.gen())


@pytest.fixture(scope="session")
def P2(K):
    return IdealHNF.principal(K, K.from_rational(2))


@pytest.fixture(scope="session")
def P13s(K):
    return [pr for pr, _e, _f in factor_rational_prime(K, 13)]
