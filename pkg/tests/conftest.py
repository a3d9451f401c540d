import pytest
from mpmath import mp

from muntzlab import dual_family, generate_exponents


@pytest.fixture(autouse=True, scope="session")
def _test_side_precision():
    # expected-value arithmetic in the tests themselves runs at 320 bits;
    # library calls manage their own working precision internally
    old = mp.prec
    mp.prec = 320
    yield
    mp.prec = old


@pytest.fixture(scope="session")
def lam_12():
    """The two-element integer sequence {1, 2} used by the hand examples."""
    return generate_exponents("integers", {"values": [1, 2]}, 2)


@pytest.fixture(scope="session")
def lam_squares():
    return generate_exponents("power", {"p": 2}, 12)


@pytest.fixture(scope="session")
def lam_lacunary():
    return generate_exponents("lacunary", {"q": 2}, 10)


@pytest.fixture(scope="session")
def fam_12(lam_12):
    return dual_family(lam_12, 2, 256)


@pytest.fixture(scope="session")
def fam_squares_10(lam_squares):
    return dual_family(lam_squares, 10, 256)


@pytest.fixture(scope="session")
def fam_squares_10_512(lam_squares):
    return dual_family(lam_squares, 10, 512)


@pytest.fixture(scope="session")
def fam_squares_12(lam_squares):
    return dual_family(lam_squares, 12, 256)
