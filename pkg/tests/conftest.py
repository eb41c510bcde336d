import pytest

import salpeterbounds as sb


@pytest.fixture(scope="session")
def kg_exponential():
    """Klein-Gordon solutions for the exponential potential test matrix."""
    return {
        (v, m): sb.solve(sb.exponential(v), m)
        for v in (2.5, 4.5)
        for m in (0.8, 1.0)
    }


@pytest.fixture(scope="session")
def srs_exponential():
    """Direct semirelativistic energies on the same (v, m) matrix."""
    return {
        (v, m): sb.ground_energy(sb.exponential(v), m)
        for v in (2.5, 4.5)
        for m in (0.8, 1.0)
    }


@pytest.fixture(scope="session")
def srs_exponential_45(srs_exponential):
    return srs_exponential[(4.5, 1.0)]


@pytest.fixture(scope="session")
def srs_woods_saxon_2():
    return sb.ground_energy(sb.woods_saxon(2.0), 1.0)


@pytest.fixture(scope="session")
def kg_woods_saxon_2():
    return sb.solve(sb.woods_saxon(2.0), 1.0)
