import pytest

from altproj import sequence


@pytest.fixture(scope="session")
def report_300():
    return sequence.generate(300)


@pytest.fixture(scope="session")
def report_10k():
    return sequence.generate(10_000)


@pytest.fixture(scope="session")
def report_100k():
    return sequence.generate(100_000)
