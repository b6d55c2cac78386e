import pytest
from hypothesis import settings

from bianchitower.presets import figure8, picard
from bianchitower.quadfield import FieldSpec, QuadInt, prime_ideal_of

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def gauss():
    return FieldSpec(1)


@pytest.fixture(scope="session")
def eisenstein():
    return FieldSpec(3)


@pytest.fixture(scope="session")
def picard_ctx():
    return picard()


@pytest.fixture(scope="session")
def figure8_ctx():
    return figure8()


@pytest.fixture(scope="session")
def p_2_plus_i(gauss):
    """The prime (2 + i) of Z[i]; i maps to 3 in F_5."""
    return prime_ideal_of(QuadInt(2, 1, gauss))


def pytest_terminal_summary(terminalreporter):
    import sys

    results = {}
    for name, mod in list(sys.modules.items()):
        if name.endswith("test_acceptance"):
            results.update(getattr(mod, "RESULTS", {}))
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
