import pytest

from pibounds import claims


@pytest.fixture(scope="session")
def full_report():
    """One full claim-suite run shared by claims/acceptance tests."""
    return claims.run_all()


@pytest.fixture(scope="session")
def registry():
    from pibounds.bounds import builtin_bounds

    return builtin_bounds()
