"""
Pytest configuration and fixtures for effcurves tests.
"""

import os
import tempfile
from fractions import Fraction

import pytest

from effcurves.bounds import make_ledger
from effcurves.config import reset_settings
from effcurves.projection import load_fixture
from effcurves.store import initialize_database


@pytest.fixture(autouse=True)
def fresh_settings():
    """Drop cached settings so environment overrides never leak between tests."""
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def temp_db():
    """Create a temporary database for testing."""
    with tempfile.NamedTemporaryFile(suffix='.db', delete=False) as f:
        db_path = f.name

    try:
        db_manager = initialize_database(db_path)
        yield db_manager
    finally:
        db_manager.close()
        if os.path.exists(db_path):
            os.unlink(db_path)


@pytest.fixture(scope="session")
def ledger():
    """The primary ledger at eps0 = 1/10."""
    return make_ledger(Fraction(1, 10))


@pytest.fixture(scope="session")
def sec76_ledger(ledger):
    return ledger.with_variant("sec76")


@pytest.fixture(scope="session")
def fix_a():
    return load_fixture("fixA")


@pytest.fixture(scope="session")
def fix_b():
    return load_fixture("fixB")


@pytest.fixture(scope="session")
def fix_c():
    return load_fixture("fixC")
