import pytest

from centralq.cli import load_fixture


@pytest.fixture(scope="session")
def fixture_groups():
    """Reference table group rows keyed by descriptor."""
    groups, _ = load_fixture()
    return {r.descriptor: r for r in groups}


@pytest.fixture(scope="session")
def fixture_orders():
    """Reference table order totals keyed by order."""
    _, orders = load_fixture()
    return {r.order: r for r in orders}
