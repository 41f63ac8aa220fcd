import pytest

from supplykg.fulfillment import Simulation
from supplykg.generator import automotive, dairy, generate


@pytest.fixture
def automotive_graph():
    """A fresh automotive-preset graph; safe to mutate."""
    return generate(automotive())


@pytest.fixture
def dairy_graph():
    return generate(dairy())


@pytest.fixture(scope="session")
def simulated_automotive():
    """One automotive run shared across read-only tests: (graph, step reports)."""
    config = automotive()
    graph = generate(config)
    reports = Simulation(graph).run(config.horizon)
    return graph, reports
