import numpy as np
import pytest

from qwalk.graph_core import FAMILIES, generate

ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


def regular_instances(max_size: int = 200):
    """(name, graph) for every connected regular family member with degree >= 2 and n + m <= max_size."""
    out = []
    bounds = {"hypercube": 2, "cocktail": 2, "halved_hypercube": 2, "cycle": 3, "complete": 3}
    for family, lower in bounds.items():
        p = lower
        while True:
            g = generate(family, p)
            if g.n + g.m > max_size:
                break
            out.append((f"{family}:{p}", g))
            p += 1
    out.append(("petersen", generate("petersen")))
    return out


REGULAR_INSTANCES = regular_instances()
ACCEPTANCE_FAMILY = ["cycle:4", "cycle:5", "complete:4", "petersen", "hypercube:3", "cocktail:3", "halved_hypercube:2"]


def by_name(spec: str):
    family, _, param = spec.partition(":")
    return generate(family, int(param) if param else None)


@pytest.fixture
def rng():
    return np.random.default_rng(20240614)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE_RESULTS, key=lambda s: int(s.split()[0])):
        ok, detail = ACCEPTANCE_RESULTS[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {name}: {detail}")
