import os
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=int(os.environ.get("HYPOTHESIS_MAX_EXAMPLES", "60")),
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def family3():
    from heistorsor.jacobian.curve import FamilyParams

    return FamilyParams(3, Fraction(2))


@pytest.fixture(scope="session")
def torsion3(family3):
    from heistorsor.jacobian.curve import family_curve
    from heistorsor.jacobian.torsion import torsion_search

    return torsion_search(family_curve(family3), 3)


@pytest.fixture(scope="session")
def cert3(family3):
    from heistorsor.certifier import certify, family_spec

    return certify(family_spec(family3))


@pytest.fixture(scope="session")
def bundle3(cert3):
    from heistorsor.certifier import heis_data

    return heis_data(cert3)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line per acceptance criterion; printed in the terminal summary."""
    import time

    state = {"label": request.node.name, "t0": time.perf_counter()}

    def label(text):
        state["label"] = text

    yield label
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {state['label']}  ({time.perf_counter() - state['t0']:.1f}s)")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
