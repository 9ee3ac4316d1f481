import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("pkg", max_examples=30, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("pkg")


def rand_frac(rng: random.Random, lo: int, hi: int, den: int = 100) -> Fraction:
    return Fraction(rng.randint(lo, hi), den)


@pytest.fixture
def rng():
    return random.Random(20240611)


_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k, title): acceptance criterion number k")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    k, title = mark.args
    _CRITERIA[k] = (title, "PASS" if rep.passed else "FAIL", item.user_properties)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        title, verdict, props = _CRITERIA[k]
        detail = "; ".join(f"{name}={value}" for name, value in props)
        terminalreporter.write_line(f"criterion {k} {verdict}: {title}" + (f" ({detail})" if detail else ""))
