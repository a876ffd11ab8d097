import pytest

from parry_ac.estimator import build_automaton
from parry_ac.numeration import Numeration
from parry_ac.substitution import FIBONACCI, TRIBONACCI, ParrySubstitution

NONSIMPLE = ParrySubstitution.nonsimple(1, 1, (2, 1))

SUBS = {"fibonacci": FIBONACCI, "tribonacci": TRIBONACCI, "nonsimple": NONSIMPLE}

_built = {}


def built(name):
    """(dfao, fixpoint, constants) for one of the three reference substitutions, built once."""
    if name not in _built:
        _built[name] = build_automaton(SUBS[name], reproducible=True)
    return _built[name]


@pytest.fixture(params=sorted(SUBS))
def sub_name(request):
    return request.param


@pytest.fixture
def sub(sub_name):
    return SUBS[sub_name]


@pytest.fixture
def num(sub):
    return Numeration(sub)


@pytest.fixture
def automaton(sub_name):
    return built(sub_name)


# acceptance criteria report ------------------------------------------------

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, title = marker
        entry = _criteria.setdefault(number, [title, True])
        entry[1] = entry[1] and report.outcome == "passed"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        report.criterion = tuple(mark.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok = _criteria[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title}")
