from pathlib import Path

import pytest

from saitobasis.cli import CurveContext, parse_curve_text
from saitobasis.curve import lift_parametrization, validate_branch
from saitobasis.series import parse_biseries, parse_tseries

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def corpus_context(name, precision=None):
    cf = parse_curve_text((CORPUS / f"{name}.curve").read_text(), str(CORPUS / f"{name}.curve"))
    return CurveContext(cf, precision)


def branch_factory(f_text, x_text, y_seed):
    """``L -> Branch`` lifting the seed onto ``f`` and caching the result."""
    cache = {}

    def branch_at(L):
        L = max(L, 48)
        hit = cache.get("b")
        if hit is not None and hit.trunc >= L:
            return hit
        f = parse_biseries(f_text, L)
        xs = parse_tseries(x_text, L)
        ys = lift_parametrization(f, xs, parse_tseries(y_seed, L), L)
        cache["b"] = validate_branch(xs, ys)
        return cache["b"]

    return branch_at


def family_text(n, m, k):
    return f"y^{n} - x^{m} + x^{m - k}*y^{n - 2}"


@pytest.fixture
def corpus_dir():
    return CORPUS


# ---------------------------------------------------------------------------
# one PASS/FAIL line per acceptance criterion

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion a test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    entry = _CRITERIA.setdefault(number, {"title": title, "ok": True, "ran": False})
    if report.when == "call":
        entry["ran"] = True
    if report.failed or (report.skipped and report.when != "teardown"):
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        verdict = "PASS" if entry["ok"] and entry["ran"] else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict}  {entry['title']}")
