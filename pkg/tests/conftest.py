"""Collects one verdict per acceptance criterion and prints them after the run."""

import pytest

CRITERIA: dict[int, str] = {
    1: "2 L(f32,1)^2 = L(g,2) by integral and functional equation; closed form of L(f32,1)",
    2: "3/2 L(f36,1)^2 = L(h3,2), two routes per side",
    3: "8/3 L(f36,1)^3 = L(h4,3) by integral and Eisenstein CM",
    4: "C_chi,k table reconstructed exactly for k = 2..11",
    5: "exact q-series identities",
    6: "character coefficients equal eta products for n <= 2000",
    7: "congruences a_j = a_2 mod m for n <= 1000",
    8: "CM algebra: j, u, eta, t and E2* values",
    9: "special functions: Gamma, Gauss, Clausen, Euler integral",
}

_verdicts: dict[int, list[bool]] = {}


def _criterion_of(item) -> int | None:
    m = item.get_closest_marker("criterion")
    return m.args[0] if m else None


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion the test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    n = _criterion_of(item)
    if n is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _verdicts.setdefault(n, []).append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for n, text in CRITERIA.items():
        results = _verdicts.get(n)
        if results is None:
            status = "NOT RUN"
        else:
            status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}  {text}  ({len(results or [])} tests)")
