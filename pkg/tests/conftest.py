import math

import pytest

from lorentzseq import _kernels

INF = math.inf


def lorentz_oracle(a, p, q):
    """Direct definition with math.fsum; no shared code with the package."""
    v = sorted((abs(float(x)) for x in a), reverse=True)
    top = v[0]
    if top == 0.0:
        return 0.0
    v = [x / top for x in v]
    if q == INF:
        return top * max((n ** (0.0 if p == INF else 1.0 / p)) * x for n, x in enumerate(v, 1))
    e = q * (0.0 if p == INF else 1.0 / p) - 1.0
    return top * math.fsum(x**q * n**e for n, x in enumerate(v, 1)) ** (1.0 / q)


@pytest.fixture(scope="session", autouse=True)
def _jit_warm():
    _kernels.warmup()


@pytest.fixture(params=["numba", "numpy"])
def backend(request):
    if request.param == "numba" and not _kernels.HAS_NUMBA:
        pytest.skip("numba not importable")
    previous = _kernels.active_backend()
    _kernels.set_backend(request.param)
    yield request.param
    _kernels.set_backend(previous)


# one line per acceptance criterion at the end of the run
_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    for marker in report.keywords:
        if marker.startswith("criterion_"):
            n = int(marker.split("_")[1])
            ok = report.passed
            _ACCEPTANCE[n] = _ACCEPTANCE.get(n, True) and ok


def pytest_configure(config):
    for n in range(1, 11):
        config.addinivalue_line("markers", f"criterion_{n}: acceptance criterion {n}")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        status = "PASS" if _ACCEPTANCE[n] else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d}: {status}")
