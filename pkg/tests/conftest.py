import sys

import pytest

from eqrr import _kernels
from eqrr.oracle import build_cover


@pytest.fixture(params=["numpy", "numba"])
def backend(request):
    """Run a test on each kernel backend, restoring the default afterwards."""
    if request.param == "numba" and not _kernels._HAVE_NUMBA:
        pytest.skip("numba unavailable")
    old = _kernels.backend()
    _kernels.set_backend(request.param)
    yield request.param
    _kernels.set_backend(old)


@pytest.fixture(scope="session")
def c2f5():
    """x -> -x on P^1 over F_5: ramified at 0 and infinity."""
    return build_cover(5, [(4, 0)])


@pytest.fixture(scope="session")
def asf2():
    """x -> x + 1 over F_2: one wild point at infinity."""
    return build_cover(2, [(1, 1)])




def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 9):
        if n in results:
            ok, detail = results[n]
            terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  ({detail})")
        else:
            terminalreporter.write_line(f"criterion {n}: NOT RUN")
