from pathlib import Path

import pytest

from skewcat.kernel import Signature

DATA = Path(__file__).parent / "data"


def monoid_signature() -> Signature:
    """m : TT[x, x] -> x, e : LL[] -> x, u : LT[x] -> x."""
    return Signature.build(["x"], {"m": ("TT", ("x", "x"), "x"), "e": ("LL", (), "x"), "u": ("LT", ("x",), "x")})


@pytest.fixture
def sig():
    return monoid_signature()


@pytest.fixture
def data():
    return DATA


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'} ({detail})")
