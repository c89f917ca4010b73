import pytest

from metalift.group import new_group


@pytest.fixture(scope="session")
def g25():
    """q = 25, m = 4, alpha = 7."""
    return new_group(5, 2, 4, 7)


@pytest.fixture(scope="session")
def g9():
    """q = 9, m = 2, alpha = 8 = -1."""
    return new_group(3, 2, 2, 8)


# ring arithmetic is heavy per example; wall-clock deadlines only add flakiness
from hypothesis import settings  # noqa: E402

settings.register_profile("metalift", deadline=None, print_blob=True)
settings.load_profile("metalift")


_ACCEPTANCE: dict = {}


@pytest.fixture(scope="session")
def acceptance():
    """Record one verdict line per acceptance criterion: acceptance(n, ok, detail)."""

    def record(n: int, ok: bool, detail: str) -> None:
        _ACCEPTANCE[n] = (bool(ok), detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
