import pytest

from traintrack_faces.corpus import load_manifest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def manifest():
    return {e.name: e for e in load_manifest()}


@pytest.fixture(scope="session")
def tracks(manifest):
    return {name: e.track() for name, e in manifest.items()}


@pytest.fixture(scope="session")
def maxg2(tracks):
    return tracks["max-g2"]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
