import sys
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS = FIXTURES / "corpus"

ACCEPTANCE_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(num, title): acceptance criterion test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker and report.when == "call":
        num, title = marker.args
        if report.skipped:
            status = "SKIP (environment-gated)"
        else:
            status = "PASS" if report.passed else "FAIL"
        ACCEPTANCE_RESULTS[num] = (title, status)
    elif marker and report.when == "setup" and report.skipped:
        num, title = marker.args
        ACCEPTANCE_RESULTS[num] = (title, "SKIP (environment-gated)")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        title, status = ACCEPTANCE_RESULTS[num]
        terminalreporter.write_line(f"criterion {num} ({title}): {status}")


@pytest.fixture
def corpus_dir():
    return CORPUS


@pytest.fixture
def reports_dir():
    return FIXTURES / "reports"


@pytest.fixture
def catalogs_dir():
    return FIXTURES / "catalogs"


def corpus_pairs():
    """(name, seed_source, test_source) for every committed corpus seed."""
    pairs = []
    for seed_path in sorted(CORPUS.glob("*.java")):
        if seed_path.name.endswith("Test.java"):
            continue
        test_path = CORPUS / f"{seed_path.stem}Test.java"
        pairs.append((seed_path.stem,
                      seed_path.read_text().rstrip("\n"),
                      test_path.read_text().rstrip("\n")))
    return pairs


@pytest.fixture(scope="session")
def all_corpus_pairs():
    return corpus_pairs()


def make_gateway(responses, tmp_path, name="transcript.jsonl", temperatures=None):
    from ruleprobe.gateway import Gateway, ScriptedBackend

    return Gateway(ScriptedBackend(responses), transcript_path=Path(tmp_path) / name,
                   temperatures=temperatures)
