import random
from pathlib import Path

import pytest

from plaintext_bound.vocab import Vocabulary, load_wordlist_path

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


def tiny_instance(seed: int, alphabet: str = "abcde") -> tuple[Vocabulary, int]:
    """At most 8 words of length <= 4 and a block length <= 7."""
    rng = random.Random(seed)
    n = rng.randint(0, 8)
    words = {"".join(rng.choice(alphabet) for _ in range(rng.randint(1, 4))) for _ in range(n)}
    return Vocabulary.from_words(words), rng.randint(1, 7)


@pytest.fixture(scope="session")
def common_words() -> Vocabulary:
    return load_wordlist_path(DATA / "common_words.txt")


_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _acceptance[report.nodeid] = report.outcome
    elif "test_acceptance.py" in report.nodeid and report.failed:
        _acceptance[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in _acceptance.items():
        name = nodeid.split("::")[-1]
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
