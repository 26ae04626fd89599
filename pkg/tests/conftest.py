import sys

import pytest

from stegoscope.corpus import make_document
from stegoscope.psychology import SentimentLexicon


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One line per acceptance criterion, outside of output capture."""
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None) if module else None
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for label, verdict in results:
        terminalreporter.write_line(f"[{verdict}] {label}")


@pytest.fixture
def doc_factory():
    def make(text, doc_id="d1", user="U1", label="cover"):
        return make_document(doc_id, user, text, label)

    return make


@pytest.fixture
def tiny_sentiment_lexicon():
    # Matches the worked examples: good -> (0.7, 0.6), intensifier very -> 1.3.
    return SentimentLexicon(
        entries={"good": (0.7, 0.6)},
        intensifiers={"very": 1.3},
        negations=frozenset({"not"}),
        emoticons={":)": 2.0},
    )
