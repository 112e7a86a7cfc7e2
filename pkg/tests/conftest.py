import os

import pytest
from hypothesis import HealthCheck, settings

from siltsearch import AnalyzerConfig, Document, build_index, fixture_path

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# filled by tests/test_acceptance.py, printed at the end of the session
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(line[1])


REFERENCE_SENTENCE = "ለላላላ ዩንጂ ለባምቸን «ፋግ»፣ «ኦሪሽ»፣ «ቡድ»፣»"
REFERENCE_TOKENS = ["ለላላላ", "ዩንጂ", "ለባምቸን", "ፋግ", "ኦሪሽ", "ቡድ"]


@pytest.fixture
def plain_config():
    """Analyzer that only tokenizes."""
    return AnalyzerConfig(fold_homophones=False, enable_stemming=False, enable_synonyms=False)


@pytest.fixture
def fixture_dir():
    return fixture_path()


@pytest.fixture
def small_corpus():
    return [
        Document("a", "ፋግ ፋግ ቡድ"),
        Document("b", "ፋግ ኦሪሽ ለላላላ"),
        Document("c", "ቡድ ኦሪሽ ኦሪሽ ዩንጂ ለባም"),
    ]


@pytest.fixture
def small_index(tmp_path, small_corpus, plain_config):
    return build_index(small_corpus, tmp_path / "idx", plain_config)
