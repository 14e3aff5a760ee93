import sys

import numpy as np
import pytest

from corpus import FOCAL, corpus_text
from hetmap.attributes import build_catalog, load_stopwords, static_thresholds
from hetmap.occurrence import build_matrix
from hetmap.wos_parser import parse_records


@pytest.fixture(scope="session")
def stopwords():
    return load_stopwords()


@pytest.fixture(scope="session")
def corpus_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("corpus") / "callon.txt"
    path.write_text(corpus_text(), encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def corpus_rs():
    return parse_records(corpus_text())


@pytest.fixture(scope="session")
def corpus_catalog(corpus_rs, stopwords):
    return build_catalog(corpus_rs, static_thresholds(), FOCAL, stopwords)


@pytest.fixture(scope="session")
def corpus_matrix(corpus_rs, corpus_catalog):
    return build_matrix(corpus_rs, corpus_catalog)


@pytest.fixture
def rng():
    return np.random.default_rng(20090609)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[1][2:])):
        terminalreporter.write_line(line)
