from __future__ import annotations

import pytest

from valfar.fixtures import fixture_path
from valfar.ingest import load_corpus
from valfar.model import Corpus
from valfar.themes import load_lexicon


@pytest.fixture
def toll() -> Corpus:
    return load_corpus([fixture_path("toll.valfar")])


@pytest.fixture
def toll_raw() -> Corpus:
    return load_corpus([fixture_path("toll_raw.valfar")])


@pytest.fixture
def course() -> Corpus:
    return load_corpus([fixture_path("course.valfar")])


@pytest.fixture
def course_lexicon():
    return load_lexicon(fixture_path("course.lexicon"))


@pytest.fixture
def toll_lexicon():
    return load_lexicon(fixture_path("toll.lexicon"))
