import pytest

from argweave.corpus import Corpus
from argweave.fixtures import fixture_path


@pytest.fixture(scope="session")
def debate_path():
    return fixture_path("mmr_debate.json")


@pytest.fixture()
def debate(debate_path) -> Corpus:
    return Corpus.load(debate_path)
