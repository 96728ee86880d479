import pytest

from oracles import synthetic_corpus

from phraselm.corpus import corpus_from_lines
from phraselm.counts import count_phrase_ngrams, count_word_ngrams
from phraselm.smoothing import build_backoff_model


@pytest.fixture(scope="session")
def golden():
    """Single sentence "a a a b"; its bigram model is worked out by hand in test_smoothing."""
    corpus = corpus_from_lines(["a a a b"])
    model = build_backoff_model(count_word_ngrams(corpus, 2), corpus.vocab)
    return corpus, model


@pytest.fixture(scope="session")
def synthetic_lines():
    return synthetic_corpus(50, 12, 8, seed=7)


@pytest.fixture(scope="session")
def synthetic(synthetic_lines):
    return corpus_from_lines(synthetic_lines)


@pytest.fixture(scope="session")
def phrase_model(synthetic):
    return build_backoff_model(count_phrase_ngrams(synthetic, 3, 3), synthetic.vocab)


@pytest.fixture(scope="session")
def word_model(synthetic):
    return build_backoff_model(count_word_ngrams(synthetic, 3), synthetic.vocab)
