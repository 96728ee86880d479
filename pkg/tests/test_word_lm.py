import io
import math

import numpy as np
import pytest

from phraselm.corpus import Corpus, corpus_from_lines
from phraselm.counts import count_word_ngrams
from phraselm.modelfile import read_model
from phraselm.smoothing import build_backoff_model
from phraselm.word_lm import (ScoredSentence, UndefinedPerplexityError, word_sentence_logprob,
                              word_sentence_ppl, word_text_ppl)


def uniform_model(words):
    v = len(words) + 1  # plus <unk>
    lp = repr(math.log10(1.0 / v))
    rows = "".join(f"{lp}\t{w}\n" for w in words + ["<unk>"])
    text = f"\\order 1\n\\mpl 1\n\\lambda 1.0\n\\mode word\n\\unseen {lp}\n\n\\1-grams:\n{rows}\n\\end\\\n"
    return read_model(io.StringIO(text)), v


def test_bigram_unrolling(golden):
    corpus, model = golden
    a, b = corpus.vocab.word_to_id["a"], corpus.vocab.word_to_id["b"]
    bos = (corpus.vocab.bos_id,)
    expected = model.backoff_logprob((a,), [bos]) + model.backoff_logprob((b,), [(a,)])
    assert word_sentence_logprob(model, (a, b)).log_prob == expected
    # hand-worked: 1/2 * 1/4
    assert 10 ** word_sentence_logprob(model, (a, b)).log_prob == pytest.approx(0.125, rel=1e-12)


def test_unigram_order_free(synthetic):
    model = build_backoff_model(count_word_ngrams(synthetic, 1), synthetic.vocab)
    sent = synthetic.sentences[5]
    expected = sum(model.backoff_logprob((w,)) for w in sent)
    assert word_sentence_logprob(model, sent).log_prob == pytest.approx(expected, rel=1e-12)
    assert word_sentence_logprob(model, sent[::-1]).log_prob == pytest.approx(expected, rel=1e-12)


def test_empty_sentence(golden):
    assert word_sentence_logprob(golden[1], ()) == ScoredSentence(0.0, 0)
    with pytest.raises(UndefinedPerplexityError):
        word_sentence_ppl(ScoredSentence(0.0, 0))


def test_sentence_ppl():
    assert word_sentence_ppl(ScoredSentence(-4.0, 4)) == pytest.approx(10.0, rel=1e-12)
    golden_lp = math.log10(0.125)
    assert word_sentence_ppl(ScoredSentence(golden_lp, 2)) == pytest.approx(0.125 ** -0.5, rel=1e-12)


def test_uniform_model():
    model, v = uniform_model(["a", "b", "c", "d"])
    corpus = corpus_from_lines(["a b c", "d d q a"], model.vocab)
    assert word_text_ppl(model, corpus) == pytest.approx(v, abs=1e-9)


def test_text_ppl(golden):
    corpus, model = golden
    a, b = corpus.vocab.word_to_id["a"], corpus.vocab.word_to_id["b"]
    single = Corpus(((a, b),), corpus.vocab)
    assert word_text_ppl(model, single) == word_sentence_ppl(word_sentence_logprob(model, (a, b)))
    two = Corpus(((a, b), (b,)), corpus.vocab)
    # P(b|<s>) = d(<s>) P(b) = (1/2) / (7/16) * 3/16
    expected = (0.125 * (0.5 / 0.4375 * 0.1875)) ** (-1 / 3)
    assert word_text_ppl(model, two) == pytest.approx(expected, rel=1e-12)
    assert word_text_ppl(model, two + two) == pytest.approx(word_text_ppl(model, two), rel=1e-12)
    with pytest.raises(UndefinedPerplexityError):
        word_text_ppl(model, Corpus((), corpus.vocab))


def test_log_of_text_is_sum(word_model, synthetic):
    total = sum(word_sentence_logprob(word_model, s).log_prob for s in synthetic)
    n = synthetic.word_count
    assert word_text_ppl(word_model, synthetic) == pytest.approx(10 ** (-total / n), rel=1e-12)


def test_unigram_scores_stable_across_orders(synthetic):
    m1 = build_backoff_model(count_word_ngrams(synthetic, 1), synthetic.vocab)
    m3 = build_backoff_model(count_word_ngrams(synthetic, 3), synthetic.vocab).truncated(1)
    for s in synthetic:
        assert word_sentence_logprob(m3, s).log_prob == pytest.approx(word_sentence_logprob(m1, s).log_prob, rel=1e-12)


def test_reordering_ratio():
    rng = np.random.default_rng(3)
    words = ["Xiaoming", "played", "basketball", "the", "day", "before", "yesterday"]
    corpus = corpus_from_lines([" ".join(rng.choice(words, size=rng.integers(3, 9))) for _ in range(60)])
    model = build_backoff_model(count_word_ngrams(corpus, 2), corpus.vocab)
    ids = {w: corpus.vocab.word_to_id[w] for w in words}
    X, P, B, T, D, F, Y = (ids[w] for w in words)
    original = word_sentence_logprob(model, (X, P, B, T, D, F, Y)).log_prob
    reordered = word_sentence_logprob(model, (X, T, D, F, Y, P, B)).log_prob

    def p(w, prev):
        return model.backoff_prob((w,), [(prev,)])

    quotient = p(T, X) * p(P, Y) / (p(P, X) * p(T, B))
    assert 10 ** (reordered - original) == pytest.approx(quotient, rel=1e-12)
