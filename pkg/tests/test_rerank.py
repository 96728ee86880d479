import math
import random

import pytest

from oracles import chain_prob, max_model_choice

from phraselm.corpus import corpus_from_lines, map_with_unk
from phraselm.counts import count_word_ngrams
from phraselm.phrase_lm import max_model_prob, sum_model_prob
from phraselm.rerank import (LMScore, NBestList, NBestParseError, UndefinedScoreError, corpus_bleu,
                             format_nbest, parse_nbest, rescore, select_best)
from phraselm.smoothing import build_backoff_model
from phraselm.word_lm import word_sentence_logprob

GOLDEN_BLEU = 0.2 ** 0.25  # (4/5 * 3/4 * 2/3 * 1/2) ** (1/4)


def test_parse_line():
    nbest = parse_nbest(["0 ||| a b c ||| -4.2\n"])
    (e,) = nbest.segments[0]
    assert (e.segment_id, e.hypothesis, e.decoder_score, e.rank) == (0, ("a", "b", "c"), -4.2, 0)


def test_parse_missing_score_and_grouping():
    nbest = parse_nbest(["3 ||| x y", "3 ||| y x ||| -1", "", "5 ||| z ||| "])
    assert nbest.segment_ids() == [3, 5]
    assert [e.hypothesis for e in nbest.segments[3]] == [("x", "y"), ("y", "x")]
    assert nbest.segments[3][0].decoder_score is None
    assert nbest.segments[5][0].decoder_score is None
    assert [e.rank for e in nbest.segments[3]] == [0, 1]


@pytest.mark.parametrize("line", ["a b c", "x ||| a b", "0 ||| a ||| q", "0 |||  ||| 1", "0 ||| a ||| 1 ||| 2"])
def test_parse_errors_carry_line_number(line):
    with pytest.raises(NBestParseError, match="line 2"):
        parse_nbest(["0 ||| ok", line])


def test_format_round_trip():
    text = "0 ||| a b ||| -1.5\n0 ||| b a\n1 ||| c ||| 0.0\n"
    assert format_nbest(parse_nbest(text.splitlines())) == text


@pytest.fixture(scope="module")
def nbest(synthetic_lines):
    rng = random.Random(11)
    nb = NBestList()
    for seg, line in enumerate(synthetic_lines[:12]):
        words = line.split()
        for rank in range(4):
            hyp = words[:] if rank == 0 else rng.sample(words, len(words))
            nb.add(seg, hyp or ["w0"], -float(rank))
    nb.add(12, ["w1", "w2"], -1.0)
    nb.add(12, ["w1", "w2"], -2.0)
    return nb


def test_rescore_word_mode(word_model, nbest):
    scores = rescore(word_model, nbest, "word")
    for e in nbest.entries():
        expected = word_sentence_logprob(word_model, map_with_unk(word_model.vocab, e.hypothesis)).log_prob
        assert scores[e.segment_id][e.rank] == LMScore(expected)


@pytest.mark.parametrize("mode", ["sum", "max"])
def test_rescore_phrase_modes(phrase_model, nbest, mode):
    scores = rescore(phrase_model, nbest, mode)
    fn = sum_model_prob if mode == "sum" else max_model_prob
    for e in nbest.entries():
        expected = fn(phrase_model, map_with_unk(phrase_model.vocab, e.hypothesis)).log_prob
        assert scores[e.segment_id][e.rank].log_prob == expected
    assert scores[12][0] == scores[12][1]


def test_rescore_max_matches_oracle(phrase_model, nbest):
    scores = rescore(phrase_model, nbest, "max")
    for e in nbest.entries():
        sent = map_with_unk(phrase_model.vocab, e.hypothesis)
        _, b = max_model_choice(phrase_model, sent)
        assert 10 ** scores[e.segment_id][e.rank].log_prob == pytest.approx(chain_prob(phrase_model, sent, b), rel=1e-10)


def test_rescore_length_fallback(phrase_model, word_model):
    nb = NBestList()
    nb.add(0, ["w1"] * 6)
    nb.add(0, ["w1"] * 3)
    scores = rescore(phrase_model, nb, "sum", max_length=4)
    assert [s.fallback for s in scores[0]] == [True, False]
    scores = rescore(phrase_model, nb, "sum", max_length=4, fallback_model=word_model)
    ids = map_with_unk(word_model.vocab, ["w1"] * 6)
    assert scores[0][0] == LMScore(word_sentence_logprob(word_model, ids).log_prob, True)


def test_rescore_threads(phrase_model, nbest):
    assert rescore(phrase_model, nbest, "max", threads=3) == rescore(phrase_model, nbest, "max")


def test_select_best_rules(nbest, word_model):
    baseline = select_best(nbest)
    assert all(e.rank == 0 for e in baseline.values())
    scores = rescore(word_model, nbest, "word")
    chosen = select_best(nbest, scores)
    for seg, e in chosen.items():
        best = max(s.log_prob for s in scores[seg])
        assert scores[seg][e.rank].log_prob == best
        assert all(s.log_prob < best for s in scores[seg][:e.rank])
    assert chosen[12].rank == 0  # duplicate hypotheses tie
    # invariant under a strictly increasing transform of the scores
    shifted = {seg: [LMScore(3 * s.log_prob - 7) for s in ss] for seg, ss in scores.items()}
    assert select_best(nbest, shifted) == chosen


def test_select_single_and_empty():
    nb = NBestList()
    nb.add(0, ["a"])
    nb.segments[1] = []
    with pytest.warns(UserWarning, match="segment 1"):
        chosen = select_best(nb, {0: [LMScore(-9.0)], 1: []})
    assert list(chosen) == [0] and chosen[0].hypothesis == ("a",)


def test_combine():
    nb = NBestList()
    nb.add(0, ["a"], -1.0)
    nb.add(0, ["b"], -5.0)
    scores = {0: [LMScore(-3.0), LMScore(-2.0)]}
    assert select_best(nb, scores)[0].rank == 1
    assert select_best(nb, scores, combine=0.5)[0].rank == 0
    assert select_best(nb, scores, combine=0.0)[0].rank == 1
    nb.add(0, ["c"])
    with pytest.raises(ValueError):
        select_best(nb, {0: scores[0] + [LMScore(-1.0)]}, combine=0.5)


def test_word_and_sum_agree_at_mpl1(synthetic, nbest):
    model = build_backoff_model(count_word_ngrams(synthetic, 3), synthetic.vocab, lam=1.0)
    assert rescore(model, nbest, "word") == rescore(model, nbest, "sum")


def test_bleu_identical():
    corpus = [("a", "b", "c", "d", "e"), ("x", "y", "z", "w")]
    rep = corpus_bleu(corpus, corpus)
    assert rep.bleu == 1.0
    assert rep.brevity_penalty == 1.0


def test_bleu_golden():
    rep = corpus_bleu([tuple("abcde")], [tuple("abcdf")])
    assert rep.precisions == (4 / 5, 3 / 4, 2 / 3, 1 / 2)
    assert rep.brevity_penalty == 1.0
    assert rep.bleu == pytest.approx(0.668740304976422, abs=1e-9)
    assert rep.bleu == pytest.approx(GOLDEN_BLEU, abs=1e-12)


def test_bleu_zero_and_brevity():
    assert corpus_bleu([tuple("abcxd")], [tuple("abcde")]).bleu == 0.0
    rep = corpus_bleu([tuple("abcd")], [tuple("abcdef")])
    assert rep.brevity_penalty == pytest.approx(math.exp(1 - 6 / 4))
    assert rep.bleu == pytest.approx(math.exp(1 - 6 / 4))
    assert corpus_bleu([tuple("abcdef")], [tuple("abcd")]).brevity_penalty == 1.0


def test_bleu_clipping():
    rep = corpus_bleu([("the",) * 4], [("the", "cat", "the", "mat")])
    assert rep.precisions[0] == 0.5


def test_bleu_permutation_symmetry(synthetic_lines):
    rng = random.Random(2)
    refs = [tuple(line.split()) for line in synthetic_lines if len(line.split()) >= 4]
    hyps = [tuple(rng.sample(r, len(r))) if i % 3 else r for i, r in enumerate(refs)]
    order = list(range(len(refs)))
    rng.shuffle(order)
    a = corpus_bleu(hyps, refs)
    b = corpus_bleu([hyps[i] for i in order], [refs[i] for i in order])
    assert a == b


def test_bleu_errors():
    with pytest.raises(UndefinedScoreError):
        corpus_bleu([], [])
    with pytest.raises(ValueError):
        corpus_bleu([("a",)], [])


def test_lm_trained_on_references_prefers_them():
    refs = ["the cat sat on the mat", "a dog ran in the park", "we like green tea very much"]
    corpus = corpus_from_lines(refs * 5)
    model = build_backoff_model(count_word_ngrams(corpus, 3), corpus.vocab)
    nb = NBestList()
    for seg, ref in enumerate(refs):
        words = ref.split()
        nb.add(seg, words[::-1])
        nb.add(seg, words[1:] + words[:1])
        nb.add(seg, words)
    chosen = select_best(nb, rescore(model, nb, "word"))
    hyps = [chosen[s].hypothesis for s in nb.segment_ids()]
    assert corpus_bleu(hyps, [tuple(r.split()) for r in refs]).bleu == 1.0
