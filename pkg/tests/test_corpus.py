import pytest
from hypothesis import given, strategies as st

from phraselm.corpus import (BOS, UNK, Corpus, build_vocabulary, corpus_from_lines, detokenize,
                             map_with_unk, read_corpus, tokenize)


@pytest.mark.parametrize("line, expected", [
    ("a b a", ["a", "b", "a"]),
    ("", []),
    ("  x \t y ", ["x", "y"]),
])
def test_tokenize(line, expected):
    assert tokenize(line) == expected


def test_tokenize_keeps_case():
    assert tokenize("Xiaoming played") == ["Xiaoming", "played"]


@pytest.mark.parametrize("sentences, size", [
    ([["a", "b"], ["b"]], 4),
    ([], 2),
    ([["x", "x", "x"]], 3),
])
def test_vocabulary_size(sentences, size):
    assert len(build_vocabulary(sentences)) == size


def test_vocabulary_ids():
    vocab = build_vocabulary([["b", "a"], ["c", "a"]])
    assert vocab.bos_id != vocab.unk_id
    assert [vocab.word_to_id[w] for w in "bac"] == [2, 3, 4]
    for w, i in vocab.word_to_id.items():
        assert vocab.id_to_word[i] == w
    assert len(vocab.word_to_id) == len(vocab.id_to_word)


def test_sentinel_collision():
    with pytest.raises(ValueError):
        build_vocabulary([["a", BOS]])
    with pytest.raises(ValueError):
        build_vocabulary([[UNK]])


def test_map_with_unk():
    vocab = build_vocabulary([["a", "b"]])
    a, b = vocab.word_to_id["a"], vocab.word_to_id["b"]
    assert map_with_unk(vocab, ["a", "z"]) == (a, vocab.unk_id)
    assert map_with_unk(vocab, []) == ()
    assert map_with_unk(vocab, ["b", "a"]) == (b, a)


@given(st.lists(st.text(alphabet="ab \t", max_size=12), max_size=6))
def test_round_trip_and_word_count(lines):
    corpus = corpus_from_lines(lines)
    for i, line in enumerate(lines):
        assert detokenize(corpus.words(i)) == " ".join(line.split())
    assert corpus.word_count == sum(len(s) for s in corpus.sentences)


def test_word_count_checked():
    vocab = build_vocabulary([["a"]])
    with pytest.raises(ValueError):
        Corpus(((2,),), vocab, word_count=3)


def test_ids_stable_across_loads(tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("the cat\nsat on the mat\n", encoding="utf-8")
    first, second = read_corpus(path), read_corpus(path)
    assert first.vocab.word_to_id == second.vocab.word_to_id
    assert first.sentences == second.sentences


def test_test_corpus_maps_oov(tmp_path):
    train = corpus_from_lines(["a b"])
    path = tmp_path / "t.txt"
    path.write_text("a q\n", encoding="utf-8")
    test = read_corpus(path, train.vocab)
    assert test.sentences == ((train.vocab.word_to_id["a"], train.vocab.unk_id),)


def test_filtered_and_concat():
    corpus = corpus_from_lines(["a", "a b c", "b"])
    assert len(corpus.filtered(1)) == 2
    both = corpus + corpus
    assert both.word_count == 2 * corpus.word_count
