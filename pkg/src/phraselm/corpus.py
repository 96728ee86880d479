"""Corpus loading, tokenization and the word vocabulary.

A corpus file holds one sentence per line with tokens separated by runs of
spaces or tabs.  Tokens are opaque: no case folding, no normalization.
"""

from dataclasses import dataclass, field
from typing import Iterable, Sequence

BOS = "<s>"
UNK = "<unk>"


def tokenize(line: str) -> list[str]:
    return line.split()


def detokenize(words: Sequence[str]) -> str:
    return " ".join(words)


class Vocabulary:
    """Bidirectional word <-> id map.

    Ids are dense and assigned in first-occurrence order after the two
    reserved sentinels, ``bos_id == 0`` and ``unk_id == 1``.
    """

    def __init__(self, words: Iterable[str] = ()):
        self.id_to_word: list[str] = [BOS, UNK]
        self.word_to_id: dict[str, int] = {BOS: 0, UNK: 1}
        self.bos_id = 0
        self.unk_id = 1
        for w in words:
            self.add(w)

    def add(self, word: str) -> int:
        wid = self.word_to_id.get(word)
        if wid is None:
            wid = len(self.id_to_word)
            self.word_to_id[word] = wid
            self.id_to_word.append(word)
        return wid

    def __len__(self) -> int:
        return len(self.id_to_word)

    def __contains__(self, word: str) -> bool:
        return word in self.word_to_id

    def lookup(self, word: str) -> int:
        return self.word_to_id.get(word, self.unk_id)

    def words(self, ids: Iterable[int]) -> list[str]:
        return [self.id_to_word[i] for i in ids]


def build_vocabulary(sentences: Iterable[Sequence[str]]) -> Vocabulary:
    """Collect the vocabulary of tokenized `sentences` in first-occurrence order.

    Raises ValueError when a corpus token collides with a sentinel symbol.
    """
    vocab = Vocabulary()
    for words in sentences:
        for w in words:
            if w == BOS or w == UNK:
                raise ValueError(f"corpus token {w!r} collides with a reserved sentinel")
            vocab.add(w)
    return vocab


def map_with_unk(vocab: Vocabulary, words: Sequence[str]) -> tuple[int, ...]:
    return tuple(vocab.lookup(w) for w in words)


@dataclass(frozen=True)
class Corpus:
    """Sentences as tuples of word ids (sentinels excluded) plus their vocabulary."""

    sentences: tuple[tuple[int, ...], ...]
    vocab: Vocabulary = field(compare=False)
    word_count: int = 0

    def __post_init__(self):
        n = sum(len(s) for s in self.sentences)
        if self.word_count == 0:
            object.__setattr__(self, "word_count", n)
        elif self.word_count != n:
            raise ValueError(f"word_count {self.word_count} != total tokens {n}")

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)

    def words(self, i: int) -> list[str]:
        return self.vocab.words(self.sentences[i])

    def filtered(self, max_length: int) -> "Corpus":
        """Drop sentences longer than `max_length` words."""
        return Corpus(tuple(s for s in self.sentences if len(s) <= max_length), self.vocab)

    def __add__(self, other: "Corpus") -> "Corpus":
        if other.vocab is not self.vocab:
            raise ValueError("cannot concatenate corpora indexed by different vocabularies")
        return Corpus(self.sentences + other.sentences, self.vocab)


def corpus_from_lines(lines: Iterable[str], vocab: Vocabulary | None = None) -> Corpus:
    """Index text lines.

    With no `vocab`, a fresh vocabulary is built from the lines (training).
    With a `vocab`, out-of-vocabulary words map to its unk id (testing).
    """
    tokenized = [tokenize(line) for line in lines]
    if vocab is None:
        vocab = build_vocabulary(tokenized)
    return Corpus(tuple(map_with_unk(vocab, t) for t in tokenized), vocab)


def read_corpus(path, vocab: Vocabulary | None = None) -> Corpus:
    with open(path, encoding="utf-8") as f:
        return corpus_from_lines(f.read().splitlines(), vocab)
