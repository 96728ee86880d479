"""Word and phrase n-gram counting.

A phrase is a contiguous run of 1..mpl words, stored as a tuple of word ids.
A phrase k-gram is a sequence of k adjacent phrases.  Any such k-gram inside a
sentence of m words is pinned down by its boundary tuple

    0 <= b[0] < b[1] < ... < b[k] <= m,   b[i] - b[i-1] <= mpl,

the i-th phrase covering words b[i-1]+1 .. b[i].  Counting walks every such
tuple once per sentence occurrence.  Word n-grams are the ``mpl == 1`` case.

The begin-of-sentence sentinel is a one-word phrase that only ever appears as
the first unit of an n-gram, i.e. as conditioning context.
"""

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Sequence

from .corpus import Corpus, Vocabulary

Phrase = tuple[int, ...]
PhraseNGram = tuple[Phrase, ...]

UNIT_SEP = "\x1f"


class PhraseLexicon:
    """Interns phrases (word-id tuples) to dense integer ids."""

    def __init__(self):
        self.phrases: list[Phrase] = []
        self.ids: dict[Phrase, int] = {}

    def intern(self, phrase: Phrase) -> int:
        pid = self.ids.get(phrase)
        if pid is None:
            pid = len(self.phrases)
            self.ids[phrase] = pid
            self.phrases.append(phrase)
        return pid

    def get(self, phrase: Phrase) -> int | None:
        return self.ids.get(phrase)

    def __len__(self):
        return len(self.phrases)

    def __getitem__(self, pid: int) -> Phrase:
        return self.phrases[pid]


@dataclass
class CountTable:
    """Per-order phrase n-gram counts keyed by interned phrase-id tuples.

    ``orders[k - 1]`` holds the k-grams.  The begin-of-sentence unigram is
    stored (it is the context count of sentence-initial n-grams) but excluded
    from `total_unigram_mass` and from counts-of-counts.
    """

    maxorder: int
    mpl: int
    bos_id: int = 0
    lexicon: PhraseLexicon = field(default_factory=PhraseLexicon)
    orders: list[dict[tuple[int, ...], int]] = field(default_factory=list)

    def __post_init__(self):
        if not self.orders:
            self.orders = [{} for _ in range(self.maxorder)]
        self.bos_pid = self.lexicon.intern((self.bos_id,))

    @property
    def total_unigram_mass(self) -> int:
        return sum(c for key, c in self.orders[0].items() if key[0] != self.bos_pid)

    def add(self, gram: PhraseNGram, count: int = 1) -> None:
        key = tuple(self.lexicon.intern(p) for p in gram)
        table = self.orders[len(key) - 1]
        table[key] = table.get(key, 0) + count

    def __getitem__(self, gram: PhraseNGram) -> int:
        key = []
        for p in gram:
            pid = self.lexicon.get(tuple(p))
            if pid is None:
                return 0
            key.append(pid)
        return self.orders[len(key) - 1].get(tuple(key), 0)

    def decode(self, key: tuple[int, ...]) -> PhraseNGram:
        return tuple(self.lexicon[pid] for pid in key)

    def items(self, order: int) -> Iterator[tuple[PhraseNGram, int]]:
        for key, c in self.orders[order - 1].items():
            yield self.decode(key), c

    def decoded(self) -> dict[PhraseNGram, int]:
        """All counts keyed by word-level phrase tuples, for comparisons."""
        return {self.decode(key): c for table in self.orders for key, c in table.items()}

    def num_ngrams(self, order: int) -> int:
        return len(self.orders[order - 1])

    def merge(self, other: "CountTable") -> "CountTable":
        if (self.maxorder, self.mpl, self.bos_id) != (other.maxorder, other.mpl, other.bos_id):
            raise ValueError("cannot merge count tables with different shapes")
        out = CountTable(self.maxorder, self.mpl, self.bos_id)
        for table in (self, other):
            for order in range(1, self.maxorder + 1):
                for gram, c in table.items(order):
                    out.add(gram, c)
        return out


def _phrase_grams(sentence: Sequence[int], maxorder: int, mpl: int) -> Iterator[tuple[int, PhraseNGram]]:
    words = tuple(sentence)
    m = len(words)

    def extend(start: int, prefix: PhraseNGram, order: int):
        for j in range(start + 1, min(start + mpl, m) + 1):
            gram = prefix + (words[start:j],)
            yield gram
            if order < maxorder:
                yield from extend(j, gram, order + 1)

    for b0 in range(m):
        for gram in extend(b0, (), 1):
            yield b0, gram


def enumerate_phrase_kgrams(sentence: Sequence[int], maxorder: int, mpl: int) -> Iterator[PhraseNGram]:
    """Stream every phrase k-gram (1 <= k <= maxorder) of `sentence`.

    Each admissible boundary tuple yields exactly one emission; nothing is
    materialized, since the number of tuples grows combinatorially in the
    order.
    """
    if maxorder < 1 or mpl < 1:
        raise ValueError("maxorder and mpl must be >= 1")
    for _, gram in _phrase_grams(sentence, maxorder, mpl):
        yield gram


def _count_phrase_shard(args) -> Counter:
    sentences, maxorder, mpl, bos_id = args
    bos = (bos_id,)
    counter: Counter = Counter()
    for sentence in sentences:
        if not sentence:
            continue
        counter[(bos,)] += 1
        for b0, gram in _phrase_grams(sentence, maxorder, mpl):
            counter[gram] += 1
            if b0 == 0 and len(gram) < maxorder:
                counter[(bos,) + gram] += 1
    return counter


def _count_word_shard(args) -> Counter:
    sentences, maxorder, bos_id = args
    counter: Counter = Counter()
    for sentence in sentences:
        if not sentence:
            continue
        seq = [(bos_id,)] + [(w,) for w in sentence]
        counter[(seq[0],)] += 1
        for i in range(1, len(seq)):
            for start in range(i, max(i - maxorder, -1), -1):
                counter[tuple(seq[start : i + 1])] += 1
    return counter


def _shards(sentences: Sequence, n: int) -> list[Sequence]:
    n = max(1, min(n, len(sentences)))
    size, rem = divmod(len(sentences), n)
    out, start = [], 0
    for i in range(n):
        stop = start + size + (i < rem)
        out.append(sentences[start:stop])
        start = stop
    return out


def _table_from_counters(counters: Iterable[Counter], maxorder: int, mpl: int, bos_id: int) -> CountTable:
    table = CountTable(maxorder, mpl, bos_id)
    for counter in counters:
        for gram, c in counter.items():
            table.add(gram, c)
    return table


def _run_sharded(fn, sentences, extra: tuple, threads: int) -> list[Counter]:
    shards = _shards(sentences, threads)
    jobs = [(shard,) + extra for shard in shards]
    if len(jobs) <= 1:
        return [fn(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=len(jobs)) as pool:
        return list(pool.map(fn, jobs))


def count_phrase_ngrams(corpus: Corpus | Sequence[Sequence[int]], maxorder: int, mpl: int,
                        threads: int = 1, bos_id: int | None = None) -> CountTable:
    """Count phrase n-grams up to `maxorder` with phrases of at most `mpl` words.

    Sentence-initial k-grams (k < maxorder) are also counted with the
    begin-of-sentence phrase prepended.  Sharding over `threads` worker
    processes merges contiguous sentence ranges in order, so the resulting
    table does not depend on the thread count.
    """
    if maxorder < 1 or mpl < 1:
        raise ValueError("maxorder and mpl must be >= 1")
    bos_id = _resolve_bos(corpus, bos_id)
    counters = _run_sharded(_count_phrase_shard, list(corpus), (maxorder, mpl, bos_id), threads)
    return _table_from_counters(counters, maxorder, mpl, bos_id)


def count_word_ngrams(corpus: Corpus | Sequence[Sequence[int]], maxorder: int,
                      threads: int = 1, bos_id: int | None = None) -> CountTable:
    """Sliding-window word n-gram counts; a word is a one-word phrase."""
    if maxorder < 1:
        raise ValueError("maxorder must be >= 1")
    bos_id = _resolve_bos(corpus, bos_id)
    counters = _run_sharded(_count_word_shard, list(corpus), (maxorder, bos_id), threads)
    return _table_from_counters(counters, maxorder, 1, bos_id)


def _resolve_bos(corpus, bos_id):
    if bos_id is not None:
        return bos_id
    vocab = getattr(corpus, "vocab", None)
    return vocab.bos_id if isinstance(vocab, Vocabulary) else 0


@dataclass(frozen=True)
class CountsOfCounts:
    """Histogram r -> N_r of one order, plus the total token mass ``n0 = sum r * N_r``."""

    counts: dict[int, int]
    n0: int

    def nr(self, r: int) -> int:
        return self.counts.get(r, 0)


def counts_of_counts(table: CountTable, order: int) -> CountsOfCounts:
    if not 1 <= order <= table.maxorder:
        raise ValueError(f"order {order} outside 1..{table.maxorder}")
    hist: Counter = Counter()
    for key, c in table.orders[order - 1].items():
        if order == 1 and key[0] == table.bos_pid:
            continue
        hist[c] += 1
    return CountsOfCounts(dict(sorted(hist.items())), sum(r * n for r, n in hist.items()))


def histogram(counts: Iterable[int]) -> CountsOfCounts:
    """Counts-of-counts of a bare iterable of counts."""
    hist = Counter(counts)
    return CountsOfCounts(dict(sorted(hist.items())), sum(r * n for r, n in hist.items()))


def _phrase_str(vocab: Vocabulary, phrase: Phrase) -> str:
    return " ".join(vocab.id_to_word[w] for w in phrase)


def dump_counts(table: CountTable, vocab: Vocabulary, f: IO[str]) -> None:
    """Write one ``count<TAB>phrase<US>phrase...`` record per n-gram, sorted."""
    records = []
    for order in range(1, table.maxorder + 1):
        for gram, c in table.items(order):
            records.append((order, UNIT_SEP.join(_phrase_str(vocab, p) for p in gram), c))
    for _, text, c in sorted(records):
        f.write(f"{c}\t{text}\n")


def load_counts(f: IO[str], vocab: Vocabulary, maxorder: int, mpl: int) -> CountTable:
    table = CountTable(maxorder, mpl, vocab.bos_id)
    for lineno, line in enumerate(f, 1):
        line = line.rstrip("\n")
        if not line:
            continue
        try:
            c, text = line.split("\t")
            gram = tuple(tuple(vocab.add(w) for w in p.split(" ")) for p in text.split(UNIT_SEP))
            table.add(gram, int(c))
        except ValueError as e:
            raise ValueError(f"line {lineno}: malformed count record {line!r}") from e
    return table
