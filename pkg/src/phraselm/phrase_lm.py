"""Sentence segmentations and the sum/max phrase model scores.

A segmentation of an m-word sentence is a boundary vector
``0 = b[0] < b[1] < ... < b[J] = m`` with every phrase at most `mpl` words.
The sum model averages the chain probabilities of all K segmentations under
a uniform prior; the max model keeps the single segmentation with the lowest
per-phrase perplexity.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .smoothing import BackoffModel
from .word_lm import UndefinedPerplexityError, text_ppl, word_sentence_logprob

DEFAULT_MAX_LENGTH = 20
MODES = ("word", "sum", "max")


class SentenceTooLongError(ValueError):
    pass


class SegmentationError(ValueError):
    pass


@dataclass(frozen=True)
class Segmentation:
    boundaries: tuple[int, ...]

    @property
    def J(self) -> int:
        return len(self.boundaries) - 1

    def spans(self) -> Iterator[tuple[int, int]]:
        return zip(self.boundaries, self.boundaries[1:])

    def phrases(self, sentence: Sequence[int]) -> list[tuple[int, ...]]:
        return [tuple(sentence[i:j]) for i, j in self.spans()]


@dataclass(frozen=True)
class PhraseScore:
    log_prob: float
    J: int


@dataclass(frozen=True)
class PhraseSentenceResult:
    mode: str
    log_prob: float
    K: int
    J_best: int | None = None
    i0: int | None = None
    boundaries: tuple[int, ...] | None = None


def _boundary_vectors(m: int, mpl: int) -> Iterator[tuple[int, ...]]:
    # depth-first with increasing next boundary -> lexicographic order
    stack = [(0,)]
    while stack:
        b = stack.pop()
        last = b[-1]
        if last == m:
            yield b
            continue
        for j in range(min(last + mpl, m), last, -1):
            stack.append(b + (j,))


def enumerate_segmentations(m: int, mpl: int) -> list[Segmentation]:
    if m < 0 or mpl < 1:
        raise ValueError("need m >= 0 and mpl >= 1")
    return [Segmentation(b) for b in _boundary_vectors(m, mpl)]


def count_segmentations(m: int, mpl: int) -> int:
    """K(m) by the recurrence K(m) = K(m-1) + ... + K(m-mpl), K(0) = 1."""
    k = [1] + [0] * m
    for i in range(1, m + 1):
        k[i] = sum(k[max(0, i - mpl):i])
    return k[m]


class _Scorer:
    """Per-sentence cache of log10 P*(phrase | context) keyed by span and context."""

    def __init__(self, model: BackoffModel, sentence: Sequence[int]):
        self.model = model
        self.sentence = tuple(sentence)
        self.n = model.maxorder
        self._pids: dict[tuple[int, int], int] = {}
        self._cache: dict[tuple, float] = {}

    def pid(self, i: int, j: int) -> int:
        pid = self._pids.get((i, j))
        if pid is None:
            pid = self._pids[(i, j)] = self.model.pid(self.sentence[i:j])
        return pid

    def term(self, ctx: tuple[int, ...], i: int, j: int) -> float:
        key = (ctx, i, j)
        lp = self._cache.get(key)
        if lp is None:
            lp = self._cache[key] = self.model.interpolated_logprob_ids(
                self.pid(i, j), self.sentence[i:j], ctx)
        return lp

    def context(self, history: tuple[int, ...]) -> tuple[int, ...]:
        return history[-(self.n - 1):] if self.n > 1 else ()

    def walk(self) -> Iterator[tuple[tuple[int, ...], float]]:
        """(boundaries, chain log10 prob) for every segmentation, lexicographic."""
        m, mpl = len(self.sentence), self.model.mpl
        stack = [((0,), (self.model.bos_pid,), 0.0)]
        while stack:
            b, history, score = stack.pop()
            i = b[-1]
            if i == m:
                yield b, score
                continue
            ctx = self.context(history)
            for j in range(min(i + mpl, m), i, -1):
                stack.append((b + (j,), history + (self.pid(i, j),), score + self.term(ctx, i, j)))


def segmentation_score(model: BackoffModel, sentence: Sequence[int], seg: Segmentation) -> PhraseScore:
    """log10 of the product of P*(p_j | up to n-1 previous phrases), history starting at <s>."""
    b = seg.boundaries
    if not b or b[0] != 0 or b[-1] != len(sentence):
        raise SegmentationError(f"boundaries {b} do not cover a sentence of {len(sentence)} words")
    scorer = _Scorer(model, sentence)
    history = (model.bos_pid,)
    total = 0.0
    for i, j in seg.spans():
        if not 0 < j - i <= model.mpl:
            raise SegmentationError(f"phrase span ({i}, {j}) violates 1..{model.mpl} words")
        total += scorer.term(scorer.context(history), i, j)
        history += (scorer.pid(i, j),)
    return PhraseScore(total, seg.J)


def _check_length(sentence, max_length):
    if max_length is not None and len(sentence) > max_length:
        raise SentenceTooLongError(f"sentence of {len(sentence)} words exceeds the limit of {max_length}")


def logsumexp10(values: Sequence[float]) -> float:
    a = np.asarray(values, dtype=float)
    hi = a.max()
    if not np.isfinite(hi):
        return float(hi)
    return float(hi + np.log10(np.sum(10.0 ** (a - hi))))


def sum_model_prob(model: BackoffModel, sentence: Sequence[int],
                   max_length: int | None = DEFAULT_MAX_LENGTH) -> PhraseSentenceResult:
    """log10 of (1/K) * sum over segmentations of the chain probability."""
    _check_length(sentence, max_length)
    scores = [s for _, s in _Scorer(model, sentence).walk()]
    K = len(scores)
    if K == 1:
        return PhraseSentenceResult("sum", scores[0], 1)
    return PhraseSentenceResult("sum", logsumexp10(scores) - math.log10(K), K)


def max_model_prob(model: BackoffModel, sentence: Sequence[int],
                   max_length: int | None = DEFAULT_MAX_LENGTH, select: str = "ppl") -> PhraseSentenceResult:
    """Chain probability of the segmentation with the lowest per-phrase perplexity.

    ``select="prob"`` picks the highest raw chain probability instead.  Ties
    go to the lexicographically first boundary vector.  No 1/K factor.
    """
    if select not in ("ppl", "prob"):
        raise ValueError(f"unknown selection rule {select!r}")
    _check_length(sentence, max_length)
    best = None
    K = 0
    for b, score in _Scorer(model, sentence).walk():
        J = len(b) - 1
        key = score if select == "prob" or J == 0 else score / J
        if best is None or key > best[0]:
            best = (key, K, b, score)
        K += 1
    _, i0, b, score = best
    return PhraseSentenceResult("max", score, K, len(b) - 1, i0, b)


def phrase_sentence_ppl(result: PhraseSentenceResult, m: int) -> float:
    if result.mode == "max":
        if not result.J_best:
            raise UndefinedPerplexityError("perplexity of an empty segmentation")
        return 10.0 ** (-result.log_prob / result.J_best)
    if m == 0:
        raise UndefinedPerplexityError("perplexity of an empty sentence")
    return 10.0 ** (-result.log_prob / m)


def score_sentence(model: BackoffModel, sentence: Sequence[int], mode: str,
                   max_length: int | None = DEFAULT_MAX_LENGTH, select: str = "ppl") -> PhraseSentenceResult:
    """Score one sentence under ``mode`` in {"word", "sum", "max"}."""
    if mode == "word":
        s = word_sentence_logprob(model, sentence)
        return PhraseSentenceResult("word", s.log_prob, 1)
    if mode == "sum":
        return sum_model_prob(model, sentence, max_length)
    if mode == "max":
        return max_model_prob(model, sentence, max_length, select)
    raise ValueError(f"unknown mode {mode!r}")


_worker_state: dict = {}


def _init_worker(model, mode, max_length, select):
    _worker_state.update(model=model, mode=mode, max_length=max_length, select=select)


def _score_worker(sentence):
    st = _worker_state
    return score_sentence(st["model"], sentence, st["mode"], st["max_length"], st["select"])


def score_corpus(model: BackoffModel, sentences: Sequence[Sequence[int]], mode: str,
                 max_length: int | None = DEFAULT_MAX_LENGTH, select: str = "ppl",
                 threads: int = 1) -> list[PhraseSentenceResult]:
    """Score every sentence, in order; `threads` > 1 fans out to worker processes."""
    sentences = [tuple(s) for s in sentences]
    if threads <= 1 or len(sentences) < 2:
        return [score_sentence(model, s, mode, max_length, select) for s in sentences]
    for s in sentences:
        if mode != "word":
            _check_length(s, max_length)
    chunk = max(1, len(sentences) // (threads * 4))
    with ProcessPoolExecutor(threads, initializer=_init_worker,
                             initargs=(model, mode, max_length, select)) as pool:
        return list(pool.map(_score_worker, sentences, chunksize=chunk))


def text_perplexity(results: Sequence[PhraseSentenceResult], sentences: Sequence[Sequence[int]]) -> float:
    """Text perplexity from per-sentence results.

    Word and sum modes normalize by the total word count; max mode by the
    total number of phrases in the selected segmentations.
    """
    if not results:
        raise UndefinedPerplexityError("perplexity of an empty text")
    if results[0].mode == "max":
        count = sum(r.J_best for r in results)
    else:
        count = sum(len(s) for s in sentences)
    return text_ppl((r.log_prob for r in results), count)


def phrase_text_ppl(model: BackoffModel, corpus: Sequence[Sequence[int]], mode: str = "sum",
                    max_length: int | None = DEFAULT_MAX_LENGTH, select: str = "ppl", threads: int = 1) -> float:
    sentences = list(corpus)
    return text_perplexity(score_corpus(model, sentences, mode, max_length, select, threads), sentences)
