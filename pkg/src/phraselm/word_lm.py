"""Word n-gram sentence scoring and perplexity (the baseline model)."""

from dataclasses import dataclass
from typing import Iterable, Sequence

from .smoothing import BackoffModel


class UndefinedPerplexityError(ValueError):
    pass


@dataclass(frozen=True)
class ScoredSentence:
    log_prob: float
    m: int


def word_sentence_logprob(model: BackoffModel, sentence: Sequence[int]) -> ScoredSentence:
    """Sum of log10 P_BO(w_i | up to n-1 previous words), history starting at <s>.

    `sentence` holds word ids of the model's vocabulary.
    """
    n = model.maxorder
    history = [model.bos_pid]
    total = 0.0
    for w in sentence:
        pid = model.pid((w,))
        ctx = tuple(history[-(n - 1):]) if n > 1 else ()
        total += model.logprob_ids(pid, 1, ctx)
        history.append(pid)
    return ScoredSentence(total, len(sentence))


def word_sentence_ppl(scored: ScoredSentence) -> float:
    if scored.m == 0:
        raise UndefinedPerplexityError("perplexity of an empty sentence")
    return 10.0 ** (-scored.log_prob / scored.m)


def text_ppl(log_probs: Iterable[float], count: int) -> float:
    """10 ** (-sum(log_probs) / count), summing in the given order."""
    if count <= 0:
        raise UndefinedPerplexityError("perplexity over zero units")
    total = 0.0
    for lp in log_probs:
        total += lp
    return 10.0 ** (-total / count)


def word_text_ppl(model: BackoffModel, corpus: Iterable[Sequence[int]]) -> float:
    scored = [word_sentence_logprob(model, s) for s in corpus]
    return text_ppl((s.log_prob for s in scored), sum(s.m for s in scored))
