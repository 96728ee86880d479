"""N-best list reranking with a language model, and corpus BLEU.

N-best lines look like ``segment ||| hypothesis tokens ||| decoder score``,
the score being optional.
"""

import math
import warnings
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .corpus import map_with_unk, tokenize
from .phrase_lm import DEFAULT_MAX_LENGTH, score_corpus
from .smoothing import BackoffModel
from .word_lm import word_sentence_logprob

FIELD_SEP = " ||| "


class NBestParseError(ValueError):
    pass


class UndefinedScoreError(ValueError):
    pass


@dataclass(frozen=True)
class NBestEntry:
    segment_id: int
    hypothesis: tuple[str, ...]
    decoder_score: float | None = None
    rank: int = 0


@dataclass
class NBestList:
    segments: dict[int, list[NBestEntry]] = field(default_factory=dict)

    def add(self, segment_id: int, hypothesis: Sequence[str], decoder_score: float | None = None) -> NBestEntry:
        entries = self.segments.setdefault(segment_id, [])
        entry = NBestEntry(segment_id, tuple(hypothesis), decoder_score, len(entries))
        entries.append(entry)
        return entry

    def __len__(self) -> int:
        return len(self.segments)

    def entries(self) -> list[NBestEntry]:
        return [e for seg in self.segments.values() for e in seg]

    def segment_ids(self) -> list[int]:
        return sorted(self.segments)


def parse_nbest(lines: Iterable[str]) -> NBestList:
    nbest = NBestList()
    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\r\n")
        if not line.strip():
            continue
        fields = line.split(FIELD_SEP)
        if len(fields) not in (2, 3):
            raise NBestParseError(f"line {lineno}: expected 2 or 3 ' ||| '-separated fields, got {len(fields)}")
        try:
            seg = int(fields[0])
        except ValueError:
            raise NBestParseError(f"line {lineno}: bad segment id {fields[0]!r}") from None
        hyp = tokenize(fields[1])
        if not hyp:
            raise NBestParseError(f"line {lineno}: empty hypothesis")
        score = None
        if len(fields) == 3 and fields[2].strip():
            try:
                score = float(fields[2])
            except ValueError:
                raise NBestParseError(f"line {lineno}: bad decoder score {fields[2]!r}") from None
        nbest.add(seg, hyp, score)
    return nbest


def format_nbest(nbest: NBestList) -> str:
    out = []
    for seg in nbest.segment_ids():
        for e in nbest.segments[seg]:
            row = f"{seg}{FIELD_SEP}{' '.join(e.hypothesis)}"
            if e.decoder_score is not None:
                row += f"{FIELD_SEP}{e.decoder_score!r}"
            out.append(row + "\n")
    return "".join(out)


@dataclass(frozen=True)
class LMScore:
    log_prob: float
    fallback: bool = False


def rescore(model: BackoffModel, nbest: NBestList, mode: str = "word",
            max_length: int | None = DEFAULT_MAX_LENGTH, select: str = "ppl",
            fallback_model: BackoffModel | None = None, threads: int = 1) -> dict[int, list[LMScore]]:
    """log10 LM probability of every hypothesis, grouped like `nbest`.

    In sum/max mode, hypotheses longer than `max_length` are scored as word
    chains instead (by `fallback_model` when given) and flagged.
    """
    entries = nbest.entries()
    ids = [map_with_unk(model.vocab, e.hypothesis) for e in entries]
    long = [mode != "word" and max_length is not None and len(s) > max_length for s in ids]
    short = [s for s, is_long in zip(ids, long) if not is_long]
    results = iter(score_corpus(model, short, mode, max_length, select, threads))
    scores: dict[int, list[LMScore]] = {}
    for e, s, is_long in zip(entries, ids, long):
        if is_long:
            if fallback_model is not None:
                lp = word_sentence_logprob(fallback_model, map_with_unk(fallback_model.vocab, e.hypothesis)).log_prob
            else:
                lp = word_sentence_logprob(model, s).log_prob
            score = LMScore(lp, True)
        else:
            score = LMScore(next(results).log_prob)
        scores.setdefault(e.segment_id, []).append(score)
    return scores


def select_best(nbest: NBestList, scores: dict[int, list[LMScore]] | None = None,
                combine: float | None = None) -> dict[int, NBestEntry]:
    """Highest-scoring entry per segment; ties go to the earlier n-best rank.

    With no `scores`, the rank-1 entry is selected.  `combine` mixes in the
    decoder score as ``combine * decoder + (1 - combine) * lm``.
    """
    chosen = {}
    for seg in nbest.segment_ids():
        entries = nbest.segments[seg]
        if not entries:
            warnings.warn(f"segment {seg} has no hypotheses; skipped")
            continue
        if scores is None:
            chosen[seg] = entries[0]
            continue
        best, best_score = None, -math.inf
        for e, s in zip(entries, scores[seg]):
            value = s.log_prob
            if combine is not None:
                if e.decoder_score is None:
                    raise ValueError(f"segment {seg} rank {e.rank}: no decoder score to combine")
                value = combine * e.decoder_score + (1.0 - combine) * value
            if best is None or value > best_score:
                best, best_score = e, value
        chosen[seg] = best
    return chosen


@dataclass(frozen=True)
class BleuReport:
    bleu: float
    precisions: tuple[float, ...]
    brevity_penalty: float
    hyp_length: int
    ref_length: int

    def lines(self) -> list[str]:
        p = " ".join(f"p{i}={x:.6f}" for i, x in enumerate(self.precisions, 1))
        return [f"bleu={self.bleu:.6f}", p, f"bp={self.brevity_penalty:.6f}",
                f"hyp_length={self.hyp_length} ref_length={self.ref_length}"]


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def corpus_bleu(hypotheses: Sequence[Sequence[str]], references: Sequence[Sequence[str]],
                max_n: int = 4) -> BleuReport:
    """Corpus-level BLEU against a single reference per segment, unsmoothed."""
    if len(hypotheses) != len(references):
        raise ValueError(f"{len(hypotheses)} hypotheses but {len(references)} references")
    if not hypotheses:
        raise UndefinedScoreError("BLEU of an empty corpus")
    matches = [0] * max_n
    totals = [0] * max_n
    hyp_len = ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        hyp_len += len(hyp)
        ref_len += len(ref)
        for n in range(1, max_n + 1):
            h, r = _ngrams(hyp, n), _ngrams(ref, n)
            matches[n - 1] += sum(min(c, r[g]) for g, c in h.items())
            totals[n - 1] += max(len(hyp) - n + 1, 0)
    precisions = tuple(m / t if t else 0.0 for m, t in zip(matches, totals))
    if hyp_len == 0:
        bp = 0.0
    elif hyp_len < ref_len:
        bp = math.exp(1.0 - ref_len / hyp_len)
    else:
        bp = 1.0
    if min(precisions) > 0:
        bleu = bp * math.exp(sum(math.log(p) for p in precisions) / max_n)
    else:
        bleu = 0.0
    return BleuReport(bleu, precisions, bp, hyp_len, ref_len)
