"""Good-Turing discounting, Katz-style backoff and phrase/word interpolation.

Conditional probabilities of a unit (word or phrase) given a context of
preceding units are

    P_BO(p | h) = C*(h p) / C(h)              if C(h p) > 0
                = d(h) * P_BO(p | h[1:])      otherwise

with C* the Good-Turing adjusted count.  In phrase mode every occurrence of
a context h is followed by at most one phrase of each length, so the
estimates above form one distribution per phrase length; backoff weights are
kept per (context, phrase length).  With one-word phrases this is the usual
word model.

All probabilities are held as base-10 logarithms.
"""

import math
from dataclasses import dataclass
from typing import Sequence

from .corpus import Vocabulary
from .counts import CountsOfCounts, CountTable, Phrase, PhraseLexicon, counts_of_counts

DEFAULT_LAMBDA = 0.43
DEFAULT_GT_MAX = 5
# leftover mass below this counts as "no room for unseen events"
LEFTOVER_EPS = 1e-12
NO_PHRASE = -1


class UndefinedHistogramError(ValueError):
    pass


class CannotTrainError(ValueError):
    pass


def good_turing_adjust(coc: CountsOfCounts, r: int, gt_max: int | None = DEFAULT_GT_MAX) -> float:
    """Turing estimate r* = (r + 1) N_{r+1} / N_r.

    ``r == 0`` gives the unseen mass N_1 / N0, where N0 is the total token
    mass of the order.  Counts above `gt_max` (``None`` disables the cutoff)
    or with N_{r+1} == 0 are returned unchanged.
    """
    if r < 0:
        raise ValueError("r must be >= 0")
    if r == 0:
        return coc.nr(1) / coc.n0 if coc.n0 else 0.0
    if gt_max is not None and r > gt_max:
        return float(r)
    n_next = coc.nr(r + 1)
    if n_next == 0:
        return float(r)
    n_r = coc.nr(r)
    if n_r == 0:
        raise UndefinedHistogramError(f"N_{r} = 0 while N_{r + 1} = {n_next}")
    return (r + 1) * n_next / n_r


@dataclass(frozen=True)
class DiscountTable:
    """Adjusted counts of one order.

    `rstar` only lists the raw counts that are actually discounted; a
    Turing estimate that fails to discount (r* >= r) falls back to r.
    """

    rstar: dict[int, float]
    unseen_mass: float
    gt_max: int

    def __call__(self, r: int) -> float:
        return self.rstar.get(r, float(r))


def discount_table(coc: CountsOfCounts, gt_max: int = DEFAULT_GT_MAX) -> DiscountTable:
    rstar = {}
    for r in range(1, gt_max + 1):
        if coc.nr(r) == 0:
            continue
        adjusted = good_turing_adjust(coc, r, gt_max)
        if 0 < adjusted < r:
            rstar[r] = adjusted
    return DiscountTable(rstar, unseen_mass(coc), gt_max)


def unseen_mass(coc: CountsOfCounts) -> float:
    """Unigram probability reserved for unseen units.

    N_1 / N0 when that lies strictly inside (0, 1); otherwise the histogram
    says nothing useful and one pseudo-occurrence, 1 / (N0 + 1), is used.
    """
    n1 = coc.nr(1)
    if 0 < n1 < coc.n0:
        return n1 / coc.n0
    return 1.0 / (coc.n0 + 1)


def _log10(x: float) -> float:
    return math.log10(x) if x > 0 else -math.inf


def log10_add(a: float, b: float) -> float:
    if a == -math.inf:
        return b
    if b == -math.inf:
        return a
    hi, lo = (a, b) if a >= b else (b, a)
    return hi + math.log10(1.0 + 10.0 ** (lo - hi))


class BackoffModel:
    """Trained backoff model over words (``mpl == 1``) or phrases.

    Attributes
    ----------
    logp : list of dict
        ``logp[n - 1]`` maps an n-gram of phrase ids to log10 P_BO of its
        last unit given the rest; ``logp[0]`` is the unigram distribution and
        includes the unknown word.
    bow : dict
        Context (tuple of phrase ids) -> log10 backoff weight per phrase
        length.  Contexts absent from the dict back off with weight 1.
    """

    def __init__(self, vocab: Vocabulary, lexicon: PhraseLexicon, maxorder: int, mpl: int,
                 logp: list[dict[tuple[int, ...], float]], bow: dict[tuple[int, ...], tuple[float, ...]],
                 unseen_logp: float, lam: float = DEFAULT_LAMBDA, mode: str | None = None):
        if not 0.0 <= lam <= 1.0:
            raise ValueError(f"lambda must lie in [0, 1], got {lam}")
        self.vocab = vocab
        self.lexicon = lexicon
        self.maxorder = maxorder
        self.mpl = mpl
        self.logp = logp
        self.bow = bow
        self.unseen_logp = unseen_logp
        self.lam = lam
        self.mode = mode or ("word" if mpl == 1 else "phrase")
        self.bos_pid = lexicon.intern((vocab.bos_id,))
        self.unk_pid = lexicon.intern((vocab.unk_id,))
        self._lengths = [len(p) for p in lexicon.phrases]
        self.unigram_log_denominator = _log10(sum(
            10.0 ** lp for (pid,), lp in logp[0].items() if self._lengths[pid] == 1))

    # -- queries on phrase ids -------------------------------------------

    def pid(self, phrase: Phrase) -> int:
        pid = self.lexicon.get(tuple(phrase))
        return NO_PHRASE if pid is None else pid

    def context_pids(self, context: Sequence[Phrase]) -> tuple[int, ...]:
        if self.maxorder == 1:
            return ()
        return tuple(self.pid(p) for p in context)[-(self.maxorder - 1):]

    def logprob_ids(self, pid: int, length: int, ctx: tuple[int, ...]) -> float:
        """log10 P_BO of phrase `pid` (of `length` words) after context `ctx`."""
        acc = 0.0
        while ctx:
            lp = self.logp[len(ctx)].get(ctx + (pid,))
            if lp is not None:
                return acc + lp
            w = self.bow.get(ctx)
            if w is not None:
                acc += w[length - 1]
            ctx = ctx[1:]
        lp = self.logp[0].get((pid,))
        return acc + (self.unseen_logp if lp is None else lp)

    def word_logprob(self, word_id: int) -> float:
        """log10 unigram probability of a single word."""
        lp = self.logp[0].get((self.pid((word_id,)),))
        return self.unseen_logp if lp is None else lp

    def interpolated_logprob_ids(self, pid: int, phrase: Phrase, ctx: tuple[int, ...]) -> float:
        """log10 of lam * P_BO + (1 - lam) * prod_i P(w_i) / (sum_w P(w))^k."""
        if self.lam == 1.0:
            return self.logprob_ids(pid, len(phrase), ctx)
        words = sum(self.word_logprob(w) for w in phrase) - len(phrase) * self.unigram_log_denominator
        if self.lam == 0.0:
            return words
        bo = self.logprob_ids(pid, len(phrase), ctx)
        return log10_add(math.log10(self.lam) + bo, math.log10(1.0 - self.lam) + words)

    # -- queries on word tuples ------------------------------------------

    def backoff_logprob(self, phrase: Phrase, context: Sequence[Phrase] = ()) -> float:
        phrase = tuple(phrase)
        return self.logprob_ids(self.pid(phrase), len(phrase), self.context_pids(context))

    def backoff_prob(self, phrase: Phrase, context: Sequence[Phrase] = ()) -> float:
        return 10.0 ** self.backoff_logprob(phrase, context)

    def interpolated_logprob(self, phrase: Phrase, context: Sequence[Phrase] = ()) -> float:
        phrase = tuple(phrase)
        return self.interpolated_logprob_ids(self.pid(phrase), phrase, self.context_pids(context))

    def interpolate_phrase_prob(self, phrase: Phrase, context: Sequence[Phrase] = ()) -> float:
        return 10.0 ** self.interpolated_logprob(phrase, context)

    # -- structure ----------------------------------------------------------

    def phrase_length(self, pid: int) -> int:
        return self._lengths[pid]

    def contexts(self):
        """Every stored n-gram usable as a context (orders 1..maxorder-1)."""
        for n in range(1, self.maxorder):
            yield from self.logp[n - 1].keys()
        if self.maxorder > 1:
            yield (self.bos_pid,)

    def num_ngrams(self, order: int) -> int:
        return len(self.logp[order - 1])

    def with_lambda(self, lam: float) -> "BackoffModel":
        return BackoffModel(self.vocab, self.lexicon, self.maxorder, self.mpl, self.logp,
                            self.bow, self.unseen_logp, lam, self.mode)

    def truncated(self, order: int) -> "BackoffModel":
        """The same model restricted to n-grams of at most `order` units.

        Lower orders are estimated independently of higher ones, so this is
        exactly the model that training at `order` would produce.
        """
        if not 1 <= order <= self.maxorder:
            raise ValueError(f"order {order} outside 1..{self.maxorder}")
        bow = {ctx: w for ctx, w in self.bow.items() if len(ctx) < order}
        return BackoffModel(self.vocab, self.lexicon, order, self.mpl, self.logp[:order],
                            bow, self.unseen_logp, self.lam, self.mode)


def build_backoff_model(table: CountTable, vocab: Vocabulary, lam: float = DEFAULT_LAMBDA,
                        gt_max: int = DEFAULT_GT_MAX, unnormalized_backoff: bool = False,
                        mode: str | None = None) -> BackoffModel:
    """Estimate a backoff model from `table`.

    Counts r <= `gt_max` are Good-Turing discounted.  A context whose
    estimates leave no mass for unseen continuations is re-estimated with
    one extra pseudo-occurrence in its denominator.  Backoff weights are
    normalized so every (context, phrase length) distribution sums to one,
    unless `unnormalized_backoff` asks for the plain d = 1 - sum(alpha).
    """
    coc1 = counts_of_counts(table, 1)
    if coc1.n0 == 0:
        raise CannotTrainError("no unigrams to train on")
    mpl = table.mpl
    lexicon = PhraseLexicon()
    for p in table.lexicon.phrases:
        lexicon.intern(p)
    bos_pid = lexicon.intern((vocab.bos_id,))
    unk_pid = lexicon.intern((vocab.unk_id,))
    lengths = [len(p) for p in lexicon.phrases]

    # unigrams, normalized per phrase length
    disc = discount_table(coc1, gt_max)
    u = unseen_mass(coc1)
    adjusted = {key: disc(c) for key, c in table.orders[0].items() if key[0] != bos_pid}
    per_length = [0.0] * (mpl + 1)
    for key, c in adjusted.items():
        per_length[lengths[key[0]]] += c
    unigrams = {key: (1.0 - u) * c / per_length[lengths[key[0]]] for key, c in adjusted.items()}
    unigrams[(unk_pid,)] = unigrams.get((unk_pid,), 0.0) + u
    logp: list[dict[tuple[int, ...], float]] = [{key: math.log10(p) for key, p in unigrams.items()}]
    bow: dict[tuple[int, ...], tuple[float, ...]] = {}
    model = BackoffModel(vocab, lexicon, 1, mpl, logp, bow, math.log10(u), lam, mode)

    for n in range(2, table.maxorder + 1):
        disc = discount_table(counts_of_counts(table, n), gt_max)
        children: dict[tuple[int, ...], list[tuple[int, float]]] = {}
        for key, c in table.orders[n - 1].items():
            children.setdefault(key[:-1], []).append((key[-1], disc(c)))
        level: dict[tuple[int, ...], float] = {}
        for ctx, kids in children.items():
            total = table.orders[n - 2][ctx]
            alpha, leftover = _alphas(kids, total, lengths, mpl)
            if min(leftover[1:]) <= LEFTOVER_EPS:
                alpha, leftover = _alphas(kids, total + 1, lengths, mpl)
            for pid, a in alpha:
                level[ctx + (pid,)] = math.log10(a)
            weights = []
            for length in range(1, mpl + 1):
                num = leftover[length]
                if not unnormalized_backoff:
                    lower = sum(10.0 ** model.logprob_ids(pid, length, ctx[1:])
                                for pid, _ in alpha if lengths[pid] == length)
                    if lower < 1.0:
                        num /= 1.0 - lower
                weights.append(math.log10(num))
            bow[ctx] = tuple(weights)
        logp.append(level)
        model = BackoffModel(vocab, lexicon, n, mpl, logp, bow, math.log10(u), lam, mode)
    return model


def _alphas(kids, total, lengths, mpl):
    alpha = [(pid, c / total) for pid, c in kids]
    leftover = [1.0] * (mpl + 1)
    for pid, a in alpha:
        leftover[lengths[pid]] -= a
    return alpha, leftover


def context_masses(model: BackoffModel, ctx: tuple[int, ...]) -> list[float]:
    """Total P_BO mass after `ctx` per phrase length (index 0 is length 1).

    Sums over every phrase of the lexicon except the sentinel; for lengths
    above one the mass left to phrases never seen in training is added.
    """
    totals = [0.0] * model.mpl
    for pid in range(len(model.lexicon)):
        if pid == model.bos_pid:
            continue
        length = model.phrase_length(pid)
        totals[length - 1] += 10.0 ** model.logprob_ids(pid, length, ctx)
    for length in range(2, model.mpl + 1):
        totals[length - 1] += 10.0 ** model.logprob_ids(NO_PHRASE, length, ctx)
    return totals
