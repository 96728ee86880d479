"""
Good-Turing discounting and backoff
===================================

Counts-of-counts drive the discount; leftover mass in each context is
handed to the shorter context.  The toy sentence "a a a b" is small enough
to check every number by hand.
"""

import numpy as np

from phraselm import build_backoff_model, corpus_from_lines, count_word_ngrams
from phraselm.counts import histogram
from phraselm.smoothing import discount_table

# a Zipf-ish histogram: many singletons, few frequent types
rng = np.random.default_rng(0)
counts = rng.zipf(1.8, size=5000)
coc = histogram(counts.tolist())
table = discount_table(coc)
print("unseen mass:", table.unseen_mass)
for r in range(1, 7):
    print(f"r={r}  N_r={coc.nr(r):5d}  r*={table(r):.3f}")

corpus = corpus_from_lines(["a a a b"])
model = build_backoff_model(count_word_ngrams(corpus, 2), corpus.vocab)
bos = (corpus.vocab.bos_id,)
for w in ("a", "b", "<unk>"):
    wid = (corpus.vocab.lookup(w),)
    print(f"P({w}) = {model.backoff_prob(wid):.4f}   P({w} | <s>) = {model.backoff_prob(wid, [bos]):.4f}")

# probabilities after <s> sum to one across the vocabulary
ids = [(i,) for i in range(1, len(corpus.vocab))]
print("sum after <s>:", sum(model.backoff_prob(w, [bos]) for w in ids))
