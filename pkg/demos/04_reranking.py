"""
Reranking an n-best list
========================

A decoder's first choice is not always the most fluent one.  Here the
"decoder" proposes shuffled variants of each reference, and a language
model trained on in-domain text picks among them.
"""

import numpy as np

from phraselm import (NBestList, build_backoff_model, corpus_bleu, corpus_from_lines, count_phrase_ngrams,
                      rescore, select_best)

rng = np.random.default_rng(4)
pool = [f"w{i}" for i in range(20)]
collocations = [" ".join(rng.choice(pool, size=rng.integers(2, 4), replace=False)) for _ in range(24)]
lines = [" ".join(collocations[i] for i in rng.integers(24, size=3)) for _ in range(1100)]
train, refs = corpus_from_lines(lines[:1000]), [tuple(line.split()) for line in lines[1000:]]

model = build_backoff_model(count_phrase_ngrams(train, 3, 3), train.vocab)

# ten candidates per segment; the reference hides at a random rank
nbest = NBestList()
for seg, ref in enumerate(refs):
    slot = rng.integers(10)
    for rank in range(10):
        hyp = ref if rank == slot else tuple(rng.permutation(ref))
        nbest.add(seg, hyp, -float(rank))

baseline = select_best(nbest)
for mode in ("sum", "max"):
    chosen = select_best(nbest, rescore(model, nbest, mode))
    segs = nbest.segment_ids()
    before = corpus_bleu([baseline[s].hypothesis for s in segs], refs)
    after = corpus_bleu([chosen[s].hypothesis for s in segs], refs)
    print(f"{mode}: rank-1 BLEU {before.bleu:.4f} -> LM BLEU {after.bleu:.4f}")
