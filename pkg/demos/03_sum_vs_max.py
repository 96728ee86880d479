"""
Word, sum and max perplexities
==============================

Sentences built from recurring two- and three-word collocations are where
phrase units pay off.  Train a word model and a phrase model on 2000 such
sentences and sweep the order limit on 200 held-out ones.
"""

import numpy as np

from phraselm import (build_backoff_model, corpus_from_lines, count_phrase_ngrams, count_word_ngrams,
                      phrase_text_ppl, word_text_ppl)

rng = np.random.default_rng(1)
pool = [f"w{i}" for i in range(20)]
collocations = [" ".join(rng.choice(pool, size=rng.integers(2, 4), replace=False)) for _ in range(24)]
lines = [" ".join(collocations[i] for i in rng.integers(24, size=rng.integers(2, 4))) for _ in range(2200)]

train = corpus_from_lines(lines[:2000])
test = corpus_from_lines(lines[2000:], train.vocab)
word = build_backoff_model(count_word_ngrams(train, 4), train.vocab)
phrase = build_backoff_model(count_phrase_ngrams(train, 4, 3), train.vocab)

# smoothing off is lambda = 1; the default mixes in word unigrams at 0.43
rows = []
for n in range(1, 5):
    cut = phrase.truncated(n)
    rows.append([n, word_text_ppl(word.truncated(n), test),
                 phrase_text_ppl(cut.with_lambda(1.0), test, "sum"),
                 phrase_text_ppl(cut, test, "sum"),
                 phrase_text_ppl(cut.with_lambda(1.0), test, "max"),
                 phrase_text_ppl(cut, test, "max")])
table = np.array(rows)
print("order    word     sum  sum+lam     max  max+lam")
for row in table:
    print(f"{int(row[0]):5d}" + "".join(f"{x:8.2f}" for x in row[1:]))
