"""
Counting phrase n-grams
=======================

A phrase model treats every run of up to three words as a unit.  This
walk-through counts phrase n-grams on a two-sentence corpus and shows how
fast the number of segmentations grows with sentence length.
"""

import numpy as np

from phraselm import corpus_from_lines, count_phrase_ngrams, count_segmentations, enumerate_segmentations

corpus = corpus_from_lines(["the day before yesterday", "before yesterday"])

# order 2, phrases of up to 3 words
table = count_phrase_ngrams(corpus, maxorder=2, mpl=3)
for gram, count in sorted(table.decoded().items(), key=lambda kv: (len(kv[0]), kv[0])):
    units = " | ".join(" ".join(corpus.vocab.words(p)) for p in gram)
    print(f"{count}  [{units}]")

# every segmentation of a 4-word sentence, as boundary tuples
for seg in enumerate_segmentations(4, 3):
    print(seg.boundaries, "J =", seg.J)

# K(m) follows a tribonacci recurrence, roughly 1.84 ** m
m = np.arange(1, 21)
K = np.array([count_segmentations(int(i), 3) for i in m])
print(np.column_stack([m, K]))
print("growth ratio:", K[-1] / K[-2])
