"""Word- and phrase-based n-gram language models.

Phrase models treat contiguous runs of up to ``mpl`` words as modeling
units.  A sentence is scored either by averaging over all of its
segmentations into phrases (sum model) or by its single best segmentation
(max model).
"""

from .corpus import Corpus, Vocabulary, build_vocabulary, corpus_from_lines, map_with_unk, read_corpus, tokenize
from .counts import (CountTable, CountsOfCounts, count_phrase_ngrams, count_word_ngrams, counts_of_counts,
                     enumerate_phrase_kgrams)
from .modelfile import load_model, read_model, save_model, write_model
from .phrase_lm import (Segmentation, count_segmentations, enumerate_segmentations, max_model_prob, phrase_sentence_ppl,
                        phrase_text_ppl, score_corpus, segmentation_score, sum_model_prob)
from .rerank import NBestList, corpus_bleu, parse_nbest, rescore, select_best
from .smoothing import BackoffModel, build_backoff_model, good_turing_adjust
from .word_lm import word_sentence_logprob, word_sentence_ppl, word_text_ppl

__all__ = [
    "BackoffModel", "Corpus", "CountTable", "CountsOfCounts", "NBestList", "Segmentation", "Vocabulary",
    "build_backoff_model", "build_vocabulary", "corpus_bleu", "corpus_from_lines", "count_phrase_ngrams",
    "count_segmentations", "count_word_ngrams", "counts_of_counts", "enumerate_phrase_kgrams", "enumerate_segmentations",
    "good_turing_adjust", "load_model", "map_with_unk", "max_model_prob", "parse_nbest",
    "phrase_sentence_ppl", "phrase_text_ppl", "read_corpus", "read_model", "rescore", "save_model",
    "score_corpus", "segmentation_score", "select_best", "sum_model_prob", "tokenize",
    "word_sentence_logprob", "word_sentence_ppl", "word_text_ppl", "write_model",
]
