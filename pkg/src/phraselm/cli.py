"""Command-line entry points: train, ppl, rerank, bleu.

Reports go to stdout and are byte-identical across runs and thread counts;
timings and diagnostics go to stderr.  Exit status is 0 on success, 1 on an
internal invariant failure and 2 on usage or I/O errors.
"""

import argparse
import os
import sys
import time
from dataclasses import dataclass

from .corpus import read_corpus, tokenize
from .counts import count_phrase_ngrams, count_word_ngrams, dump_counts
from .modelfile import ModelFormatError, load_model, save_model
from .phrase_lm import DEFAULT_MAX_LENGTH, SentenceTooLongError, score_corpus, text_perplexity
from .rerank import NBestParseError, corpus_bleu, parse_nbest, rescore, select_best
from .smoothing import DEFAULT_LAMBDA, CannotTrainError, build_backoff_model

THREADS_ENV = "PHRASELM_THREADS"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    order: int = 3
    mpl: int = 3
    lam: float = DEFAULT_LAMBDA
    mode: str = "sum"
    smoothing: bool = True
    max_sentence_length: int = DEFAULT_MAX_LENGTH
    unnormalized_backoff: bool = False
    max_select: str = "ppl"
    threads: int = 1
    porcelain: bool = False

    def __post_init__(self):
        if self.order < 1:
            raise UsageError("--order must be >= 1")
        if self.mpl < 1:
            raise UsageError("--mpl must be >= 1")
        if not 0.0 <= self.lam <= 1.0:
            raise UsageError("--lambda must lie in [0, 1]")
        if self.threads < 1:
            raise UsageError("--threads must be >= 1")


def _threads(value):
    if value is not None:
        return value
    env = os.environ.get(THREADS_ENV)
    if not env:
        return 1
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{THREADS_ENV}={env!r} is not an integer") from None


def _emit(rows, porcelain, out):
    """Print (key, value) report rows as aligned text or key=value lines."""
    if porcelain:
        for k, v in rows:
            out.write(f"{k}={v}\n")
        return
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        out.write(f"{k.ljust(width)}  {v}\n")


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def cmd_train(args, out) -> int:
    cfg = RunConfig("train", order=args.order, mpl=args.mpl, lam=args.lam,
                    unnormalized_backoff=args.unnormalized_backoff,
                    threads=_threads(args.threads), porcelain=args.porcelain)
    start = time.perf_counter()
    corpus = read_corpus(args.corpus)
    if cfg.mpl == 1:
        table = count_word_ngrams(corpus, cfg.order, threads=cfg.threads)
    else:
        table = count_phrase_ngrams(corpus, cfg.order, cfg.mpl, threads=cfg.threads)
    model = build_backoff_model(table, corpus.vocab, cfg.lam, unnormalized_backoff=cfg.unnormalized_backoff)
    save_model(model, args.output)
    if args.dump_counts:
        with open(args.dump_counts, "w", encoding="utf-8", newline="\n") as f:
            dump_counts(table, corpus.vocab, f)
    rows = [("mode", model.mode), ("order", cfg.order), ("mpl", cfg.mpl),
            ("sentences", len(corpus)), ("words", corpus.word_count),
            ("vocabulary", len(corpus.vocab) - 2)]
    rows += [(f"{n}-grams", model.num_ngrams(n)) for n in range(1, cfg.order + 1)]
    _emit(rows, cfg.porcelain, out)
    print(f"trained in {time.perf_counter() - start:.3f} s", file=sys.stderr)
    return 0


def _load_scoring_model(args, cfg):
    model = load_model(args.model)
    if cfg.mode == "word" and model.mpl != 1:
        raise UsageError(f"mode 'word' needs a word model, got mpl={model.mpl}")
    lam = args.lam if args.lam is not None else model.lam
    if not cfg.smoothing:
        lam = 1.0
    return model.with_lambda(lam)


def _scoring_config(args, command):
    return RunConfig(command, mode=args.mode, smoothing=args.smoothing == "on",
                     max_sentence_length=args.max_sentence_length, max_select=args.max_select,
                     threads=_threads(args.threads), porcelain=args.porcelain)


def cmd_ppl(args, out) -> int:
    cfg = _scoring_config(args, "ppl")
    model = _load_scoring_model(args, cfg)
    corpus = read_corpus(args.test, model.vocab)
    sentences = [s for s in corpus if s]
    if args.filter_long:
        sentences = [s for s in sentences if len(s) <= cfg.max_sentence_length]
    if not sentences:
        raise UsageError("no test sentences to score")
    orders = range(1, model.maxorder + 1) if args.sweep_order else [model.maxorder]
    header = ["order", "mode", "sentences", "words", "units", "log10prob", "ppl"]
    table = []
    for n in orders:
        results = score_corpus(model.truncated(n), sentences, cfg.mode, cfg.max_sentence_length,
                               cfg.max_select, cfg.threads)
        units = sum(r.J_best for r in results) if cfg.mode == "max" else sum(map(len, sentences))
        total = 0.0
        for r in results:
            total += r.log_prob
        table.append([str(n), cfg.mode, str(len(sentences)), str(sum(map(len, sentences))),
                      str(units), _fmt(total), _fmt(text_perplexity(results, sentences))])
    if cfg.porcelain:
        for row in table:
            out.write(" ".join(f"{k}={v}" for k, v in zip(header, row)) + "\n")
    else:
        widths = [max(len(r[i]) for r in table + [header]) for i in range(len(header))]
        for row in [header] + table:
            out.write("  ".join(v.rjust(w) for v, w in zip(row, widths)) + "\n")
    return 0


def _read_lines(path):
    with open(path, encoding="utf-8") as f:
        return f.read().splitlines()


def cmd_rerank(args, out) -> int:
    cfg = _scoring_config(args, "rerank")
    model = _load_scoring_model(args, cfg)
    with open(args.nbest, encoding="utf-8") as f:
        nbest = parse_nbest(f)
    refs = [tokenize(line) for line in _read_lines(args.references)]
    if len(refs) != len(nbest):
        raise UsageError(f"{len(nbest)} n-best segments but {len(refs)} reference lines")
    fallback = load_model(args.fallback_model) if args.fallback_model else None
    scores = rescore(model, nbest, cfg.mode, cfg.max_sentence_length, cfg.max_select, fallback, cfg.threads)
    baseline = select_best(nbest)
    chosen = select_best(nbest, scores, args.combine)
    segs = nbest.segment_ids()
    selected = "".join(" ".join(chosen[s].hypothesis) + "\n" for s in segs)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as f:
            f.write(selected)
    else:
        out.write(selected)
    base = corpus_bleu([baseline[s].hypothesis for s in segs], refs)
    lm = corpus_bleu([chosen[s].hypothesis for s in segs], refs)
    fallbacks = sum(s.fallback for seg in scores.values() for s in seg)
    changed = sum(chosen[s].rank != 0 for s in segs)
    rows = [("segments", len(segs)), ("changed", changed), ("fallbacks", fallbacks)]
    for name, rep in (("rank1", base), ("lm", lm)):
        rows += [(f"{name}.bleu", _fmt(rep.bleu)), (f"{name}.bp", _fmt(rep.brevity_penalty))]
        rows += [(f"{name}.p{i}", _fmt(p)) for i, p in enumerate(rep.precisions, 1)]
        rows += [(f"{name}.hyp_length", rep.hyp_length)]
    rows += [("ref_length", base.ref_length), ("delta_bleu", _fmt(lm.bleu - base.bleu))]
    _emit(rows, cfg.porcelain, out)
    return 0


def cmd_bleu(args, out) -> int:
    hyps = [tokenize(line) for line in _read_lines(args.hypotheses)]
    refs = [tokenize(line) for line in _read_lines(args.references)]
    if len(hyps) != len(refs):
        raise UsageError(f"{len(hyps)} hypotheses but {len(refs)} references")
    rep = corpus_bleu(hyps, refs)
    rows = [("bleu", _fmt(rep.bleu))]
    rows += [(f"p{i}", _fmt(p)) for i, p in enumerate(rep.precisions, 1)]
    rows += [("bp", _fmt(rep.brevity_penalty)), ("hyp_length", rep.hyp_length), ("ref_length", rep.ref_length)]
    _emit(rows, args.porcelain, out)
    return 0


def _add_scoring_flags(p):
    p.add_argument("--model", required=True, help="model file written by 'train'")
    p.add_argument("--mode", choices=("word", "sum", "max"), default="sum")
    p.add_argument("--smoothing", choices=("on", "off"), default="on",
                   help="phrase/word interpolation; off scores with lambda = 1")
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="interpolation weight (default: the model's)")
    p.add_argument("--max-sentence-length", type=int, default=DEFAULT_MAX_LENGTH)
    p.add_argument("--max-select", choices=("ppl", "prob"), default="ppl",
                   help="max model: lowest per-phrase perplexity or highest probability")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--porcelain", action="store_true", help="key=value output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="phraselm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="count n-grams and write a backoff model")
    p.add_argument("corpus")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--mpl", type=int, default=3, help="maximum phrase length; 1 trains a word model")
    p.add_argument("--lambda", dest="lam", type=float, default=DEFAULT_LAMBDA)
    p.add_argument("--paper-literal-backoff", dest="unnormalized_backoff", action="store_true",
                   help="unnormalized backoff weights d = 1 - sum(alpha)")
    p.add_argument("--dump-counts", metavar="PATH")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--porcelain", action="store_true")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("ppl", help="text perplexity of a test corpus")
    p.add_argument("test")
    _add_scoring_flags(p)
    p.add_argument("--sweep-order", action="store_true", help="one row per order limit 1..N")
    p.add_argument("--filter-long", action="store_true",
                   help="drop sentences above --max-sentence-length instead of failing")
    p.set_defaults(func=cmd_ppl)

    p = sub.add_parser("rerank", help="pick one hypothesis per segment from an n-best list")
    p.add_argument("nbest")
    p.add_argument("references")
    _add_scoring_flags(p)
    p.add_argument("-o", "--output", help="selected hypotheses (default: stdout)")
    p.add_argument("--combine", type=float, default=None, metavar="ALPHA",
                   help="select on ALPHA * decoder + (1 - ALPHA) * LM")
    p.add_argument("--fallback-model", help="word model for hypotheses above the length limit")
    p.set_defaults(func=cmd_rerank)

    p = sub.add_parser("bleu", help="corpus BLEU of aligned hypothesis/reference files")
    p.add_argument("hypotheses")
    p.add_argument("references")
    p.add_argument("--porcelain", action="store_true")
    p.set_defaults(func=cmd_bleu)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        return args.func(args, out)
    except (UsageError, OSError, CannotTrainError, ModelFormatError, NBestParseError,
            SentenceTooLongError, ValueError) as e:
        print(f"phraselm {args.command}: error: {e}", file=sys.stderr)
        return 2
    except AssertionError as e:
        print(f"phraselm {args.command}: invariant failure: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
