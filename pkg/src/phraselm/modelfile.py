"""Reading and writing trained models in an ARPA-like text format.

    \\order 3
    \\mpl 3
    \\lambda 0.43
    \\mode phrase
    \\unseen -0.61

    \\1-grams:
    <log10 p>\\t<phrase>\\x1f<phrase>...\\t<log10 bow per phrase length>
    ...
    \\end\\

Phrases are space-joined words; the phrases of an n-gram are separated by the
ASCII unit separator.  The backoff column holds one value per phrase length,
space separated, and is omitted for n-grams that never serve as contexts.
Records are sorted, so equal models produce identical files.
"""

import math
from typing import IO

from .corpus import BOS, Vocabulary
from .counts import UNIT_SEP, PhraseLexicon
from .smoothing import BackoffModel

# log10 probability written for the begin-of-sentence unit, which is never predicted
SENTINEL_LOGP = -99.0


def _fmt(x: float) -> str:
    return repr(float(x))


def write_model(model: BackoffModel, f: IO[str]) -> None:
    vocab, lexicon = model.vocab, model.lexicon

    def text(key):
        return UNIT_SEP.join(" ".join(vocab.id_to_word[w] for w in lexicon[pid]) for pid in key)

    f.write(f"\\order {model.maxorder}\n\\mpl {model.mpl}\n\\lambda {_fmt(model.lam)}\n")
    f.write(f"\\mode {model.mode}\n\\unseen {_fmt(model.unseen_logp)}\n")
    for n in range(1, model.maxorder + 1):
        rows = []
        keys = dict.fromkeys(model.logp[n - 1])
        if n == 1 and model.maxorder > 1:
            keys[(model.bos_pid,)] = None
        for key in keys:
            lp = SENTINEL_LOGP if key == (model.bos_pid,) else model.logp[n - 1][key]
            row = f"{_fmt(lp)}\t{text(key)}"
            bow = model.bow.get(key)
            if bow is not None:
                row += "\t" + " ".join(_fmt(w) for w in bow)
            rows.append((text(key), row))
        f.write(f"\n\\{n}-grams:\n")
        for _, row in sorted(rows):
            f.write(row + "\n")
    f.write("\n\\end\\\n")


class ModelFormatError(ValueError):
    pass


def read_model(f: IO[str]) -> BackoffModel:
    header: dict[str, str] = {}
    vocab = Vocabulary()
    lexicon = PhraseLexicon()
    logp: list[dict] = []
    bow: dict = {}
    section = 0
    for lineno, raw in enumerate(f, 1):
        line = raw.rstrip("\n")
        if not line:
            continue
        if line == "\\end\\":
            break
        if line.startswith("\\") and line.endswith("-grams:"):
            section = int(line[1:-len("-grams:")])
            if section != len(logp) + 1:
                raise ModelFormatError(f"line {lineno}: unexpected section {line!r}")
            logp.append({})
            continue
        if line.startswith("\\") and not section:
            key, _, value = line[1:].partition(" ")
            header[key] = value
            continue
        if not section:
            raise ModelFormatError(f"line {lineno}: record before first section")
        fields = line.split("\t")
        if len(fields) not in (2, 3):
            raise ModelFormatError(f"line {lineno}: expected 2 or 3 tab-separated fields")
        key = tuple(lexicon.intern(tuple(vocab.add(w) for w in p.split(" ")))
                    for p in fields[1].split(UNIT_SEP))
        if len(key) != section:
            raise ModelFormatError(f"line {lineno}: {len(key)} phrases in the {section}-grams section")
        if fields[1] != BOS:
            logp[-1][key] = float(fields[0])
        if len(fields) == 3:
            bow[key] = tuple(float(w) for w in fields[2].split(" "))
    try:
        order, mpl = int(header["order"]), int(header["mpl"])
        lam, mode = float(header["lambda"]), header["mode"]
        unseen = float(header["unseen"])
    except (KeyError, ValueError) as e:
        raise ModelFormatError(f"bad or missing header field: {e}") from e
    if len(logp) != order:
        raise ModelFormatError(f"header declares order {order} but file has {len(logp)} sections")
    if not math.isfinite(unseen):
        raise ModelFormatError("unseen mass must be finite")
    return BackoffModel(vocab, lexicon, order, mpl, logp, bow, unseen, lam, mode)


def save_model(model: BackoffModel, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        write_model(model, f)


def load_model(path) -> BackoffModel:
    with open(path, encoding="utf-8") as f:
        return read_model(f)
