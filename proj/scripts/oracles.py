#!/usr/bin/env python3
"""Independent oracle computations for frozen test expectations.

Run from the repository root after gen_fixtures.py / gen_confusables.py.
Each oracle is implemented directly from first principles (counting scripts,
textbook formulas) without touching the C++ implementation.
"""
import json
import math
import pathlib
import re
from collections import Counter

ROOT = pathlib.Path(__file__).resolve().parent.parent
DATA = ROOT / "data"

# ASCII punctuation as standalone tokens, everything else (non-space) a word.
PUNCT = r"!-/:-@\[-`{-~"
TOKEN_RE = re.compile(rf"[^\s{PUNCT}]+|[{PUNCT}]")


def split_words(text):
    return TOKEN_RE.findall(text)


def confusables_count():
    """(source, variant) pairs with a single-code-point source, deduplicated,
    self-mappings excluded."""
    seen = set()
    for raw in (DATA / "confusables.txt").read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = [f.strip() for f in line.split(";")]
        variant = fields[0].split()
        source = fields[1].split()
        assert len(variant) == 1, raw
        if len(source) != 1:
            continue
        if variant[0] == source[0]:
            continue
        seen.add((source[0].upper().lstrip("0") or "0",
                  variant[0].upper().lstrip("0") or "0"))
    return len(seen)


def vocab_top(path, max_size):
    counts = Counter()
    for line in path.read_text(encoding="utf-8").splitlines():
        for w in split_words(line):
            counts[w.lower()] += 1
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [w for w, _ in ranked[:max_size]]


def uniqueness(path, n):
    counts = Counter()
    for line in path.read_text(encoding="utf-8").splitlines():
        toks = line.split()
        for i in range(len(toks) - n + 1):
            counts[tuple(toks[i:i + n])] += 1
    occurrences = sum(counts.values())
    once = sum(1 for c in counts.values() if c == 1)
    return once / occurrences, occurrences


def corpus_bleu(cands, refs, max_order=4):
    clipped = [0] * max_order
    totals = [0] * max_order
    c_len = r_len = 0
    for cand, ref in zip(cands, refs):
        c, r = cand.split(), ref.split()
        c_len += len(c)
        r_len += len(r)
        for n in range(1, max_order + 1):
            c_ngrams = Counter(tuple(c[i:i + n]) for i in range(len(c) - n + 1))
            r_ngrams = Counter(tuple(r[i:i + n]) for i in range(len(r) - n + 1))
            totals[n - 1] += sum(c_ngrams.values())
            clipped[n - 1] += sum(min(count, r_ngrams[g])
                                  for g, count in c_ngrams.items())
    if c_len == 0:
        return 0.0
    log_p = 0.0
    for n in range(max_order):
        if clipped[n] == 0:
            return 0.0
        log_p += math.log(clipped[n] / totals[n])
    bp = math.exp(1 - r_len / c_len) if c_len < r_len else 1.0
    return bp * math.exp(log_p / max_order)


def mean_length(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    return sum(len(l.split()) for l in lines) / len(lines)


def main():
    print("confusables entry count:", confusables_count())

    top = vocab_top(DATA / "ascii_1000.txt", 200)
    out = DATA / "expected_vocab_200.txt"
    out.write_text("\n".join(top) + "\n", encoding="utf-8")
    print(f"expected vocab written: {out} ({len(top)} tokens)")

    rate, occ = uniqueness(DATA / "uniq_500.txt", 3)
    print(f"uniq_500 trigram uniqueness: {rate:.17g} ({occ} occurrences)")

    cands = (DATA / "bleu_cand.txt").read_text().splitlines()
    refs = (DATA / "bleu_ref.txt").read_text().splitlines()
    print(f"bleu fixture: {corpus_bleu(cands, refs):.17g}")

    print(f"ascii_1000 mean words: {mean_length(DATA / 'ascii_1000.txt'):.17g}")


if __name__ == "__main__":
    main()
