"""Corpus-level BLEU-4: uniform weights, brevity penalty, no smoothing."""

from __future__ import annotations

import math
import re
from collections import Counter
from typing import Sequence

from .dst import LengthMismatch, MetricError

_TOKEN = re.compile(r"\w+|[^\w\s]")


class EmptyCorpus(MetricError):
    pass


def bleu_tokenize(text: str) -> list[str]:
    """Lowercase, split words and punctuation marks into separate tokens."""
    return _TOKEN.findall(text.lower())


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def corpus_bleu(hyps: Sequence[str], refs: Sequence[str]) -> float:
    """Single-reference corpus BLEU in [0, 100].

    Counts pool over the corpus before the geometric mean, so a zero
    order-n match anywhere zeroes the score only if the whole corpus has
    no order-n overlap.
    """
    if len(hyps) != len(refs):
        raise LengthMismatch(f"{len(hyps)} hypotheses vs {len(refs)} references")
    if not hyps:
        raise EmptyCorpus("need at least one sentence pair")

    clipped = [0] * 4
    totals = [0] * 4
    hyp_len = ref_len = 0
    for hyp, ref in zip(hyps, refs):
        hyp_tokens, ref_tokens = bleu_tokenize(hyp), bleu_tokenize(ref)
        hyp_len += len(hyp_tokens)
        ref_len += len(ref_tokens)
        for n in range(1, 5):
            hyp_grams = _ngrams(hyp_tokens, n)
            ref_grams = _ngrams(ref_tokens, n)
            totals[n - 1] += sum(hyp_grams.values())
            clipped[n - 1] += sum(min(c, ref_grams[g]) for g, c in hyp_grams.items())

    if hyp_len == 0:
        return 0.0
    if any(t == 0 or c == 0 for c, t in zip(clipped, totals)):
        return 0.0
    log_precision = sum(math.log(c / t) for c, t in zip(clipped, totals)) / 4
    brevity = 1.0 if hyp_len > ref_len else math.exp(1 - ref_len / hyp_len)
    return 100.0 * brevity * math.exp(log_precision)
