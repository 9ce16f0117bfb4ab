"""Lexical diversity: HDD, MATTR, MTLD, and VOCD.

Parameter defaults follow the metrics' original publications (42-token HDD
sample, 50-token MATTR window, 0.72 MTLD threshold, VOCD fit on N=35..50
with 100 trials per N); everything is overridable.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from typing import Sequence

from scipy.optimize import minimize_scalar

from .dst import MetricError


class TooShort(MetricError):
    pass


def _require_tokens(tokens: Sequence[str]) -> None:
    if not tokens:
        raise TooShort("need at least one token")


def ttr(tokens: Sequence[str]) -> float:
    _require_tokens(tokens)
    return len(set(tokens)) / len(tokens)


def hdd(tokens: Sequence[str], sample_size: int = 42) -> float:
    """Sum over types of P(type appears in a sample_size draw) / sample_size.

    The probability is hypergeometric: 1 - C(N - n_t, s) / C(N, s).
    """
    _require_tokens(tokens)
    n = len(tokens)
    if n < sample_size:
        raise TooShort(f"hdd needs >= {sample_size} tokens, got {n}")
    denominator = math.comb(n, sample_size)
    total = 0.0
    for count in Counter(tokens).values():
        absent = math.comb(n - count, sample_size) if n - count >= sample_size else 0
        total += (1.0 - absent / denominator) / sample_size
    return total


def mattr(tokens: Sequence[str], window: int = 50) -> float:
    """Mean type-token ratio over all sliding windows; plain TTR for short text."""
    _require_tokens(tokens)
    if window < 1:
        raise ValueError("window must be >= 1")
    n = len(tokens)
    if n <= window:
        return ttr(tokens)
    counts: Counter = Counter(tokens[:window])
    total = len(counts) / window
    for i in range(window, n):
        out_token, in_token = tokens[i - window], tokens[i]
        counts[in_token] += 1
        counts[out_token] -= 1
        if counts[out_token] == 0:
            del counts[out_token]
        total += len(counts) / window
    return total / (n - window + 1)


def _mtld_factors(tokens: Sequence[str], threshold: float) -> float:
    factors = 0.0
    seen: set[str] = set()
    length = 0
    for token in tokens:
        seen.add(token)
        length += 1
        if len(seen) / length <= threshold:
            factors += 1.0
            seen.clear()
            length = 0
    if length:
        segment_ttr = len(seen) / length
        factors += (1.0 - segment_ttr) / (1.0 - threshold)
    return factors


def mtld(tokens: Sequence[str], threshold: float = 0.72) -> float:
    """Token count over the mean of forward and backward factor counts."""
    _require_tokens(tokens)
    forward = _mtld_factors(tokens, threshold)
    backward = _mtld_factors(list(reversed(tokens)), threshold)
    factor_count = (forward + backward) / 2.0
    if factor_count == 0:
        return float(len(tokens))
    return len(tokens) / factor_count


def vocd_curve(
    tokens: Sequence[str],
    n_values: Sequence[int],
    trials: int,
    rng: random.Random,
) -> list[tuple[int, float]]:
    """Empirical mean TTR per sample size, sampling token positions without replacement."""
    curve = []
    positions = range(len(tokens))
    for n in n_values:
        total = 0.0
        for _ in range(trials):
            sample = [tokens[i] for i in rng.sample(positions, n)]
            total += len(set(sample)) / n
        curve.append((n, total / trials))
    return curve


def vocd_model(d: float, n: int) -> float:
    return (d / n) * (math.sqrt(1.0 + 2.0 * n / d) - 1.0)


def vocd(
    tokens: Sequence[str],
    n_values: Sequence[int] = tuple(range(35, 51)),
    trials: int = 100,
    seed: int = 42,
) -> float:
    """D parameter from a least-squares fit of the TTR(N) curve."""
    _require_tokens(tokens)
    n_max = max(n_values)
    if len(tokens) < n_max:
        raise TooShort(f"vocd needs >= {n_max} tokens, got {len(tokens)}")
    curve = vocd_curve(tokens, n_values, trials, random.Random(seed))

    def loss(d: float) -> float:
        return sum((vocd_model(d, n) - t) ** 2 for n, t in curve)

    result = minimize_scalar(loss, bounds=(0.01, 1000.0), method="bounded")
    return float(result.x)
