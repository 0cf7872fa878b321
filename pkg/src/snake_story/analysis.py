"""Text and outcome statistics for finished sessions.

The three public measures:

* :func:`mtld` — lexical diversity as mean length of token runs that
  keep their type-token ratio above a threshold (bidirectional).
* :func:`sentence_overlap` — how much each sentence re-uses the
  content words of the one before it.
* :func:`wilcoxon_signed_rank` — paired two-sided signed-rank test,
  exact for small samples, normal approximation beyond that.

Tokenization is deliberately simple (lowercased alphanumeric runs,
apostrophes kept) so results are reproducible without external models.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import AllZeroError, UsageError

MTLD_THRESHOLD = 0.72
MIN_MTLD_TOKENS = 10
EXACT_WILCOXON_LIMIT = 25

# Content-word filtering for sentence overlap.  Versioned so scores
# stay comparable across releases; bump the version when editing.
STOPWORDS_VERSION = 1
STOPWORDS_V1 = frozenset(
    """
    a about above after again against all am an and any are as at be
    been being below between both but by can did do does doing down
    during each few for from further had has have having he her here
    hers herself him himself his how i if in into is it its itself
    just me more most my myself no nor not now of off on once only or
    other our ours ourselves out over own same she should so some such
    than that the their theirs them themselves then there these they
    this those through to too under until up very was we were what
    when where which while who whom why will with you your yours
    yourself yourselves
    """.split()
)

_TOKEN_RE = re.compile(r"[a-z0-9']+")
_SENTENCE_SPLIT_RE = re.compile(r"(?<=[.!?])\s+")


def tokenize(text: str) -> list[str]:
    """Lowercased alphanumeric tokens, apostrophes kept."""
    return _TOKEN_RE.findall(text.lower())


def _strip_morphology(token: str) -> str:
    """Fold possessives and simple plurals onto their base form."""
    if token.endswith("'s"):
        token = token[:-2]
    token = token.rstrip("'")
    if len(token) > 3 and token.endswith("s") and not token.endswith("ss"):
        token = token[:-1]
    return token


def content_tokens(sentence: str) -> set[str]:
    """The normalized non-stopword token set of one sentence."""
    return {
        _strip_morphology(tok)
        for tok in tokenize(sentence)
        if tok not in STOPWORDS_V1
    }


def split_sentences(text: str) -> list[str]:
    parts = _SENTENCE_SPLIT_RE.split(text.strip())
    return [p for p in parts if p.strip()]


def _factor_count(tokens: Sequence[str], threshold: float) -> float:
    factors = 0.0
    seen: set[str] = set()
    run = 0
    for token in tokens:
        run += 1
        seen.add(token)
        if len(seen) / run < threshold:
            factors += 1.0
            seen.clear()
            run = 0
    if run > 0:
        ttr = len(seen) / run
        factors += (1.0 - ttr) / (1.0 - threshold)
    return factors


def mtld(tokens: Sequence[str], threshold: float = MTLD_THRESHOLD) -> float:
    """Measure of textual lexical diversity (bidirectional).

    Walks the token stream keeping a running type-token ratio; every
    time the ratio falls below ``threshold`` a full factor is counted
    (the triggering token included) and the walk resets.  A trailing
    partial factor of ``(1 - TTR) / (1 - threshold)`` covers the
    remainder.  The measure is the token count divided by the factor
    count, averaged over the forward and backward passes.

    Parameters
    ----------
    tokens : sequence of str
        The token stream, already normalized.
    threshold : float, optional
        Type-token ratio at which a factor completes.  The
        conventional value is 0.72.

    Returns
    -------
    float
        The diversity measure.  Degenerate streams — fewer than 10
        tokens, or so diverse that no pass completes a single factor —
        fall back to the raw token count, which callers should treat
        as "too short to measure" rather than as a diversity value.
    """
    if not 0.0 < threshold < 1.0:
        raise UsageError("threshold must be strictly between 0 and 1")
    tokens = list(tokens)
    n = len(tokens)
    if n < MIN_MTLD_TOKENS:
        return float(n)
    forward = _factor_count(tokens, threshold)
    backward = _factor_count(tokens[::-1], threshold)
    if forward == 0.0 or backward == 0.0:
        return float(n)
    return (n / forward + n / backward) / 2.0


def sentence_overlap(text: str) -> float:
    """Mean content-word carry-over between adjacent sentences.

    For each adjacent sentence pair the score is the fraction of the
    *later* sentence's content words (stopwords removed, possessives
    and simple plurals folded) that already appeared in the earlier
    sentence.  A later sentence with no content words scores 0 for its
    pair.

    Parameters
    ----------
    text : str
        Prose to score; sentences are split on ``.``, ``!`` or ``?``
        followed by whitespace.

    Returns
    -------
    float
        Mean pair score in [0, 1]; 0.0 when the text has fewer than
        two sentences.
    """
    sentences = split_sentences(text)
    if len(sentences) < 2:
        return 0.0
    sets = [content_tokens(s) for s in sentences]
    scores = []
    for earlier, later in zip(sets, sets[1:]):
        if not later:
            scores.append(0.0)
        else:
            scores.append(len(earlier & later) / len(later))
    return float(np.mean(scores))


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float  # min of the signed rank sums
    p_value: float  # two-sided
    n_effective: int  # pairs left after dropping zero differences
    method: str  # "exact" or "normal"
    rank_sum_positive: float
    rank_sum_negative: float


def _average_ranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=float)
    sorted_values = values[order]
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and sorted_values[j + 1] == sorted_values[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def _exact_p(doubled_ranks: list[int], doubled_statistic: int, n: int) -> float:
    # Distribution of the positive rank sum over all 2^n sign
    # assignments, tabulated in doubled units so tied (half-integer)
    # ranks stay exact.
    total = sum(doubled_ranks)
    counts = [0] * (total + 1)
    counts[0] = 1
    for d in doubled_ranks:
        for s in range(total - d, -1, -1):
            if counts[s]:
                counts[s + d] += counts[s]
    at_most = sum(counts[: doubled_statistic + 1])
    return min(1.0, 2.0 * at_most / (2.0**n))


def wilcoxon_signed_rank(
    x: Sequence[float],
    y: Optional[Sequence[float]] = None,
    *,
    method: str = "auto",
) -> WilcoxonResult:
    """Two-sided Wilcoxon signed-rank test for paired samples.

    Zero differences are dropped; ties among the remaining absolute
    differences receive their average rank.  The statistic is the
    smaller of the positive and negative rank sums.

    Parameters
    ----------
    x, y : sequences of float
        Paired observations; pass precomputed differences as ``x``
        alone.
    method : {"auto", "exact", "normal"}, optional
        ``"auto"`` enumerates the exact null distribution when at most
        25 nonzero differences remain and otherwise uses the normal
        approximation with continuity and tie corrections.

    Returns
    -------
    WilcoxonResult
        Statistic, two-sided p-value, effective sample size, and the
        method actually used.
    """
    if method not in ("auto", "exact", "normal"):
        raise UsageError(f"unknown method {method!r}")
    diffs = np.asarray(x, dtype=float)
    if y is not None:
        other = np.asarray(y, dtype=float)
        if diffs.shape != other.shape:
            raise UsageError("paired samples must have equal length")
        diffs = diffs - other
    diffs = diffs[diffs != 0.0]
    n = len(diffs)
    if n == 0:
        raise AllZeroError("all paired differences are zero")

    ranks = _average_ranks(np.abs(diffs))
    w_plus = float(ranks[diffs > 0].sum())
    w_minus = float(ranks[diffs < 0].sum())
    statistic = min(w_plus, w_minus)

    if method == "exact" or (method == "auto" and n <= EXACT_WILCOXON_LIMIT):
        doubled = [int(round(2.0 * r)) for r in ranks]
        p = _exact_p(doubled, int(round(2.0 * statistic)), n)
        used = "exact"
    else:
        mu = n * (n + 1) / 4.0
        variance = n * (n + 1) * (2 * n + 1) / 24.0
        _, tie_counts = np.unique(np.abs(diffs), return_counts=True)
        variance -= float(((tie_counts**3 - tie_counts) / 48.0).sum())
        if variance <= 0.0:
            raise AllZeroError("all absolute differences are tied at one value")
        z = (statistic - mu + 0.5) / math.sqrt(variance)
        p = min(1.0, math.erfc(-z / math.sqrt(2.0)))
        used = "normal"
    return WilcoxonResult(
        statistic=statistic,
        p_value=p,
        n_effective=n,
        method=used,
        rank_sum_positive=w_plus,
        rank_sum_negative=w_minus,
    )


@dataclass(frozen=True)
class StoryMetrics:
    word_count: int
    mtld: float
    sentence_overlap: float


def story_metrics(text: str) -> StoryMetrics:
    """Bundle the per-story measures used when comparing sessions."""
    tokens = tokenize(text)
    return StoryMetrics(
        word_count=len(tokens),
        mtld=mtld(tokens),
        sentence_overlap=sentence_overlap(text),
    )
