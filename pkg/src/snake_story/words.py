"""Whitespace word counting and truncation, shared by the engine and
the text providers so every layer applies the same cap."""

from __future__ import annotations


def count_words(text: str) -> int:
    return len(text.split())


def clamp_words(text: str, limit: int) -> str:
    """Truncate at the last word boundary within ``limit`` words."""
    if limit < 1:
        raise ValueError("limit must be positive")
    words = text.split()
    if len(words) <= limit:
        return text
    return " ".join(words[:limit])
