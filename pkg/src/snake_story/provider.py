"""Text generation: two temperature-contrasted continuations per turn
plus the story ending.

Two backends share one interface:

* an OpenAI-compatible completions endpoint over HTTP, selected when
  an API key is configured, and
* a seeded offline generator (a tiny Markov chain over an embedded
  corpus) used for tests, simulations, and keyless play.

The offline generator is a pure function of ``(seed, story,
temperature, limit)``: the RNG is seeded from a hash of exactly those
arguments, so repeat calls are identical and the temperature visibly
changes sampling spread (low temperature sharpens the successor
distribution, high temperature flattens it).
"""

from __future__ import annotations

import hashlib
import os
import random
import threading
from dataclasses import dataclass
from functools import lru_cache

import httpx

from .engine import GameConfig
from .errors import ProviderProtocol, ProviderUnavailable, UsageError
from .words import clamp_words, count_words

PROMPT_PREFIX = "writing a story of a snake"
ENDING_SUFFIX = ", and the story of the snake ends"

API_KEY_ENV = "SNAKE_STORY_API_KEY"
API_BASE_ENV = "SNAKE_STORY_API_BASE"
MODEL_ENV = "SNAKE_STORY_MODEL"
DEFAULT_API_BASE = "https://api.openai.com/v1"
DEFAULT_MODEL = "gpt-3.5-turbo-instruct"

# Words-to-tokens headroom for the completion request; the word cap is
# enforced locally after the response arrives.
_TOKENS_PER_WORD = 2.2

_ORIGINS = ("model", "offline_stub", "player")


@dataclass(frozen=True)
class TextOption:
    text: str
    temperature: float
    word_count: int
    origin: str  # "model" | "offline_stub" | "player"

    @classmethod
    def make(cls, text: str, temperature: float, origin: str) -> "TextOption":
        if origin not in _ORIGINS:
            raise UsageError(f"unknown origin {origin!r}")
        if not text and origin != "player":
            raise UsageError("generated option text must be non-empty")
        return cls(
            text=text,
            temperature=temperature,
            word_count=count_words(text),
            origin=origin,
        )


@dataclass(frozen=True)
class ProviderConfig:
    base_url: str = DEFAULT_API_BASE
    model_name: str = DEFAULT_MODEL
    api_key_env: str = API_KEY_ENV
    timeout_seconds: float = 30.0
    retries: int = 1
    offline: bool = True
    offline_seed: int = 0

    def validate(self) -> None:
        if self.timeout_seconds <= 0:
            raise UsageError("timeout_seconds must be positive")
        if self.retries < 0:
            raise UsageError("retries must be non-negative")


def config_from_env(
    offline: bool | None = None, offline_seed: int = 0, env=os.environ
) -> ProviderConfig:
    """Build a provider config from the environment.

    Without an API key in the environment the provider runs offline;
    pass ``offline=False`` to insist on the HTTP backend (calls will
    then fail until the key is set).
    """
    if offline is None:
        offline = not env.get(API_KEY_ENV)
    return ProviderConfig(
        base_url=env.get(API_BASE_ENV, DEFAULT_API_BASE),
        model_name=env.get(MODEL_ENV, DEFAULT_MODEL),
        offline=offline,
        offline_seed=offline_seed,
    )


# ---------------------------------------------------------------------------
# Offline generator

# Original filler prose; the chain only needs plausible snake-story
# vocabulary with a skewed successor distribution.
_CORPUS = """
The snake woke beneath a warm stone and tasted the morning air with a
flick of its tongue. The snake was small and green and very patient.
Every day the snake slid through the tall grass toward the river,
hoping to find something sweet to eat. One morning the snake found a
strange candy lying on the sand, bright as a berry and twice as
tempting. The snake swallowed the candy whole and felt its body grow a
little longer. A crow watched from the fence and laughed at the
greedy snake. The snake ignored the crow and kept moving toward the
orchard, where apples fell like slow rain. Inside the orchard the
snake met a hedgehog who collected lost buttons and old coins. The
hedgehog warned the snake about the stone wall and the holes hidden
under the leaves. The snake thanked the hedgehog and slid carefully
around the wall, counting its own scales to stay calm. Night came and
the snake curled under a root, dreaming of candies in every color it
had ever seen. In the dream the snake grew long enough to circle the
whole garden twice. When the snake woke, the garden was white with
frost and very quiet. The snake pressed on anyway, because a promise
of sweetness is a hard thing to forget. By the gate the snake found
another candy, dark as river mud, and hesitated for a long breath.
The dark candy smelled of storms, so the snake buried it and chose
the pale one beside it instead. Far away a bell rang, and the snake
felt brave and strange and new. The snake wrote its own small song in
the dust with the tip of its tail. The song said that every tail has
an end but a good story winds on. Spring returned and the river rose,
carrying petals past the patient snake. The snake counted the petals
until counting felt like sleep. A child left sugar cubes on the path,
and the snake pushed them politely aside, wanting only the true candy
of its dream. Somewhere beyond the orchard the snake heard the low
hum of bees building a sweeter city. The snake followed the hum over
the hill and saw a field of flowers shaped like little lanterns. It
rested there, long and content, while the wind read the grass aloud.
The snake decided the field would make a fine home for a storyteller.
So the snake stayed, and travelers said the grass itself whispered
adventures. Seasons turned like slow wheels, and still the snake
gathered candies, colors, and quiet friends. Each candy taught the
snake a different word for hunger and a different word for hope. The
snake kept every word coiled in its long memory like rings of a tree.
"""

_PUNCT_STRIP = ".,;:!?\"'()"


def _chain_key(word: str) -> str:
    return word.strip(_PUNCT_STRIP).lower()


@lru_cache(maxsize=1)
def _chain() -> tuple[dict[str, tuple[tuple[str, int], ...]], tuple[str, ...]]:
    tokens = _CORPUS.split()
    counts: dict[str, dict[str, int]] = {}
    for current, nxt in zip(tokens, tokens[1:] + tokens[:1]):
        successors = counts.setdefault(_chain_key(current), {})
        successors[nxt] = successors.get(nxt, 0) + 1
    table = {
        key: tuple(sorted(successors.items()))
        for key, successors in counts.items()
    }
    starts = tuple(
        sorted(
            {
                _chain_key(nxt)
                for current, nxt in zip(tokens, tokens[1:])
                if current.endswith((".", "!", "?"))
            }
        )
    )
    return table, starts


def offline_generate(seed: int, story: str, temperature: float, limit: int) -> str:
    """Deterministic stand-in text, exactly ``limit`` words long.

    Successor weights are bigram counts raised to ``1 / temperature``,
    so higher temperatures sample the rare successors more often and
    produce more varied text at equal length.
    """
    if limit < 1:
        raise UsageError("limit must be positive")
    if temperature <= 0:
        raise UsageError("temperature must be positive")
    table, starts = _chain()
    material = f"{seed}|{temperature}|{limit}|{story}".encode("utf-8")
    rng = random.Random(int.from_bytes(hashlib.sha256(material).digest()[:8], "big"))

    tail = story.split()
    key = _chain_key(tail[-1]) if tail else ""
    if key not in table:
        key = starts[rng.randrange(len(starts))]

    exponent = 1.0 / temperature
    words: list[str] = []
    while len(words) < limit:
        successors = table[key]
        weights = [count**exponent for _, count in successors]
        word = rng.choices([w for w, _ in successors], weights=weights)[0]
        words.append(word)
        key = _chain_key(word)
        if key not in table:
            key = starts[rng.randrange(len(starts))]
    return " ".join(words)


# ---------------------------------------------------------------------------
# HTTP backend

# One completion call at a time: local sessions share rate limits.
_HTTP_LOCK = threading.Lock()


def _complete(
    config: ProviderConfig, story: str, temperature: float, word_limit: int
) -> str:
    api_key = os.environ.get(config.api_key_env, "")
    if not api_key:
        raise ProviderUnavailable(
            f"environment variable {config.api_key_env} is not set"
        )
    prompt = f"{PROMPT_PREFIX}\n\n{story}"
    payload = {
        "model": config.model_name,
        "prompt": prompt,
        "max_tokens": int(word_limit * _TOKENS_PER_WORD) + 8,
        "temperature": temperature,
        "n": 1,
    }
    url = config.base_url.rstrip("/") + "/completions"
    headers = {"Authorization": f"Bearer {api_key}"}
    last_error: Exception | None = None
    for _ in range(config.retries + 1):
        try:
            with _HTTP_LOCK:
                response = httpx.post(
                    url, json=payload, headers=headers, timeout=config.timeout_seconds
                )
        except httpx.HTTPError as exc:
            last_error = exc
            continue
        if response.status_code >= 500:
            last_error = ProviderUnavailable(
                f"completion endpoint returned {response.status_code}"
            )
            continue
        if response.status_code != 200:
            raise ProviderUnavailable(
                f"completion endpoint returned {response.status_code}"
            )
        try:
            data = response.json()
            text = data["choices"][0]["text"]
        except (ValueError, LookupError, TypeError) as exc:
            raise ProviderProtocol(f"malformed completion response: {exc}") from exc
        if not isinstance(text, str) or not text.strip():
            raise ProviderProtocol("completion response carried no text")
        return text.strip()
    raise ProviderUnavailable(f"completion request failed: {last_error}")


def _generate(
    config: ProviderConfig, story: str, temperature: float, limit: int
) -> tuple[str, str]:
    if config.offline:
        return offline_generate(config.offline_seed, story, temperature, limit), (
            "offline_stub"
        )
    return clamp_words(_complete(config, story, temperature, limit), limit), "model"


def generate_options(
    story_so_far: str, config: ProviderConfig, game_config: GameConfig
) -> tuple[TextOption, TextOption]:
    """The turn's two continuations: slot 0 low temperature, slot 1 high."""
    config.validate()
    limit = game_config.option_word_limit
    low_text, origin = _generate(config, story_so_far, game_config.temperature_low, limit)
    high_text, _ = _generate(config, story_so_far, game_config.temperature_high, limit)
    return (
        TextOption.make(low_text, game_config.temperature_low, origin),
        TextOption.make(high_text, game_config.temperature_high, origin),
    )


def generate_ending(
    story: str, config: ProviderConfig, game_config: GameConfig
) -> str:
    """Close the story: at most ``ending_word_limit`` words, always
    terminating with the exact predefined suffix."""
    config.validate()
    if not story.strip():
        raise UsageError("cannot end an empty story")
    limit = game_config.ending_word_limit
    suffix_words = count_words(ENDING_SUFFIX)
    raw, _ = _generate(config, story, game_config.temperature_low, limit)
    clamped = clamp_words(raw, limit)
    if clamped.endswith(ENDING_SUFFIX):
        return clamped
    body = clamp_words(raw, max(1, limit - suffix_words)).rstrip(" .,;:!?")
    return body + ENDING_SUFFIX
