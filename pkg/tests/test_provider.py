"""Text provider: offline determinism, word caps, HTTP contract."""

from __future__ import annotations

import httpx
import pytest

from snake_story.engine import GameConfig
from snake_story.errors import ProviderProtocol, ProviderUnavailable, UsageError
from snake_story.provider import (
    API_KEY_ENV,
    ENDING_SUFFIX,
    PROMPT_PREFIX,
    ProviderConfig,
    TextOption,
    _complete,
    config_from_env,
    generate_ending,
    generate_options,
    offline_generate,
)
from snake_story.words import count_words

CFG = GameConfig()
OFFLINE = ProviderConfig(offline=True, offline_seed=7)


# -- offline generator ---------------------------------------------------------


def test_offline_generate_is_deterministic():
    a = offline_generate(3, "The snake slept.", 0.6, 30)
    b = offline_generate(3, "The snake slept.", 0.6, 30)
    assert a == b


def test_offline_generate_exact_word_count():
    for limit in (1, 7, 30, 80):
        text = offline_generate(0, "the snake", 1.4, limit)
        assert count_words(text) == limit


def test_offline_generate_varies_with_every_key_component():
    base = offline_generate(1, "the snake", 0.6, 30)
    assert offline_generate(2, "the snake", 0.6, 30) != base
    assert offline_generate(1, "a different tale", 0.6, 30) != base
    assert offline_generate(1, "the snake", 1.4, 30) != base
    assert count_words(offline_generate(1, "the snake", 0.6, 12)) == 12


def test_offline_generate_handles_empty_and_unknown_context():
    assert count_words(offline_generate(0, "", 0.6, 10)) == 10
    assert count_words(offline_generate(0, "zzzyx qqqfw", 0.6, 10)) == 10


def test_offline_generate_validation():
    with pytest.raises(UsageError):
        offline_generate(0, "story", 0.6, 0)
    with pytest.raises(UsageError):
        offline_generate(0, "story", 0.0, 10)


def test_higher_temperature_spreads_vocabulary():
    # The whole point of the two slots: hotter sampling yields more
    # distinct tokens at equal length, on average over many seeds.
    def mean_distinct(temperature: float) -> float:
        totals = 0
        for seed in range(50):
            words = offline_generate(seed, "", temperature, 30).lower().split()
            totals += len(set(words))
        return totals / 50

    assert mean_distinct(1.4) > mean_distinct(0.6) + 1.0


# -- option/config plumbing ----------------------------------------------------


def test_text_option_make_counts_words_and_checks_origin():
    option = TextOption.make("three little words", 0.6, "offline_stub")
    assert option.word_count == 3
    with pytest.raises(UsageError):
        TextOption.make("text", 0.6, "martian")
    with pytest.raises(UsageError):
        TextOption.make("", 0.6, "model")
    player = TextOption.make("", 0.6, "player")  # typed text may start empty
    assert player.word_count == 0


def test_provider_config_validation():
    with pytest.raises(UsageError):
        ProviderConfig(timeout_seconds=0).validate()
    with pytest.raises(UsageError):
        ProviderConfig(retries=-1).validate()
    ProviderConfig().validate()


def test_config_from_env_defaults_to_offline_without_key():
    cfg = config_from_env(env={})
    assert cfg.offline
    cfg = config_from_env(env={API_KEY_ENV: "sk-x"})
    assert not cfg.offline
    cfg = config_from_env(offline=True, env={API_KEY_ENV: "sk-x"})
    assert cfg.offline


def test_config_from_env_reads_base_and_model():
    env = {
        API_KEY_ENV: "sk-x",
        "SNAKE_STORY_API_BASE": "http://localhost:9000/v2",
        "SNAKE_STORY_MODEL": "my-model",
    }
    cfg = config_from_env(env=env)
    assert cfg.base_url == "http://localhost:9000/v2"
    assert cfg.model_name == "my-model"


# -- offline generation APIs -----------------------------------------------------


def test_generate_options_offline_contract():
    low, high = generate_options("The snake set out.", OFFLINE, CFG)
    assert low.temperature == 0.6
    assert high.temperature == 1.4
    assert low.origin == high.origin == "offline_stub"
    assert low.word_count <= 30
    assert high.word_count <= 30
    again = generate_options("The snake set out.", OFFLINE, CFG)
    assert (low.text, high.text) == (again[0].text, again[1].text)


def test_generate_ending_offline_contract():
    ending = generate_ending("The snake went far.", OFFLINE, CFG)
    assert ending.endswith(ENDING_SUFFIX)
    assert count_words(ending) <= CFG.ending_word_limit
    assert generate_ending("The snake went far.", OFFLINE, CFG) == ending


def test_generate_ending_rejects_empty_story():
    with pytest.raises(UsageError):
        generate_ending("   ", OFFLINE, CFG)


def test_offline_mode_makes_zero_network_calls(monkeypatch):
    def explode(*args, **kwargs):
        raise AssertionError("network call attempted in offline mode")

    monkeypatch.setattr(httpx, "post", explode)
    monkeypatch.setattr(httpx, "request", explode, raising=False)
    generate_options("story", OFFLINE, CFG)
    generate_ending("story", OFFLINE, CFG)


# -- HTTP backend ----------------------------------------------------------------


class FakePost:
    """Scripted replacement for httpx.post."""

    def __init__(self, *outcomes):
        self.outcomes = list(outcomes)
        self.calls: list[dict] = []

    def __call__(self, url, json=None, headers=None, timeout=None):
        self.calls.append(
            {"url": url, "json": json, "headers": headers, "timeout": timeout}
        )
        outcome = self.outcomes.pop(0)
        if isinstance(outcome, Exception):
            raise outcome
        return outcome


def ok(text: str) -> httpx.Response:
    return httpx.Response(200, json={"choices": [{"text": text}]})


ONLINE = ProviderConfig(offline=False, retries=1, base_url="http://fake.test/v1")


@pytest.fixture
def api_key(monkeypatch):
    monkeypatch.setenv(API_KEY_ENV, "sk-test")


def test_complete_requires_api_key(monkeypatch):
    monkeypatch.delenv(API_KEY_ENV, raising=False)
    fake = FakePost()
    monkeypatch.setattr(httpx, "post", fake)
    with pytest.raises(ProviderUnavailable):
        _complete(ONLINE, "story", 0.6, 30)
    assert fake.calls == []


def test_complete_success_builds_expected_request(api_key, monkeypatch):
    fake = FakePost(ok("  A generated line.  "))
    monkeypatch.setattr(httpx, "post", fake)
    text = _complete(ONLINE, "Once there was a snake.", 1.4, 30)
    assert text == "A generated line."
    call = fake.calls[0]
    assert call["url"] == "http://fake.test/v1/completions"
    assert call["headers"]["Authorization"] == "Bearer sk-test"
    assert call["timeout"] == 30.0
    body = call["json"]
    assert body["prompt"].startswith(PROMPT_PREFIX)
    assert "Once there was a snake." in body["prompt"]
    assert body["temperature"] == 1.4
    assert body["max_tokens"] > 30


def test_complete_retries_server_errors_then_succeeds(api_key, monkeypatch):
    fake = FakePost(httpx.Response(503), ok("recovered"))
    monkeypatch.setattr(httpx, "post", fake)
    assert _complete(ONLINE, "s", 0.6, 30) == "recovered"
    assert len(fake.calls) == 2


def test_complete_retries_transport_errors(api_key, monkeypatch):
    fake = FakePost(httpx.ConnectError("refused"), ok("recovered"))
    monkeypatch.setattr(httpx, "post", fake)
    assert _complete(ONLINE, "s", 0.6, 30) == "recovered"
    assert len(fake.calls) == 2


def test_complete_gives_up_after_retries(api_key, monkeypatch):
    fake = FakePost(httpx.Response(500), httpx.Response(502))
    monkeypatch.setattr(httpx, "post", fake)
    with pytest.raises(ProviderUnavailable):
        _complete(ONLINE, "s", 0.6, 30)
    assert len(fake.calls) == 2  # retries=1 means two attempts total


def test_complete_client_errors_do_not_retry(api_key, monkeypatch):
    fake = FakePost(httpx.Response(404))
    monkeypatch.setattr(httpx, "post", fake)
    with pytest.raises(ProviderUnavailable):
        _complete(ONLINE, "s", 0.6, 30)
    assert len(fake.calls) == 1


@pytest.mark.parametrize(
    "payload",
    [
        {"not_choices": []},
        {"choices": []},
        {"choices": [{"text": 42}]},
        {"choices": [{"text": "   "}]},
    ],
)
def test_complete_rejects_malformed_responses(api_key, monkeypatch, payload):
    fake = FakePost(httpx.Response(200, json=payload))
    monkeypatch.setattr(httpx, "post", fake)
    with pytest.raises(ProviderProtocol):
        _complete(ONLINE, "s", 0.6, 30)


def test_generate_options_online_clamps_and_tags_origin(api_key, monkeypatch):
    long_text = " ".join(f"w{i}" for i in range(60))
    fake = FakePost(ok(long_text), ok("short and sweet"))
    monkeypatch.setattr(httpx, "post", fake)
    low, high = generate_options("story", ONLINE, CFG)
    assert low.origin == "model"
    assert low.word_count == 30  # clamped to the option limit
    assert high.text == "short and sweet"
    assert [c["json"]["temperature"] for c in fake.calls] == [0.6, 1.4]


def test_generate_ending_online_appends_suffix(api_key, monkeypatch):
    fake = FakePost(ok("The snake finally rested."))
    monkeypatch.setattr(httpx, "post", fake)
    ending = generate_ending("story so far", ONLINE, CFG)
    assert ending == "The snake finally rested" + ENDING_SUFFIX
    assert count_words(ending) <= CFG.ending_word_limit
