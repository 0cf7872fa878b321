"""Transcript grammar: parsing, byte-exact serialization, replay."""

from __future__ import annotations

import random
from datetime import datetime, timedelta

import pytest

from conftest import GAME_FIXTURE, NONGAME_FIXTURE
from snake_story.engine import CandyKind
from snake_story.errors import LogParseError, ReplayError
from snake_story.sessionlog import (
    AteCount,
    Chose,
    GameEnd,
    GameStart,
    OptionShown,
    OwnText,
    SessionLog,
    StoryChose,
    StoryOption,
    format_timestamp,
    load_session_log,
    parse_session_log,
    replay,
    save_session_log,
    serialize_session_log,
)

TS = datetime(2023, 3, 6, 19, 29, 47)


# -- timestamp format --------------------------------------------------------


def test_timestamp_format_never_zero_pads_date_or_hour():
    assert format_timestamp(datetime(2023, 3, 6, 19, 29, 47)) == "[3/6/2023 7:29:47 PM]"
    assert format_timestamp(datetime(2023, 11, 21, 9, 5, 3)) == "[11/21/2023 9:05:03 AM]"


def test_timestamp_noon_and_midnight():
    assert format_timestamp(datetime(2023, 1, 2, 0, 0, 0)) == "[1/2/2023 12:00:00 AM]"
    assert format_timestamp(datetime(2023, 1, 2, 12, 0, 0)) == "[1/2/2023 12:00:00 PM]"
    assert format_timestamp(datetime(2023, 1, 2, 23, 59, 59)) == "[1/2/2023 11:59:59 PM]"


def test_timestamp_round_trip_random_datetimes():
    rng = random.Random(42)
    base = datetime(2020, 1, 1)
    for _ in range(300):
        moment = base + timedelta(
            days=rng.randrange(2000), seconds=rng.randrange(86_400)
        )
        text = format_timestamp(moment) + "Game Start\n"
        log = parse_session_log(text)
        assert log.events[0].timestamp == moment


# -- payload grammar ---------------------------------------------------------


def test_parse_each_game_payload_kind():
    text = (
        "[3/6/2023 7:29:47 PM]Game Start\n"
        "[3/6/2023 7:29:50 PM][0][2]A red option text.\n"
        "[3/6/2023 7:29:50 PM][1][4]A blue option text.\n"
        "[3/6/2023 7:30:12 PM]Chose[1][4]\n"
        "[3/6/2023 7:31:00 PM]Game End\n"
        "[3/6/2023 7:31:00 PM]Ate[1]\n"
    )
    log = parse_session_log(text)
    kinds = [type(e) for e in log.events]
    assert kinds == [GameStart, OptionShown, OptionShown, Chose, GameEnd, AteCount]
    shown = log.events[1]
    assert (shown.slot, shown.kind, shown.text) == (0, 2, "A red option text.")
    chose = log.events[3]
    assert (chose.slot, chose.kind) == (1, 4)
    assert log.events[5].count == 1


def test_parse_each_nongame_payload_kind():
    text = (
        "[3/7/2023 1:02:03 PM][0.6]Calm continuation.\n"
        "[3/7/2023 1:02:03 PM][1.4]Wild continuation.\n"
        "[3/7/2023 1:02:30 PM][Chose][1.4]\n"
        "[3/7/2023 1:03:00 PM][Add Own Text]My own line.\n"
        "[3/7/2023 1:04:00 PM]Game End\n"
    )
    log = parse_session_log(text)
    kinds = [type(e) for e in log.events]
    assert kinds == [StoryOption, StoryOption, StoryChose, OwnText, GameEnd]
    assert log.events[0].temperature == 0.6
    assert log.events[2].temperature == 1.4
    assert log.events[3].text == "My own line."


def test_multiline_payload_with_internal_blank_lines():
    text = (
        "[3/6/2023 7:29:47 PM][0][0]First paragraph,\n"
        "\n"
        "second paragraph after a gap.\n"
        "[3/6/2023 7:29:48 PM]Game End\n"
    )
    log = parse_session_log(text)
    shown = log.events[0]
    assert shown.text == "First paragraph,\n\nsecond paragraph after a gap."
    assert shown.blanks_after == 0
    assert serialize_session_log(log) == text


def test_trailing_blank_lines_become_blanks_after():
    text = (
        "[3/6/2023 7:29:47 PM][0][0]Some text.\n"
        "\n"
        "\n"
        "[3/6/2023 7:29:48 PM]Game End\n"
    )
    log = parse_session_log(text)
    assert log.events[0].blanks_after == 2
    assert serialize_session_log(log) == text


def test_empty_option_text_round_trips():
    # An uncommitted self-written slot logs as a bare [2][5] line.
    text = (
        "[3/6/2023 7:29:47 PM][2][5]\n"
        "\n"
        "[3/6/2023 7:29:48 PM]Game End\n"
    )
    log = parse_session_log(text)
    shown = log.events[0]
    assert (shown.slot, shown.kind, shown.text) == (2, 5, "")
    assert shown.blanks_after == 1
    assert serialize_session_log(log) == text


def test_missing_trailing_newline_is_preserved():
    text = "[3/6/2023 7:29:47 PM]Game Start"
    log = parse_session_log(text)
    assert not log.trailing_newline
    assert serialize_session_log(log) == text


def test_parse_errors_carry_line_numbers():
    with pytest.raises(LogParseError) as exc:
        parse_session_log("no timestamp here\n")
    assert exc.value.line_number == 1
    with pytest.raises(LogParseError) as exc:
        parse_session_log("\n[3/6/2023 7:29:47 PM]Game Start\n")
    assert exc.value.line_number == 1
    with pytest.raises(LogParseError) as exc:
        parse_session_log(
            "[3/6/2023 7:29:47 PM]Game Start\n[3/6/2023 7:29:48 PM]Banana[3]\n"
        )
    assert exc.value.line_number == 2
    with pytest.raises(LogParseError):
        parse_session_log("")


# -- fixtures ----------------------------------------------------------------


def test_game_fixture_parses_and_round_trips(game_fixture_text):
    log = parse_session_log(game_fixture_text)
    assert isinstance(log.events[0], GameStart)
    assert serialize_session_log(log) == game_fixture_text


def test_nongame_fixture_parses_and_round_trips(nongame_fixture_text):
    log = parse_session_log(nongame_fixture_text)
    assert serialize_session_log(log) == nongame_fixture_text


def test_game_fixture_replay_counts(game_fixture_text):
    log = parse_session_log(game_fixture_text)
    chose = [e for e in log.events if isinstance(e, Chose)]
    assert len(chose) == 14
    replayed = replay(log)
    assert replayed.is_game
    assert replayed.declared_eaten == 14
    assert sum(replayed.eaten_counts.values()) == 14
    assert len(replayed.fragments) == 14
    assert replayed.story  # non-empty prose


def test_nongame_fixture_replay_counts(nongame_fixture_text):
    replayed = replay(parse_session_log(nongame_fixture_text))
    assert not replayed.is_game
    assert replayed.chosen_temperatures.count(0.6) == 3
    assert replayed.chosen_temperatures.count(1.4) == 10
    assert replayed.own_text_count == 3
    assert len(replayed.fragments) == 16  # 13 choices + 3 own texts


def test_save_and_load_round_trip(tmp_path, game_fixture_text):
    log = parse_session_log(game_fixture_text)
    path = tmp_path / "copy.log"
    save_session_log(log, path)
    assert path.read_bytes().decode("utf-8") == game_fixture_text
    assert load_session_log(path) == log


# -- replay validation -------------------------------------------------------


def _ts(offset: int) -> datetime:
    return TS + timedelta(seconds=offset)


def test_replay_rejects_mixed_versions():
    log = SessionLog(
        events=(
            OptionShown(_ts(0), slot=0, kind=0, text="x"),
            StoryOption(_ts(1), temperature=0.6, text="y"),
        )
    )
    with pytest.raises(ReplayError):
        replay(log)


def test_replay_rejects_chose_without_shown_option():
    log = SessionLog(events=(GameStart(_ts(0)), Chose(_ts(1), slot=0, kind=0)))
    with pytest.raises(ReplayError):
        replay(log)


def test_replay_rejects_kind_mismatch():
    log = SessionLog(
        events=(
            OptionShown(_ts(0), slot=0, kind=2, text="x"),
            Chose(_ts(1), slot=0, kind=3),
        )
    )
    with pytest.raises(ReplayError):
        replay(log)


def test_replay_rejects_wrong_ate_count():
    log = SessionLog(
        events=(
            OptionShown(_ts(0), slot=0, kind=0, text="x"),
            Chose(_ts(1), slot=0, kind=0),
            AteCount(_ts(2), count=5),
        )
    )
    with pytest.raises(ReplayError):
        replay(log)


def test_replay_rejects_choice_free_transcripts():
    log = SessionLog(events=(GameStart(_ts(0)), GameEnd(_ts(1))))
    with pytest.raises(ReplayError):
        replay(log)


def test_replay_accepts_shown_but_unchosen_final_options():
    # A session can end with options on screen that were never taken.
    log = SessionLog(
        events=(
            OptionShown(_ts(0), slot=0, kind=0, text="first"),
            OptionShown(_ts(0), slot=1, kind=3, text="second"),
            Chose(_ts(1), slot=1, kind=3),
            OptionShown(_ts(2), slot=0, kind=1, text="third"),
            OptionShown(_ts(2), slot=1, kind=4, text="fourth"),
            GameEnd(_ts(3)),
            AteCount(_ts(3), count=1),
        )
    )
    replayed = replay(log)
    assert replayed.fragments == ("second",)
    assert replayed.eaten_counts == {CandyKind.GREEN: 1}


def test_replay_rejects_chose_for_unshown_temperature():
    log = SessionLog(
        events=(
            StoryOption(_ts(0), temperature=0.6, text="calm"),
            StoryChose(_ts(1), temperature=1.4),
        )
    )
    with pytest.raises(ReplayError):
        replay(log)


def test_replay_tracks_choice_trail_through_self_written_text():
    log = SessionLog(
        events=(
            StoryOption(_ts(0), temperature=0.6, text="calm"),
            StoryOption(_ts(0), temperature=1.4, text="wild"),
            OwnText(_ts(1), text="my own words"),
            StoryOption(_ts(2), temperature=0.6, text="calm2"),
            StoryOption(_ts(2), temperature=1.4, text="wild2"),
            StoryChose(_ts(3), temperature=0.6),
            GameEnd(_ts(4)),
        )
    )
    replayed = replay(log)
    assert replayed.fragments == ("my own words", "calm2")
    assert replayed.own_text_count == 1
    assert replayed.chosen_temperatures == (0.6,)
