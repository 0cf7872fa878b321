#!/usr/bin/env python3
"""Walk through two recorded play sessions and score the stories.

This demo loads the bundled sample transcripts (one game session, one
non-game session), replays each one into the story it produced, and
prints the choice statistics and lexical metrics that the analysis
toolkit computes.  It ends by confirming the parse/serialize round
trip is byte-exact, which is what makes transcripts safe to archive.

Run from the repository root:

    python3 demos/analyze_transcripts.py
"""

from pathlib import Path

from snake_story import (
    load_session_log,
    replay,
    serialize_session_log,
    story_metrics,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def describe(name: str, path: Path) -> None:
    print(f"=== {name} ===")
    log = load_session_log(path)
    print(f"events parsed     : {len(log.events)}")

    session = replay(log)
    print(f"session type      : {'game' if session.is_game else 'non-game'}")
    print(f"story fragments   : {len(session.fragments)}")

    if session.is_game:
        # Game transcripts record which candy kind carried each chosen
        # fragment, plus a final declared eaten-count line.
        kinds = ", ".join(
            f"{kind.name.lower()}={count}"
            for kind, count in sorted(session.eaten_counts.items())
        )
        print(f"candies eaten     : {session.declared_eaten} ({kinds})")
    else:
        # Non-game transcripts record the sampling temperature of each
        # chosen option; self-written turns carry no temperature.
        temps: dict[float, int] = {}
        for t in session.chosen_temperatures:
            temps[t] = temps.get(t, 0) + 1
        tally = ", ".join(f"T={t}: {n}" for t, n in sorted(temps.items()))
        print(f"chosen options    : {tally}")
        print(f"self-written turns: {session.own_text_count}")

    metrics = story_metrics(session.story)
    print(f"story word count  : {metrics.word_count}")
    print(f"lexical diversity : {metrics.mtld:.2f} (MTLD)")
    print(f"sentence overlap  : {metrics.sentence_overlap:.3f}")

    opening = " ".join(session.story.split()[:18])
    print(f'opening           : "{opening} ..."')

    # The serializer reproduces the original file byte for byte, so a
    # parsed transcript can always be written back without drift.
    round_trip = serialize_session_log(log).encode("utf-8")
    assert round_trip == path.read_bytes(), "round trip must be byte-exact"
    print("round trip        : byte-identical")
    print()


def main() -> None:
    describe("game session", FIXTURES / "sample_game_session.log")
    describe("non-game session", FIXTURES / "sample_nongame_session.log")


if __name__ == "__main__":
    main()
