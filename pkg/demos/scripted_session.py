#!/usr/bin/env python3
"""Play one offline game session end to end and print what happens.

A scripted player chases the most helpful candy it can reach each
turn: it prefers green (extra life) and blue (unlocks self-writing),
settles for white, and only eats black or red when nothing better is
reachable.  After blue unlocks the input field, the player commits its
own continuation, which appears on the board as a yellow candy.

Everything is deterministic: the text provider runs offline from a
seed, and an injected stepping clock stands in for wall time, so the
transcript printed at the end is byte-stable across runs.

Run from the repository root:

    python3 demos/scripted_session.py [seed]
"""

import sys
from datetime import datetime, timedelta

from snake_story import (
    Candy,
    CandyKind,
    GameConfig,
    Phase,
    ProviderConfig,
    SessionStatus,
    SessionVersion,
    SteppingClock,
    TickInput,
    advance_game,
    finalize,
    serialize_session_log,
    shortest_path,
    start_session,
)

GLYPHS = {
    CandyKind.WHITE: "W",
    CandyKind.BLACK: "B",
    CandyKind.RED: "R",
    CandyKind.GREEN: "G",
    CandyKind.BLUE: "U",
    CandyKind.YELLOW: "Y",
}
# Eating order of preference: help first, neutral next, harm last.
APPETITE = [
    CandyKind.GREEN,
    CandyKind.BLUE,
    CandyKind.YELLOW,
    CandyKind.WHITE,
    CandyKind.BLACK,
    CandyKind.RED,
]
MAX_TURNS = 5
SELF_LINE = "The snake curled up under the ferns and listened to the rain."


def render(game) -> str:
    size = game.config.map_size
    grid = [["." for _ in range(size)] for _ in range(size)]
    for pos in game.obstacles:
        grid[pos.y][pos.x] = "#"
    for candy in game.candies:
        grid[candy.position.y][candy.position.x] = GLYPHS[candy.kind]
    for segment in game.snake.body[1:]:
        grid[segment.y][segment.x] = "o"
    head = game.snake.head
    grid[head.y][head.x] = "@"
    return "\n".join("  " + "".join(row) for row in grid)


def pick_target(game) -> Candy | None:
    """The most appetising candy with a clear path to it."""
    for kind in APPETITE:
        for candy in game.candies:
            if candy.kind is kind and not candy.inert:
                if shortest_path(game, candy.position) is not None:
                    return candy
    return None


def snippet(text: str, words: int = 9) -> str:
    parts = text.split()
    tail = " ..." if len(parts) > words else ""
    return " ".join(parts[:words]) + tail


def main() -> None:
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 11
    clock = SteppingClock(datetime(2024, 5, 4, 10, 0, 0), timedelta(milliseconds=400))
    session = start_session(
        SessionVersion.GAME,
        GameConfig(),
        ProviderConfig(offline=True, offline_seed=seed),
        seed=seed,
        clock=clock,
    )
    print(f"seed {seed}: new game, lives={session.game.lives}, "
          f"snake length {len(session.game.snake.body)}")

    wrote_own = False
    ticks = 0
    while session.status is SessionStatus.ACTIVE and ticks < 2000:
        game = session.game
        if game.turn_index >= MAX_TURNS:
            print(f"\nreached the {MAX_TURNS}-turn demo cap; quitting")
            session.abort()
            break

        if game.phase is Phase.PAUSED:
            print(f"\n--- turn {game.turn_index + 1} "
                  f"(lives={game.lives}, obstacles={len(game.obstacles)}) ---")
            for candy in sorted(game.candies, key=lambda c: c.option_slot):
                label = "(own text pending)" if candy.inert else snippet(candy.text)
                print(f"  [{GLYPHS[candy.kind]}] {candy.kind.name.lower():<6} {label}")
            if game.self_write_open and not wrote_own:
                print(f'  typing own line: "{SELF_LINE}"')
                session, _ = advance_game(session, TickInput(self_text=SELF_LINE))
                wrote_own = True
            print(render(game))
            session, _ = advance_game(session, TickInput(end_pause=True))
            continue

        target = pick_target(game)
        if target is None:
            print("\nno candy is reachable any more; quitting")
            session.abort()
            break
        path = shortest_path(game, target.position)
        session, events = advance_game(session, TickInput(steer=path[0]))
        ticks += 1
        for event in events:
            bits = [event.type.value]
            if event.kind is not None:
                bits.append(event.kind.name.lower())
            if event.cause is not None:
                bits.append(event.cause.name.lower())
            if event.count is not None:
                bits.append(f"x{event.count}")
            if event.text is not None:
                bits.append(f'"{snippet(event.text, 6)}"')
            print(f"  * {' '.join(bits)}")

    result = finalize(session)
    print("\n=== result page ===")
    print(f"snake length : {result.snake_length}")
    print(f"story words  : {result.story_word_count}")
    eaten = ", ".join(
        f"{k.name.lower()}={v}" for k, v in sorted(result.candies_eaten.items()) if v
    )
    print(f"candies eaten: {eaten or 'none'}")
    print(f"story        : {snippet(result.full_story, 28)}")

    transcript = serialize_session_log(session.session_log())
    print(f"\ntranscript: {len(transcript.splitlines())} lines, "
          f"{len(transcript.encode('utf-8'))} bytes (byte-stable for this seed)")
    print("first lines:")
    for line in transcript.splitlines()[:4]:
        print(f"  {line}")


if __name__ == "__main__":
    main()
