"""Command line front door.

Subcommands: ``analyze`` (transcript statistics), ``simulate``
(scripted-player runs), ``serve`` (local HTTP+WebSocket service), and
``play`` (offline play in the terminal, scripted or interactive).
The library modules carry the behavior; this layer only parses
arguments and formats output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from . import analysis, orchestrator, policysim, sessionlog
from .engine import CandyKind, Direction, EventType, GameConfig, Phase
from .errors import SnakeStoryError
from .orchestrator import Choice, SessionVersion, TickInput
from .provider import ProviderConfig

_KIND_GLYPH = {
    CandyKind.WHITE: "W",
    CandyKind.BLACK: "B",
    CandyKind.RED: "R",
    CandyKind.GREEN: "G",
    CandyKind.BLUE: "U",
    CandyKind.YELLOW: "Y",
}


def _analyze_one(path: str) -> dict:
    log = sessionlog.load_session_log(path)
    replayed = sessionlog.replay(log)
    metrics = analysis.story_metrics(replayed.story)
    report: dict = {
        "path": path,
        "is_game": replayed.is_game,
        "fragments": len(replayed.fragments),
        "word_count": metrics.word_count,
        "mtld": metrics.mtld,
        "sentence_overlap": metrics.sentence_overlap,
    }
    if replayed.is_game:
        report["eaten"] = {k.name.lower(): v for k, v in replayed.eaten_counts.items()}
        report["shown"] = {
            k.name.lower(): v for k, v in sorted(replayed.shown_kind_counts.items())
        }
        report["declared_eaten"] = replayed.declared_eaten
    else:
        report["chosen_temperatures"] = {
            str(t): replayed.chosen_temperatures.count(t)
            for t in sorted(set(replayed.chosen_temperatures))
        }
        report["own_texts"] = replayed.own_text_count
    return report


def _cmd_analyze(args: argparse.Namespace) -> int:
    reports = [_analyze_one(path) for path in args.logs]
    if args.format == "json":
        print(json.dumps(reports, indent=2))
        return 0
    for report in reports:
        print(f"{report['path']}")
        print(f"  version:          {'game' if report['is_game'] else 'non-game'}")
        print(f"  fragments:        {report['fragments']}")
        print(f"  words:            {report['word_count']}")
        print(f"  mtld:             {report['mtld']:.2f}")
        print(f"  sentence overlap: {report['sentence_overlap']:.3f}")
        if report["is_game"]:
            eaten = ", ".join(f"{k}={v}" for k, v in report["eaten"].items())
            print(f"  candies eaten:    {eaten or 'none'}")
        else:
            chosen = ", ".join(
                f"T={k}:{v}" for k, v in report["chosen_temperatures"].items()
            )
            print(f"  choices:          {chosen or 'none'}; own={report['own_texts']}")
    return 0


def _sim_report(result: policysim.SimResult) -> dict:
    return {
        "policy": result.policy,
        "sessions": result.sessions,
        "turns_played": result.turns_played,
        "pool1_share": result.pool1_share,
        "lifespan_turns": result.lifespan_turns,
        "candy_selection_rates": {
            k.name.lower(): v for k, v in sorted(result.candy_selection_rates.items())
        },
        "selected": {k.name.lower(): v for k, v in sorted(result.selected_counts.items())},
        "generated": {
            k.name.lower(): v for k, v in sorted(result.generated_counts.items())
        },
        "fallbacks": result.fallback_count,
    }


def _cmd_simulate(args: argparse.Namespace) -> int:
    policy = policysim.make_policy(args.policy, args.weight)
    if args.compare:
        other = policysim.make_policy(args.compare, args.weight)
        comparison = policysim.compare_policies(
            policy, other, seeds=range(args.seed, args.seed + args.sessions)
        )
        report = {
            "policy_a": _sim_report(
                policysim.run_policy(policy, seed=args.seed, sessions=args.sessions)
            ),
            "policy_b": _sim_report(
                policysim.run_policy(other, seed=args.seed, sessions=args.sessions)
            ),
            "wilcoxon": {
                "statistic": comparison.wilcoxon.statistic,
                "p_value": comparison.wilcoxon.p_value,
                "n_effective": comparison.wilcoxon.n_effective,
                "method": comparison.wilcoxon.method,
            },
        }
        if args.format == "json":
            print(json.dumps(report, indent=2))
        else:
            a, b = report["policy_a"], report["policy_b"]
            w = report["wilcoxon"]
            print(f"{a['policy']}: pool1_share={a['pool1_share']:.3f}")
            print(f"{b['policy']}: pool1_share={b['pool1_share']:.3f}")
            print(
                f"wilcoxon: W={w['statistic']} p={w['p_value']:.3g} "
                f"(n={w['n_effective']}, {w['method']})"
            )
        return 0
    result = policysim.run_policy(policy, seed=args.seed, sessions=args.sessions)
    report = _sim_report(result)
    if args.format == "json":
        print(json.dumps(report, indent=2))
    else:
        print(f"policy:        {report['policy']}")
        print(f"sessions:      {report['sessions']}")
        print(f"turns played:  {report['turns_played']}")
        print(f"pool-1 share:  {report['pool1_share']:.3f}")
        print(f"mean lifespan: {report['lifespan_turns']:.1f} turns")
        rates = ", ".join(f"{k}={v:.0%}" for k, v in report["candy_selection_rates"].items())
        print(f"selection:     {rates or 'none'}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    from . import service

    ui_dir = args.ui_dir
    if ui_dir is None and Path("frontend/dist").is_dir():
        ui_dir = "frontend/dist"  # repository-checkout convenience
    service.run(
        host=args.host,
        port=args.port,
        log_dir=args.log_dir,
        force_offline=args.offline,
        ui_dir=ui_dir,
    )
    return 0


def _render_board(session: orchestrator.Session) -> str:
    game = session.game
    assert game is not None
    size = game.config.map_size
    grid = [["." for _ in range(size)] for _ in range(size)]
    for pos in game.obstacles:
        grid[pos.y][pos.x] = "#"
    for candy in game.candies:
        grid[candy.position.y][candy.position.x] = _KIND_GLYPH[candy.kind]
    for segment in game.snake.body[1:]:
        grid[segment.y][segment.x] = "o"
    head = game.snake.head
    grid[head.y][head.x] = "@"
    return "\n".join("".join(row) for row in grid)


def _print_result(session: orchestrator.Session) -> None:
    result = orchestrator.finalize(session)
    print("\n--- story ---")
    print(result.full_story)
    print("-------------")
    print(f"words: {result.story_word_count}")
    if result.snake_length is not None:
        print(f"snake length: {result.snake_length}")
        eaten = ", ".join(
            f"{k.name.lower()}={v}"
            for k, v in sorted((result.candies_eaten or {}).items())
            if v
        )
        print(f"candies eaten: {eaten or 'none'}")


def _play_nongame_interactive(session: orchestrator.Session) -> int:
    print("Co-write a snake story. Commands: 0 / 1 choose an option,")
    print("w <text> write your own continuation, e end the story.")
    while session.status is orchestrator.SessionStatus.ACTIVE:
        assert session.pending_options is not None
        low, high = session.pending_options
        print(f"\n[0] (T={low.temperature}) {low.text}")
        print(f"[1] (T={high.temperature}) {high.text}")
        try:
            line = input("> ").strip()
        except EOFError:
            line = "e"
        if line == "0":
            orchestrator.submit_choice(session, Choice.slot0())
        elif line == "1":
            orchestrator.submit_choice(session, Choice.slot1())
        elif line.startswith("w "):
            orchestrator.submit_choice(session, Choice.self_text(line[2:]))
        elif line in ("e", "end"):
            orchestrator.submit_choice(session, Choice.end_story())
        else:
            print("unrecognized command")
    _print_result(session)
    return 0


def _play_nongame_script(session: orchestrator.Session, script: list[str]) -> int:
    for line in script:
        parts = line.split(None, 1)
        command = parts[0]
        if command == "choose":
            slot = int(parts[1])
            orchestrator.submit_choice(
                session, Choice.slot0() if slot == 0 else Choice.slot1()
            )
        elif command == "own":
            orchestrator.submit_choice(session, Choice.self_text(parts[1]))
        elif command == "end":
            orchestrator.submit_choice(session, Choice.end_story())
        else:
            raise SystemExit(f"unknown script command: {line}")
        if session.status is orchestrator.SessionStatus.ENDED:
            break
    if session.status is orchestrator.SessionStatus.ACTIVE:
        orchestrator.submit_choice(session, Choice.end_story())
    _print_result(session)
    return 0


def _play_game_script(
    session: orchestrator.Session, script: list[str], show_board: bool
) -> int:
    for line in script:
        if session.status is not orchestrator.SessionStatus.ACTIVE:
            break
        parts = line.split(None, 1)
        command = parts[0]
        if command == "pause_end":
            orchestrator.advance_game(session, TickInput(end_pause=True))
        elif command == "steer":
            direction = Direction[parts[1].strip().upper()]
            orchestrator.advance_game(session, TickInput(steer=direction))
        elif command == "tick":
            for _ in range(int(parts[1]) if len(parts) > 1 else 1):
                orchestrator.advance_game(session, TickInput())
                if session.status is not orchestrator.SessionStatus.ACTIVE:
                    break
        elif command == "text":
            orchestrator.advance_game(session, TickInput(self_text=parts[1]))
        else:
            raise SystemExit(f"unknown script command: {line}")
        if show_board and session.game is not None:
            print(_render_board(session))
            print()
    if session.status is orchestrator.SessionStatus.ACTIVE:
        session.abort()
    _print_result(session)
    return 0


def _play_game_policy(
    session: orchestrator.Session, policy_name: str, show_board: bool
) -> int:
    policy = policysim.make_policy(policy_name)
    print(f"Auto-playing the game version with the {policy.name} policy.\n")
    import random

    rng = random.Random(session.seed)
    while session.status is orchestrator.SessionStatus.ACTIVE:
        game = session.game
        assert game is not None
        if game.phase is Phase.PAUSED:
            if show_board:
                print(f"turn {game.turn_index + 1}, lives {game.lives}")
                print(_render_board(session))
            orchestrator.advance_game(session, TickInput(end_pause=True))
            continue
        candidates = [
            policysim.candidate_for(game, c) for c in game.candies if not c.inert
        ]
        if not candidates:
            session.abort()
            break
        picked = policy.choose(candidates, rng)
        path = policysim.shortest_path(game, picked.candy.position)
        if path is None:
            reachable = [c for c in candidates if c.distance is not None]
            if not reachable:
                session.abort()
                break
            picked = reachable[0]
            path = policysim.shortest_path(game, picked.candy.position) or []
        lives = game.lives
        turn = game.turn_index
        events: list = []
        for direction in path:
            _, events = orchestrator.advance_game(session, TickInput(steer=direction))
            game = session.game
            if (
                session.status is not orchestrator.SessionStatus.ACTIVE
                or game is None
                or game.turn_index != turn
                or game.lives != lives
            ):
                break
        for event in events:
            if event.type is EventType.CANDY_EATEN:
                print(f"ate {event.kind.name.lower()} (slot {event.option_slot})")
    _print_result(session)
    return 0


def _cmd_play(args: argparse.Namespace) -> int:
    version = SessionVersion(args.version)
    provider_config = ProviderConfig(offline=True, offline_seed=args.seed)
    session = orchestrator.start_session(
        version, GameConfig(), provider_config, seed=args.seed
    )
    script: Optional[list[str]] = None
    if args.script:
        with open(args.script, "r", encoding="utf-8") as handle:
            script = [
                line.strip()
                for line in handle
                if line.strip() and not line.strip().startswith("#")
            ]
    if version is SessionVersion.NONGAME:
        if script is not None:
            return _play_nongame_script(session, script)
        return _play_nongame_interactive(session)
    if script is not None:
        return _play_game_script(session, script, args.board)
    return _play_game_policy(session, args.policy, args.board)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="snake-story",
        description="Co-writing snake game: analysis, simulation, service, play.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="statistics for session transcripts")
    p_analyze.add_argument("logs", nargs="+", help="transcript files")
    p_analyze.add_argument("--format", choices=("text", "json"), default="text")
    p_analyze.set_defaults(func=_cmd_analyze)

    p_sim = sub.add_parser("simulate", help="run scripted players")
    p_sim.add_argument(
        "--policy",
        default="greedy_positive",
        choices=("uniform_random", "greedy_positive", "ignore_text", "trade_off"),
    )
    p_sim.add_argument("--weight", type=float, default=0.5, help="trade_off blend")
    p_sim.add_argument("--sessions", type=int, default=10)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument(
        "--compare", default=None, help="second policy for a paired comparison"
    )
    p_sim.add_argument("--format", choices=("text", "json"), default="text")
    p_sim.set_defaults(func=_cmd_simulate)

    p_serve = sub.add_parser("serve", help="run the local play service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8473)
    p_serve.add_argument("--log-dir", default="logs")
    p_serve.add_argument("--offline", action="store_true")
    p_serve.add_argument(
        "--ui-dir",
        default=None,
        help="static frontend directory (default: frontend/dist when present)",
    )
    p_serve.set_defaults(func=_cmd_serve)

    p_play = sub.add_parser("play", help="play offline in the terminal")
    p_play.add_argument("--version", choices=("nongame", "game"), default="nongame")
    p_play.add_argument("--seed", type=int, default=0)
    p_play.add_argument("--script", default=None, help="scripted-input file")
    p_play.add_argument(
        "--policy", default="greedy_positive", help="autopilot for the game version"
    )
    p_play.add_argument("--board", action="store_true", help="print the board")
    p_play.set_defaults(func=_cmd_play)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SnakeStoryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
