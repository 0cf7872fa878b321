"""Headless scripted players.

Each policy picks a target candy once per turn and navigates to it by
breadth-first shortest path.  The harness replans only when the next
planned step has become unsafe or a life was lost, keeping runs fast
while staying deterministic: a ``(policy, config, seed)`` triple fully
determines the outcome.

Direction ties in the path search break in the fixed order Up, Right,
Down, Left.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from typing import Optional, Sequence

from . import orchestrator
from .analysis import WilcoxonResult, wilcoxon_signed_rank
from .engine import Candy, CandyKind, Direction, GameConfig, GameState, GridPosition, Phase
from .errors import UsageError
from .orchestrator import SessionVersion, SteppingClock, TickInput
from .provider import ProviderConfig

_TIE_ORDER = (Direction.UP, Direction.RIGHT, Direction.DOWN, Direction.LEFT)
_SIM_EPOCH = datetime(2024, 1, 1)

DEFAULT_MAX_TURNS = 40
DEFAULT_TICK_BUDGET = 400

# Kind preference classes for GreedyPositive: gain life or unlock
# self-writing > neutral > lose life or add obstacles.
_GREEDY_RANK = {
    CandyKind.GREEN: 0,
    CandyKind.BLUE: 0,
    CandyKind.WHITE: 1,
    CandyKind.YELLOW: 1,
    CandyKind.RED: 2,
    CandyKind.BLACK: 2,
}


def shortest_path(
    state: GameState, target: GridPosition
) -> Optional[list[Direction]]:
    """BFS path from the snake head to ``target``, or None if cut off."""
    size = state.config.map_size
    blocked = set(state.obstacles) | set(state.snake.body[:-1])
    start = state.snake.head
    if target == start:
        return []
    parents: dict[GridPosition, tuple[GridPosition, Direction]] = {}
    seen = {start}
    frontier = [start]
    while frontier:
        next_frontier: list[GridPosition] = []
        for pos in frontier:
            for direction in _TIE_ORDER:
                nxt = GridPosition(pos.x + direction.dx, pos.y + direction.dy)
                if not (0 <= nxt.x < size and 0 <= nxt.y < size):
                    continue
                if nxt in seen or nxt in blocked:
                    continue
                seen.add(nxt)
                parents[nxt] = (pos, direction)
                if nxt == target:
                    path: list[Direction] = []
                    cursor = nxt
                    while cursor != start:
                        cursor, step_dir = parents[cursor]
                        path.append(step_dir)
                    path.reverse()
                    return path
                next_frontier.append(nxt)
        frontier = next_frontier
    return None


def _text_quality(text: str) -> float:
    words = text.lower().split()
    return len(words) + len(set(words))


@dataclass(frozen=True)
class _Candidate:
    candy: Candy
    distance: Optional[int]  # path length; None when unreachable
    quality: float


def candidate_for(state: GameState, candy: Candy) -> _Candidate:
    """Score one candy for policy ranking in the given state."""
    path = shortest_path(state, candy.position)
    return _Candidate(
        candy=candy,
        distance=len(path) if path is not None else None,
        quality=_text_quality(candy.text),
    )


class Policy:
    """Base: subclasses rank this turn's candy candidates."""

    name = "policy"

    def choose(self, candidates: list[_Candidate], rng: random.Random) -> _Candidate:
        raise NotImplementedError


class UniformRandom(Policy):
    name = "uniform_random"

    def choose(self, candidates: list[_Candidate], rng: random.Random) -> _Candidate:
        return candidates[rng.randrange(len(candidates))]


class GreedyPositive(Policy):
    """Prefer life-gaining kinds, avoid life-costing ones."""

    name = "greedy_positive"

    def choose(self, candidates: list[_Candidate], rng: random.Random) -> _Candidate:
        def key(c: _Candidate):
            far = c.distance if c.distance is not None else 10_000
            return (_GREEDY_RANK[c.candy.kind], far, c.candy.option_slot)

        return min(candidates, key=key)


class TradeOff(Policy):
    """Blend text preference against survival preference.

    weight 0 is pure survival (nearest candy), weight 1 pure text
    preference (highest quality score).
    """

    def __init__(self, weight: float):
        if not 0.0 <= weight <= 1.0:
            raise UsageError("weight must lie in [0, 1]")
        self.weight = weight
        self.name = f"trade_off_{weight:g}"

    def choose(self, candidates: list[_Candidate], rng: random.Random) -> _Candidate:
        max_quality = max(c.quality for c in candidates) or 1.0
        known = [c.distance for c in candidates if c.distance is not None]
        max_distance = max(known) if known else 1
        max_distance = max(max_distance, 1)

        def utility(c: _Candidate) -> float:
            far = c.distance if c.distance is not None else max_distance * 2
            return (
                self.weight * (c.quality / max_quality)
                - (1.0 - self.weight) * (far / max_distance)
            )

        def key(c: _Candidate):
            far = c.distance if c.distance is not None else 10_000
            return (-utility(c), far, c.candy.option_slot)

        return min(candidates, key=key)


class IgnoreText(Policy):
    """Pure survival play: nearest candy, text never considered."""

    name = "ignore_text"

    def choose(self, candidates: list[_Candidate], rng: random.Random) -> _Candidate:
        def key(c: _Candidate):
            far = c.distance if c.distance is not None else 10_000
            return (far, c.candy.option_slot)

        return min(candidates, key=key)


def make_policy(name: str, weight: float = 0.5) -> Policy:
    table = {
        "uniform_random": UniformRandom,
        "greedy_positive": GreedyPositive,
        "ignore_text": IgnoreText,
    }
    if name in table:
        return table[name]()
    if name == "trade_off":
        return TradeOff(weight)
    raise UsageError(f"unknown policy {name!r}")


@dataclass(frozen=True)
class SimResult:
    policy: str
    sessions: int
    turns_played: int
    pool1_share: float
    candy_selection_rates: dict[CandyKind, float]
    lifespan_turns: float
    selected_counts: dict[CandyKind, int] = field(default_factory=dict)
    generated_counts: dict[CandyKind, int] = field(default_factory=dict)
    fallback_count: int = 0
    completed_sessions: int = 0  # ended by lives, not by caps


@dataclass
class _SessionOutcome:
    trace: list[tuple[int, int, int]] = field(default_factory=list)  # turn, slot, kind
    generated: dict[CandyKind, int] = field(default_factory=dict)
    fallbacks: int = 0
    died_out: bool = False


def _run_one(
    policy: Policy,
    config: GameConfig,
    seed: int,
    max_turns: int,
    tick_budget: int,
) -> _SessionOutcome:
    provider_config = ProviderConfig(offline=True, offline_seed=seed)
    clock = SteppingClock(_SIM_EPOCH, timedelta(milliseconds=250))
    session = orchestrator.start_session(
        SessionVersion.GAME, config, provider_config, seed=seed, clock=clock
    )
    rng = random.Random(seed ^ 0x5EED5EED)
    outcome = _SessionOutcome()
    recorded_turns: set[int] = set()
    path: list[Direction] = []

    while session.status is orchestrator.SessionStatus.ACTIVE:
        game = session.game
        assert game is not None
        if game.turn_index >= max_turns:
            session.abort()
            break

        if game.phase is Phase.PAUSED:
            if game.turn_index not in recorded_turns:
                recorded_turns.add(game.turn_index)
                for candy in game.candies:
                    outcome.generated[candy.kind] = (
                        outcome.generated.get(candy.kind, 0) + 1
                    )
            orchestrator.advance_game(session, TickInput(end_pause=True))
            path = []
            continue

        # Moving: pick a target, then walk the planned path.
        turn = game.turn_index
        lives = game.lives
        candidates = [candidate_for(game, c) for c in game.candies if not c.inert]
        if not candidates:
            session.abort()
            break
        picked = policy.choose(candidates, rng)
        if picked.distance is None:
            reachable = [c for c in candidates if c.distance is not None]
            if not reachable:
                session.abort()
                break
            outcome.fallbacks += 1
            picked = min(reachable, key=lambda c: (c.distance, c.candy.option_slot))
        path = shortest_path(game, picked.candy.position) or []

        ticks = 0
        while (
            session.status is orchestrator.SessionStatus.ACTIVE
            and session.game.phase is Phase.MOVING
            and session.game.turn_index == turn
            and session.game.lives == lives
        ):
            if ticks >= tick_budget:
                session.abort()
                break
            game = session.game
            if path:
                steer = path[0]
                ahead = GridPosition(
                    game.snake.head.x + steer.dx, game.snake.head.y + steer.dy
                )
                unsafe = (
                    not (0 <= ahead.x < config.map_size and 0 <= ahead.y < config.map_size)
                    or ahead in game.obstacles
                    or ahead in set(game.snake.body[:-1])
                )
                if unsafe:
                    path = shortest_path(game, picked.candy.position) or []
                    steer = path[0] if path else None
            else:
                steer = None
            if path:
                path.pop(0)
            _, events = orchestrator.advance_game(session, TickInput(steer=steer))
            ticks += 1
            for event in events:
                if event.type.value == "candy_eaten":
                    outcome.trace.append((turn, event.option_slot, int(event.kind)))

    if session.game is not None and session.game.lives == 0:
        outcome.died_out = True
    return outcome


def selection_trace(
    policy: Policy,
    config: Optional[GameConfig] = None,
    seed: int = 0,
    max_turns: int = DEFAULT_MAX_TURNS,
) -> tuple[tuple[int, int, int], ...]:
    """The (turn, slot, kind) selection sequence of one session."""
    config = config or GameConfig()
    outcome = _run_one(policy, config, seed, max_turns, DEFAULT_TICK_BUDGET)
    return tuple(outcome.trace)


def run_policy(
    policy: Policy,
    config: Optional[GameConfig] = None,
    seed: int = 0,
    sessions: int = 1,
    max_turns: int = DEFAULT_MAX_TURNS,
    tick_budget: int = DEFAULT_TICK_BUDGET,
) -> SimResult:
    """Run full offline sessions under ``policy`` and aggregate
    selection statistics; deterministic per seed."""
    if sessions < 1:
        raise UsageError("sessions must be at least 1")
    config = config or GameConfig()
    selected: dict[CandyKind, int] = {}
    generated: dict[CandyKind, int] = {}
    slot0 = 0
    total = 0
    fallbacks = 0
    died = 0
    turns_per_session: list[int] = []
    for i in range(sessions):
        outcome = _run_one(policy, config, seed + i, max_turns, tick_budget)
        for kind, count in outcome.generated.items():
            generated[kind] = generated.get(kind, 0) + count
        for _, slot, kind in outcome.trace:
            selected[CandyKind(kind)] = selected.get(CandyKind(kind), 0) + 1
            total += 1
            if slot == 0:
                slot0 += 1
        fallbacks += outcome.fallbacks
        died += 1 if outcome.died_out else 0
        turns_per_session.append(len(outcome.trace))
    rates = {
        kind: selected.get(kind, 0) / count
        for kind, count in generated.items()
        if count > 0
    }
    return SimResult(
        policy=policy.name,
        sessions=sessions,
        turns_played=total,
        pool1_share=(slot0 / total) if total else 0.0,
        candy_selection_rates=rates,
        lifespan_turns=(
            sum(turns_per_session) / len(turns_per_session)
            if turns_per_session
            else 0.0
        ),
        selected_counts=selected,
        generated_counts=generated,
        fallback_count=fallbacks,
        completed_sessions=died,
    )


@dataclass(frozen=True)
class PolicyComparison:
    policy_a: str
    policy_b: str
    seeds: tuple[int, ...]
    pool1_share_a: tuple[float, ...]
    pool1_share_b: tuple[float, ...]
    results_a: tuple[SimResult, ...]
    results_b: tuple[SimResult, ...]
    wilcoxon: WilcoxonResult


def compare_policies(
    a: Policy,
    b: Policy,
    config: Optional[GameConfig] = None,
    seeds: Sequence[int] = (),
    max_turns: int = DEFAULT_MAX_TURNS,
) -> PolicyComparison:
    """Paired runs of two policies over shared seeds, with a signed-rank
    test on the per-seed pool-1 selection shares."""
    seeds = tuple(seeds)
    if len(seeds) < 30:
        raise UsageError("compare_policies needs at least 30 seeds")
    config = config or GameConfig()
    results_a = tuple(
        run_policy(a, config, seed, sessions=1, max_turns=max_turns) for seed in seeds
    )
    results_b = tuple(
        run_policy(b, config, seed, sessions=1, max_turns=max_turns) for seed in seeds
    )
    shares_a = tuple(r.pool1_share for r in results_a)
    shares_b = tuple(r.pool1_share for r in results_b)
    return PolicyComparison(
        policy_a=a.name,
        policy_b=b.name,
        seeds=seeds,
        pool1_share_a=shares_a,
        pool1_share_b=shares_b,
        results_a=results_a,
        results_b=results_b,
        wilcoxon=wilcoxon_signed_rank(shares_a, shares_b),
    )
