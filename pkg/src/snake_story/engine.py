"""Deterministic state machine for the game version.

All operations are pure: they take a state value and return a new one,
never touching the wall clock or global RNG.  Randomness comes from a
seeded generator whose state travels inside ``GameState``, so identical
(config, seed, input sequence) triples replay identically.

Documented RNG draw order (the replay contract):

* ``spawn_turn_candies`` draws, in order: pool-1 kind index
  (``randrange(3)`` into ``POOL_1``), pool-1 position index
  (``randrange(len(tiles))`` into the sorted eligible-tile list), pool-2
  kind index, pool-2 position index, and, when self-writing is offered,
  the yellow position index.
* ``add_obstacles`` draws one ``randrange(len(tiles))`` per placed
  obstacle, against the sorted list of tiles that keep every candy
  reachable from the snake head.

Eligible tiles are always sorted in (x, y) order before indexing, which
keeps the draw sequence independent of set iteration order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from enum import Enum, IntEnum
from typing import NamedTuple, Optional

from .errors import ConfigError, ConsistencyError, EngineJammed, PhaseError
from .words import clamp_words


class GridPosition(NamedTuple):
    x: int
    y: int


class Direction(Enum):
    UP = (0, -1)
    DOWN = (0, 1)
    LEFT = (-1, 0)
    RIGHT = (1, 0)

    @property
    def dx(self) -> int:
        return self.value[0]

    @property
    def dy(self) -> int:
        return self.value[1]

    def opposite(self) -> "Direction":
        return _OPPOSITE[self]


_OPPOSITE = {
    Direction.UP: Direction.DOWN,
    Direction.DOWN: Direction.UP,
    Direction.LEFT: Direction.RIGHT,
    Direction.RIGHT: Direction.LEFT,
}


class CandyKind(IntEnum):
    """Candy ids are stable and appear verbatim in session logs."""

    WHITE = 0
    BLACK = 1
    RED = 2
    GREEN = 3
    BLUE = 4
    YELLOW = 5


# White is the neutral member of both pools; yellow belongs to neither
# and only appears after a blue candy unlocked self-writing.
POOL_1 = (CandyKind.WHITE, CandyKind.BLACK, CandyKind.RED)
POOL_2 = (CandyKind.WHITE, CandyKind.GREEN, CandyKind.BLUE)

SLOT_SELF = 2  # option slot carried by the yellow candy


@dataclass(frozen=True)
class Candy:
    kind: CandyKind
    position: GridPosition
    option_slot: int  # 0 = pool-1 text, 1 = pool-2 text, 2 = self-written
    text: str

    @property
    def inert(self) -> bool:
        """A yellow candy with no committed text yet; the snake passes over it."""
        return self.option_slot == SLOT_SELF and self.text == ""


@dataclass(frozen=True)
class Snake:
    body: tuple[GridPosition, ...]  # head first
    heading: Direction

    @property
    def head(self) -> GridPosition:
        return self.body[0]

    def __len__(self) -> int:
        return len(self.body)


class Phase(Enum):
    AWAITING_TEXTS = "awaiting_texts"
    PAUSED = "paused"
    MOVING = "moving"
    ENDED = "ended"


class EventType(Enum):
    CANDY_EATEN = "candy_eaten"
    LIFE_LOST = "life_lost"
    LIFE_GAINED = "life_gained"
    OBSTACLES_ADDED = "obstacles_added"
    SELF_WRITE_UNLOCKED = "self_write_unlocked"
    TEXT_APPENDED = "text_appended"
    GAME_ENDED = "game_ended"


class LifeLossCause(Enum):
    RED_CANDY = "red_candy"
    WALL_HIT = "wall_hit"
    SELF_HIT = "self_hit"
    OBSTACLE_HIT = "obstacle_hit"


@dataclass(frozen=True)
class TurnEvent:
    type: EventType
    kind: Optional[CandyKind] = None
    option_slot: Optional[int] = None
    cause: Optional[LifeLossCause] = None
    count: Optional[int] = None
    text: Optional[str] = None


@dataclass(frozen=True)
class GameConfig:
    map_size: int = 15
    initial_lives: int = 3
    initial_snake_length: int = 3
    tick_interval_ms: int = 167  # ~6 tiles per second
    pause_seconds: float = 25.0
    self_write_pause_seconds: float = 45.0
    obstacles_per_turn: int = 3
    option_word_limit: int = 30
    ending_word_limit: int = 80
    temperature_low: float = 0.6
    temperature_high: float = 1.4

    def validate(self) -> None:
        if self.map_size < 5:
            raise ConfigError("map_size must be at least 5")
        if self.initial_lives < 1:
            raise ConfigError("initial_lives must be positive")
        if self.initial_snake_length < 1:
            raise ConfigError("initial_snake_length must be positive")
        if self.initial_snake_length > self.map_size // 2 + 1:
            raise ConfigError(
                "initial_snake_length must fit between the grid center and the left wall"
            )
        if self.tick_interval_ms <= 0:
            raise ConfigError("tick_interval_ms must be positive")
        if self.pause_seconds <= 0:
            raise ConfigError("pause_seconds must be positive")
        if self.obstacles_per_turn < 1:
            raise ConfigError("obstacles_per_turn must be positive")
        if self.option_word_limit < 1:
            raise ConfigError("option_word_limit must be positive")
        if self.ending_word_limit < 1:
            raise ConfigError("ending_word_limit must be positive")
        if not self.temperature_low < self.temperature_high:
            raise ConfigError("temperature_low must be below temperature_high")
        if not self.pause_seconds < self.self_write_pause_seconds:
            raise ConfigError("pause_seconds must be below self_write_pause_seconds")


@dataclass
class GameState:
    """Full state of one game-version session.

    Treated as a value: operations return modified copies and never
    mutate in place.  ``rng_state`` is the serialized generator state so
    copies stay cheap and replays stay exact.
    """

    config: GameConfig
    snake: Snake
    candies: tuple[Candy, ...]
    obstacles: frozenset[GridPosition]
    lives: int
    turn_index: int
    phase: Phase
    rng_state: tuple
    eaten_counts: dict[CandyKind, int] = field(default_factory=dict)
    pause_remaining_ms: float = 0.0
    self_write_open: bool = False  # yellow candy offered this turn
    self_write_unlocked: bool = False  # blue eaten; next spawn offers typing
    self_write_pending: Optional[str] = None
    obstacle_shortfall: int = 0  # placements skipped for lack of tiles
    grace_ticks: int = 0  # post-respawn ticks with movement frozen

    @property
    def total_eaten(self) -> int:
        return sum(self.eaten_counts.values())

    def candy_at(self, pos: GridPosition) -> Optional[Candy]:
        for candy in self.candies:
            if candy.position == pos:
                return candy
        return None

    def free_tiles(self) -> list[GridPosition]:
        """Sorted tiles holding neither snake, obstacle, nor candy."""
        taken = set(self.snake.body) | self.obstacles
        taken.update(c.position for c in self.candies)
        size = self.config.map_size
        return [
            GridPosition(x, y)
            for x in range(size)
            for y in range(size)
            if (x, y) not in taken
        ]


def new_game(config: GameConfig, seed: int) -> GameState:
    """Start a fresh game: centered snake heading right, awaiting the
    first pair of texts."""
    config.validate()
    center = config.map_size // 2
    body = tuple(
        GridPosition(center - i, center) for i in range(config.initial_snake_length)
    )
    rng = random.Random(seed)
    return GameState(
        config=config,
        snake=Snake(body=body, heading=Direction.RIGHT),
        candies=(),
        obstacles=frozenset(),
        lives=config.initial_lives,
        turn_index=0,
        phase=Phase.AWAITING_TEXTS,
        rng_state=rng.getstate(),
        eaten_counts={kind: 0 for kind in CandyKind},
    )


def is_terminal(state: GameState) -> bool:
    return state.lives == 0


def _neighbors(pos: GridPosition, size: int):
    x, y = pos
    if y > 0:
        yield GridPosition(x, y - 1)
    if x < size - 1:
        yield GridPosition(x + 1, y)
    if y < size - 1:
        yield GridPosition(x, y + 1)
    if x > 0:
        yield GridPosition(x - 1, y)


def reachable_tiles(
    state: GameState, extra_blocked: frozenset[GridPosition] = frozenset()
) -> set[GridPosition]:
    """Flood fill from the snake head; obstacles and the snake body block."""
    size = state.config.map_size
    blocked = set(state.obstacles) | set(state.snake.body) | set(extra_blocked)
    start = state.snake.head
    seen = {start}
    frontier = [start]
    while frontier:
        pos = frontier.pop()
        for nxt in _neighbors(pos, size):
            if nxt not in seen and nxt not in blocked:
                seen.add(nxt)
                frontier.append(nxt)
    seen.discard(start)
    return seen


def _draw(rng_state: tuple, bound: int) -> tuple[int, tuple]:
    rng = random.Random()
    rng.setstate(rng_state)
    value = rng.randrange(bound)
    return value, rng.getstate()


def spawn_turn_candies(
    state: GameState,
    option_a: "TextOptionLike",
    option_b: "TextOptionLike",
    self_text: Optional[str] = None,
) -> GameState:
    """Place this turn's candies and enter the pause phase.

    ``option_a`` must carry the low temperature (slot 0 / pool 1) and
    ``option_b`` the high one (slot 1 / pool 2).  A yellow candy is
    placed whenever the previous turn unlocked self-writing; it starts
    inert unless ``self_text`` is already known.
    """
    if state.phase is not Phase.AWAITING_TEXTS:
        raise PhaseError(f"cannot spawn candies during {state.phase.value}")
    cfg = state.config
    if option_a.temperature != cfg.temperature_low:
        raise ConsistencyError("option_a must carry the low temperature")
    if option_b.temperature != cfg.temperature_high:
        raise ConsistencyError("option_b must carry the high temperature")

    offer_self = state.self_write_unlocked
    rng_state = state.rng_state
    candies: list[Candy] = []

    def place(kind: CandyKind, slot: int, text: str) -> None:
        nonlocal rng_state
        taken = {c.position for c in candies}
        working = replace(state, candies=tuple(candies))
        eligible = sorted(p for p in reachable_tiles(working) if p not in taken)
        if not eligible:
            raise EngineJammed("no reachable free tile left for a candy")
        idx, rng_state = _draw(rng_state, len(eligible))
        candies.append(Candy(kind=kind, position=eligible[idx], option_slot=slot, text=text))

    limit = cfg.option_word_limit
    kind_idx, rng_state = _draw(rng_state, len(POOL_1))
    place(POOL_1[kind_idx], 0, clamp_words(option_a.text, limit))
    kind_idx, rng_state = _draw(rng_state, len(POOL_2))
    place(POOL_2[kind_idx], 1, clamp_words(option_b.text, limit))
    if offer_self:
        place(CandyKind.YELLOW, SLOT_SELF, self_text or "")

    pause_s = cfg.self_write_pause_seconds if offer_self else cfg.pause_seconds
    return replace(
        state,
        candies=tuple(candies),
        rng_state=rng_state,
        phase=Phase.PAUSED,
        pause_remaining_ms=pause_s * 1000.0,
        self_write_open=offer_self,
        self_write_unlocked=False,
        self_write_pending=self_text if offer_self else None,
    )


def set_self_text(state: GameState, text: str) -> GameState:
    """Commit player-typed text to the yellow candy on the map."""
    if not text:
        raise ConsistencyError("self-written text must be non-empty")
    text = clamp_words(text, state.config.option_word_limit)
    for i, candy in enumerate(state.candies):
        if candy.option_slot == SLOT_SELF:
            candies = list(state.candies)
            candies[i] = replace(candy, text=text)
            return replace(
                state, candies=tuple(candies), self_write_pending=text
            )
    raise ConsistencyError("no yellow candy on the map to carry the text")


def advance_pause(state: GameState, elapsed_ms: float) -> GameState:
    """Count down the pause; flips to the moving phase at zero."""
    if state.phase is not Phase.PAUSED:
        raise PhaseError(f"cannot advance pause during {state.phase.value}")
    remaining = state.pause_remaining_ms - elapsed_ms
    if remaining > 0:
        return replace(state, pause_remaining_ms=remaining)
    return replace(state, pause_remaining_ms=0.0, phase=Phase.MOVING)


def end_pause(state: GameState) -> GameState:
    """Player ended the pause early."""
    if state.phase is not Phase.PAUSED:
        raise PhaseError(f"cannot end pause during {state.phase.value}")
    return replace(state, pause_remaining_ms=0.0, phase=Phase.MOVING)


def step(
    state: GameState, steer: Optional[Direction] = None
) -> tuple[GameState, list[TurnEvent]]:
    """Advance the snake one tick.

    Steering opposite to the current heading is ignored.  Eating a candy
    resolves the whole turn (effects, obstacle accretion, phase flip to
    awaiting the next texts); collisions cost a life and respawn the
    snake at a length-preserving center placement with one grace tick.
    """
    if state.phase is not Phase.MOVING:
        raise PhaseError(f"cannot step during {state.phase.value}")

    heading = state.snake.heading
    if steer is not None and steer is not heading.opposite():
        heading = steer
    snake = replace(state.snake, heading=heading)
    state = replace(state, snake=snake)

    if state.grace_ticks > 0:
        return replace(state, grace_ticks=state.grace_ticks - 1), []

    head = snake.head
    new_head = GridPosition(head.x + heading.dx, head.y + heading.dy)
    size = state.config.map_size

    if not (0 <= new_head.x < size and 0 <= new_head.y < size):
        return _lose_life(state, LifeLossCause.WALL_HIT)
    if new_head in state.obstacles:
        return _lose_life(state, LifeLossCause.OBSTACLE_HIT)
    if new_head in snake.body[:-1]:  # tail tile is vacated this tick
        return _lose_life(state, LifeLossCause.SELF_HIT)

    candy = state.candy_at(new_head)
    if candy is not None and not candy.inert:
        grown = replace(snake, body=(new_head,) + snake.body)
        return apply_candy_effect(replace(state, snake=grown), candy)

    moved = replace(snake, body=(new_head,) + snake.body[:-1])
    return replace(state, snake=moved), []


def apply_candy_effect(
    state: GameState, candy: Candy
) -> tuple[GameState, list[TurnEvent]]:
    """Resolve eating ``candy`` and close out the turn.

    Callers move the head onto the candy tile without popping the tail;
    keeping the tail in place is the +1 growth every candy grants.
    """
    if candy not in state.candies:
        raise ConsistencyError("candy is not on the map")
    if state.snake.head != candy.position:
        raise ConsistencyError("snake head has not reached the candy")

    events = [
        TurnEvent(EventType.CANDY_EATEN, kind=candy.kind, option_slot=candy.option_slot),
        TurnEvent(EventType.TEXT_APPENDED, text=candy.text),
    ]
    eaten = dict(state.eaten_counts)
    eaten[candy.kind] = eaten.get(candy.kind, 0) + 1
    state = replace(
        state,
        candies=(),
        eaten_counts=eaten,
        self_write_open=False,
        self_write_pending=None,
    )

    if candy.kind is CandyKind.BLACK:
        state, added = _place_obstacles(state, 3)
        events.append(TurnEvent(EventType.OBSTACLES_ADDED, count=added))
    elif candy.kind is CandyKind.RED:
        state = replace(state, lives=state.lives - 1)
        events.append(TurnEvent(EventType.LIFE_LOST, cause=LifeLossCause.RED_CANDY))
        if state.lives == 0:
            events.append(TurnEvent(EventType.GAME_ENDED))
            return replace(state, phase=Phase.ENDED), events
    elif candy.kind is CandyKind.GREEN:
        state = replace(state, lives=state.lives + 1)
        events.append(TurnEvent(EventType.LIFE_GAINED))
    elif candy.kind is CandyKind.BLUE:
        state = replace(state, self_write_unlocked=True)
        events.append(TurnEvent(EventType.SELF_WRITE_UNLOCKED))

    state, added = _place_obstacles(state, state.config.obstacles_per_turn)
    events.append(TurnEvent(EventType.OBSTACLES_ADDED, count=added))
    state = replace(state, turn_index=state.turn_index + 1, phase=Phase.AWAITING_TEXTS)
    return state, events


def add_obstacles(state: GameState, n: int) -> GameState:
    """Place up to ``n`` obstacles on free tiles; shortfalls are silent
    and tracked in ``obstacle_shortfall``."""
    state, _ = _place_obstacles(state, n)
    return state


def _place_obstacles(state: GameState, n: int) -> tuple[GameState, int]:
    obstacles = set(state.obstacles)
    rng_state = state.rng_state
    candy_positions = {c.position for c in state.candies}
    placed = 0
    for _ in range(n):
        working = replace(state, obstacles=frozenset(obstacles))
        free = [p for p in working.free_tiles()]
        if candy_positions:
            # Placement must not cut the head off from any candy.
            free = [
                p
                for p in free
                if candy_positions
                <= reachable_tiles(working, extra_blocked=frozenset((p,)))
            ]
        if not free:
            break
        idx, rng_state = _draw(rng_state, len(free))
        obstacles.add(free[idx])
        placed += 1
    shortfall = state.obstacle_shortfall + (n - placed)
    return (
        replace(
            state,
            obstacles=frozenset(obstacles),
            rng_state=rng_state,
            obstacle_shortfall=shortfall,
        ),
        placed,
    )


def _lose_life(
    state: GameState, cause: LifeLossCause
) -> tuple[GameState, list[TurnEvent]]:
    events = [TurnEvent(EventType.LIFE_LOST, cause=cause)]
    state = replace(state, lives=state.lives - 1)
    if state.lives == 0:
        events.append(TurnEvent(EventType.GAME_ENDED))
        return replace(state, phase=Phase.ENDED), events
    return _respawn(state), events


def _respawn(state: GameState) -> GameState:
    """Re-place the snake near the grid center, keeping its length.

    Tiles are scanned in a fixed center-out row order (right to left
    within each row) so respawns are deterministic without touching the
    RNG.  Obstacle-fragmented boards may yield a non-contiguous body;
    it knits itself back together as the snake moves.
    """
    cfg = state.config
    size = cfg.map_size
    center = size // 2
    blocked = set(state.obstacles) | {c.position for c in state.candies}

    row_order = [center]
    for off in range(1, size):
        if center + off < size:
            row_order.append(center + off)
        if center - off >= 0:
            row_order.append(center - off)

    body: list[GridPosition] = []
    needed = len(state.snake)
    for y in row_order:
        for x in range(size - 1, -1, -1):
            pos = GridPosition(x, y)
            if pos not in blocked:
                body.append(pos)
                if len(body) == needed:
                    break
        if len(body) == needed:
            break
    if len(body) < needed:
        raise EngineJammed("no room left to respawn the snake")

    head = body[0]
    body_set = set(body)
    heading = Direction.RIGHT
    for candidate in (Direction.RIGHT, Direction.UP, Direction.DOWN, Direction.LEFT):
        target = GridPosition(head.x + candidate.dx, head.y + candidate.dy)
        in_bounds = 0 <= target.x < size and 0 <= target.y < size
        if in_bounds and target not in state.obstacles and target not in body_set:
            heading = candidate
            break
    return replace(
        state,
        snake=Snake(body=tuple(body), heading=heading),
        grace_ticks=1,
    )


class TextOptionLike:
    """Structural stand-in: anything with ``text`` and ``temperature``."""

    text: str
    temperature: float
