"""Mixed-initiative snake story co-writing: engine, text options,
session orchestration, transcript analysis, scripted players, and a
local play service.

The game version grows a snake across a grid of text-carrying candies;
eating one appends its text to a shared story.  The non-game version
offers the same two continuations per turn as plain buttons.  Both
versions write byte-stable transcripts that :mod:`snake_story.sessionlog`
parses and replays, and :mod:`snake_story.analysis` scores.
"""

from .analysis import (
    STOPWORDS_V1,
    StoryMetrics,
    WilcoxonResult,
    mtld,
    sentence_overlap,
    story_metrics,
    wilcoxon_signed_rank,
)
from .engine import (
    Candy,
    CandyKind,
    Direction,
    EventType,
    GameConfig,
    GameState,
    GridPosition,
    LifeLossCause,
    Phase,
    Snake,
    TurnEvent,
    advance_pause,
    apply_candy_effect,
    end_pause,
    is_terminal,
    new_game,
    reachable_tiles,
    set_self_text,
    spawn_turn_candies,
    step,
)
from .errors import (
    AllZeroError,
    ConfigError,
    ConsistencyError,
    EngineJammed,
    InputError,
    LogParseError,
    PhaseError,
    ProviderProtocol,
    ProviderUnavailable,
    ReplayError,
    SequencingError,
    SnakeStoryError,
    UsageError,
    VersionError,
)
from .orchestrator import (
    Choice,
    Clock,
    Fragment,
    Session,
    SessionStatus,
    SessionVersion,
    SteppingClock,
    StoryResult,
    SystemClock,
    TickInput,
    advance_game,
    finalize,
    start_session,
    submit_choice,
)
from .policysim import (
    GreedyPositive,
    IgnoreText,
    Policy,
    PolicyComparison,
    SimResult,
    TradeOff,
    UniformRandom,
    compare_policies,
    make_policy,
    run_policy,
    selection_trace,
    shortest_path,
)
from .provider import (
    ENDING_SUFFIX,
    ProviderConfig,
    TextOption,
    config_from_env,
    generate_ending,
    generate_options,
    offline_generate,
)
from .sessionlog import (
    ReplayedSession,
    SessionLog,
    load_session_log,
    parse_session_log,
    replay,
    save_session_log,
    serialize_session_log,
)
from .words import clamp_words, count_words

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # analysis
    "STOPWORDS_V1",
    "StoryMetrics",
    "WilcoxonResult",
    "mtld",
    "sentence_overlap",
    "story_metrics",
    "wilcoxon_signed_rank",
    # engine
    "Candy",
    "CandyKind",
    "Direction",
    "EventType",
    "GameConfig",
    "GameState",
    "GridPosition",
    "LifeLossCause",
    "Phase",
    "Snake",
    "TurnEvent",
    "advance_pause",
    "apply_candy_effect",
    "end_pause",
    "is_terminal",
    "new_game",
    "reachable_tiles",
    "set_self_text",
    "spawn_turn_candies",
    "step",
    # errors
    "AllZeroError",
    "ConfigError",
    "ConsistencyError",
    "EngineJammed",
    "InputError",
    "LogParseError",
    "PhaseError",
    "ProviderProtocol",
    "ProviderUnavailable",
    "ReplayError",
    "SequencingError",
    "SnakeStoryError",
    "UsageError",
    "VersionError",
    # orchestrator
    "Choice",
    "Clock",
    "Fragment",
    "Session",
    "SessionStatus",
    "SessionVersion",
    "SteppingClock",
    "StoryResult",
    "SystemClock",
    "TickInput",
    "advance_game",
    "finalize",
    "start_session",
    "submit_choice",
    # policy simulation
    "GreedyPositive",
    "IgnoreText",
    "Policy",
    "PolicyComparison",
    "SimResult",
    "TradeOff",
    "UniformRandom",
    "compare_policies",
    "make_policy",
    "run_policy",
    "selection_trace",
    "shortest_path",
    # text provider
    "ENDING_SUFFIX",
    "ProviderConfig",
    "TextOption",
    "config_from_env",
    "generate_ending",
    "generate_options",
    "offline_generate",
    # transcripts
    "ReplayedSession",
    "SessionLog",
    "load_session_log",
    "parse_session_log",
    "replay",
    "save_session_log",
    "serialize_session_log",
    # word helpers
    "clamp_words",
    "count_words",
]
