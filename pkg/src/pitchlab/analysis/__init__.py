from .chains import Assist, Chain, ChainTracker, Node, Subgame
from .decompose import EventCounts, MatchDecomposition, analyze_replay, decompose, detect_events
from .replay import (
    REPLAY_FORMAT,
    Replay,
    ReplayError,
    ReplayRecorder,
    ReplayStep,
    load_replay,
    make_header,
    read_replay,
    save_replay,
    write_replay,
)
from .stats import (
    RADAR_METRICS,
    CrossPlay,
    crossplay_matrix,
    match_style_stats,
    normalize_metrics,
    radar_csv,
    style_radar,
)

__all__ = [
    "Assist",
    "Chain",
    "ChainTracker",
    "CrossPlay",
    "EventCounts",
    "MatchDecomposition",
    "Node",
    "RADAR_METRICS",
    "REPLAY_FORMAT",
    "Replay",
    "ReplayError",
    "ReplayRecorder",
    "ReplayStep",
    "Subgame",
    "analyze_replay",
    "crossplay_matrix",
    "decompose",
    "detect_events",
    "load_replay",
    "make_header",
    "match_style_stats",
    "normalize_metrics",
    "radar_csv",
    "read_replay",
    "save_replay",
    "style_radar",
    "write_replay",
]
