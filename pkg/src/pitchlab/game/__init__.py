from .matrix import MatrixGame, load_matrix, matching_pennies, rock_paper_scissors
from .minipitch import MiniPitch
from .types import (
    ACTION_NAMES,
    GAME_MODES,
    N_ACTIONS,
    BallState,
    Event,
    GameMode,
    MarkovGameSpec,
    MiniPitchConfig,
    PlayerState,
    RawObservation,
    Role,
    Team,
)

__all__ = [
    "ACTION_NAMES",
    "GAME_MODES",
    "N_ACTIONS",
    "BallState",
    "Event",
    "GameMode",
    "MarkovGameSpec",
    "MatrixGame",
    "MiniPitch",
    "MiniPitchConfig",
    "PlayerState",
    "RawObservation",
    "Role",
    "Team",
    "load_matrix",
    "matching_pennies",
    "rock_paper_scissors",
]
