from .server import SERVICE_NAME, make_server, serve_forever
from .service import RankingService, RoundResult, ValidationError
from .store import DEFAULT_SCENARIOS, LogStore, RankingState, scenario_config

__all__ = [
    "DEFAULT_SCENARIOS",
    "LogStore",
    "RankingService",
    "RankingState",
    "RoundResult",
    "SERVICE_NAME",
    "ValidationError",
    "make_server",
    "scenario_config",
    "serve_forever",
]
