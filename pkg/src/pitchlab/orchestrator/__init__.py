from .buffers import BufferClosed, Episode, EpisodeBuffer, PolicyServer, StarvationError
from .evaluate import EvalResult, evaluate, evaluate_matrix
from .pipelines import (
    BRRunStats,
    GenerationRecord,
    PipelineConfig,
    PipelineResult,
    initial_matrix_population,
    initial_pitch_population,
    matrix_population_exploitability,
    matrix_population_mixture,
    run_league,
    run_psro,
    train_best_response_pipeline,
)
from .rollout import MatchResult, play_match, run_rollout_worker, sample_opponent
from .tasks import (
    PolicyHandle,
    Population,
    RolloutTask,
    StopCriterion,
    TrainTask,
    stable_seed,
)
from .training import BRTrainer, TrainerStats, run_training_loop

__all__ = [
    "BRRunStats",
    "BRTrainer",
    "BufferClosed",
    "Episode",
    "EpisodeBuffer",
    "EvalResult",
    "GenerationRecord",
    "MatchResult",
    "PipelineConfig",
    "PipelineResult",
    "PolicyHandle",
    "PolicyServer",
    "Population",
    "RolloutTask",
    "StarvationError",
    "StopCriterion",
    "TrainTask",
    "TrainerStats",
    "evaluate",
    "evaluate_matrix",
    "initial_matrix_population",
    "initial_pitch_population",
    "matrix_population_exploitability",
    "matrix_population_mixture",
    "play_match",
    "run_league",
    "run_psro",
    "run_rollout_worker",
    "run_training_loop",
    "sample_opponent",
    "stable_seed",
    "train_best_response_pipeline",
]
