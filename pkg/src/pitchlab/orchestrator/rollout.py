"""Match execution: one generic episode runner shared by rollout workers,
evaluation and replay recording."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from ..analysis.replay import Replay, ReplayRecorder
from ..features import compute_action_mask
from ..game.minipitch import MiniPitch
from ..game.types import Team, mirror_action
from ..learner import Actor, Policy, TabularActor, state_key
from ..rewards import RewardConfig, RewardTracker, scoring_reward
from .buffers import BufferClosed, Episode, EpisodeBuffer, PolicyServer
from .tasks import RolloutTask, stable_seed


@dataclass
class MatchResult:
    score: tuple[int, int]
    steps: int
    transitions: list[tuple[str, int, float, str, tuple[int, ...], bool]]
    replay: Optional[Replay] = None


def play_match(
    env: MiniPitch,
    left_actor: Actor,
    right_actor: Actor,
    seed: int,
    reward_config: Optional[RewardConfig] = None,
    collect_side: Optional[Team] = None,
    sharing: bool = True,
    record: bool = False,
    policies: tuple[str, str] = ("left", "right"),
    max_steps: Optional[int] = None,
    step_latency: float = 0.0,
) -> MatchResult:
    """Run one episode.

    Each side acts on its own view: the right team sees the mirrored pitch
    and its horizontal actions are translated back before stepping. With
    `collect_side`, transitions (keys, masks, rewards) are gathered from
    that side's view for training.
    """
    obs = env.reset(seed=seed)
    agents = env.controlled_indices(Team.LEFT)
    rngs = {
        Team.LEFT: np.random.default_rng((seed, 0)),
        Team.RIGHT: np.random.default_rng((seed, 1)),
    }
    actors = {Team.LEFT: left_actor, Team.RIGHT: right_actor}
    tracker = (
        RewardTracker(collect_side, reward_config, env.config)
        if reward_config is not None and collect_side is not None
        else None
    )
    recorder = ReplayRecorder(env.config, seed, policies) if record else None
    transitions: list[tuple[str, int, float, str, tuple[int, ...], bool]] = []
    cap = max_steps if max_steps is not None else env.config.max_steps
    steps = 0
    done = False
    while not done and steps < cap:
        views = {Team.LEFT: obs, Team.RIGHT: obs.mirror_view()}
        acts_view: dict[Team, list[int]] = {}
        for team in (Team.LEFT, Team.RIGHT):
            masks = [compute_action_mask(views[team], a) for a in agents]
            acts_view[team] = actors[team].act_team(
                views[team], agents, masks, rngs[team]
            )
        keys = (
            [state_key(views[collect_side], a, sharing) for a in agents]
            if collect_side is not None
            else None
        )
        obs, events, done = env.step(
            acts_view[Team.LEFT],
            [mirror_action(a) for a in acts_view[Team.RIGHT]],
        )
        steps += 1
        if steps >= cap:
            done = True
        if step_latency > 0.0:
            time.sleep(step_latency)
        rewards_all = tracker.step(obs, events, done) if tracker is not None else None
        if collect_side is not None:
            next_view = obs if collect_side is Team.LEFT else obs.mirror_view()
            for slot, agent in enumerate(agents):
                next_key = state_key(next_view, agent, sharing)
                next_mask = compute_action_mask(next_view, agent)
                reward = float(rewards_all[agent]) if rewards_all is not None else 0.0
                transitions.append(
                    (
                        keys[slot],
                        acts_view[collect_side][slot],
                        reward,
                        next_key,
                        tuple(next_mask.allowed_indices()),
                        done,
                    )
                )
        if recorder is not None:
            recorder.record(
                obs,
                (env.last_actions[Team.LEFT], env.last_actions[Team.RIGHT]),
                (scoring_reward(events, Team.LEFT), scoring_reward(events, Team.RIGHT)),
            )
    return MatchResult(
        score=(obs.score[0], obs.score[1]),
        steps=steps,
        transitions=transitions,
        replay=recorder.replay if recorder is not None else None,
    )


def sample_opponent(
    task: RolloutTask, worker: int, ordinal: int
) -> str:
    """Deterministic opponent draw for (task seed, worker, episode ordinal)."""
    rng = np.random.default_rng(stable_seed(task.seed, worker, ordinal, "opp"))
    idx = int(rng.choice(len(task.opponent_ids), p=np.array(task.opponent_probs)))
    return task.opponent_ids[idx]


def run_rollout_worker(
    task: RolloutTask,
    worker: int,
    env_factory: Callable[[], MiniPitch],
    policy_server: PolicyServer,
    opponent_lookup: Callable[[str], Policy],
    buffer: EpisodeBuffer,
    learner_policy_id: str,
    reward_config: RewardConfig,
    stop_flag: Optional[Callable[[], bool]] = None,
    on_opponent: Optional[Callable[[str], None]] = None,
) -> int:
    """Produce episodes until the quota, the buffer closes, or stop signals.

    Every episode fetches the newest learner policy, samples an opponent
    from the task distribution, plays, and pushes the episode. Payloads are
    fully determined by (task seed, worker index, episode ordinal) plus the
    learner policy version in play.
    """
    env = env_factory()
    produced = 0
    ordinal = 0
    while task.episodes is None or produced < task.episodes:
        if stop_flag is not None and stop_flag():
            break
        opp_id = sample_opponent(task, worker, ordinal)
        if on_opponent is not None:
            on_opponent(opp_id)
        opponent = opponent_lookup(opp_id)
        policy = policy_server.latest(learner_policy_id)
        sharing = bool(policy.data.get("sharing", True))
        seed = stable_seed(task.seed, worker, ordinal, "episode")
        # Alternate the learner's side so the policy trains on both the
        # kickoff and the chasing role.
        side = Team.LEFT if ordinal % 2 == 0 else Team.RIGHT
        learner_actor = TabularActor(policy.data)
        opp_actor = opponent.start_episode()
        result = play_match(
            env,
            learner_actor if side is Team.LEFT else opp_actor,
            opp_actor if side is Team.LEFT else learner_actor,
            seed=seed,
            reward_config=reward_config,
            collect_side=side,
            sharing=sharing,
            max_steps=task.max_episode_steps,
            step_latency=task.step_latency,
        )
        score = result.score if side is Team.LEFT else (result.score[1], result.score[0])
        episode = Episode(
            seed=seed,
            opponent_id=opp_id,
            policy_version=policy.version,
            steps=result.steps,
            score=score,
            transitions=result.transitions,
            worker=worker,
            ordinal=ordinal,
        )
        try:
            buffer.push(episode, timeout=60.0)
        except BufferClosed:
            break
        produced += 1
        ordinal += 1
    return produced
