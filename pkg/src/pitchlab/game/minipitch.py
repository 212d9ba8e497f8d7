"""MiniPitch: a deterministic gridworld football game.

The pitch is a width x height grid; the left team attacks toward growing x,
the right team toward x = 0, and that coordinate convention never changes.
Rule summary (the full table lives in the README):

* actions follow the 19-entry default vocabulary (idle, 8 directions,
  long/high/short pass, shot, sprint, release-direction, release-sprint,
  slide, dribble, release-dribble);
* a direction action moves the player one cell (two while sprinting and not
  tired), clamped to the pitch; players may share cells;
* passes travel in a straight line at 2 cells per step toward a teammate
  (short pass: nearest; long/high pass: deepest); every opponent cell the
  ball crosses rolls an interception at 0.3;
* a shot resolves instantly: always a goal from point-blank range
  (distance <= sqrt(2) to the goal mouth), otherwise with probability
  decreasing in distance, damped when the keeper covers the target row;
* slide attempts steal from an adjacent ball carrier at 0.5 (0.25 against a
  dribbling carrier); a failed slide is a foul giving a free kick, or a
  penalty when the victim stands in the opponent's penalty area;
* index 0 is an environment-controlled goalkeeper whenever a team has at
  least two players; it tracks the ball vertically on its goal column and
  immediately plays a short pass when it gains the ball;
* with halftime_swap, the whole state is mirrored on the x axis at the
  start of step T/2 + 1;
* in academy mode the episode ends as soon as possession switches teams or
  a goal is scored.

All randomness is resolved by `rng.event_roll`, keyed on (seed, step, event
kind, actor), so a fixed seed and action sequence reproduce the episode
bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .rng import event_roll
from .types import (
    BOTTOM,
    DIRECTION_DELTAS,
    DRIBBLE,
    GOAL,
    HIGH_PASS,
    IDLE,
    LEFT as ACT_LEFT,
    LONG_PASS,
    MOVE,
    N_ACTIONS,
    OUT_OF_PLAY,
    OWNERSHIP_CHANGE,
    PASS_ATTEMPT,
    PASS_COMPLETE,
    RELEASE_DRIBBLE,
    RELEASE_SPRINT,
    RIGHT as ACT_RIGHT,
    SHORT_PASS,
    SHOT,
    SHOT_EVENT,
    SLIDE,
    SPRINT,
    TOP,
    BallState,
    Event,
    GameMode,
    MiniPitchConfig,
    PlayerState,
    RawObservation,
    Role,
    Team,
    roles_for_team,
)

TIRED_AFTER = 6
PASS_SPEED = 2
INTERCEPT_P = 0.3
SLIDE_P = 0.5
SLIDE_P_VS_DRIBBLE = 0.25
GK_SAVE_FACTOR = 0.35
SHOT_FLOOR = 0.05


@dataclass
class _Player:
    x: int
    y: int
    role: Role
    dx: int = 0
    dy: int = 0
    sprinting: bool = False
    dribbling: bool = False
    sprint_steps: int = 0

    @property
    def tired(self) -> bool:
        return self.sprint_steps > TIRED_AFTER

    @property
    def pos(self) -> tuple[int, int]:
        return (self.x, self.y)


@dataclass
class _Flight:
    """A ball in transit: remaining path cells, who sent it and to whom."""

    path: list[tuple[int, int]]
    passer_team: Team
    passer_idx: int
    target_idx: int
    high: bool


class MiniPitch:
    """Single-threaded environment instance; create one per rollout worker."""

    def __init__(self, config: MiniPitchConfig, seed: Optional[int] = None):
        self.config = config
        self.seed = config.seed if seed is None else seed
        self._terminal = True
        self.reset()

    # -- lifecycle -----------------------------------------------------------

    def reset(self, seed: Optional[int] = None) -> RawObservation:
        if seed is not None:
            self.seed = seed
        self.step_index = 0
        self.score = [0, 0]
        self.players: dict[Team, list[_Player]] = {}
        self._terminal = False
        self._halftime_applied = False
        self._pending_kickoff: Optional[Team] = None
        self._place_kickoff(kicking=Team.LEFT)
        return self._observation()

    @property
    def terminal(self) -> bool:
        return self._terminal

    def controlled_indices(self, team: Team) -> list[int]:
        del team
        if self.config.has_goalkeepers:
            return list(range(1, self.config.n_per_team))
        return list(range(self.config.n_per_team))

    @property
    def n_controlled_per_team(self) -> int:
        return len(self.controlled_indices(Team.LEFT))

    def fingerprint(self) -> str:
        return self.config.fingerprint()

    def game_spec(self, gamma: float = 0.99) -> "MarkovGameSpec":
        from .types import MarkovGameSpec

        return MarkovGameSpec(
            n_agents_per_team=self.n_controlled_per_team,
            action_count_per_agent=N_ACTIONS,
            gamma=gamma,
            horizon=self.config.max_steps,
        )

    # -- kickoff / formations --------------------------------------------------

    def _formation(self, team: Team, kicking: bool) -> list[tuple[int, int]]:
        cfg = self.config
        w, h = cfg.width, cfg.height
        n = cfg.n_per_team
        spots: list[tuple[int, int]] = []
        for i in range(n):
            if i == 0 and cfg.has_goalkeepers:
                x = 0 if team is Team.LEFT else w - 1
                spots.append((x, h // 2))
                continue
            x = w // 4 if team is Team.LEFT else w - 1 - w // 4
            spots.append((x, (h * i) // n))
        if kicking:
            spots[n - 1] = (w // 2, h // 2)
        return spots

    def _place_kickoff(self, kicking: Team) -> None:
        cfg = self.config
        roles = roles_for_team(cfg.n_per_team)
        for team in (Team.LEFT, Team.RIGHT):
            spots = self._formation(team, kicking=team is kicking)
            self.players[team] = [
                _Player(x=x, y=y, role=roles[i]) for i, (x, y) in enumerate(spots)
            ]
        kicker = cfg.n_per_team - 1
        self.ball_x, self.ball_y = cfg.width // 2, cfg.height // 2
        self.ball_dx = self.ball_dy = 0
        self.ball_high = False
        self.owner: Optional[tuple[Team, int]] = (kicking, kicker)
        self.flight: Optional[_Flight] = None
        self.mode = GameMode.KICK_OFF
        self.possessing_team: Optional[Team] = kicking

    # -- observation ------------------------------------------------------------

    def _observation(self) -> RawObservation:
        cfg = self.config
        owner_team = self.owner[0] if self.owner else None
        owner_idx = self.owner[1] if self.owner else None
        return RawObservation(
            step_index=self.step_index,
            steps_left=cfg.max_steps - self.step_index,
            score=(self.score[0], self.score[1]),
            game_mode=self.mode,
            ball=BallState(
                x=self.ball_x,
                y=self.ball_y,
                dx=self.ball_dx,
                dy=self.ball_dy,
                high=self.ball_high,
                owned_team=owner_team,
                owned_player=owner_idx,
            ),
            players_left=tuple(self._player_state(p) for p in self.players[Team.LEFT]),
            players_right=tuple(
                self._player_state(p) for p in self.players[Team.RIGHT]
            ),
            width=cfg.width,
            height=cfg.height,
        )

    @staticmethod
    def _player_state(p: _Player) -> PlayerState:
        return PlayerState(
            x=p.x,
            y=p.y,
            dx=p.dx,
            dy=p.dy,
            role=p.role,
            tired=p.tired,
            sprinting=p.sprinting,
            dribbling=p.dribbling,
        )

    # -- stepping -----------------------------------------------------------------

    def step(
        self,
        left_actions: Sequence[int],
        right_actions: Sequence[int],
    ) -> tuple[RawObservation, list[Event], bool]:
        if self._terminal:
            raise RuntimeError("step() called on a terminal episode")
        cfg = self.config
        n_ctrl = self.n_controlled_per_team
        for name, acts in (("left", left_actions), ("right", right_actions)):
            if len(acts) != n_ctrl:
                raise ValueError(
                    f"{name} team expects {n_ctrl} actions, got {len(acts)}"
                )
            for a in acts:
                if not 0 <= int(a) < N_ACTIONS:
                    raise ValueError(f"action index {a} out of range")

        step = self.step_index + 1
        if self._pending_kickoff is not None:
            self._place_kickoff(kicking=self._pending_kickoff)
            self._pending_kickoff = None
        if (
            cfg.halftime_swap
            and not self._halftime_applied
            and step == cfg.max_steps // 2 + 1
        ):
            self._mirror_state()
            self._halftime_applied = True

        events: list[Event] = []
        possession_before = self.possessing_team
        mode_at_entry = self.mode
        self.ball_dx = self.ball_dy = 0

        actions = self._full_actions(left_actions, right_actions)
        if mode_at_entry is not GameMode.NORMAL:
            self._restrict_set_piece(actions)
        # Resolved per-player actions (goalkeeper and set-piece overrides
        # included) for replay recording.
        self.last_actions = {t: list(a) for t, a in actions.items()}

        self._apply_flag_actions(actions)
        self._apply_movement(actions, events, step)
        flight_before_ball_action = self.flight is not None
        goal_scored = self._apply_ball_action(actions, events, step)
        if not goal_scored:
            self._apply_slides(actions, events, step)
            # A pass launched this step already covered its first segment.
            if flight_before_ball_action:
                self._advance_flight(events, step)
            self._pickup_loose(events, step)

        if mode_at_entry is not GameMode.NORMAL and self.mode is mode_at_entry:
            self.mode = GameMode.NORMAL

        self.step_index = step
        terminal = self.step_index >= cfg.max_steps
        if cfg.academy_mode:
            if goal_scored:
                terminal = True
            elif (
                self.possessing_team is not None
                and possession_before is not None
                and self.possessing_team is not possession_before
            ):
                terminal = True
        self._terminal = terminal
        return self._observation(), events, terminal

    # -- action assembly -----------------------------------------------------------

    def _full_actions(
        self, left: Sequence[int], right: Sequence[int]
    ) -> dict[Team, list[int]]:
        cfg = self.config
        actions = {
            Team.LEFT: [IDLE] * cfg.n_per_team,
            Team.RIGHT: [IDLE] * cfg.n_per_team,
        }
        for team, supplied in ((Team.LEFT, left), (Team.RIGHT, right)):
            for slot, idx in enumerate(self.controlled_indices(team)):
                actions[team][idx] = int(supplied[slot])
        if cfg.has_goalkeepers:
            for team in (Team.LEFT, Team.RIGHT):
                actions[team][0] = self._goalkeeper_action(team)
        return actions

    def _goalkeeper_action(self, team: Team) -> int:
        gk = self.players[team][0]
        if self.owner == (team, 0):
            return SHORT_PASS
        cfg = self.config
        home_x = 0 if team is Team.LEFT else cfg.width - 1
        if gk.x != home_x:
            return ACT_RIGHT if home_x > gk.x else ACT_LEFT
        low, high = cfg.goal_rows
        target_y = min(max(self.ball_y, low - 1), high + 1)
        if gk.y < target_y:
            return BOTTOM
        if gk.y > target_y:
            return TOP
        return IDLE

    def _restrict_set_piece(self, actions: dict[Team, list[int]]) -> None:
        """During a set piece only the ball owner acts; everyone else idles."""
        allowed = {
            GameMode.KICK_OFF: set(DIRECTION_DELTAS)
            | {SHORT_PASS, LONG_PASS, HIGH_PASS},
            GameMode.FREE_KICK: {SHORT_PASS, LONG_PASS, HIGH_PASS, SHOT},
            GameMode.CORNER: {SHORT_PASS, LONG_PASS, HIGH_PASS},
            GameMode.PENALTY: {SHOT},
        }[self.mode]
        for team in (Team.LEFT, Team.RIGHT):
            for idx in range(self.config.n_per_team):
                if self.owner == (team, idx):
                    if actions[team][idx] not in allowed:
                        actions[team][idx] = IDLE
                else:
                    actions[team][idx] = IDLE

    # -- per-phase resolution ---------------------------------------------------

    def _apply_flag_actions(self, actions: dict[Team, list[int]]) -> None:
        for team in (Team.LEFT, Team.RIGHT):
            for idx, act in enumerate(actions[team]):
                p = self.players[team][idx]
                if act == SPRINT:
                    p.sprinting = True
                elif act == RELEASE_SPRINT:
                    p.sprinting = False
                    p.sprint_steps = 0
                elif act == DRIBBLE:
                    p.dribbling = True
                elif act == RELEASE_DRIBBLE:
                    p.dribbling = False

    def _apply_movement(
        self, actions: dict[Team, list[int]], events: list[Event], step: int
    ) -> None:
        cfg = self.config
        for team in (Team.LEFT, Team.RIGHT):
            for idx, act in enumerate(actions[team]):
                p = self.players[team][idx]
                delta = DIRECTION_DELTAS.get(act)
                if delta is None:
                    p.dx = p.dy = 0
                    continue
                span = 2 if (p.sprinting and not p.tired) else 1
                nx = min(max(p.x + delta[0] * span, 0), cfg.width - 1)
                ny = min(max(p.y + delta[1] * span, 0), cfg.height - 1)
                p.dx, p.dy = nx - p.x, ny - p.y
                if (nx, ny) != (p.x, p.y):
                    p.x, p.y = nx, ny
                    if p.sprinting:
                        p.sprint_steps += 1
                    events.append(Event(MOVE, step, team=team, player=idx))
                if self.owner == (team, idx):
                    self._move_ball_to(p.x, p.y)

    def _move_ball_to(self, x: int, y: int) -> None:
        self.ball_dx, self.ball_dy = x - self.ball_x, y - self.ball_y
        self.ball_x, self.ball_y = x, y

    def _apply_ball_action(
        self, actions: dict[Team, list[int]], events: list[Event], step: int
    ) -> bool:
        """Resolve the owner's pass or shot. Returns True when a goal landed."""
        if self.owner is None:
            return False
        team, idx = self.owner
        act = actions[team][idx]
        if act == SHOT:
            return self._resolve_shot(team, idx, events, step)
        if act in (SHORT_PASS, LONG_PASS, HIGH_PASS):
            self._launch_pass(team, idx, act, events, step)
        return False

    def _goal_mouth(self, attacking: Team, from_y: int) -> tuple[int, int]:
        cfg = self.config
        low, high = cfg.goal_rows
        gx = cfg.width - 1 if attacking is Team.LEFT else 0
        return gx, min(max(from_y, low), high)

    def _resolve_shot(
        self, team: Team, idx: int, events: list[Event], step: int
    ) -> bool:
        cfg = self.config
        shooter = self.players[team][idx]
        gx, gy = self._goal_mouth(team, shooter.y)
        dist = math.hypot(shooter.x - gx, shooter.y - gy)
        defending = team.other
        gk = self.players[defending][0] if cfg.has_goalkeepers else None
        if dist <= math.sqrt(2) + 1e-9:
            p_goal = 1.0
        else:
            p_goal = max(SHOT_FLOOR, 1.0 - (dist - 1.0) / cfg.shot_range)
            if gk is not None and abs(gk.y - gy) <= 1:
                p_goal *= GK_SAVE_FACTOR
        roll = event_roll(self.seed, step, "shot", _team_id(team), idx)
        if roll < p_goal:
            events.append(Event(SHOT_EVENT, step, team=team, player=idx, success=True))
            events.append(Event(GOAL, step, team=team, player=idx))
            self.score[0 if team is Team.LEFT else 1] += 1
            # The ball rests in the net for the remainder of this step; the
            # kickoff is placed when the next step begins.
            self._move_ball_to(gx, gy)
            self.owner = None
            self.flight = None
            self.ball_high = False
            self.possessing_team = None
            self.mode = GameMode.KICK_OFF
            self._pending_kickoff = defending
            return True
        events.append(Event(SHOT_EVENT, step, team=team, player=idx, success=False))
        if gk is not None and abs(gk.y - gy) <= 2:
            deflect = event_roll(self.seed, step, "deflect", _team_id(team), idx)
            if deflect < 0.5:
                self._give_ball(defending, 0, events, step, teleport_ball=True)
            else:
                self._start_corner(team, shooter.y, events, step)
        else:
            self._restart_out_of_play(team, events, step)
        return False

    def _start_corner(
        self, attacking: Team, from_y: int, events: list[Event], step: int
    ) -> None:
        cfg = self.config
        cx = cfg.width - 1 if attacking is Team.LEFT else 0
        cy = 0 if from_y < cfg.height / 2 else cfg.height - 1
        events.append(Event(OUT_OF_PLAY, step, team=attacking))
        taker = self._nearest_player(attacking, cx, cy, skip_gk=True)
        tp = self.players[attacking][taker]
        tp.x, tp.y = cx, cy
        tp.dx = tp.dy = 0
        self.ball_high = False
        self.flight = None
        self._move_ball_to(cx, cy)
        self._set_owner(attacking, taker, events, step)
        self.mode = GameMode.CORNER

    def _restart_out_of_play(self, team: Team, events: list[Event], step: int) -> None:
        """Failed shot with nobody saving: the defending side restarts."""
        events.append(Event(OUT_OF_PLAY, step, team=team))
        defending = team.other
        cfg = self.config
        gx = 0 if defending is Team.LEFT else cfg.width - 1
        restart_idx = (
            0
            if cfg.has_goalkeepers
            else self._nearest_player(defending, gx, cfg.height // 2, skip_gk=False)
        )
        self._give_ball(defending, restart_idx, events, step, teleport_ball=True)

    def _give_ball(
        self,
        team: Team,
        idx: int,
        events: list[Event],
        step: int,
        teleport_ball: bool = False,
    ) -> None:
        self.ball_high = False
        self.flight = None
        if teleport_ball:
            p = self.players[team][idx]
            self._move_ball_to(p.x, p.y)
        self._set_owner(team, idx, events, step)

    def _set_owner(self, team: Team, idx: int, events: list[Event], step: int) -> None:
        prev = self.owner
        self.owner = (team, idx)
        carrier = self.players[team][idx]
        if (carrier.x, carrier.y) != (self.ball_x, self.ball_y):
            carrier.x, carrier.y = self.ball_x, self.ball_y
        if prev != (team, idx):
            events.append(
                Event(
                    OWNERSHIP_CHANGE,
                    step,
                    team=team,
                    player=idx,
                    prev_team=prev[0] if prev else None,
                    prev_player=prev[1] if prev else None,
                )
            )
        if prev is not None and prev[0] is not team:
            self.players[prev[0]][prev[1]].dribbling = False
        self.possessing_team = team

    def _nearest_player(self, team: Team, x: int, y: int, skip_gk: bool) -> int:
        best, best_d = 0, None
        for idx, p in enumerate(self.players[team]):
            if skip_gk and idx == 0 and self.config.has_goalkeepers:
                continue
            d = math.hypot(p.x - x, p.y - y)
            if best_d is None or d < best_d:
                best, best_d = idx, d
        return best

    def _pass_target(self, team: Team, idx: int, kind: int) -> Optional[int]:
        me = self.players[team][idx]
        candidates = [(i, p) for i, p in enumerate(self.players[team]) if i != idx]
        if not candidates:
            return None
        if kind == SHORT_PASS:
            return min(
                candidates,
                key=lambda ip: (math.hypot(ip[1].x - me.x, ip[1].y - me.y), ip[0]),
            )[0]
        # Long and high passes pick the teammate deepest into the attack.
        sign = 1 if team is Team.LEFT else -1
        return max(candidates, key=lambda ip: (sign * ip[1].x, -ip[0]))[0]

    def _launch_pass(
        self, team: Team, idx: int, kind: int, events: list[Event], step: int
    ) -> None:
        target = self._pass_target(team, idx, kind)
        if target is None:
            return
        tp = self.players[team][target]
        path = _line_cells((self.ball_x, self.ball_y), (tp.x, tp.y))
        events.append(Event(PASS_ATTEMPT, step, team=team, player=idx, target=target))
        if not path:
            return
        self.owner = None
        self.flight = _Flight(
            path=path,
            passer_team=team,
            passer_idx=idx,
            target_idx=target,
            high=kind == HIGH_PASS,
        )
        self.ball_high = kind == HIGH_PASS
        self._advance_flight(events, step)

    def _advance_flight(self, events: list[Event], step: int) -> None:
        if self.flight is None:
            return
        fl = self.flight
        for _ in range(PASS_SPEED):
            if not fl.path:
                break
            cx, cy = fl.path.pop(0)
            self._move_ball_to(cx, cy)
            opp = fl.passer_team.other
            for oidx, op in enumerate(self.players[opp]):
                if (op.x, op.y) == (cx, cy):
                    roll = event_roll(
                        self.seed, step, "intercept", _team_id(opp), oidx, cx, cy
                    )
                    if roll < INTERCEPT_P:
                        self._give_ball(opp, oidx, events, step)
                        return
        if not fl.path:
            self._land_pass(events, step)

    def _land_pass(self, events: list[Event], step: int) -> None:
        fl = self.flight
        assert fl is not None
        team = fl.passer_team
        receiver = fl.target_idx
        rp = self.players[team][receiver]
        if max(abs(rp.x - self.ball_x), abs(rp.y - self.ball_y)) <= 1:
            self._give_ball(team, receiver, events, step)
            events.append(
                Event(PASS_COMPLETE, step, team=team, player=fl.passer_idx, target=receiver)
            )
            return
        landed = self._player_at(self.ball_x, self.ball_y)
        if landed is not None:
            t, i = landed
            self._give_ball(t, i, events, step)
            if t is team:
                events.append(
                    Event(PASS_COMPLETE, step, team=team, player=fl.passer_idx, target=i)
                )
            return
        # Nobody there: the ball sits loose where it landed.
        self.flight = None
        self.ball_high = False

    def _player_at(self, x: int, y: int) -> Optional[tuple[Team, int]]:
        for team in (Team.LEFT, Team.RIGHT):
            for idx, p in enumerate(self.players[team]):
                if (p.x, p.y) == (x, y):
                    return (team, idx)
        return None

    def _apply_slides(
        self, actions: dict[Team, list[int]], events: list[Event], step: int
    ) -> None:
        if self.owner is None:
            return
        owner_team, owner_idx = self.owner
        carrier = self.players[owner_team][owner_idx]
        for team in (Team.LEFT, Team.RIGHT):
            if team is owner_team:
                continue
            for idx, act in enumerate(actions[team]):
                if act != SLIDE:
                    continue
                p = self.players[team][idx]
                if max(abs(p.x - carrier.x), abs(p.y - carrier.y)) > 1:
                    continue
                threshold = SLIDE_P_VS_DRIBBLE if carrier.dribbling else SLIDE_P
                roll = event_roll(self.seed, step, "slide", _team_id(team), idx)
                if roll < threshold:
                    self._move_ball_to(p.x, p.y)
                    self._give_ball(team, idx, events, step)
                else:
                    self._award_foul(owner_team, owner_idx)
                return

    def _award_foul(self, victim_team: Team, victim_idx: int) -> None:
        cfg = self.config
        victim = self.players[victim_team][victim_idx]
        if self._in_penalty_area(victim.x, victim.y, attacking=victim_team):
            spot_x = cfg.width - 3 if victim_team is Team.LEFT else 2
            victim.x, victim.y = spot_x, cfg.height // 2
            victim.dx = victim.dy = 0
            self._move_ball_to(victim.x, victim.y)
            self.mode = GameMode.PENALTY
        else:
            self.mode = GameMode.FREE_KICK

    def _in_penalty_area(self, x: int, y: int, attacking: Team) -> bool:
        """Is (x, y) inside the penalty area in front of the attacked goal?"""
        cfg = self.config
        low, high = cfg.goal_rows
        if not (low - 1 <= y <= high + 1):
            return False
        if attacking is Team.LEFT:
            return x >= cfg.width - cfg.penalty_depth
        return x <= cfg.penalty_depth - 1

    def _pickup_loose(self, events: list[Event], step: int) -> None:
        if self.owner is not None or self.flight is not None:
            return
        found = self._player_at(self.ball_x, self.ball_y)
        if found is not None:
            self._give_ball(found[0], found[1], events, step)

    # -- halftime ---------------------------------------------------------------

    def _mirror_state(self) -> None:
        w = self.config.width
        for team in (Team.LEFT, Team.RIGHT):
            for p in self.players[team]:
                p.x = w - 1 - p.x
                p.dx = -p.dx
        self.ball_x = w - 1 - self.ball_x
        self.ball_dx = -self.ball_dx
        if self.flight is not None:
            self.flight.path = [(w - 1 - x, y) for x, y in self.flight.path]


def _team_id(team: Team) -> int:
    return 0 if team is Team.LEFT else 1


def _line_cells(start: tuple[int, int], end: tuple[int, int]) -> list[tuple[int, int]]:
    """Grid cells a straight pass crosses from start (exclusive) to end."""
    x0, y0 = start
    x1, y1 = end
    steps = max(abs(x1 - x0), abs(y1 - y0))
    cells = []
    for k in range(1, steps + 1):
        cx = x0 + round((x1 - x0) * k / steps)
        cy = y0 + round((y1 - y0) * k / steps)
        cells.append((int(cx), int(cy)))
    return cells
