/**
 * Client-side match analytics: possession chains and cumulative event
 * counts, matching the training-side decomposition rules.
 *
 * A match splits into subgames at score changes; single-team possession
 * runs form chains; single-player runs form nodes. Loose spells between
 * two owners of the same team (with no goal in between) belong to the
 * previous owner. Node transitions are passes, chain transitions are
 * intercepts for the gaining team, and a goal whose subgame ends with a
 * two-plus-node chain of the scoring team credits an assist to the
 * second-to-last node's player. Shots count records whose previous-record
 * ball owner played the shot action (index 12).
 */

import type { Replay, TeamKey } from './replay.js';

export const SHOT_ACTION = 12;

export interface TeamCounts {
  L: number;
  R: number;
}

export interface EventCounts {
  goals: TeamCounts;
  shots: TeamCounts;
  passes: TeamCounts;
  intercepts: TeamCounts;
  assists: TeamCounts;
  possession_steps: TeamCounts;
}

export interface NodeSpan {
  player: number;
  start: number;
  end: number;
}

export interface ChainSpan {
  team: TeamKey;
  start: number;
  end: number;
  nodes: NodeSpan[];
}

export interface SubgameSpan {
  start: number;
  end: number;
  scoringTeam: TeamKey | null;
  chains: ChainSpan[];
}

export interface MatchAnalysis {
  /** Cumulative counts *after* each frame; index by frame. */
  cumulative: EventCounts[];
  subgames: SubgameSpan[];
  chains: ChainSpan[];
}

function zeroCounts(): EventCounts {
  return {
    goals: { L: 0, R: 0 },
    shots: { L: 0, R: 0 },
    passes: { L: 0, R: 0 },
    intercepts: { L: 0, R: 0 },
    assists: { L: 0, R: 0 },
    possession_steps: { L: 0, R: 0 },
  };
}

function cloneCounts(c: EventCounts): EventCounts {
  return {
    goals: { ...c.goals },
    shots: { ...c.shots },
    passes: { ...c.passes },
    intercepts: { ...c.intercepts },
    assists: { ...c.assists },
    possession_steps: { ...c.possession_steps },
  };
}

export function analyzeReplay(replay: Replay): MatchAnalysis {
  const counts = zeroCounts();
  const cumulative: EventCounts[] = [];
  const subgames: SubgameSpan[] = [];

  let chains: ChainSpan[] = [];
  let chain: ChainSpan | null = null;
  let prevScore: [number, number] = [0, 0];
  let subgameStart = 0;

  const closeSubgame = (frame: number, scoring: TeamKey | null) => {
    subgames.push({ start: subgameStart, end: frame, scoringTeam: scoring, chains });
    chains = [];
    chain = null;
    subgameStart = frame + 1;
  };

  for (let k = 0; k < replay.steps.length; k++) {
    const rec = replay.steps[k];

    if (rec.score[0] !== prevScore[0] || rec.score[1] !== prevScore[1]) {
      let scoring: TeamKey | null = null;
      if (rec.score[0] > prevScore[0] && rec.score[1] === prevScore[1]) {
        scoring = 'L';
      } else if (rec.score[1] > prevScore[1] && rec.score[0] === prevScore[0]) {
        scoring = 'R';
      }
      if (scoring !== null) {
        counts.goals[scoring] += 1;
        if (chain !== null && chain.team === scoring && chain.nodes.length >= 2) {
          counts.assists[scoring] += 1;
        }
      }
      prevScore = [rec.score[0], rec.score[1]];
      closeSubgame(k, scoring);
    }

    const owner = rec.ball.ownerTeam;
    if (owner !== null) {
      const player = rec.ball.ownerPlayer as number;
      if (chain !== null && chain.team === owner) {
        const node = chain.nodes[chain.nodes.length - 1];
        if (node.player === player) {
          // Same player again: any loose frames in between stay theirs.
          counts.possession_steps[owner] += k - node.end;
          node.end = k;
        } else {
          // Pass within the chain; the flight belongs to the passer.
          counts.passes[owner] += 1;
          counts.possession_steps[owner] += k - node.end;
          node.end = k - 1;
          chain.nodes.push({ player, start: k, end: k });
        }
        chain.end = k;
      } else {
        if (chain !== null) {
          counts.intercepts[owner] += 1;
        }
        chain = { team: owner, start: k, end: k, nodes: [{ player, start: k, end: k }] };
        chains.push(chain);
        counts.possession_steps[owner] += 1;
      }
    }

    if (k >= 1) {
      const prev = replay.steps[k - 1];
      if (prev.ball.ownerTeam !== null) {
        const side = prev.ball.ownerTeam === 'L' ? 0 : 1;
        const idx = prev.ball.ownerPlayer as number;
        const acts = rec.actions[side];
        if (idx < acts.length && acts[idx] === SHOT_ACTION) {
          counts.shots[prev.ball.ownerTeam] += 1;
        }
      }
    }

    cumulative.push(cloneCounts(counts));
  }
  const lastFrame = replay.steps.length - 1;
  if (replay.steps.length > 0 && (chains.length > 0 || subgameStart <= lastFrame)) {
    subgames.push({ start: subgameStart, end: lastFrame, scoringTeam: null, chains });
  }
  const allChains = subgames.flatMap((sg) => sg.chains);
  return { cumulative, subgames, chains: allChains };
}

export function countsAt(analysis: MatchAnalysis, frame: number): EventCounts {
  if (!analysis.cumulative.length) {
    return zeroCounts();
  }
  const idx = Math.max(0, Math.min(frame, analysis.cumulative.length - 1));
  return analysis.cumulative[idx];
}
