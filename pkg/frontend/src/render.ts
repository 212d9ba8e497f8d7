/**
 * Pure scene builders for the bird's-eye pitch and the decomposition
 * timeline. The canvas layer just draws what these return, so rendering
 * stays a pure function of (replay, frame).
 *
 * Conventions: left-team players are blue circles, right-team players
 * green, the ball is a black circle whose radius grows with height, and a
 * red ring marks the ball owner. Arrows show per-step movement, scaled by
 * speed; zero-length arrows are suppressed.
 */

import type { MatchAnalysis } from './analyze.js';
import type { Replay, ReplayStep } from './replay.js';

export const LEFT_COLOR = '#3b6fd4';
export const RIGHT_COLOR = '#3da55b';
export const BALL_COLOR = '#111111';
export const OWNER_RING_COLOR = '#d43b3b';

export interface Circle {
  x: number;
  y: number;
  radius: number;
  color: string;
  label?: string;
  ring?: string;
}

export interface Arrow {
  x: number;
  y: number;
  dx: number;
  dy: number;
  color: string;
}

export interface PitchScene {
  width: number; // grid cells
  height: number;
  circles: Circle[];
  arrows: Arrow[];
  goalRows: [number, number];
}

export function buildPitchScene(replay: Replay, step: ReplayStep): PitchScene {
  const width = replay.header.width;
  const height = replay.header.height;
  const circles: Circle[] = [];
  const arrows: Arrow[] = [];

  const teams: Array<{ key: 'L' | 'R'; color: string; players: ReplayStep['left'] }> = [
    { key: 'L', color: LEFT_COLOR, players: step.left },
    { key: 'R', color: RIGHT_COLOR, players: step.right },
  ];
  for (const { key, color, players } of teams) {
    players.forEach((p, index) => {
      const owns =
        step.ball.ownerTeam === key && step.ball.ownerPlayer === index;
      circles.push({
        x: p.x,
        y: p.y,
        radius: 0.32,
        color,
        label: `${index}`,
        ring: owns ? OWNER_RING_COLOR : undefined,
      });
      if (p.dx !== 0 || p.dy !== 0) {
        arrows.push({ x: p.x, y: p.y, dx: p.dx, dy: p.dy, color });
      }
    });
  }
  circles.push({
    x: step.ball.x,
    y: step.ball.y,
    radius: step.ball.high ? 0.22 : 0.14,
    color: BALL_COLOR,
  });
  if (step.ball.dx !== 0 || step.ball.dy !== 0) {
    arrows.push({
      x: step.ball.x,
      y: step.ball.y,
      dx: step.ball.dx,
      dy: step.ball.dy,
      color: BALL_COLOR,
    });
  }
  const low = Math.floor(height / 2) - 1;
  return { width, height, circles, arrows, goalRows: [low, low + 1] };
}

export interface TimelineSegment {
  start: number; // frame index
  end: number;
  kind: 'chain' | 'gap';
  team?: 'L' | 'R';
  color: string;
}

export interface TimelineMark {
  frame: number;
  team: 'L' | 'R' | null;
}

export interface TimelineScene {
  frames: number;
  segments: TimelineSegment[];
  goals: TimelineMark[];
}

/** Chain strip with goal markers; clicking a segment seeks to its start. */
export function buildTimeline(analysis: MatchAnalysis, frames: number): TimelineScene {
  const segments: TimelineSegment[] = [];
  let cursor = 0;
  for (const chain of analysis.chains) {
    if (chain.start > cursor) {
      segments.push({ start: cursor, end: chain.start - 1, kind: 'gap', color: '#ddd' });
    }
    segments.push({
      start: chain.start,
      end: chain.end,
      kind: 'chain',
      team: chain.team,
      color: chain.team === 'L' ? LEFT_COLOR : RIGHT_COLOR,
    });
    cursor = chain.end + 1;
  }
  if (cursor < frames) {
    segments.push({ start: cursor, end: frames - 1, kind: 'gap', color: '#ddd' });
  }
  const goals: TimelineMark[] = analysis.subgames
    .filter((sg) => sg.scoringTeam !== null)
    .map((sg) => ({ frame: sg.end, team: sg.scoringTeam }));
  return { frames, segments, goals };
}

/** Frame index for a click at normalized x in [0, 1] on the timeline. */
export function timelineFrameAt(scene: TimelineScene, normX: number): number {
  if (scene.frames === 0) {
    return 0;
  }
  const frame = Math.floor(normX * scene.frames);
  return Math.max(0, Math.min(frame, scene.frames - 1));
}

/** Start frame of the segment that covers a frame (click-to-seek lands on
 * chain starts). */
export function segmentStartAt(scene: TimelineScene, frame: number): number {
  for (const seg of scene.segments) {
    if (frame >= seg.start && frame <= seg.end) {
      return seg.start;
    }
  }
  return frame;
}
