/**
 * Debugger view state: one loaded replay, a current frame, playback flags.
 * Pure state transitions so scrubbing and stepping are trivially testable.
 */

import { analyzeReplay, countsAt, type EventCounts, type MatchAnalysis } from './analyze.js';
import { parseReplay, type Replay } from './replay.js';

export interface DebuggerViewState {
  replay: Replay;
  analysis: MatchAnalysis;
  frame: number;
  playing: boolean;
  speed: number; // frames advanced per tick
  selectedPlayer: { team: 'L' | 'R'; index: number } | null;
}

export function loadReplay(text: string): DebuggerViewState {
  const replay = parseReplay(text);
  const analysis = analyzeReplay(replay);
  return {
    replay,
    analysis,
    frame: 0,
    playing: false,
    speed: 1,
    selectedPlayer: null,
  };
}

export function frameCount(view: DebuggerViewState): number {
  return view.replay.steps.length;
}

export function clampFrame(view: DebuggerViewState, frame: number): number {
  const last = Math.max(0, frameCount(view) - 1);
  return Math.max(0, Math.min(frame, last));
}

/** Step by a delta (typically -10, -1, +1 or +10), clamped to the replay. */
export function step(view: DebuggerViewState, delta: number): DebuggerViewState {
  return { ...view, frame: clampFrame(view, view.frame + delta) };
}

export function seek(view: DebuggerViewState, frame: number): DebuggerViewState {
  return { ...view, frame: clampFrame(view, frame) };
}

export function togglePlay(view: DebuggerViewState): DebuggerViewState {
  if (frameCount(view) === 0) {
    return view;
  }
  return { ...view, playing: !view.playing };
}

/** One playback tick: advance by the speed, pausing at the final frame. */
export function tick(view: DebuggerViewState): DebuggerViewState {
  if (!view.playing) {
    return view;
  }
  const next = clampFrame(view, view.frame + view.speed);
  return {
    ...view,
    frame: next,
    playing: next < frameCount(view) - 1,
  };
}

export function selectPlayer(
  view: DebuggerViewState,
  team: 'L' | 'R',
  index: number,
): DebuggerViewState {
  const current = view.selectedPlayer;
  if (current && current.team === team && current.index === index) {
    return { ...view, selectedPlayer: null };
  }
  return { ...view, selectedPlayer: { team, index } };
}

export function statsAtCurrentFrame(view: DebuggerViewState): EventCounts {
  return countsAt(view.analysis, view.frame);
}
