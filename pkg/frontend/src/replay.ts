/**
 * Parser for the line-delimited replay format.
 *
 * A replay file is UTF-8 text: one JSON header line with format "replay/1",
 * then one JSON record per step. Record k holds the post-step state of env
 * step k+1 (score, mode, ball, both teams, resolved per-player actions and
 * per-team rewards), and step indices are contiguous from 0.
 *
 * This parser is written against the published format description and is
 * validated by golden fixtures exported from the training-side suite.
 */

export type TeamKey = 'L' | 'R';

export interface BallState {
  x: number;
  y: number;
  dx: number;
  dy: number;
  high: boolean;
  ownerTeam: TeamKey | null;
  ownerPlayer: number | null;
}

export interface PlayerRow {
  x: number;
  y: number;
  dx: number;
  dy: number;
  role: string;
  tired: boolean;
}

export interface ReplayStep {
  t: number;
  score: [number, number];
  mode: string;
  ball: BallState;
  left: PlayerRow[];
  right: PlayerRow[];
  actions: [number[], number[]];
  rewards: [number, number];
}

export interface ReplayHeader {
  format: string;
  env?: string;
  width: number;
  height: number;
  n_per_team: number;
  max_steps?: number;
  policies?: string[];
  seed?: number;
  match?: string;
  [key: string]: unknown;
}

export interface Replay {
  header: ReplayHeader;
  steps: ReplayStep[];
}

export class ReplayParseError extends Error {
  readonly line: number;

  constructor(line: number, message: string) {
    super(`line ${line}: ${message}`);
    this.line = line;
  }
}

function parsePlayer(raw: unknown, line: number): PlayerRow {
  if (!Array.isArray(raw) || raw.length !== 6) {
    throw new ReplayParseError(line, 'player record must have 6 fields');
  }
  return {
    x: Number(raw[0]),
    y: Number(raw[1]),
    dx: Number(raw[2]),
    dy: Number(raw[3]),
    role: String(raw[4]),
    tired: Boolean(raw[5]),
  };
}

function parseStep(raw: Record<string, unknown>, line: number): ReplayStep {
  const ball = raw['ball'] as Record<string, unknown> | undefined;
  if (!ball) {
    throw new ReplayParseError(line, 'missing ball state');
  }
  const owner = ball['owner'] as [string, number] | null;
  if (owner !== null && (!Array.isArray(owner) || owner.length !== 2 || owner[1] === null)) {
    throw new ReplayParseError(line, 'ball owner must be [team, player] or null');
  }
  const score = raw['score'] as [number, number];
  const act = raw['act'] as [number[], number[]];
  const rew = raw['rew'] as [number, number];
  if (!Array.isArray(score) || score.length !== 2) {
    throw new ReplayParseError(line, 'score must be a pair');
  }
  if (!Array.isArray(act) || act.length !== 2) {
    throw new ReplayParseError(line, 'actions must cover both teams');
  }
  return {
    t: Number(raw['t']),
    score: [Number(score[0]), Number(score[1])],
    mode: String(raw['mode']),
    ball: {
      x: Number(ball['x']),
      y: Number(ball['y']),
      dx: Number(ball['dx']),
      dy: Number(ball['dy']),
      high: Boolean(ball['hi']),
      ownerTeam: owner === null ? null : (owner[0] as TeamKey),
      ownerPlayer: owner === null ? null : Number(owner[1]),
    },
    left: (raw['left'] as unknown[]).map((p) => parsePlayer(p, line)),
    right: (raw['right'] as unknown[]).map((p) => parsePlayer(p, line)),
    actions: [act[0].map(Number), act[1].map(Number)],
    rewards: [Number(rew?.[0] ?? 0), Number(rew?.[1] ?? 0)],
  };
}

export function parseReplay(text: string): Replay {
  const lines = text.split('\n');
  while (lines.length && lines[lines.length - 1] === '') {
    lines.pop();
  }
  if (!lines.length || !lines[0].trim()) {
    throw new ReplayParseError(1, 'missing replay header');
  }
  let header: ReplayHeader;
  try {
    header = JSON.parse(lines[0]) as ReplayHeader;
  } catch (err) {
    throw new ReplayParseError(1, `malformed header: ${(err as Error).message}`);
  }
  if (header.format !== 'replay/1') {
    throw new ReplayParseError(1, `unsupported format ${JSON.stringify(header.format)}`);
  }
  const steps: ReplayStep[] = [];
  for (let i = 1; i < lines.length; i++) {
    const lineNo = i + 1;
    const line = lines[i];
    if (!line.trim()) {
      throw new ReplayParseError(lineNo, 'blank record line');
    }
    let raw: Record<string, unknown>;
    try {
      raw = JSON.parse(line) as Record<string, unknown>;
    } catch (err) {
      throw new ReplayParseError(lineNo, `malformed record: ${(err as Error).message}`);
    }
    let step: ReplayStep;
    try {
      step = parseStep(raw, lineNo);
    } catch (err) {
      if (err instanceof ReplayParseError) {
        throw err;
      }
      throw new ReplayParseError(lineNo, (err as Error).message);
    }
    if (step.t !== steps.length) {
      throw new ReplayParseError(
        lineNo,
        `step index ${step.t} breaks the contiguous order`,
      );
    }
    steps.push(step);
  }
  return { header, steps };
}
