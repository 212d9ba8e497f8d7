import { readFileSync } from 'node:fs';
import { join } from 'node:path';
import { describe, expect, it } from 'vitest';

import { analyzeReplay, countsAt } from '../src/analyze.js';
import { parseReplay } from '../src/replay.js';

const FIXTURES = join(__dirname, '..', 'fixtures');
const replay = parseReplay(readFileSync(join(FIXTURES, 'golden_3000.rpl'), 'utf-8'));
const expected = JSON.parse(
  readFileSync(join(FIXTURES, 'golden_3000.stats.json'), 'utf-8'),
) as {
  frames: Record<string, Record<string, { L: number; R: number }>>;
  decomposition: {
    subgames: Array<[number, number]>;
    chains: Array<{ team: string; start: number; end: number; nodes: Array<[number, number, number]> }>;
  };
};

describe('analyzeReplay against the training-side analytics', () => {
  const analysis = analyzeReplay(replay);

  it('matches cumulative event counts at every pinned frame', () => {
    for (const [frame, wanted] of Object.entries(expected.frames)) {
      const got = countsAt(analysis, Number(frame));
      expect(got, `frame ${frame}`).toEqual(wanted);
    }
  });

  it('matches the final-frame counts exactly (acceptance check)', () => {
    const got = countsAt(analysis, replay.steps.length - 1);
    expect(got).toEqual(expected.frames['2999']);
  });

  it('reproduces the subgame boundaries', () => {
    const got = analysis.subgames.map((sg) => [sg.start, sg.end]);
    expect(got).toEqual(expected.decomposition.subgames);
  });

  it('reproduces every chain and node interval', () => {
    const got = analysis.chains.map((chain) => ({
      team: chain.team,
      start: chain.start,
      end: chain.end,
      nodes: chain.nodes.map((n) => [n.player, n.start, n.end]),
    }));
    expect(got).toEqual(expected.decomposition.chains);
  });

  it('keeps cumulative counters monotone', () => {
    let prevTotal = -1;
    for (let frame = 0; frame < replay.steps.length; frame += 97) {
      const counts = countsAt(analysis, frame);
      const total =
        counts.goals.L + counts.goals.R + counts.passes.L + counts.passes.R;
      expect(total).toBeGreaterThanOrEqual(prevTotal);
      prevTotal = total;
    }
  });
});
