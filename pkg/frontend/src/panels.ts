/**
 * HTML fragments for the info panels. Values are shown in raw grid units
 * (cells and cells-per-step), not the encoders' normalized ranges.
 */

import type { EventCounts } from './analyze.js';
import type { ReplayHeader, ReplayStep } from './replay.js';

function esc(value: unknown): string {
  return String(value).replace(/[&<>"]/g, (c) => {
    switch (c) {
      case '&':
        return '&amp;';
      case '<':
        return '&lt;';
      case '>':
        return '&gt;';
      default:
        return '&quot;';
    }
  });
}

export function teamPanelHtml(
  step: ReplayStep,
  team: 'L' | 'R',
  selected: number | null,
): string {
  const players = team === 'L' ? step.left : step.right;
  const rows = players
    .map((p, i) => {
      const owns = step.ball.ownerTeam === team && step.ball.ownerPlayer === i;
      const cls = [
        owns ? 'owner' : '',
        selected === i ? 'selected' : '',
      ]
        .filter(Boolean)
        .join(' ');
      const speed = Math.hypot(p.dx, p.dy).toFixed(2);
      return (
        `<tr class="${cls}" data-team="${team}" data-index="${i}">` +
        `<td>${i}</td><td>${esc(p.role)}</td><td>(${p.x}, ${p.y})</td>` +
        `<td>(${p.dx}, ${p.dy})</td><td>${speed}</td>` +
        `<td>${p.tired ? 'yes' : ''}</td></tr>`
      );
    })
    .join('');
  return (
    '<table><thead><tr><th>#</th><th>role</th><th>pos</th><th>dir</th>' +
    '<th>speed</th><th>tired</th></tr></thead>' +
    `<tbody>${rows}</tbody></table>`
  );
}

export function ballPanelHtml(step: ReplayStep): string {
  const b = step.ball;
  const owner =
    b.ownerTeam === null ? 'loose' : `${b.ownerTeam}${b.ownerPlayer}`;
  return (
    '<dl>' +
    `<dt>position</dt><dd>(${b.x}, ${b.y})</dd>` +
    `<dt>direction</dt><dd>(${b.dx}, ${b.dy})</dd>` +
    `<dt>height</dt><dd>${b.high ? 'high' : 'ground'}</dd>` +
    `<dt>owner</dt><dd>${owner}</dd>` +
    '</dl>'
  );
}

export function stepPanelHtml(header: ReplayHeader, step: ReplayStep, frames: number): string {
  const policies = (header.policies ?? []).join(' vs ');
  return (
    '<dl>' +
    `<dt>frame</dt><dd>${step.t} / ${frames - 1}</dd>` +
    `<dt>score</dt><dd>${step.score[0]} : ${step.score[1]}</dd>` +
    `<dt>mode</dt><dd>${esc(step.mode)}</dd>` +
    `<dt>reward L/R</dt><dd>${step.rewards[0]} / ${step.rewards[1]}</dd>` +
    `<dt>match</dt><dd>${esc(policies || header.match || '-')}</dd>` +
    '</dl>'
  );
}

export function statsPanelHtml(counts: EventCounts): string {
  const rows = (Object.keys(counts) as Array<keyof EventCounts>)
    .map(
      (key) =>
        `<tr><td>${key.replace('_', ' ')}</td>` +
        `<td>${counts[key].L}</td><td>${counts[key].R}</td></tr>`,
    )
    .join('');
  return (
    '<table><thead><tr><th>event</th><th>left</th><th>right</th></tr></thead>' +
    `<tbody>${rows}</tbody></table>`
  );
}
