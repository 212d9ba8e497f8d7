/**
 * Wiring: load a replay from a local file or from the ranking service
 * (?match=ID), then keep all panels in sync with the current frame.
 *
 * Keyboard: arrows step by 1, shift+arrows by 10, space toggles playback.
 */

import { buildPitchScene, buildTimeline, segmentStartAt, timelineFrameAt } from './render.js';
import { drawPitch, drawTimeline } from './canvas.js';
import {
  ballPanelHtml,
  statsPanelHtml,
  stepPanelHtml,
  teamPanelHtml,
} from './panels.js';
import {
  loadReplay,
  seek,
  selectPlayer,
  statsAtCurrentFrame,
  step,
  togglePlay,
  tick,
  type DebuggerViewState,
} from './view.js';

let view: DebuggerViewState | null = null;
let timer: number | null = null;

const $ = (id: string) => document.getElementById(id)!;

function setStatus(message: string, isError = false): void {
  const el = $('status');
  el.textContent = message;
  el.className = isError ? 'error' : '';
}

function render(): void {
  if (!view) {
    return;
  }
  const frames = view.replay.steps.length;
  const slider = $('slider') as HTMLInputElement;
  const controls = [slider, $('btn-m10'), $('btn-m1'), $('btn-p1'), $('btn-p10'), $('btn-play')];
  if (frames === 0) {
    controls.forEach((c) => c.setAttribute('disabled', 'disabled'));
    setStatus('replay has an empty body; nothing to display', true);
    return;
  }
  controls.forEach((c) => c.removeAttribute('disabled'));
  slider.max = String(frames - 1);
  slider.value = String(view.frame);
  const current = view.replay.steps[view.frame];
  drawPitch($('pitch') as HTMLCanvasElement, buildPitchScene(view.replay, current));
  drawTimeline(
    $('timeline') as HTMLCanvasElement,
    buildTimeline(view.analysis, frames),
    view.frame,
  );
  $('left-panel').innerHTML = teamPanelHtml(
    current,
    'L',
    view.selectedPlayer?.team === 'L' ? view.selectedPlayer.index : null,
  );
  $('right-panel').innerHTML = teamPanelHtml(
    current,
    'R',
    view.selectedPlayer?.team === 'R' ? view.selectedPlayer.index : null,
  );
  $('ball-panel').innerHTML = ballPanelHtml(current);
  $('step-panel').innerHTML = stepPanelHtml(view.replay.header, current, frames);
  $('stats-panel').innerHTML = statsPanelHtml(statsAtCurrentFrame(view));
  ($('btn-play') as HTMLButtonElement).textContent = view.playing ? 'pause' : 'play';
}

function update(next: DebuggerViewState): void {
  view = next;
  render();
}

function loadText(text: string, label: string): void {
  try {
    update(loadReplay(text));
    setStatus(`loaded ${label}: ${view!.replay.steps.length} frames`);
  } catch (err) {
    setStatus(`failed to load ${label}: ${(err as Error).message}`, true);
  }
}

function startPlayback(): void {
  if (timer !== null) {
    return;
  }
  timer = window.setInterval(() => {
    if (!view || !view.playing) {
      return;
    }
    update(tick(view));
  }, 100);
}

function bind(): void {
  startPlayback();
  ($('file-input') as HTMLInputElement).addEventListener('change', async (ev) => {
    const input = ev.target as HTMLInputElement;
    const file = input.files?.[0];
    if (file) {
      loadText(await file.text(), file.name);
    }
  });
  ($('slider') as HTMLInputElement).addEventListener('input', (ev) => {
    if (view) {
      update(seek(view, Number((ev.target as HTMLInputElement).value)));
    }
  });
  const stepButtons: Array<[string, number]> = [
    ['btn-m10', -10],
    ['btn-m1', -1],
    ['btn-p1', 1],
    ['btn-p10', 10],
  ];
  for (const [id, delta] of stepButtons) {
    $(id).addEventListener('click', () => {
      if (view) {
        update(step(view, delta));
      }
    });
  }
  $('btn-play').addEventListener('click', () => {
    if (view) {
      update(togglePlay(view));
    }
  });
  ($('speed') as HTMLSelectElement).addEventListener('change', (ev) => {
    if (view) {
      update({ ...view, speed: Number((ev.target as HTMLSelectElement).value) });
    }
  });
  ($('timeline') as HTMLCanvasElement).addEventListener('click', (ev) => {
    if (!view) {
      return;
    }
    const canvas = ev.target as HTMLCanvasElement;
    const rect = canvas.getBoundingClientRect();
    const scene = buildTimeline(view.analysis, view.replay.steps.length);
    const frame = timelineFrameAt(scene, (ev.clientX - rect.left) / rect.width);
    update(seek(view, segmentStartAt(scene, frame)));
  });
  for (const panelId of ['left-panel', 'right-panel']) {
    $(panelId).addEventListener('click', (ev) => {
      const row = (ev.target as HTMLElement).closest('tr[data-team]');
      if (row && view) {
        update(
          selectPlayer(
            view,
            row.getAttribute('data-team') as 'L' | 'R',
            Number(row.getAttribute('data-index')),
          ),
        );
      }
    });
  }
  window.addEventListener('keydown', (ev) => {
    if (!view) {
      return;
    }
    if (ev.key === 'ArrowRight') {
      update(step(view, ev.shiftKey ? 10 : 1));
      ev.preventDefault();
    } else if (ev.key === 'ArrowLeft') {
      update(step(view, ev.shiftKey ? -10 : -1));
      ev.preventDefault();
    } else if (ev.key === ' ') {
      update(togglePlay(view));
      ev.preventDefault();
    }
  });

  const params = new URLSearchParams(window.location.search);
  const match = params.get('match');
  if (match) {
    setStatus(`fetching replay for match ${match}...`);
    fetch(`/matches/${encodeURIComponent(match)}/replay`)
      .then(async (resp) => {
        if (!resp.ok) {
          throw new Error(`HTTP ${resp.status}`);
        }
        loadText(await resp.text(), `match ${match}`);
      })
      .catch((err) => setStatus(`failed to fetch match ${match}: ${err}`, true));
  } else {
    setStatus('load a replay file to begin');
  }
}

document.addEventListener('DOMContentLoaded', bind);
