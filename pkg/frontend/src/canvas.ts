/** Canvas 2D drawing of the pure scenes. */

import type { PitchScene, TimelineScene } from './render.js';

const MARGIN = 14;

export function drawPitch(canvas: HTMLCanvasElement, scene: PitchScene): void {
  const ctx = canvas.getContext('2d');
  if (!ctx) {
    return;
  }
  const cell = Math.min(
    (canvas.width - 2 * MARGIN) / scene.width,
    (canvas.height - 2 * MARGIN) / scene.height,
  );
  const px = (x: number) => MARGIN + (x + 0.5) * cell;
  const py = (y: number) => MARGIN + (y + 0.5) * cell;

  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.fillStyle = '#2e7d43';
  ctx.fillRect(MARGIN, MARGIN, scene.width * cell, scene.height * cell);
  ctx.strokeStyle = 'rgba(255,255,255,0.35)';
  ctx.lineWidth = 1;
  for (let x = 0; x <= scene.width; x++) {
    ctx.beginPath();
    ctx.moveTo(MARGIN + x * cell, MARGIN);
    ctx.lineTo(MARGIN + x * cell, MARGIN + scene.height * cell);
    ctx.stroke();
  }
  for (let y = 0; y <= scene.height; y++) {
    ctx.beginPath();
    ctx.moveTo(MARGIN, MARGIN + y * cell);
    ctx.lineTo(MARGIN + scene.width * cell, MARGIN + y * cell);
    ctx.stroke();
  }
  // Halfway line and goal mouths.
  ctx.strokeStyle = 'rgba(255,255,255,0.8)';
  ctx.beginPath();
  ctx.moveTo(MARGIN + (scene.width / 2) * cell, MARGIN);
  ctx.lineTo(MARGIN + (scene.width / 2) * cell, MARGIN + scene.height * cell);
  ctx.stroke();
  ctx.fillStyle = '#ffffff';
  const [low, high] = scene.goalRows;
  ctx.fillRect(MARGIN - 6, MARGIN + low * cell, 6, (high - low + 1) * cell);
  ctx.fillRect(
    MARGIN + scene.width * cell,
    MARGIN + low * cell,
    6,
    (high - low + 1) * cell,
  );

  for (const arrow of scene.arrows) {
    const x0 = px(arrow.x - arrow.dx);
    const y0 = py(arrow.y - arrow.dy);
    const x1 = px(arrow.x);
    const y1 = py(arrow.y);
    ctx.strokeStyle = arrow.color;
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.moveTo(x0, y0);
    ctx.lineTo(x1, y1);
    ctx.stroke();
    const angle = Math.atan2(y1 - y0, x1 - x0);
    ctx.beginPath();
    ctx.moveTo(x1, y1);
    ctx.lineTo(x1 - 7 * Math.cos(angle - 0.45), y1 - 7 * Math.sin(angle - 0.45));
    ctx.lineTo(x1 - 7 * Math.cos(angle + 0.45), y1 - 7 * Math.sin(angle + 0.45));
    ctx.closePath();
    ctx.fillStyle = arrow.color;
    ctx.fill();
  }

  for (const circle of scene.circles) {
    ctx.beginPath();
    ctx.arc(px(circle.x), py(circle.y), circle.radius * cell, 0, 2 * Math.PI);
    ctx.fillStyle = circle.color;
    ctx.fill();
    if (circle.ring) {
      ctx.beginPath();
      ctx.arc(px(circle.x), py(circle.y), circle.radius * cell + 3, 0, 2 * Math.PI);
      ctx.strokeStyle = circle.ring;
      ctx.lineWidth = 3;
      ctx.stroke();
    }
    if (circle.label) {
      ctx.fillStyle = '#ffffff';
      ctx.font = `${Math.max(10, cell * 0.4)}px sans-serif`;
      ctx.textAlign = 'center';
      ctx.textBaseline = 'middle';
      ctx.fillText(circle.label, px(circle.x), py(circle.y));
    }
  }
}

export function drawTimeline(
  canvas: HTMLCanvasElement,
  scene: TimelineScene,
  currentFrame: number,
): void {
  const ctx = canvas.getContext('2d');
  if (!ctx) {
    return;
  }
  const w = canvas.width;
  const h = canvas.height;
  ctx.clearRect(0, 0, w, h);
  if (scene.frames === 0) {
    return;
  }
  const fx = (frame: number) => (frame / scene.frames) * w;
  for (const seg of scene.segments) {
    ctx.fillStyle = seg.color;
    ctx.fillRect(fx(seg.start), 6, Math.max(1, fx(seg.end + 1) - fx(seg.start)), h - 12);
  }
  for (const goal of scene.goals) {
    ctx.fillStyle = '#111';
    ctx.fillRect(fx(goal.frame), 0, 2, h);
    ctx.beginPath();
    ctx.arc(fx(goal.frame) + 1, 5, 4, 0, 2 * Math.PI);
    ctx.fill();
  }
  ctx.fillStyle = '#d43b3b';
  ctx.fillRect(fx(currentFrame), 0, 2, h);
}
