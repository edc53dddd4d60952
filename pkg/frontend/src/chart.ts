/**
 * SVG line chart for the wearing-time trend (at most five points).
 */

import type { TrendPoint } from './api.js';

const WIDTH = 420;
const HEIGHT = 180;
const PAD = 28;

export function renderTrendChart(container: HTMLElement, points: TrendPoint[]): void {
  container.innerHTML = '';
  const recent = points.slice(-5);
  if (recent.length === 0) {
    const empty = document.createElement('p');
    empty.className = 'empty-state';
    empty.textContent = 'No wearing-time records yet. Time a session during your next makeup use.';
    container.appendChild(empty);
    return;
  }

  const svg = document.createElementNS('http://www.w3.org/2000/svg', 'svg');
  svg.setAttribute('viewBox', `0 0 ${WIDTH} ${HEIGHT}`);
  svg.setAttribute('class', 'trend-chart');
  svg.setAttribute('role', 'img');

  const minutes = recent.map((p) => p.minutes);
  const maxVal = Math.max(...minutes, 1);
  const xAt = (i: number) =>
    recent.length === 1 ? WIDTH / 2 : PAD + (i * (WIDTH - 2 * PAD)) / (recent.length - 1);
  const yAt = (m: number) => HEIGHT - PAD - (m / maxVal) * (HEIGHT - 2 * PAD);

  if (recent.length > 1) {
    const line = document.createElementNS('http://www.w3.org/2000/svg', 'polyline');
    line.setAttribute(
      'points',
      recent.map((p, i) => `${xAt(i)},${yAt(p.minutes)}`).join(' '),
    );
    line.setAttribute('class', 'trend-line');
    line.setAttribute('fill', 'none');
    svg.appendChild(line);
  }

  recent.forEach((point, i) => {
    const dot = document.createElementNS('http://www.w3.org/2000/svg', 'circle');
    dot.setAttribute('cx', String(xAt(i)));
    dot.setAttribute('cy', String(yAt(point.minutes)));
    dot.setAttribute('r', '4');
    dot.setAttribute('class', 'trend-point');
    dot.setAttribute('data-session', point.session_id);
    const title = document.createElementNS('http://www.w3.org/2000/svg', 'title');
    title.textContent = `${point.session_id}: ${point.minutes.toFixed(1)} min`;
    dot.appendChild(title);
    svg.appendChild(dot);

    const label = document.createElementNS('http://www.w3.org/2000/svg', 'text');
    label.setAttribute('x', String(xAt(i)));
    label.setAttribute('y', String(HEIGHT - 8));
    label.setAttribute('text-anchor', 'middle');
    label.setAttribute('class', 'trend-label');
    label.textContent = `${Math.round(point.minutes)}m`;
    svg.appendChild(label);
  });

  container.appendChild(svg);
}
