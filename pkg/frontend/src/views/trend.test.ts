import { beforeEach, describe, expect, it } from 'vitest';

import { EyeVisClient } from '../api.js';
import { renderTrendChart } from '../chart.js';
import { MockServer } from '../testing/mock-server.js';
import { renderTrend } from './trend.js';

let server: MockServer;
let client: EyeVisClient;
let container: HTMLElement;

beforeEach(async () => {
  server = new MockServer();
  client = new EyeVisClient('', server.fetch);
  container = document.createElement('div');
  document.body.innerHTML = '';
  document.body.appendChild(container);
  await client.createUser('p1');
});

async function recordSessions(count: number): Promise<void> {
  for (let i = 0; i < count; i++) {
    await client.manualSession('p1', 30 + i * 10);
  }
}

describe('trend chart point counts', () => {
  it.each([
    [0, 0],
    [1, 1],
    [3, 3],
    [5, 5],
    [7, 5],
  ])('renders min(5, n) points for n=%i', async (n, expected) => {
    await recordSessions(n);
    await renderTrend(container, client, 'p1');
    const points = container.querySelectorAll('circle.trend-point');
    expect(points.length).toBe(expected);
    if (n === 0) {
      expect(container.querySelector('.chart-box .empty-state')).not.toBeNull();
    }
  });

  it('slices client-side even if a server ever over-returns', () => {
    const box = document.createElement('div');
    const points = Array.from({ length: 9 }, (_, i) => ({
      session_id: `s${i}`,
      minutes: 10 + i,
    }));
    renderTrendChart(box, points);
    expect(box.querySelectorAll('circle.trend-point').length).toBe(5);
  });

  it('keeps chronological order with the most recent last', async () => {
    await recordSessions(7);
    await renderTrend(container, client, 'p1');
    const labels = [...container.querySelectorAll('text.trend-label')].map((t) => t.textContent);
    expect(labels).toEqual(['50m', '60m', '70m', '80m', '90m']);
  });
});

describe('history list', () => {
  it('shows an empty state without any uses', async () => {
    await renderTrend(container, client, 'p1');
    expect(container.querySelector('.history-box .empty-state')).not.toBeNull();
  });

  it('lists uses newest-first and reopens a stored grid on click', async () => {
    for (const kind of ['baseline-face', 'baseline-eye-open', 'baseline-eye-closed'] as const) {
      await client.uploadCapture('p1', kind, new Blob(['x']));
    }
    await client.manualSession('p1', 100);
    await client.startSession('p1');
    await client.removalCheck('p1', new Blob(['eye']));
    await client.stopSession('p1');

    await renderTrend(container, client, 'p1');
    const rows = container.querySelectorAll<HTMLElement>('.history-row');
    expect(rows.length).toBe(2);
    expect(rows[0]!.textContent).toContain('1 check(s)');

    rows[0]!.click();
    await new Promise((resolve) => setTimeout(resolve, 0));
    const detailImgs = container.querySelectorAll('.history-detail img.grid-img');
    expect(detailImgs.length).toBe(6);
  });
});
