/**
 * Trend view: the last-five wearing-time chart plus the per-use history
 * list; clicking a history row reopens that use's stored comparison grids.
 */

import { EyeVisClient, SessionInfo } from '../api.js';
import { renderTrendChart } from '../chart.js';
import { formatRatio } from '../state.js';

export async function renderTrend(
  container: HTMLElement,
  client: EyeVisClient,
  userId: string,
): Promise<void> {
  container.innerHTML = '';
  const panel = document.createElement('section');
  panel.className = 'trend-view';

  const chartBox = document.createElement('div');
  chartBox.className = 'chart-box';
  panel.appendChild(chartBox);

  const historyBox = document.createElement('div');
  historyBox.className = 'history-box';
  panel.appendChild(historyBox);

  const detailBox = document.createElement('div');
  detailBox.className = 'history-detail';
  panel.appendChild(detailBox);

  container.appendChild(panel);

  const [trendRes, sessionsRes] = await Promise.all([
    client.trend(userId),
    client.listSessions(userId),
  ]);
  renderTrendChart(chartBox, trendRes.points);
  renderHistoryList(historyBox, detailBox, client, sessionsRes.sessions);
}

function renderHistoryList(
  listBox: HTMLElement,
  detailBox: HTMLElement,
  client: EyeVisClient,
  sessions: SessionInfo[],
): void {
  listBox.innerHTML = '';
  if (sessions.length === 0) {
    const empty = document.createElement('p');
    empty.className = 'empty-state';
    empty.textContent = 'No uses recorded yet.';
    listBox.appendChild(empty);
    return;
  }
  const list = document.createElement('ul');
  list.className = 'history-list';
  for (const session of sessions) {
    const item = document.createElement('li');
    item.className = 'history-row';
    item.dataset.session = session.session_id;
    const minutes = session.minutes === null ? 'running' : `${session.minutes.toFixed(0)} min`;
    item.textContent = `${session.session_id} — ${session.mode} — ${minutes} — ${session.checks.length} check(s)`;
    item.addEventListener('click', () => {
      void client.getSession(session.session_id).then((full) => {
        renderSessionDetail(detailBox, client, full);
      });
    });
    list.appendChild(item);
  }
  listBox.appendChild(list);
}

export function renderSessionDetail(
  detailBox: HTMLElement,
  client: EyeVisClient,
  session: SessionInfo,
): void {
  detailBox.innerHTML = '';
  const heading = document.createElement('h3');
  heading.textContent = `Session ${session.session_id}`;
  detailBox.appendChild(heading);
  if (session.checks.length === 0) {
    const none = document.createElement('p');
    none.className = 'empty-state';
    none.textContent = 'No removal checks stored for this use.';
    detailBox.appendChild(none);
    return;
  }
  for (const check of session.checks) {
    const block = document.createElement('div');
    block.className = 'stored-check';
    const caption = document.createElement('p');
    caption.textContent =
      `Check ${check.check_id}: pink ${formatRatio(check.ratios.capture.pink)}, ` +
      `black ${formatRatio(check.ratios.capture.black)}`;
    block.appendChild(caption);
    for (const row of ['capture', 'baseline'] as const) {
      for (const panel of ['original', 'hsv_uv', 'binary'] as const) {
        const img = document.createElement('img');
        img.className = 'grid-img';
        img.src = client.artifactUrl(check.artifacts[row][panel]);
        img.alt = `${check.check_id} ${row} ${panel}`;
        block.appendChild(img);
      }
    }
    detailBox.appendChild(block);
  }
}
