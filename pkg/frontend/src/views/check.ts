/**
 * Removal-check view: the live capture -> inspect -> wipe -> recapture loop.
 *
 * Renders the 2x3 comparison grid (rows: with-makeup capture, matched
 * no-makeup baseline; columns: original, paint recoloring, threshold
 * contours), the black/pink ratio badges, wearing-time controls, and the
 * "check again" affordance.  At most one check is in flight; stale
 * responses are dropped by sequence number.
 */

import { ApiError, CheckRecord, EyeVisClient } from '../api.js';
import { captureFromCamera, bindFilePicker } from '../camera.js';
import { RequestSequencer, formatRatio } from '../state.js';

const COLUMNS: Array<{ key: 'original' | 'hsv_uv' | 'binary'; label: string }> = [
  { key: 'original', label: 'Original' },
  { key: 'hsv_uv', label: 'Paint highlight' },
  { key: 'binary', label: 'Threshold contours' },
];

export interface CheckCallbacks {
  onMissingBaseline: () => void;
  onTimerChange?: (open: boolean) => void;
}

export class CheckView {
  private readonly sequencer = new RequestSequencer();

  constructor(
    private readonly container: HTMLElement,
    private readonly client: EyeVisClient,
    private readonly userId: string,
    private readonly callbacks: CheckCallbacks,
  ) {}

  private grid: HTMLElement | null = null;
  private errorEl: HTMLElement | null = null;
  private timerEl: HTMLElement | null = null;
  timerOpen = false;

  render(latest: CheckRecord | null): void {
    this.container.innerHTML = '';
    const panel = document.createElement('section');
    panel.className = 'check-view';

    this.timerEl = document.createElement('p');
    this.timerEl.className = 'timer-indicator';
    panel.appendChild(this.timerEl);
    this.updateTimerIndicator();

    const controls = document.createElement('div');
    controls.className = 'timer-controls';
    const startBtn = document.createElement('button');
    startBtn.textContent = 'Start wear timer';
    startBtn.className = 'timer-start';
    startBtn.addEventListener('click', () => void this.startTimer());
    const stopBtn = document.createElement('button');
    stopBtn.textContent = 'Stop timer';
    stopBtn.className = 'timer-stop';
    stopBtn.addEventListener('click', () => void this.stopTimer());
    const manualInput = document.createElement('input');
    manualInput.type = 'number';
    manualInput.min = '1';
    manualInput.placeholder = 'minutes worn';
    manualInput.className = 'manual-minutes';
    const manualBtn = document.createElement('button');
    manualBtn.textContent = 'Record manually';
    manualBtn.className = 'manual-submit';
    manualBtn.addEventListener('click', () => {
      const minutes = Number(manualInput.value);
      if (minutes > 0) {
        void this.client.manualSession(this.userId, minutes).catch(() => undefined);
        manualInput.value = '';
      }
    });
    controls.append(startBtn, stopBtn, manualInput, manualBtn);
    panel.appendChild(controls);

    this.errorEl = document.createElement('p');
    this.errorEl.className = 'inline-error';
    this.errorEl.hidden = true;
    panel.appendChild(this.errorEl);

    const checkBtn = document.createElement('button');
    checkBtn.className = 'check-again';
    checkBtn.textContent = latest ? 'Check again' : 'Capture and check';
    checkBtn.addEventListener('click', async () => {
      const blob = await captureFromCamera();
      if (blob) {
        void this.submit(blob);
      } else if (this.errorEl) {
        this.errorEl.hidden = false;
        this.errorEl.textContent = 'Camera unavailable — use the file picker.';
      }
    });
    panel.appendChild(checkBtn);

    const fileInput = document.createElement('input');
    fileInput.type = 'file';
    fileInput.className = 'file-fallback';
    bindFilePicker(fileInput, (file) => void this.submit(file));
    panel.appendChild(fileInput);

    this.grid = document.createElement('div');
    this.grid.className = 'comparison';
    panel.appendChild(this.grid);
    if (latest) {
      this.renderGrid(latest);
    }

    this.container.appendChild(panel);
  }

  /** Upload one capture and render its grid unless a newer check superseded it. */
  async submit(image: Blob): Promise<void> {
    const token = this.sequencer.begin();
    if (this.errorEl) this.errorEl.hidden = true;
    try {
      const record = await this.client.removalCheck(this.userId, image);
      if (!this.sequencer.isCurrent(token)) {
        return; // a newer check replaced this one
      }
      this.renderGrid(record);
    } catch (err) {
      if (!this.sequencer.isCurrent(token)) {
        return;
      }
      if (err instanceof ApiError && err.code === 'missing-baseline') {
        this.callbacks.onMissingBaseline();
        return;
      }
      if (this.errorEl) {
        this.errorEl.hidden = false;
        const detail = err instanceof ApiError ? err.message : 'request failed';
        this.errorEl.textContent = `Check failed: ${detail} — retry.`;
      }
    }
  }

  renderGrid(record: CheckRecord): void {
    if (!this.grid) return;
    this.grid.innerHTML = '';

    const badges = document.createElement('div');
    badges.className = 'ratio-badges';
    for (const paint of ['pink', 'black'] as const) {
      const badge = document.createElement('span');
      badge.className = `ratio-badge ratio-${paint}`;
      badge.textContent = `${paint} residue ${formatRatio(record.ratios.capture[paint])}`;
      badges.appendChild(badge);
    }
    this.grid.appendChild(badges);

    const table = document.createElement('div');
    table.className = 'grid-2x3';
    const rows: Array<{ row: 'capture' | 'baseline'; label: string }> = [
      { row: 'capture', label: 'This capture' },
      { row: 'baseline', label: `No-makeup baseline (${record.baseline_kind} eyes)` },
    ];
    for (const { row, label } of rows) {
      const rowEl = document.createElement('div');
      rowEl.className = `grid-row grid-row-${row}`;
      const caption = document.createElement('span');
      caption.className = 'row-label';
      caption.textContent = label;
      rowEl.appendChild(caption);
      for (const column of COLUMNS) {
        const img = document.createElement('img');
        img.className = 'grid-img';
        img.src = this.client.artifactUrl(record.artifacts[row][column.key]);
        img.alt = `${label}: ${column.label}`;
        rowEl.appendChild(img);
      }
      table.appendChild(rowEl);
    }
    this.grid.appendChild(table);
  }

  private updateTimerIndicator(): void {
    if (!this.timerEl) return;
    this.timerEl.textContent = this.timerOpen ? 'Wear timer running' : 'No wear timer running';
    this.timerEl.classList.toggle('timer-open', this.timerOpen);
  }

  setTimerOpen(open: boolean): void {
    this.timerOpen = open;
    this.updateTimerIndicator();
    this.callbacks.onTimerChange?.(open);
  }

  async startTimer(): Promise<void> {
    try {
      await this.client.startSession(this.userId);
      this.setTimerOpen(true);
    } catch (err) {
      if (err instanceof ApiError && err.code === 'session-already-open') {
        this.setTimerOpen(true);
      }
    }
  }

  async stopTimer(): Promise<void> {
    try {
      await this.client.stopSession(this.userId);
      this.setTimerOpen(false);
    } catch (err) {
      if (err instanceof ApiError && err.code === 'no-open-session') {
        this.setTimerOpen(false);
      }
    }
  }
}
