/**
 * Typed client for the eyevis HTTP API.
 *
 * The UI performs no vision computation: every pixel it shows comes back
 * from these endpoints as an artifact URL.
 */

export interface Profile {
  user_id: string;
  face_capture: string | null;
  open_baseline: string | null;
  closed_baseline: string | null;
  baselines_complete: boolean;
  open_session: string | null;
}

export type CaptureKind =
  | 'baseline-face'
  | 'baseline-eye-open'
  | 'baseline-eye-closed'
  | 'removal-check';

export interface CaptureResponse {
  capture_id: string;
  kind: CaptureKind;
  image: string;
  ts: number;
  profile: Profile;
}

export interface SessionInfo {
  session_id: string;
  user_id: string;
  mode: 'clock' | 'manual';
  start_ts: number;
  end_ts: number | null;
  completed: boolean;
  minutes: number | null;
  capture_ids: string[];
  checks: CheckRecord[];
}

export interface GridPanels {
  original: string;
  hsv_uv: string;
  binary: string;
}

export interface PaintRatios {
  black: number;
  pink: number;
}

export interface CheckRecord {
  check_id: string;
  session_id: string | null;
  capture_id: string;
  baseline_capture_id: string;
  baseline_kind: 'open' | 'closed';
  artifacts: { capture: GridPanels; baseline: GridPanels };
  ratios: { capture: PaintRatios; baseline: PaintRatios };
  openness?: number;
}

export interface TrendPoint {
  session_id: string;
  minutes: number;
}

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly stage?: string;
  readonly hint?: string;

  constructor(status: number, code: string, message: string, stage?: string, hint?: string) {
    super(message);
    this.status = status;
    this.code = code;
    this.stage = stage;
    this.hint = hint;
  }
}

async function parseError(res: Response): Promise<never> {
  let code = 'internal';
  let message = `request failed with status ${res.status}`;
  let stage: string | undefined;
  let hint: string | undefined;
  try {
    const body = (await res.json()) as { error?: { code?: string; message?: string; stage?: string; hint?: string } };
    if (body.error) {
      code = body.error.code ?? code;
      message = body.error.message ?? message;
      stage = body.error.stage;
      hint = body.error.hint;
    }
  } catch {
    // non-JSON error body; keep the generic message
  }
  throw new ApiError(res.status, code, message, stage, hint);
}

export class EyeVisClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchFn: typeof fetch = (...args) => fetch(...args),
  ) {}

  /** Absolute URL for a server-relative artifact path. */
  artifactUrl(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (!res.ok) {
      await parseError(res);
    }
    return (await res.json()) as T;
  }

  health(): Promise<{ status: string; version: string }> {
    return this.request('/health');
  }

  createUser(userId?: string): Promise<Profile> {
    return this.request('/users', {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(userId ? { user_id: userId } : {}),
    });
  }

  getUser(userId: string): Promise<Profile> {
    return this.request(`/users/${encodeURIComponent(userId)}`);
  }

  uploadCapture(userId: string, kind: CaptureKind, image: Blob): Promise<CaptureResponse> {
    const form = new FormData();
    form.append('image', image, `${kind}.png`);
    return this.request(
      `/users/${encodeURIComponent(userId)}/captures?kind=${encodeURIComponent(kind)}`,
      { method: 'POST', body: form },
    );
  }

  startSession(userId: string): Promise<SessionInfo> {
    return this.request(`/users/${encodeURIComponent(userId)}/sessions/start`, { method: 'POST' });
  }

  stopSession(userId: string): Promise<SessionInfo> {
    return this.request(`/users/${encodeURIComponent(userId)}/sessions/stop`, { method: 'POST' });
  }

  manualSession(userId: string, minutes: number): Promise<SessionInfo> {
    return this.request(`/users/${encodeURIComponent(userId)}/sessions/manual`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ minutes }),
    });
  }

  removalCheck(userId: string, image: Blob): Promise<CheckRecord> {
    const form = new FormData();
    form.append('image', image, 'removal-check.png');
    return this.request(`/users/${encodeURIComponent(userId)}/removal-check`, {
      method: 'POST',
      body: form,
    });
  }

  trend(userId: string): Promise<{ user_id: string; points: TrendPoint[] }> {
    return this.request(`/users/${encodeURIComponent(userId)}/trend`);
  }

  listSessions(userId: string): Promise<{ user_id: string; sessions: SessionInfo[] }> {
    return this.request(`/users/${encodeURIComponent(userId)}/sessions`);
  }

  getSession(sessionId: string): Promise<SessionInfo> {
    return this.request(`/sessions/${encodeURIComponent(sessionId)}`);
  }
}
