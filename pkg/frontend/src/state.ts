/**
 * Client-side session state: workflow gating and request sequencing.
 *
 * Stages follow the capture -> check -> review ordering; the check view is
 * unreachable until the server confirms all three baselines exist.  Timer
 * state is server-authoritative; the UI only mirrors it.
 */

import type { CheckRecord, Profile, TrendPoint } from './api.js';

export type Stage = 'wizard' | 'check' | 'trend';

export const WIZARD_ORDER = ['baseline-face', 'baseline-eye-open', 'baseline-eye-closed'] as const;
export type WizardKind = (typeof WIZARD_ORDER)[number];

export interface UiSessionState {
  userId: string | null;
  stage: Stage;
  timerOpen: boolean;
  latestCheck: CheckRecord | null;
  trendPoints: TrendPoint[];
}

export function initialState(): UiSessionState {
  return { userId: null, stage: 'wizard', timerOpen: false, latestCheck: null, trendPoints: [] };
}

/** First wizard step still missing from the profile (3 = wizard complete). */
export function wizardStep(profile: Profile): number {
  if (!profile.face_capture) return 0;
  if (!profile.open_baseline) return 1;
  if (!profile.closed_baseline) return 2;
  return 3;
}

export function baselinesComplete(profile: Profile): boolean {
  return profile.baselines_complete;
}

/** Where a freshly loaded profile lands the user. */
export function stageForProfile(profile: Profile): Stage {
  return profile.baselines_complete ? 'check' : 'wizard';
}

/** Gate navigation: the check view requires completed baselines. */
export function canEnter(stage: Stage, profile: Profile | null): boolean {
  if (stage === 'check') {
    return profile !== null && profile.baselines_complete;
  }
  return true;
}

export function applyProfile(state: UiSessionState, profile: Profile): UiSessionState {
  return {
    ...state,
    userId: profile.user_id,
    timerOpen: profile.open_session !== null,
    stage: canEnter(state.stage, profile) ? state.stage : 'wizard',
  };
}

/**
 * Keeps at most one removal check "current"; responses to superseded
 * requests are discarded by sequence number.
 */
export class RequestSequencer {
  private seq = 0;

  begin(): number {
    return ++this.seq;
  }

  isCurrent(token: number): boolean {
    return token === this.seq;
  }
}

/** Percent with one decimal, the way ratios are displayed everywhere. */
export function formatRatio(ratio: number): string {
  return `${(ratio * 100).toFixed(1)}%`;
}
