import { describe, expect, it } from 'vitest';

import type { Profile } from './api.js';
import {
  RequestSequencer,
  applyProfile,
  canEnter,
  formatRatio,
  initialState,
  stageForProfile,
  wizardStep,
} from './state.js';

function profileWith(overrides: Partial<Profile>): Profile {
  return {
    user_id: 'u1',
    face_capture: null,
    open_baseline: null,
    closed_baseline: null,
    baselines_complete: false,
    open_session: null,
    ...overrides,
  };
}

describe('wizard step resume', () => {
  it('starts at the first missing capture', () => {
    expect(wizardStep(profileWith({}))).toBe(0);
    expect(wizardStep(profileWith({ face_capture: 'c1' }))).toBe(1);
    expect(wizardStep(profileWith({ face_capture: 'c1', open_baseline: 'c2' }))).toBe(2);
    expect(
      wizardStep(
        profileWith({
          face_capture: 'c1',
          open_baseline: 'c2',
          closed_baseline: 'c3',
          baselines_complete: true,
        }),
      ),
    ).toBe(3);
  });
});

describe('workflow gating', () => {
  it('keeps the check view unreachable until baselines exist', () => {
    const incomplete = profileWith({});
    expect(canEnter('check', incomplete)).toBe(false);
    expect(canEnter('wizard', incomplete)).toBe(true);
    expect(canEnter('trend', incomplete)).toBe(true);
    const complete = profileWith({
      face_capture: 'c1',
      open_baseline: 'c2',
      closed_baseline: 'c3',
      baselines_complete: true,
    });
    expect(canEnter('check', complete)).toBe(true);
    expect(stageForProfile(incomplete)).toBe('wizard');
    expect(stageForProfile(complete)).toBe('check');
  });

  it('applyProfile bounces an illegal stage back to the wizard', () => {
    const state = { ...initialState(), stage: 'check' as const };
    const bounced = applyProfile(state, profileWith({}));
    expect(bounced.stage).toBe('wizard');
    expect(bounced.timerOpen).toBe(false);
  });

  it('mirrors the server-side open session into the timer flag', () => {
    const state = applyProfile(initialState(), profileWith({ open_session: 's9' }));
    expect(state.timerOpen).toBe(true);
  });
});

describe('RequestSequencer', () => {
  it('marks superseded requests stale', () => {
    const seq = new RequestSequencer();
    const first = seq.begin();
    const second = seq.begin();
    expect(seq.isCurrent(first)).toBe(false);
    expect(seq.isCurrent(second)).toBe(true);
  });
});

describe('formatRatio', () => {
  it('renders percentages with one decimal', () => {
    expect(formatRatio(0.198)).toBe('19.8%');
    expect(formatRatio(0)).toBe('0.0%');
    expect(formatRatio(0.04)).toBe('4.0%');
  });
});
