/**
 * App bootstrap: one user, three workflow views, server-gated navigation.
 *
 * Configuration is limited to the server base URL (?server=... wins over
 * same-origin).  The removal-check route redirects to the wizard whenever
 * the server says baselines are missing.
 */

import { EyeVisClient, Profile } from './api.js';
import { Stage, applyProfile, canEnter, initialState, stageForProfile } from './state.js';
import { CheckView } from './views/check.js';
import { renderTrend } from './views/trend.js';
import { renderWizard } from './views/wizard.js';

const STORAGE_KEY = 'eyevis-user-id';

function serverBaseUrl(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get('server') ?? '';
}

export async function bootstrap(root: HTMLElement): Promise<void> {
  const client = new EyeVisClient(serverBaseUrl());
  let state = initialState();

  root.innerHTML = `
    <header>
      <h1>Makeup removal companion</h1>
      <nav>
        <button data-stage="wizard">1 · Baselines</button>
        <button data-stage="check">2 · Timing &amp; check</button>
        <button data-stage="trend">3 · Trend &amp; history</button>
      </nav>
    </header>
    <main id="view"></main>
  `;
  const view = root.querySelector<HTMLElement>('#view')!;

  let profile: Profile;
  const savedId = window.localStorage.getItem(STORAGE_KEY);
  if (savedId) {
    try {
      profile = await client.getUser(savedId);
    } catch {
      profile = await client.createUser();
      window.localStorage.setItem(STORAGE_KEY, profile.user_id);
    }
  } else {
    profile = await client.createUser();
    window.localStorage.setItem(STORAGE_KEY, profile.user_id);
  }
  state = applyProfile({ ...state, stage: stageForProfile(profile) }, profile);

  const checkView = new CheckView(view, client, profile.user_id, {
    onMissingBaseline: () => show('wizard'),
    onTimerChange: (open) => {
      state = { ...state, timerOpen: open };
    },
  });

  function show(stage: Stage): void {
    if (!canEnter(stage, profile)) {
      stage = 'wizard';
    }
    state = { ...state, stage };
    root.querySelectorAll<HTMLButtonElement>('nav button').forEach((btn) => {
      btn.classList.toggle('active', btn.dataset.stage === stage);
    });
    if (stage === 'wizard') {
      renderWizard(view, client, profile, {
        onProfile: (p) => {
          profile = p;
          state = applyProfile(state, p);
        },
        onComplete: (p) => {
          profile = p;
          state = applyProfile(state, p);
          show('check');
        },
      });
    } else if (stage === 'check') {
      checkView.timerOpen = state.timerOpen;
      checkView.render(state.latestCheck);
    } else {
      void renderTrend(view, client, profile.user_id);
    }
  }

  root.querySelectorAll<HTMLButtonElement>('nav button').forEach((btn) => {
    btn.addEventListener('click', () => show(btn.dataset.stage as Stage));
  });
  show(state.stage);
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  void bootstrap(document.getElementById('app')!);
}
