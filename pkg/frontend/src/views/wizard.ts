/**
 * Baseline wizard: whole face, eyes open, eyes closed -- in that order.
 *
 * Each step uploads one capture; the server's profile response drives the
 * step pointer, so an abandoned wizard resumes from the last confirmed
 * step.  Upload or validation failures surface inline with a retake
 * affordance and never advance the step.
 */

import { ApiError, EyeVisClient, Profile } from '../api.js';
import { captureFromCamera, bindFilePicker } from '../camera.js';
import { WIZARD_ORDER, wizardStep } from '../state.js';

const STEP_TITLES = [
  'Step 1 of 3: whole face, no makeup',
  'Step 2 of 3: eyes open, no makeup',
  'Step 3 of 3: eyes closed, no makeup',
];

export interface WizardCallbacks {
  onComplete: (profile: Profile) => void;
  onProfile?: (profile: Profile) => void;
}

export function renderWizard(
  container: HTMLElement,
  client: EyeVisClient,
  profile: Profile,
  callbacks: WizardCallbacks,
): void {
  container.innerHTML = '';
  const step = wizardStep(profile);
  if (step >= WIZARD_ORDER.length) {
    callbacks.onComplete(profile);
    return;
  }

  const panel = document.createElement('section');
  panel.className = 'wizard';
  panel.dataset.step = String(step);

  const title = document.createElement('h2');
  title.textContent = STEP_TITLES[step] ?? '';
  panel.appendChild(title);

  const progress = document.createElement('p');
  progress.className = 'wizard-progress';
  progress.textContent = WIZARD_ORDER.map(
    (kind, i) => `${i < step ? '[done]' : i === step ? '[now]' : '[  ]'} ${kind}`,
  ).join('  ');
  panel.appendChild(progress);

  const error = document.createElement('p');
  error.className = 'inline-error';
  error.hidden = true;
  panel.appendChild(error);

  const cameraBtn = document.createElement('button');
  cameraBtn.textContent = 'Capture with camera';
  cameraBtn.className = 'camera-btn';
  panel.appendChild(cameraBtn);

  const fileInput = document.createElement('input');
  fileInput.type = 'file';
  fileInput.className = 'file-fallback';
  panel.appendChild(fileInput);

  const busy = document.createElement('p');
  busy.className = 'busy';
  busy.hidden = true;
  busy.textContent = 'Uploading…';
  panel.appendChild(busy);

  async function submit(image: Blob): Promise<void> {
    error.hidden = true;
    busy.hidden = false;
    cameraBtn.disabled = true;
    try {
      const kind = WIZARD_ORDER[step]!;
      const res = await client.uploadCapture(profile.user_id, kind, image);
      callbacks.onProfile?.(res.profile);
      renderWizard(container, client, res.profile, callbacks);
    } catch (err) {
      busy.hidden = true;
      cameraBtn.disabled = false;
      error.hidden = false;
      if (err instanceof ApiError) {
        error.textContent = `${err.message}${err.hint ? ` — ${err.hint}` : ''} (retake and try again)`;
      } else {
        error.textContent = 'Upload failed — retake and try again.';
      }
    }
  }

  cameraBtn.addEventListener('click', async () => {
    const blob = await captureFromCamera();
    if (blob) {
      void submit(blob);
    } else {
      error.hidden = false;
      error.textContent = 'Camera unavailable — use the file picker below.';
    }
  });
  bindFilePicker(fileInput, (file) => void submit(file));

  container.appendChild(panel);
}
