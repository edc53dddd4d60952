import { beforeEach, describe, expect, it } from 'vitest';

import { ApiError, EyeVisClient } from './api.js';
import { MockServer } from './testing/mock-server.js';

let server: MockServer;
let client: EyeVisClient;

beforeEach(() => {
  server = new MockServer();
  client = new EyeVisClient('', server.fetch);
});

describe('EyeVisClient', () => {
  it('creates and fetches users', async () => {
    const profile = await client.createUser('alice');
    expect(profile.user_id).toBe('alice');
    expect(profile.baselines_complete).toBe(false);
    const again = await client.getUser('alice');
    expect(again.user_id).toBe('alice');
  });

  it('maps wire errors to ApiError with code and status', async () => {
    await expect(client.getUser('ghost')).rejects.toMatchObject({
      code: 'not-found',
      status: 404,
    });
    const err = await client.getUser('ghost').catch((e) => e as ApiError);
    expect(err).toBeInstanceOf(ApiError);
  });

  it('uploads captures as multipart and returns the refreshed profile', async () => {
    await client.createUser('alice');
    const res = await client.uploadCapture('alice', 'baseline-face', new Blob(['png']));
    expect(res.capture_id).toMatch(/^c/);
    expect(res.profile.face_capture).toBe(res.capture_id);
  });

  it('session conflicts surface their specific codes', async () => {
    await client.createUser('alice');
    await client.startSession('alice');
    await expect(client.startSession('alice')).rejects.toMatchObject({
      code: 'session-already-open',
    });
    await client.stopSession('alice');
    await expect(client.stopSession('alice')).rejects.toMatchObject({
      code: 'no-open-session',
    });
  });

  it('builds artifact URLs against the configured base', () => {
    const remote = new EyeVisClient('http://box:8000', server.fetch);
    expect(remote.artifactUrl('/artifacts/x.png')).toBe('http://box:8000/artifacts/x.png');
  });
});
