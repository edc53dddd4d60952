/**
 * Image acquisition: browser camera when available, file upload as the
 * fallback (desk-scale testing runs on stored fixtures).
 */

export async function captureFromCamera(): Promise<Blob | null> {
  if (!navigator.mediaDevices?.getUserMedia) {
    return null;
  }
  let stream: MediaStream | null = null;
  try {
    stream = await navigator.mediaDevices.getUserMedia({ video: true });
    const video = document.createElement('video');
    video.srcObject = stream;
    video.setAttribute('playsinline', 'true');
    await video.play();
    await new Promise((r) => setTimeout(r, 150)); // let exposure settle
    const canvas = document.createElement('canvas');
    canvas.width = video.videoWidth || 640;
    canvas.height = video.videoHeight || 480;
    const ctx = canvas.getContext('2d');
    if (!ctx) return null;
    ctx.drawImage(video, 0, 0);
    return await new Promise<Blob | null>((resolve) =>
      canvas.toBlob((blob) => resolve(blob), 'image/png'),
    );
  } catch {
    return null;
  } finally {
    stream?.getTracks().forEach((t) => t.stop());
  }
}

/** Wire a hidden file input and hand picked files to the callback. */
export function bindFilePicker(input: HTMLInputElement, onPick: (file: File) => void): void {
  input.accept = 'image/png,image/jpeg';
  input.addEventListener('change', () => {
    const file = input.files?.[0];
    if (file) {
      onPick(file);
    }
    input.value = '';
  });
}
