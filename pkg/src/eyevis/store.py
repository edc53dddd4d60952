"""Session persistence: wearing time, captures, and the last-five trend.

Layout under the data directory:

* ``events.log`` -- append-only JSON-lines event log; state is rebuilt by
  replay, so truncation at any record boundary never corrupts the store.
* ``images/`` -- uploaded capture bytes, content-addressed by SHA-256.
* ``artifacts/`` -- generated visualization images.

One writer per store instance; mutations are serialized by a lock and each
event is flushed and fsynced before the call returns.
"""

from __future__ import annotations

import hashlib
import io
import json
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from PIL import Image, UnidentifiedImageError

from .errors import (
    InvalidArgumentError,
    InvalidImageError,
    NoOpenSessionError,
    NotFoundError,
    SessionAlreadyOpenError,
)

CAPTURE_KINDS = ("baseline-face", "baseline-eye-open", "baseline-eye-closed", "removal-check")
TREND_LENGTH = 5

_METADATA_KEYS = ("iso", "shutter", "focal_length_mm", "aperture", "white_balance_k")


def validate_metadata(metadata: dict | None) -> dict | None:
    """Camera metadata is recorded, never enforced; values must be positive."""
    if metadata is None:
        return None
    clean = {}
    for key, value in metadata.items():
        if key not in _METADATA_KEYS:
            raise InvalidArgumentError(f"unknown capture metadata key: {key!r}")
        if key == "shutter" and isinstance(value, (list, tuple)):
            num, den = value
            if num <= 0 or den <= 0:
                raise InvalidArgumentError("shutter rational must be positive")
            clean[key] = [int(num), int(den)]
            continue
        if not isinstance(value, (int, float)) or value <= 0:
            raise InvalidArgumentError(f"metadata {key} must be a positive number")
        clean[key] = value
    return clean


@dataclass
class UserProfile:
    user_id: str
    face_capture: str | None = None
    open_baseline: str | None = None
    closed_baseline: str | None = None

    @property
    def baselines_complete(self) -> bool:
        return None not in (self.face_capture, self.open_baseline, self.closed_baseline)


@dataclass
class CaptureRecord:
    capture_id: str
    user_id: str
    kind: str
    image: str  # stored object name under images/
    ts: float
    metadata: dict | None = None


@dataclass
class WearSession:
    session_id: str
    user_id: str
    mode: str  # "clock" | "manual"
    start_ts: float
    end_ts: float | None = None
    manual_minutes: float | None = None
    capture_ids: list = field(default_factory=list)
    checks: list = field(default_factory=list)  # removal-check records

    @property
    def completed(self) -> bool:
        return self.mode == "manual" or self.end_ts is not None

    @property
    def minutes(self) -> float | None:
        if self.mode == "manual":
            return self.manual_minutes
        if self.end_ts is None:
            return None
        return (self.end_ts - self.start_ts) / 60.0

    @property
    def removal_duration_seconds(self) -> float | None:
        """Span between first and last removal-check capture, when any."""
        stamps = [c["ts"] for c in self.checks]
        if not stamps:
            return None
        return max(stamps) - min(stamps)


class SessionStore:
    def __init__(self, data_dir, clock=time.time):
        self.data_dir = Path(data_dir)
        self.images_dir = self.data_dir / "images"
        self.artifacts_dir = self.data_dir / "artifacts"
        self.log_path = self.data_dir / "events.log"
        for d in (self.data_dir, self.images_dir, self.artifacts_dir):
            d.mkdir(parents=True, exist_ok=True)
        self._clock = clock
        self._lock = threading.Lock()
        self.users: dict[str, UserProfile] = {}
        self.captures: dict[str, CaptureRecord] = {}
        self.sessions: dict[str, WearSession] = {}
        self._open_session: dict[str, str] = {}
        self._counters: dict[str, int] = {}
        self._replay()
        self._log = open(self.log_path, "a", encoding="utf-8")

    # -- log machinery ------------------------------------------------------

    def _replay(self) -> None:
        if not self.log_path.exists():
            return
        with open(self.log_path, encoding="utf-8") as fh:
            payload = fh.read()
        for line in payload.split("\n")[:-1]:  # final fragment without \n is a torn write
            if not line.strip():
                continue
            self._apply(json.loads(line))

    def _append(self, event: dict) -> None:
        self._log.write(json.dumps(event, separators=(",", ":")) + "\n")
        self._log.flush()
        os.fsync(self._log.fileno())
        self._apply(event)

    def close(self) -> None:
        with self._lock:
            if not self._log.closed:
                self._log.flush()
                os.fsync(self._log.fileno())
                self._log.close()

    def _next_id(self, prefix: str) -> str:
        n = self._counters.get(prefix, 0) + 1
        self._counters[prefix] = n
        return f"{prefix}{n}"

    def _saw_id(self, ident: str, prefix: str) -> None:
        suffix = ident[len(prefix):]
        if suffix.isdigit():
            self._counters[prefix] = max(self._counters.get(prefix, 0), int(suffix))

    # -- event application (replay and live share this path) ----------------

    def _apply(self, ev: dict) -> None:
        kind = ev["event"]
        if kind == "user_created":
            uid = ev["user"]
            self.users[uid] = UserProfile(user_id=uid)
            self._saw_id(uid, "u")
        elif kind == "capture":
            rec = CaptureRecord(
                capture_id=ev["capture"],
                user_id=ev["user"],
                kind=ev["kind"],
                image=ev["image"],
                ts=ev["ts"],
                metadata=ev.get("metadata"),
            )
            self.captures[rec.capture_id] = rec
            self._saw_id(rec.capture_id, "c")
            profile = self.users[rec.user_id]
            if rec.kind == "baseline-face":
                profile.face_capture = rec.capture_id
            elif rec.kind == "baseline-eye-open":
                profile.open_baseline = rec.capture_id
            elif rec.kind == "baseline-eye-closed":
                profile.closed_baseline = rec.capture_id
            open_sid = self._open_session.get(rec.user_id)
            if open_sid and rec.kind == "removal-check":
                self.sessions[open_sid].capture_ids.append(rec.capture_id)
        elif kind == "session_started":
            sid = ev["session"]
            self.sessions[sid] = WearSession(
                session_id=sid, user_id=ev["user"], mode="clock", start_ts=ev["ts"]
            )
            self._open_session[ev["user"]] = sid
            self._saw_id(sid, "s")
        elif kind == "session_stopped":
            sid = ev["session"]
            self.sessions[sid].end_ts = ev["ts"]
            self._open_session.pop(ev["user"], None)
        elif kind == "manual_session":
            sid = ev["session"]
            self.sessions[sid] = WearSession(
                session_id=sid,
                user_id=ev["user"],
                mode="manual",
                start_ts=ev["ts"],
                manual_minutes=float(ev["minutes"]),
            )
            self._saw_id(sid, "s")
        elif kind == "removal_check":
            record = {
                "check_id": ev["check"],
                "user_id": ev["user"],
                "session_id": ev.get("session"),
                "capture_id": ev["capture"],
                "baseline_capture_id": ev["baseline_capture"],
                "baseline_kind": ev.get("baseline_kind"),
                "artifacts": ev["artifacts"],
                "ratios": ev["ratios"],
                "ts": ev["ts"],
            }
            self._saw_id(ev["check"], "k")
            sid = ev.get("session")
            if sid and sid in self.sessions:
                self.sessions[sid].checks.append(record)
        else:
            raise InvalidArgumentError(f"unknown event type in log: {kind!r}")

    # -- mutations -----------------------------------------------------------

    def create_user(self, user_id: str | None = None) -> UserProfile:
        with self._lock:
            uid = user_id or self._next_id("u")
            if uid in self.users:
                raise InvalidArgumentError(f"user {uid!r} already exists")
            self._append({"event": "user_created", "user": uid, "ts": self._clock()})
            return self.users[uid]

    def record_capture(
        self, user_id: str, kind: str, image_bytes: bytes, metadata: dict | None = None
    ) -> CaptureRecord:
        if kind not in CAPTURE_KINDS:
            raise InvalidArgumentError(f"capture kind must be one of {CAPTURE_KINDS}, got {kind!r}")
        metadata = validate_metadata(metadata)
        stored = self._store_image(image_bytes)
        with self._lock:
            self._require_user(user_id)
            cid = self._next_id("c")
            self._append(
                {
                    "event": "capture",
                    "capture": cid,
                    "user": user_id,
                    "kind": kind,
                    "image": stored,
                    "ts": self._clock(),
                    "metadata": metadata,
                }
            )
            return self.captures[cid]

    def _store_image(self, image_bytes: bytes) -> str:
        try:
            with Image.open(io.BytesIO(image_bytes)) as im:
                im.load()
                fmt = im.format
        except (UnidentifiedImageError, OSError, ValueError) as exc:
            raise InvalidImageError(f"upload is not a decodable image: {exc}") from exc
        if fmt not in ("PNG", "JPEG"):
            raise InvalidImageError(f"unsupported image format: {fmt}")
        ext = "png" if fmt == "PNG" else "jpg"
        name = f"{hashlib.sha256(image_bytes).hexdigest()}.{ext}"
        path = self.images_dir / name
        if not path.exists():
            tmp = path.with_name(f".{name}.{os.getpid()}.{threading.get_ident()}.tmp")
            tmp.write_bytes(image_bytes)
            os.replace(tmp, path)
        return name

    def start_timer(self, user_id: str) -> WearSession:
        with self._lock:
            self._require_user(user_id)
            if user_id in self._open_session:
                raise SessionAlreadyOpenError(
                    f"user {user_id} already has open session {self._open_session[user_id]}"
                )
            sid = self._next_id("s")
            self._append({"event": "session_started", "session": sid, "user": user_id, "ts": self._clock()})
            return self.sessions[sid]

    def stop_timer(self, user_id: str) -> WearSession:
        with self._lock:
            self._require_user(user_id)
            sid = self._open_session.get(user_id)
            if sid is None:
                raise NoOpenSessionError(f"user {user_id} has no open session")
            self._append({"event": "session_stopped", "session": sid, "user": user_id, "ts": self._clock()})
            return self.sessions[sid]

    def set_manual_duration(self, user_id: str, minutes: float) -> WearSession:
        if not isinstance(minutes, (int, float)) or minutes <= 0:
            raise InvalidArgumentError(f"manual duration must be > 0 minutes, got {minutes!r}")
        with self._lock:
            self._require_user(user_id)
            sid = self._next_id("s")
            self._append(
                {
                    "event": "manual_session",
                    "session": sid,
                    "user": user_id,
                    "minutes": float(minutes),
                    "ts": self._clock(),
                }
            )
            return self.sessions[sid]

    def record_removal_check(
        self,
        user_id: str,
        capture_id: str,
        baseline_capture_id: str,
        artifacts: dict[str, str],
        ratios: dict,
        baseline_kind: str | None = None,
    ) -> dict:
        with self._lock:
            self._require_user(user_id)
            ckid = self._next_id("k")
            sid = self._open_session.get(user_id)
            self._append(
                {
                    "event": "removal_check",
                    "check": ckid,
                    "user": user_id,
                    "session": sid,
                    "capture": capture_id,
                    "baseline_capture": baseline_capture_id,
                    "baseline_kind": baseline_kind,
                    "artifacts": artifacts,
                    "ratios": ratios,
                    "ts": self._clock(),
                }
            )
            return {
                "check_id": ckid,
                "session_id": sid,
                "capture_id": capture_id,
                "baseline_capture_id": baseline_capture_id,
                "baseline_kind": baseline_kind,
                "artifacts": artifacts,
                "ratios": ratios,
            }

    def save_artifact(self, name: str, png_bytes: bytes) -> str:
        path = self.artifacts_dir / name
        tmp = path.with_name(f".{name}.{os.getpid()}.{threading.get_ident()}.tmp")
        tmp.write_bytes(png_bytes)
        os.replace(tmp, path)
        return name

    # -- queries --------------------------------------------------------------

    def _require_user(self, user_id: str) -> UserProfile:
        profile = self.users.get(user_id)
        if profile is None:
            raise NotFoundError(f"unknown user: {user_id!r}")
        return profile

    def get_user(self, user_id: str) -> UserProfile:
        return self._require_user(user_id)

    def get_capture(self, capture_id: str) -> CaptureRecord:
        rec = self.captures.get(capture_id)
        if rec is None:
            raise NotFoundError(f"unknown capture: {capture_id!r}")
        return rec

    def image_bytes(self, stored_name: str) -> bytes:
        path = self.images_dir / stored_name
        if not path.exists():
            raise NotFoundError(f"stored image missing: {stored_name}")
        return path.read_bytes()

    def _completed_sessions(self, user_id: str) -> list[WearSession]:
        done = [s for s in self.sessions.values() if s.user_id == user_id and s.completed]
        return sorted(done, key=lambda s: (s.start_ts, s.session_id))

    def trend(self, user_id: str) -> list[tuple[str, float]]:
        """Last <=5 completed sessions, oldest first, as (id, minutes)."""
        self._require_user(user_id)
        recent = self._completed_sessions(user_id)[-TREND_LENGTH:]
        return [(s.session_id, s.minutes) for s in recent]

    def list_sessions(self, user_id: str) -> list[WearSession]:
        """Completed sessions newest-first, then any open one on top."""
        self._require_user(user_id)
        ordered = list(reversed(self._completed_sessions(user_id)))
        open_sid = self._open_session.get(user_id)
        if open_sid:
            ordered.insert(0, self.sessions[open_sid])
        return ordered

    def get_session(self, session_id: str) -> WearSession:
        session = self.sessions.get(session_id)
        if session is None:
            raise NotFoundError(f"unknown session: {session_id!r}")
        return session

    def open_session_id(self, user_id: str) -> str | None:
        return self._open_session.get(user_id)
