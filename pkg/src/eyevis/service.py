"""HTTP service exposing the three workflows to a browser client.

Vision work runs server-side behind a bounded worker gate; artifacts are
served as static files under ``/artifacts``.  Every library error surfaces
as ``{"error": {"code", "message", "stage"}}`` with a stable status code.
"""

from __future__ import annotations

import json
import threading
from contextlib import asynccontextmanager

from fastapi import FastAPI, File, Form, Query, Request, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse, JSONResponse

from . import __version__, imaging, landmarks as lm, residue
from .config import PipelineConfig
from .errors import EyeVisError, InvalidArgumentError, MissingBaselineError, NotFoundError
from .store import CAPTURE_KINDS, SessionStore, WearSession

_STATUS_BY_CODE = {
    "invalid-argument": 400,
    "invalid-image": 400,
    "missing-annotation": 400,
    "detection-failure": 422,
    "missing-baseline": 409,
    "no-open-session": 409,
    "session-already-open": 409,
    "not-found": 404,
    "internal": 500,
}

_RETAKE_HINT = "no usable eye geometry detected; retake the photo"
_BASELINE_HINT = "baselines missing; complete the no-makeup capture workflow first"


def _error_response(exc: EyeVisError) -> JSONResponse:
    payload = {"code": exc.code, "message": exc.message}
    if exc.stage:
        payload["stage"] = exc.stage
    if exc.code == "detection-failure":
        payload["hint"] = _RETAKE_HINT
    elif exc.code == "missing-baseline":
        payload["hint"] = _BASELINE_HINT
    return JSONResponse(status_code=_STATUS_BY_CODE[exc.code], content={"error": payload})


def _profile_json(store: SessionStore, user_id: str) -> dict:
    profile = store.get_user(user_id)
    return {
        "user_id": profile.user_id,
        "face_capture": profile.face_capture,
        "open_baseline": profile.open_baseline,
        "closed_baseline": profile.closed_baseline,
        "baselines_complete": profile.baselines_complete,
        "open_session": store.open_session_id(user_id),
    }


def _session_json(session: WearSession) -> dict:
    return {
        "session_id": session.session_id,
        "user_id": session.user_id,
        "mode": session.mode,
        "start_ts": session.start_ts,
        "end_ts": session.end_ts,
        "completed": session.completed,
        "minutes": session.minutes,
        "capture_ids": list(session.capture_ids),
        "checks": list(session.checks),
        "removal_duration_seconds": session.removal_duration_seconds,
    }


def create_app(
    store: SessionStore,
    provider: lm.LandmarkProvider,
    cfg: PipelineConfig | None = None,
) -> FastAPI:
    cfg = cfg or PipelineConfig()
    vision_gate = threading.BoundedSemaphore(cfg.workers)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        store.close()  # flush the event log on graceful shutdown

    app = FastAPI(title="eyevis", version=__version__, lifespan=lifespan)
    # the companion UI may be served from another origin; it sends no credentials
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(EyeVisError)
    async def _handle_eyevis_error(request: Request, exc: EyeVisError):
        return _error_response(exc)

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/users")
    def create_user(body: dict | None = None):
        user_id = (body or {}).get("user_id")
        profile = store.create_user(user_id)
        return _profile_json(store, profile.user_id)

    @app.get("/users/{user_id}")
    def get_user(user_id: str):
        return _profile_json(store, user_id)

    @app.post("/users/{user_id}/captures")
    async def upload_capture(
        user_id: str,
        kind: str = Query(...),
        image: UploadFile = File(...),
        metadata: str | None = Form(default=None),
    ):
        if kind not in CAPTURE_KINDS:
            raise InvalidArgumentError(f"capture kind must be one of {CAPTURE_KINDS}, got {kind!r}")
        meta = None
        if metadata:
            try:
                meta = json.loads(metadata)
            except json.JSONDecodeError as exc:
                raise InvalidArgumentError(f"metadata is not valid JSON: {exc}") from exc
        data = await image.read()
        record = store.record_capture(user_id, kind, data, meta)
        return {
            "capture_id": record.capture_id,
            "kind": record.kind,
            "image": record.image,
            "ts": record.ts,
            "metadata": record.metadata,
            "profile": _profile_json(store, user_id),
        }

    @app.post("/users/{user_id}/sessions/start")
    def start_session(user_id: str):
        return _session_json(store.start_timer(user_id))

    @app.post("/users/{user_id}/sessions/stop")
    def stop_session(user_id: str):
        return _session_json(store.stop_timer(user_id))

    @app.post("/users/{user_id}/sessions/manual")
    def manual_session(user_id: str, body: dict):
        minutes = body.get("minutes")
        if not isinstance(minutes, (int, float)):
            raise InvalidArgumentError("body must carry numeric 'minutes'")
        return _session_json(store.set_manual_duration(user_id, minutes))

    @app.post("/users/{user_id}/removal-check")
    async def removal_check(user_id: str, image: UploadFile = File(...)):
        profile = store.get_user(user_id)
        if not profile.baselines_complete:
            raise MissingBaselineError(_BASELINE_HINT)
        data = await image.read()
        capture = store.record_capture(user_id, "removal-check", data)

        eye_img = imaging.decode_image(data)
        face_img = imaging.decode_image(store.image_bytes(store.get_capture(profile.face_capture).image))
        open_rec = store.get_capture(profile.open_baseline)
        closed_rec = store.get_capture(profile.closed_baseline)
        baselines = {
            "open": imaging.decode_image(store.image_bytes(open_rec.image)),
            "closed": imaging.decode_image(store.image_bytes(closed_rec.image)),
        }
        with vision_gate:
            result = residue.removal_check(provider, face_img, eye_img, baselines, cfg)

        check_seq = capture.capture_id  # unique per upload; names the artifact set
        artifacts: dict[str, dict[str, str]] = {"capture": {}, "baseline": {}}
        panels = {
            "capture": result.capture_vis,
            "baseline": result.baseline_vis,
        }
        for row, vis in panels.items():
            for panel, img_arr in (
                ("original", vis.original),
                ("hsv_uv", vis.combined),
                ("binary", vis.contour_vis),
            ):
                name = f"{check_seq}_{row}_{panel}.png"
                store.save_artifact(name, imaging.encode_image(img_arr, "png"))
                artifacts[row][panel] = f"/artifacts/{name}"

        ratios = {
            "capture": {p: result.capture_masks[p].ratio for p in ("black", "pink")},
            "baseline": {p: result.baseline_masks[p].ratio for p in ("black", "pink")},
        }
        baseline_capture = open_rec if result.baseline_kind == "open" else closed_rec
        record = store.record_removal_check(
            user_id,
            capture_id=capture.capture_id,
            baseline_capture_id=baseline_capture.capture_id,
            artifacts=artifacts,
            ratios=ratios,
            baseline_kind=result.baseline_kind,
        )
        record["openness"] = result.eye_state.openness
        return record

    @app.get("/users/{user_id}/trend")
    def trend(user_id: str):
        points = [{"session_id": sid, "minutes": minutes} for sid, minutes in store.trend(user_id)]
        return {"user_id": user_id, "points": points}

    @app.get("/users/{user_id}/sessions")
    def list_sessions(user_id: str):
        return {"user_id": user_id, "sessions": [_session_json(s) for s in store.list_sessions(user_id)]}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return _session_json(store.get_session(session_id))

    @app.get("/artifacts/{name}")
    def get_artifact(name: str):
        path = store.artifacts_dir / name
        if "/" in name or "\\" in name or ".." in name or not path.exists():
            raise NotFoundError(f"unknown artifact: {name!r}")
        return FileResponse(path, media_type="image/png")

    return app
