"""Exception hierarchy for the toolkit.

Every error raised by the library maps to exactly one wire-level code so the
HTTP layer can translate failures without inspecting message text.
"""


class EyeVisError(Exception):
    """Base class; `code` is the stable machine-readable identifier."""

    code = "internal"

    def __init__(self, message: str, stage: str | None = None):
        super().__init__(message)
        self.message = message
        self.stage = stage


class InvalidArgumentError(EyeVisError):
    code = "invalid-argument"


class InvalidImageError(EyeVisError):
    code = "invalid-image"


class DetectionFailureError(EyeVisError):
    """No usable face/eye geometry; callers should prompt for a retake."""

    code = "detection-failure"


class DegenerateGeometryError(DetectionFailureError):
    """Landmarks collapsed to a zero-area spread."""

    code = "detection-failure"


class MissingBaselineError(EyeVisError):
    code = "missing-baseline"


class NoOpenSessionError(EyeVisError):
    code = "no-open-session"


class SessionAlreadyOpenError(EyeVisError):
    code = "session-already-open"


class NotFoundError(EyeVisError):
    code = "not-found"


class MissingAnnotationError(EyeVisError):
    code = "missing-annotation"
