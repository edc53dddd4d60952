"""
Wearing-time sessions and the last-five trend
=============================================

The append-only session store behind the service: clock and manual timing,
capture records, and the trend series.  For the HTTP version of this loop
run ``eyevis serve`` and drive the same flow over the documented endpoints.
"""

import tempfile
import time

from eyevis import imaging
from eyevis.store import SessionStore

with tempfile.TemporaryDirectory() as tmp:
    store = SessionStore(tmp)
    store.create_user("performer")

    # Manual entries for past uses...
    for minutes in (170, 185, 160, 150, 205):
        store.set_manual_duration("performer", minutes)

    # ...and a live clock session around today's removal.
    store.start_timer("performer")
    eye_png = imaging.encode_image(imaging.new_image(32, 32, (250, 244, 240)), "png")
    capture = store.record_capture("performer", "removal-check", eye_png)
    time.sleep(0.05)
    session = store.stop_timer("performer")
    print("clock session %s ran %.4f min" % (session.session_id, session.minutes))

    # The trend keeps the five most recent completed sessions, oldest first.
    print("trend points (last five):")
    for sid, minutes in store.trend("performer"):
        print("  %-4s %7.2f min" % (sid, minutes))

    # History is newest-first; each entry carries its captures and checks.
    newest = store.list_sessions("performer")[0]
    print("newest session %s links captures %s" % (newest.session_id, newest.capture_ids))

    # Identical bytes are stored once (content addressing).
    again = store.record_capture("performer", "removal-check", eye_png)
    print("same bytes, same object: %s" % (again.image == capture.image))

    store.close()

    # State rebuilds from the event log alone.
    reloaded = SessionStore(tmp)
    print("after reload, trend length = %d" % len(reloaded.trend("performer")))
    reloaded.close()
