"""Resource caps. ``EXPREG_CAP_SCALE`` multiplies every default."""

import os

MAX_NODES = 2_000_000
MAX_COLOURINGS = 2_000_000
CHECK_LIMIT = 2000


def scale():
    raw = os.environ.get("EXPREG_CAP_SCALE")
    if not raw:
        return 1.0
    try:
        value = float(raw)
    except ValueError:
        return 1.0
    return value if value > 0 else 1.0


def scaled(default):
    return max(1, int(default * scale()))
