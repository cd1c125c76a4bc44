# logs/lab_logging.py
# Setup logging: semua log ke stderr, stdout khusus untuk laporan CLI.

import logging
import sys

LOG_FORMAT = "%(asctime)s %(levelname)s [%(name)s] %(message)s"


def setup_logging(level: str = "WARNING") -> None:
    numeric = logging.getLevelName(level.upper())
    if not isinstance(numeric, int):
        numeric = logging.WARNING

    root = logging.getLogger()
    root.setLevel(numeric)

    # hindari handler dobel kalau dipanggil ulang (mis. dari test)
    for h in list(root.handlers):
        if getattr(h, "_stubborn_lab", False):
            root.removeHandler(h)

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._stubborn_lab = True  # type: ignore[attr-defined]
    root.addHandler(handler)
