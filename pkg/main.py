# main.py
# Entry point: setup logging (stderr) lalu jalankan CLI stubborn-lab.

import sys

from cli.cli_core import main
from config import STUBBORN_LAB_LOG_LEVEL
from logs.lab_logging import setup_logging


if __name__ == "__main__":
    setup_logging(STUBBORN_LAB_LOG_LEVEL)
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("Dihentikan oleh user (CTRL+C).", file=sys.stderr)
        sys.exit(130)
