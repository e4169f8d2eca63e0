"""Run the acceptance suite and print one line per criterion.

    python3 scripts/run_acceptance.py
"""

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    cmd = [sys.executable, "-m", "pytest", str(ROOT / "tests" / "test_acceptance.py"), "-q",
           "-p", "no:cacheprovider"]
    raise SystemExit(subprocess.call(cmd, cwd=ROOT))
