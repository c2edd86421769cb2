"""Regenerate tests/golden/*.out from the current CLI.

Run ``python3 tests/update_golden.py`` after an intended output change and
review the diff before committing.
"""

import subprocess
import sys
from pathlib import Path

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

from golden_cases import CASES  # noqa: E402


def run_case(argv):
    return subprocess.run(
        [sys.executable, "-m", "logstruct.cli", *argv],
        cwd=HERE / "data",
        capture_output=True,
        text=True,
        check=False,
    )


def main():
    out_dir = HERE / "golden"
    out_dir.mkdir(exist_ok=True)
    for name, argv, code in CASES:
        res = run_case(argv)
        (out_dir / f"{name}.out").write_text(res.stdout)
        flag = "" if res.returncode == code else f"  (exit {res.returncode}, expected {code})"
        print(f"{name}{flag}")


if __name__ == "__main__":
    main()
