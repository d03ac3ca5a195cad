#!/usr/bin/env python3
"""
Test runner for circle-isotropic.

    python run_tests.py            # everything except the slow sweeps
    python run_tests.py slow       # only the exhaustive censuses and lifts
    python run_tests.py quick      # worked example through the CLI
    python run_tests.py -t tests/test_signedias.py::TestUnimodularity
"""

import argparse
import os
import subprocess
import sys
from pathlib import Path

PYTEST = ["uv", "run", "pytest", "tests/"]
CLI = ["uv", "run", "python", "src/main.py", "--no-log-files"]

SUITES = {
    "install": [("Installing test dependencies", ["uv", "sync", "--extra", "test"])],
    "unit": [("Unit tests", PYTEST + ["-m", "unit and not slow"])],
    "integration": [("Integration tests", PYTEST + ["-m", "integration and not slow"])],
    "fast": [("All but slow tests", PYTEST + ["-m", "not slow"])],
    "slow": [("Exhaustive sweeps", PYTEST + ["-m", "slow"])],
    "all": [("All tests", PYTEST)],
    "lint": [
        ("Formatting (black)", ["uv", "run", "black", "--check", "src/", "tests/"]),
        ("Import order (isort)", ["uv", "run", "isort", "--check-only", "src/", "tests/"]),
    ],
    "types": [("Type checking (mypy)", ["uv", "run", "mypy", "src/", "--ignore-missing-imports"])],
    "quick": [
        ("Worked example self-checks", CLI + ["paper-example"]),
        ("S1 verdicts", CLI + ["--json", "multimatroid", "s1"]),
    ],
}


def run_step(description: str, cmd: list[str]) -> bool:
    print(f"\n🔄 {description}\n   {' '.join(cmd)}")
    try:
        subprocess.run(cmd, check=True)
    except subprocess.CalledProcessError as e:
        print(f"❌ {description} failed with exit code {e.returncode}")
        return False
    except FileNotFoundError:
        print(f"❌ {cmd[0]} not found; install uv or run: pip install -e '.[test]'")
        return False
    print(f"✅ {description}")
    return True


def main() -> None:
    parser = argparse.ArgumentParser(description="Test runner for circle-isotropic")
    parser.add_argument("command", nargs="?", default="fast", choices=sorted(SUITES))
    parser.add_argument("--test", "-t", help="run one test file, class or function")
    args = parser.parse_args()

    os.chdir(Path(__file__).parent)
    steps = [(f"Running {args.test}", ["uv", "run", "pytest", args.test, "-v"])] if args.test else SUITES[args.command]
    # lint runs every step so both tools report
    results = [run_step(d, c) for d, c in steps]

    if all(results):
        print("\n🎉 All operations completed successfully!")
        sys.exit(0)
    print("\n❌ Some operations failed. Check output above.")
    sys.exit(1)


if __name__ == "__main__":
    main()
