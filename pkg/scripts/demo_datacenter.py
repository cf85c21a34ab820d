#!/usr/bin/env python3
"""Walk the bundled data-center fixture through every command.

The fixture describes a project that monitors a high-performance computing
room: rack inlet temperature, air humidity, and energy consumption per rack
row. The script copies it into a scratch directory, then runs the whole
lifecycle against the copy: validation, coverage audit, stage gates,
traceability, change analysis, two inspection sessions (one that finds a
seeded defect, one clean), and a snapshot/diff round.

Run from the repository root:

    python3 scripts/demo_datacenter.py [--keep]

With --keep the scratch directory is left on disk for poking around.
"""

from __future__ import annotations

import argparse
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from retiot.cli import run  # noqa: E402

FIXTURE = REPO / "tests" / "fixtures" / "datacenter-project"
SEEDED = REPO / "tests" / "fixtures" / "seeded-answers.retiot"
CORRECTED = REPO / "tests" / "fixtures" / "corrected-answers.retiot"


def step(title: str, argv: list[str]) -> int:
    print(f"\n### {title}")
    print(f"$ retiot {' '.join(argv)}")
    outcome = run(argv)
    if outcome.stdout:
        print(outcome.stdout, end="" if outcome.stdout.endswith("\n") else "\n")
    for path in outcome.artifacts_written:
        print(f"[wrote {path}]")
    print(f"[exit {outcome.exit_code}]")
    return outcome.exit_code


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--keep", action="store_true", help="keep the scratch directory")
    args = parser.parse_args()

    scratch = Path(tempfile.mkdtemp(prefix="retiot-demo-"))
    root = scratch / "hpc-room-monitor"
    shutil.copytree(FIXTURE, root)
    print(f"Fixture copied to {root}")

    d = str(root)
    step("Validate the document set", ["check", d])
    step("Coverage audit over the template field sets", ["audit"])
    step("Where does the process stand?", ["gate", d])
    step("What does a change to FR03 touch?", ["trace", d, "--from", "FR03"])
    step(
        "Draft a change analysis for rewording FR03",
        ["change", d, "--target", "FR03", "--kind", "modify",
         "--description", "report energy per rack instead of per rack row"],
    )

    # the seeded answer file marks one checklist question No, so the session
    # records a defect and the command exits 1
    step(
        "Inspection with a seeded defect",
        ["inspect", d, "--answers", str(SEEDED)],
    )
    step(
        "Re-inspection after the correction, saved into the project",
        ["inspect", d, "--answers", str(CORRECTED), "--save"],
    )
    step("Render the canvas template", ["render", d, "--template", "IoTCanvas"])

    step("Freeze the reviewed state", ["snapshot", d, "--label", "reviewed"])
    detail = root / "iot-project-detail.retiot"
    detail.write_text(
        detail.read_text(encoding="utf-8").replace(
            "| FR02 | collect room air humidity once per minute | Approved | High |",
            "| FR02 | collect room air humidity once per minute | Approved | Medium |",
        ),
        encoding="utf-8",
    )
    print("\n(edited iot-project-detail.retiot: FR02 priority High -> Medium)")
    step("Diff the working state against the snapshot", ["diff", d, "--from", "reviewed", "--to", "current"])

    if args.keep:
        print(f"\nScratch directory kept at {scratch}")
    else:
        shutil.rmtree(scratch)
        print("\nScratch directory removed (use --keep to retain it).")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
