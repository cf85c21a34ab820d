"""Resolution of bundled data files.

Lookup order: an explicit project-local file, then the directory named by
the RETIOT_DATA environment variable, then the files bundled with the
package.
"""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

QUESTIONS_FILE = "scenariotcheck-questions.retiot"
STAGES_FILE = "stages.retiot"
ARRANGEMENTS_FILE = "arrangements.retiot"
COVERAGE_FIXTURES_FILE = "table1-fixtures.retiot"

RESERVED_DATA_FILES = (
    QUESTIONS_FILE,
    STAGES_FILE,
    ARRANGEMENTS_FILE,
    COVERAGE_FIXTURES_FILE,
)


def data_text(name: str, project_root: Path | None = None) -> tuple[str, str]:
    """Returns (content, source path actually used)."""
    if project_root is not None:
        local = Path(project_root) / name
        if local.is_file():
            return local.read_text(encoding="utf-8"), str(local)
    override = os.environ.get("RETIOT_DATA")
    if override:
        candidate = Path(override) / name
        if candidate.is_file():
            return candidate.read_text(encoding="utf-8"), str(candidate)
    bundled = resources.files("retiot") / "data" / name
    return bundled.read_text(encoding="utf-8"), f"bundled:{name}"
