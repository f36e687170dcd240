"""Canonical JSON helpers shared by every file format the tool writes.

Canonical form: UTF-8, keys sorted, 2-space indent, trailing newline.
Writing the same value twice must produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path


def canonical_dumps(value) -> str:
    return json.dumps(value, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def write_canonical(path: str | Path, value) -> None:
    Path(path).write_text(canonical_dumps(value), encoding="utf-8")


def load_json(path: str | Path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
