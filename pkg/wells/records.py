"""
Machine-readable output of the management commands.

Every command emits one OutputRecord. JSON carries the whole record; CSV
carries its results table. Floats are rounded to 12 significant digits in
both, so the two formats hold the same numbers and repeated runs with the
same flags are byte-identical.
"""
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd

from .constants import SCHEMA_VERSION, SIGNIFICANT_DIGITS

FLOAT_FORMAT = f"%.{SIGNIFICANT_DIGITS}g"


def round_significant(value):
    """Round floats (recursively through containers) to SIGNIFICANT_DIGITS digits."""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return None
        return float(FLOAT_FORMAT % value)
    if isinstance(value, dict):
        return {key: round_significant(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [round_significant(item) for item in value]
    return value


@dataclass
class OutputRecord:
    command: str
    options: dict
    spec: dict
    results: object
    diagnostics: dict = field(default_factory=dict)
    generated_at: Optional[str] = None
    schema_version: str = SCHEMA_VERSION

    def to_dict(self):
        record = {
            "schema_version": self.schema_version,
            "command": self.command,
            "options": self.options,
            "spec": self.spec,
            "results": self.results,
            "diagnostics": self.diagnostics,
        }
        if self.generated_at is not None:
            record["generated_at"] = self.generated_at
        return round_significant(record)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        return cls(
            command=data["command"],
            options=data["options"],
            spec=data["spec"],
            results=data["results"],
            diagnostics=data.get("diagnostics", {}),
            generated_at=data.get("generated_at"),
            schema_version=data["schema_version"],
        )


def table_to_csv(rows, columns):
    """CSV text for row dicts or a dict of columns; missing values become empty cells."""
    frame = pd.DataFrame(rows, columns=columns)
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, na_rep="", lineterminator="\n")


def write_atomic(path, text):
    """Write text to path through a temporary file in the same directory."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    handle, temporary = tempfile.mkstemp(dir=directory, prefix=".wells-", suffix=".tmp")
    try:
        with os.fdopen(handle, "w", encoding="utf-8", newline="") as stream:
            stream.write(text)
        os.replace(temporary, path)
    except BaseException:
        if os.path.exists(temporary):
            os.remove(temporary)
        raise
