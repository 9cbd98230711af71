"""JSON output with reproducible float formatting."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

SIG_DIGITS = 12


def _round(obj: Any) -> Any:
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        if math.isnan(obj):
            return "nan"
        return float(f"{obj:.{SIG_DIGITS}g}")
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(_round(obj), indent=1, sort_keys=False) + "\n"


def dump(obj: Any, path: str | Path) -> None:
    Path(path).write_text(dumps(obj))


def load(path: str | Path) -> Any:
    return json.loads(Path(path).read_text())
