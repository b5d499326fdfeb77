import json
import os
from datetime import datetime
from typing import Any, Dict, Optional, Tuple

import numpy as np
import pandas as pd

from config import EXPORT_DIR, resolve_seed

FLOAT_FORMAT = "%.17g"


def validate_label(label: str) -> bool:
    """Labels end up in file names: letters, digits, '_' and '-' only."""
    return bool(label and label.strip() and all(ch.isalnum() or ch in "_-" for ch in label))


def seeded_rng(config_seed: Optional[int] = None) -> Tuple[int, np.random.Generator]:
    """Resolve the seed (SPLITMONO_SEED wins) and return it with a fresh generator."""
    seed = resolve_seed(config_seed)
    return seed, np.random.default_rng(seed)


def default_export_path(label: str, kind: str, suffix: str = "csv",
                        export_dir: str = EXPORT_DIR) -> str:
    timestamp = datetime.now().strftime('%Y%m%d_%H%M%S')
    return os.path.join(export_dir, f"{label}_{kind}_{timestamp}.{suffix}")


def _ensure_parent(path: str) -> None:
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)


def export_frame(frame: pd.DataFrame, path: str) -> Tuple[bool, str]:
    """
    Write a DataFrame as CSV with 17 significant digits.

    Returns a tuple of (success, message)
    """
    try:
        _ensure_parent(path)
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
        return True, f"{len(frame)} rows exported to {path}"
    except OSError as e:
        return False, f"Error exporting {path}: {str(e)}"


def _json_default(value: Any):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def dumps(payload: Dict[str, Any]) -> str:
    # repr of a Python float already round-trips exactly
    return json.dumps(payload, indent=2, sort_keys=True, default=_json_default)


def export_json(payload: Dict[str, Any], path: str) -> Tuple[bool, str]:
    """Returns a tuple of (success, message)"""
    try:
        text = dumps(payload)
        _ensure_parent(path)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        return True, f"Report exported to {path}"
    except (OSError, TypeError, ValueError) as e:
        return False, f"Error exporting {path}: {str(e)}"


def load_json(path: str) -> Tuple[bool, Any]:
    """
    Read a JSON document.

    Returns a tuple of (success, data/error_message); syntax errors carry
    the offending line number.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        return False, f"Error reading {path}: {str(e)}"
    return parse_json(text, path)


def parse_json(text: str, source: str = "<config>") -> Tuple[bool, Any]:
    try:
        return True, json.loads(text)
    except json.JSONDecodeError as e:
        return False, f"{source}: line {e.lineno}, column {e.colno}: {e.msg}"


def line_of(text: str, key: str) -> int:
    """First line (1-based) mentioning the quoted key, or 1 if absent."""
    needle = f'"{key}"'
    for number, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return number
    return 1
