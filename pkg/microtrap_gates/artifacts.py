"""
Run Artifacts

Atomic JSON/CSV/YAML writers and the per-run manifest.

Every file is written to a temporary sibling first and moved into place,
so an interrupted run never leaves a truncated artifact. JSON artifacts
carry no wall-clock data: the same config and seed give identical bytes.
The manifest holds the timestamp.
"""

import csv
import io
import json
import logging
import os
import tempfile
import time
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np
import yaml

from . import __version__

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.yaml"


def _atomic_write(path: str, text: str) -> str:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    logger.debug("Wrote %s", path)
    return path


def _plain(value: Any) -> Any:
    """numpy scalars/arrays and tuples to JSON/YAML-safe builtins."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def write_json(path: str, data: Any) -> str:
    text = json.dumps(_plain(data), indent=2, sort_keys=True) + "\n"
    return _atomic_write(path, text)


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in _plain(list(row))])
    return _atomic_write(path, buffer.getvalue())


def write_yaml(path: str, data: Any) -> str:
    text = yaml.safe_dump(_plain(data), default_flow_style=False, sort_keys=False)
    return _atomic_write(path, text)


# ============================================================================
# RUN MANIFEST
# ============================================================================

@dataclass
class RunManifest:
    """What a CLI run did and which files it wrote."""
    command: str
    seed: int
    config: Dict[str, Any]
    phase_convention: str = ""
    rate_convention: str = ""
    outputs: List[str] = field(default_factory=list)
    version: str = __version__
    created_at: str = ""
    notes: Dict[str, Any] = field(default_factory=dict)

    def record(self, path: str) -> str:
        self.outputs.append(os.path.basename(path))
        return path

    def to_dict(self) -> Dict[str, Any]:
        return {
            "metadata": {
                "version": self.version,
                "created_at": self.created_at or time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            },
            "run": {
                "command": self.command,
                "seed": self.seed,
                "phase_convention": self.phase_convention,
                "rate_convention": self.rate_convention,
            },
            "outputs": list(self.outputs),
            "notes": dict(self.notes),
            "config": self.config,
        }

    def save(self, out_dir: str) -> str:
        return write_yaml(os.path.join(out_dir, MANIFEST_NAME), self.to_dict())


def load_manifest(path: str) -> Optional[Dict[str, Any]]:
    if not os.path.exists(path):
        return None
    with open(path, "r") as f:
        return yaml.safe_load(f)
