"""
Run manifest

Written before any result file of a run and completed once the results are
on disk. Together with the echoed configuration and seed it is enough to
reproduce every output of the run.
"""

import json
import logging
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional, Union

from .. import __version__
from ..core.exceptions import InternalError

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


def unique_run_dir(base: Union[str, Path], name: str, seed: int) -> Path:
    """``base/<name>-seed<seed>-<UTC timestamp>``, suffixed until it does not exist"""
    stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%S%f")
    candidate = Path(base) / f"{name}-seed{seed}-{stamp}"
    suffix = 1
    while candidate.exists():
        candidate = Path(base) / f"{name}-seed{seed}-{stamp}-{suffix}"
        suffix += 1
    return candidate


@dataclass
class RunManifest:
    """Provenance of one run"""
    config: Dict[str, Any]
    seed: int
    code_version: str = __version__
    started_at: str = field(default_factory=_now)
    finished_at: Optional[str] = None
    outputs: Dict[str, str] = field(default_factory=dict)
    status: str = "running"
    threads: int = 1
    path: Optional[str] = None

    def write(self, path: Union[str, Path]) -> Path:
        """Write the manifest; must happen before the run writes any result"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.path = str(path)
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)
        logger.info(f"Manifest written to {path}")
        return path

    def finalize(self, outputs: Dict[str, str], passed: bool) -> Path:
        """Record the output paths and the end time, then rewrite the manifest"""
        if self.path is None:
            raise InternalError("manifest must be written before it is finalized")
        self.outputs.update(outputs)
        self.finished_at = _now()
        self.status = "passed" if passed else "failed"
        for key, value in sorted(self.outputs.items()):
            logger.info(f"Output {key}: {value}")
        return self.write(self.path)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data.pop("path")
        return data

    @classmethod
    def load(cls, path: Union[str, Path]) -> 'RunManifest':
        with open(path, "r") as f:
            data = json.load(f)
        manifest = cls(**data)
        manifest.path = str(path)
        return manifest
