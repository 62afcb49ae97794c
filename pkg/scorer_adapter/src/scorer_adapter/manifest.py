"""Run manifest: which models produced an output file, and how."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .schemas import write_json

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class AdapterManifest:
    """Provenance for one batch run, written next to its output."""

    backend: str
    models: dict[str, str]  # purpose or style name -> model identifier
    batch_size: int
    device: str
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "backend": self.backend,
            "models": {k: self.models[k] for k in sorted(self.models)},
            "batch_size": self.batch_size,
            "device": self.device,
        }


def write_manifest(manifest: AdapterManifest, path: str | Path) -> None:
    write_json(manifest.to_dict(), path)
