"""Run manifests: enough provenance to reproduce any produced artifact."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from . import __version__


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def build_manifest(subcommand: str, flags: dict, inputs: dict[str, str | Path],
                   seed: int | None = None, counts: dict | None = None,
                   timings: dict | None = None,
                   decisions: dict | None = None) -> dict:
    digests = {}
    for name, path in inputs.items():
        if path is not None and Path(path).exists():
            digests[name] = file_digest(path)
    return {
        "tool": "corefmine",
        "version": __version__,
        "subcommand": subcommand,
        "flags": flags,
        "input_digests": digests,
        "seed": seed,
        "counts": counts or {},
        "timings_seconds": timings or {},
        "decisions": decisions or {},
    }


def write_manifest(path, manifest: dict) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(manifest, f, sort_keys=True, ensure_ascii=False, indent=2)
        f.write("\n")
