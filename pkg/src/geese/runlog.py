"""Append-only run persistence: newline-delimited JSON records."""

from __future__ import annotations

import hashlib
import json
import threading
import time
from pathlib import Path

from .planner import canonical_json

LOG_FILENAME = "runs.ndjson"


def input_digest(*documents) -> str:
    """Content hash of the canonical serialization of the inputs."""
    h = hashlib.sha256()
    for doc in documents:
        h.update(canonical_json(doc).encode())
    return h.hexdigest()


class RunLog:
    """Monotonic run ids over an append-only NDJSON file.

    Appends are serialized with a lock; records are never rewritten.
    """

    def __init__(self, state_dir):
        self.state_dir = Path(state_dir)
        self.state_dir.mkdir(parents=True, exist_ok=True)
        self.path = self.state_dir / LOG_FILENAME
        self._lock = threading.Lock()

    def _read_all(self) -> list:
        if not self.path.exists():
            return []
        records = []
        with self.path.open() as fh:
            for line in fh:
                line = line.strip()
                if line:
                    records.append(json.loads(line))
        return records

    def append(self, kind: str, inputs: dict, result: dict, toolkit_version: str) -> dict:
        with self._lock:
            records = self._read_all()
            record = {
                "run_id": len(records) + 1,
                "timestamp": time.time(),
                "kind": kind,
                "input_digest": input_digest(inputs),
                "inputs": inputs,
                "result": result,
                "toolkit_version": toolkit_version,
            }
            with self.path.open("a") as fh:
                fh.write(canonical_json(record))
            return record

    def list_runs(self) -> list:
        with self._lock:
            return self._read_all()

    def get(self, run_id: int):
        for record in self.list_runs():
            if record["run_id"] == run_id:
                return record
        return None
