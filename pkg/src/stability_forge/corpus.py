"""Built-in corpus of jobs with golden reports.

Each entry is a pair ``<name>.job.json`` / ``<name>.golden.json``.  A run
passes when the freshly rendered report is byte-identical to the golden file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, List, Optional, Union

from .runner import JobSpec, dumps, run

__all__ = ["CorpusEntry", "CorpusResult", "corpus_dir", "entries", "run_entry", "run_all",
           "write_goldens", "diff"]


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    job_path: Path
    golden_path: Path

    def job(self) -> JobSpec:
        return JobSpec.from_json(self.job_path.read_text())

    @property
    def description(self) -> str:
        return self.job().description or ""


@dataclass
class CorpusResult:
    name: str
    passed: bool
    mismatches: List[dict] = field(default_factory=list)


def corpus_dir() -> Path:
    return Path(str(resources.files("stability_forge").joinpath("corpus")))


def entries(directory: Optional[Union[str, Path]] = None) -> List[CorpusEntry]:
    root = Path(directory) if directory is not None else corpus_dir()
    out = []
    for job_path in sorted(root.glob("*.job.json")):
        name = job_path.name[: -len(".job.json")]
        out.append(CorpusEntry(name, job_path, root / f"{name}.golden.json"))
    return out


def diff(expected: Any, actual: Any, path: str = "") -> List[dict]:
    """Field-level differences between two JSON values."""
    if isinstance(expected, dict) and isinstance(actual, dict):
        out = []
        for key in sorted(set(expected) | set(actual)):
            sub = f"{path}/{key}"
            if key not in actual:
                out.append({"field": sub, "expected": expected[key], "actual": "<missing>"})
            elif key not in expected:
                out.append({"field": sub, "expected": "<missing>", "actual": actual[key]})
            else:
                out.extend(diff(expected[key], actual[key], sub))
        return out
    if isinstance(expected, list) and isinstance(actual, list) and len(expected) == len(actual):
        out = []
        for i, (e, a) in enumerate(zip(expected, actual)):
            out.extend(diff(e, a, f"{path}/{i}"))
        return out
    if expected != actual:
        return [{"field": path or "/", "expected": expected, "actual": actual}]
    return []


def run_entry(entry: CorpusEntry) -> CorpusResult:
    rendered = dumps(run(entry.job()))
    if not entry.golden_path.exists():
        return CorpusResult(entry.name, False,
                            [{"field": "/", "expected": "<missing golden file>", "actual": "<report>"}])
    golden = entry.golden_path.read_text()
    if rendered == golden:
        return CorpusResult(entry.name, True)
    mismatches = diff(json.loads(golden), json.loads(rendered))
    if not mismatches:
        mismatches = [{"field": "/", "expected": "<byte layout of golden file>",
                       "actual": "<canonical rendering>"}]
    return CorpusResult(entry.name, False, mismatches)


def run_all(directory: Optional[Union[str, Path]] = None) -> List[CorpusResult]:
    return [run_entry(e) for e in entries(directory)]


def write_goldens(directory: Optional[Union[str, Path]] = None) -> List[str]:
    written = []
    for e in entries(directory):
        e.golden_path.write_text(dumps(run(e.job())))
        written.append(e.name)
    return written
