"""Run manifests, config handling and the sweep worker pool.

Every CLI invocation writes its tabular data plus a JSON sidecar manifest
recording the command line, resolved scaled parameters, tolerances and
integrator settings, the code version, wall-clock timestamps and the
termination summary.  Manifests are write-once; data files are
deterministic for a fixed (config, version) pair, so the timestamps live
only in the manifest.

Manifest schema (JSON object):
    command      str, subcommand name
    argv         list[str], the raw command line
    params       object, resolved scaled physical parameters
    settings     object, tolerances / integrator / grid settings
    version      str, package version (git describe when available)
    started_at   str, ISO-8601 UTC
    finished_at  str, ISO-8601 UTC
    termination  str, overall outcome summary
    outputs      list[str], paths of files this run produced

Config files are flat JSON objects whose keys must match the subcommand's
flags (dashes or underscores); unknown keys are rejected before any
computation runs.  Values from a config file override command-line flags.
"""

from __future__ import annotations

import datetime
import json
import os
import subprocess
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict
from pathlib import Path

WORKERS_ENV = "BECDYN_WORKERS"


class ConfigError(ValueError):
    """Invalid or unknown configuration key/value (CLI exit code 1)."""


class PhysicsDomainError(RuntimeError):
    """Parameters outside the physical domain of an operation (exit code 2)."""


def package_version() -> str:
    from . import __version__

    try:
        desc = subprocess.run(
            ["git", "describe", "--always", "--dirty", "--tags"],
            capture_output=True, text=True, timeout=5,
            cwd=Path(__file__).resolve().parent,
        )
        if desc.returncode == 0 and desc.stdout.strip():
            return f"{__version__}+{desc.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return __version__


def _utcnow() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


@dataclass
class RunManifest:
    command: str
    argv: list
    params: dict
    settings: dict
    version: str = field(default_factory=package_version)
    started_at: str = field(default_factory=_utcnow)
    finished_at: str = ""
    termination: str = ""
    outputs: list = field(default_factory=list)

    def finish(self, termination: str = "completed"):
        self.finished_at = _utcnow()
        self.termination = termination

    def write(self, path) -> None:
        """Write-once: refuses to overwrite an existing manifest."""
        path = Path(path)
        with open(path, "x", encoding="utf-8") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")


def load_config(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


def apply_config(cfg: dict, options: dict, allowed: set) -> dict:
    """Overlay config values onto CLI option values.

    ``allowed`` holds the canonical (underscore) option names of the
    subcommand; any other key is a schema error.
    """
    out = dict(options)
    for key, value in cfg.items():
        canon = key.replace("-", "_")
        if canon not in allowed:
            raise ConfigError(f"unknown config key {key!r}")
        out[canon] = value
    return out


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        k = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from exc
    return max(1, k)


def pool_map(fn, items):
    """Map ``fn`` over ``items`` on a bounded worker pool.

    Results come back in input order regardless of completion order, so
    sweep outputs are deterministic.  With one worker (the default) this
    runs serially in-process.
    """
    items = list(items)
    k = worker_count()
    if k == 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=k) as pool:
        return list(pool.map(fn, items))


def format_table(header, rows, sep="\t"):
    """Delimiter-separated text with a single header line; fixed repr-style
    float formatting keeps outputs byte-identical across runs."""
    lines = [sep.join(header)]
    for row in rows:
        lines.append(sep.join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)
