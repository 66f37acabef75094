"""Python front end for the tsf toolkit."""

import json

from ._tsf import (
    SCHEMA_VERSION,
    DomainError,
    __version__,
    basic_betti,
    builders,
    fnv1a64,
    model_json,
    run,
)


def run_json(*args):
    """Run a command with JSON output; returns (exit_code, report)."""
    code, out, err = run(list(args) + ["--format", "json"])
    if not out:
        raise DomainError(err.strip())
    return code, json.loads(out)


def model(name):
    return json.loads(model_json(name))


__all__ = [
    "SCHEMA_VERSION",
    "DomainError",
    "__version__",
    "basic_betti",
    "builders",
    "fnv1a64",
    "model",
    "model_json",
    "run",
    "run_json",
]
