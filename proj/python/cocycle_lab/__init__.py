"""Length functions, cocycles and Fourier multipliers on finite groups."""

import json

from ._core import *  # noqa: F401,F403
from ._core import CocycleLabError, run_json

__all__ = [name for name in dir() if not name.startswith("_")]


def run(config):
    """Run an experiment from a config dict; returns (report dict, pass flag)."""
    report, passed = run_json(json.dumps(config))
    return json.loads(report), passed
