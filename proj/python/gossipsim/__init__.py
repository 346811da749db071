"""Gossip and reputation Trust Game simulator."""

import json

from . import _core
from ._core import ConfigError, ParseError, __version__, describe_formats, default_table_checksum

__all__ = [
    "ConfigError",
    "ParseError",
    "__version__",
    "default_config",
    "default_table_checksum",
    "describe_formats",
    "parallel_update",
    "run",
    "sweep",
]


def default_config():
    """Return the default configuration as a dict."""
    return json.loads(_core.default_config_json())


def _config(config, overrides):
    cfg = dict(config or {})
    cfg.update(overrides)
    return json.dumps(cfg)


def run(config=None, **overrides):
    """Run one simulation; keys missing from config take their defaults."""
    return json.loads(_core.run_json(_config(config, overrides)))


def sweep(grid, replicates=0, workers=1):
    """Run a sweep grid (dict in the sweep JSON format).

    Returns a dict with "runs", "aggregate", "failures" and "warnings".
    """
    return json.loads(_core.sweep_json(json.dumps(grid), replicates, workers))


def parallel_update(image, mode="informed"):
    """Reputation matrix produced by one parallel gossip update of an image matrix."""
    return _core.parallel_update([list(map(float, row)) for row in image], mode)
