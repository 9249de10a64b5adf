"""Python face of the JASDA scheduling engine.

The heavy lifting lives in the compiled ``_jasda`` extension; this module
adds dict-friendly wrappers around the JSON entry points.
"""

import json as _json

from _jasda import *  # noqa: F401,F403
from _jasda import (
    __version__,
    generate_workload_json,
    replay_trace,
    run_simulation_json,
)


def run(config, policy="jasda", trace_path=""):
    """Run a workload (dict or JSON string); returns the metrics dict."""
    if not isinstance(config, str):
        config = _json.dumps(config)
    return _json.loads(run_simulation_json(config, policy, trace_path))


def generate(horizon=2000, arrival_rate=0.02, n_slices=2, seed=1):
    """Generate a synthetic workload; returns the config dict."""
    return _json.loads(generate_workload_json(horizon, arrival_rate,
                                              n_slices, seed))


def replay(trace_path):
    """Audit a trace file; returns recomputed metrics, raises AuditError."""
    return _json.loads(replay_trace(trace_path))
