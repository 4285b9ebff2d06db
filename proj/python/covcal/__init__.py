"""Sensor-coverage calibration for surface-based visual localization.

The heavy lifting lives in the C++ extension module `_covcal`; this package
adds dict-friendly wrappers around the JSON-based calibrate/evaluate entry
points.
"""

import json as _json

try:
    from ._covcal import *  # noqa: F401,F403
    from . import _covcal as _impl
except ImportError:  # development layout: extension built next to the sources
    from _covcal import *  # noqa: F401,F403
    import _covcal as _impl

__version__ = _impl.__version__


def calibrate(reference, query, config=None, name="pair", **kwargs):
    """Run the radius sweep on an aligned pair and return the outcome dict.

    `config` mirrors the CLI calibration section: radii, n_samples,
    ovl_threshold, match_tol, rng_seed, front_end. Keyword arguments override
    individual fields.
    """
    cfg = dict(config or {})
    cfg.update(kwargs)
    return _json.loads(_impl.calibrate_json(reference, query, name, _json.dumps(cfg)))


def evaluate(reference, query, calibration, config=None, name="pair", **kwargs):
    """Measure recall/efficiency for an aligned pair against a calibration
    outcome (a dict as returned by `calibrate`)."""
    cfg = dict(config or {})
    cfg.update(kwargs)
    return _json.loads(
        _impl.evaluate_json(
            reference, query, name, _json.dumps(calibration), _json.dumps(cfg)
        )
    )
