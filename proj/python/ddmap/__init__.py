"""Diffusion-map analysis of oscillatory cycles.

The compiled core lives in ``ddmap._core``; this module re-exports it and
adds a few conveniences for passing pipeline configuration as dicts.
"""

import json as _json

from . import _core
from ._core import (
    ConfigError,
    DDMapError,
    compress_svd,
    detect_landmarks,
    detrend_median,
    diffusion_map,
    excise_cycles,
    fourier_upsample,
    interpolate_trace,
    lowpass,
    make_scenario,
    make_template,
    manifold_point,
    median_filter,
    normalize_cycles,
    pairwise_sq_dists,
    remove_baseline,
    scenario_names,
    sign_cluster,
    sliding_normalize,
)

__version__ = _core.__version__


def _config_text(config):
    if config is None:
        return ""
    if isinstance(config, str):
        return config
    return _json.dumps(config)


def resolved_config(mode="ecg", config=None, overrides=()):
    """Full pipeline configuration as a dict."""
    return _json.loads(_core.resolved_config(mode, _config_text(config), list(overrides)))


def run(x, fs, mode="ecg", config=None, overrides=()):
    """Detect, excise and embed the cycles of ``x``.

    ``config`` is a (partial) configuration dict; ``overrides`` holds
    dotted assignments such as ``"kernel.dim=8"``.
    """
    return _core.run_ddmap(x, fs, mode, _config_text(config), list(overrides))


def derive_edr(x, fs, mode="ecg", config=None, overrides=()):
    """``run`` followed by clustering and the normalized 4 Hz trace."""
    return _core.derive_edr(x, fs, mode, _config_text(config), list(overrides))
