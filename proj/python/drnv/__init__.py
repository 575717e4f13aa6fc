"""Bernoulli newsvendor offers with robust variants, Monte-Carlo sweeps and market backtests."""

import json as _json

from ._core import (
    DataError,
    DomainError,
    PredictiveCdf,
    deform_lower_value,
    deform_upper_value,
    expected_loss,
    solve_direct,
    solve_dr_omega,
    solve_dr_s,
)
from . import _core

__all__ = [
    "DataError",
    "DomainError",
    "PredictiveCdf",
    "deform_lower_value",
    "deform_upper_value",
    "epsilon_sweep",
    "expected_loss",
    "solve_direct",
    "solve_dr_omega",
    "solve_dr_s",
    "synthetic_backtest",
]


def epsilon_sweep(dist, **kwargs):
    """Gamma values and losses of the epsilon sweep as a dict."""
    return _json.loads(_core.epsilon_sweep(dist, **kwargs))


def synthetic_backtest(**kwargs):
    """Backtest report on the synthetic market as a dict."""
    return _json.loads(_core.synthetic_backtest(**kwargs))
