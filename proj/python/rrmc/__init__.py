"""Reinforced regression Monte Carlo for optimal stopping."""

import json

try:
    from . import _rrmc
except ImportError:  # in-tree build: the extension sits next to the package
    import _rrmc

__version__ = _rrmc.__version__
ConfigError = _rrmc.ConfigError
NumericalError = _rrmc.NumericalError
black_scholes = _rrmc.black_scholes
lattice_price = _rrmc.lattice_price
max_call_cost_reduction = _rrmc.max_call_cost_reduction
solve_least_squares = _rrmc.solve_least_squares


def _dump(config):
    return config if isinstance(config, str) else json.dumps(config)


def normalize_config(config):
    """Validated config with every default filled in."""
    return json.loads(_rrmc.normalize_config(_dump(config)))


def run_experiment(config):
    """Report dict: config echo, bounds, cost, counters, timings and the fitted model."""
    return json.loads(_rrmc.run_experiment(_dump(config)))


def run_table(base, cells):
    """Runs each override cell on top of `base`; returns {"cells": [...], "csv": str}."""
    return json.loads(_rrmc.run_table(_dump(base), json.dumps(list(cells))))


def cost_report(config):
    return json.loads(_rrmc.cost_report(_dump(config)))


def simulate(config, num_paths, seed, domain="training"):
    """Array of shape (num_paths, J + 1, d)."""
    return _rrmc.simulate(_dump(config), num_paths, seed, domain)


def continuation_value(model, config, state, date, accrued=0.0):
    return _rrmc.continuation_value(_dump(model), _dump(config), list(state), date, accrued)


__all__ = [
    "ConfigError",
    "NumericalError",
    "black_scholes",
    "continuation_value",
    "cost_report",
    "lattice_price",
    "max_call_cost_reduction",
    "normalize_config",
    "run_experiment",
    "run_table",
    "simulate",
    "solve_least_squares",
]
