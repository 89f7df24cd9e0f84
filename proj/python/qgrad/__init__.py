"""Python front end for the qgrad solvers.

Commands take the INI configuration as text and return decoded JSON documents,
the same ones the ``qgrad`` executable writes.
"""

import json

from . import _qgrad
from ._qgrad import ConfigError, Error, ParseError, SpecError, G, cole_hopf, g, inverse_cole_hopf

__all__ = [
    "ConfigError", "Error", "ParseError", "SpecError",
    "G", "g", "cole_hopf", "inverse_cole_hopf",
    "scenario_names", "scenario", "check", "solve", "sweep", "eigen", "md",
]


def scenario_names():
    return list(_qgrad.scenario_names())


def scenario(name, seed=0, grid=None):
    return json.loads(_qgrad.scenario(name, seed, grid))


def _command(fn):
    def run(config, grid=None):
        return json.loads(fn(config, grid))

    run.__name__ = fn.__name__
    return run


check = _command(_qgrad.check)
solve = _command(_qgrad.solve)
sweep = _command(_qgrad.sweep)
eigen = _command(_qgrad.eigen)
md = _command(_qgrad.md)
