"""Compositional verification of contract-annotated Lustre programs."""

import json

from . import _core
from ._core import HrmvError

__all__ = ["HrmvError", "check", "modular", "abstract", "compose", "decompose", "simulate", "graph"]


def _report(fn):
    def run(file, **kwargs):
        return json.loads(fn(str(file), **kwargs))

    run.__name__ = fn.__name__
    run.__doc__ = f"Run `{fn.__name__}` on a Lustre file and return the JSON report as a dict."
    return run


check = _report(_core.check)
modular = _report(_core.modular)
abstract = _report(_core.abstract)
compose = _report(_core.compose)


def decompose(file, main=""):
    """Return the decomposed program text and its manifest as a dict."""
    lus, manifest = _core.decompose(str(file), main)
    return lus, json.loads(manifest)


def simulate(file, inputs, main="", depth=-1):
    """Run the main node on input rounds given as text, one round per line."""
    return _core.simulate(str(file), inputs, main, depth)


def graph(file, node=""):
    """DOT rendering of a node's task graph."""
    return _core.graph(str(file), node)
