"""Extended conditional independence: separoid deduction, exact checks on
finite regime families, counterexample search and causal applications.

Models, strategies and reports cross the boundary as JSON; the wrappers here
accept dicts or JSON text and return parsed objects.
"""

import json
from fractions import Fraction

from . import _core
from ._core import EciError, run_cli, verify_counterexample as _verify

__all__ = [
    "EciError",
    "derive",
    "closure",
    "check",
    "search_counterexample",
    "verify_counterexample",
    "scan_axioms",
    "product_space",
    "ace",
    "g_formula",
    "run_cli",
]


def _text(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def derive(goal, premises=(), decisions=(), rules="", flags=(), max_depth=64):
    """Shortest derivation; dict with "derived", "steps", "proof", ..."""
    return json.loads(_core.derive(goal, list(premises), list(decisions), rules, list(flags), max_depth))


def closure(premises, decisions=(), rules="", flags=()):
    return _core.closure(list(premises), list(decisions), rules, list(flags))


def check(model, statement, semantics=""):
    """Semantics: "" (by statement kind), SCI, VCI, ECI, PAIRWISE or GENERAL."""
    return _core.check(_text(model), statement, semantics)


def search_counterexample(goal, premises=(), decisions=(), semantics="SCI", seed=0, trials=1000, grid=4,
                          regimes=1):
    """Serialized counterexample model (dict with a "report" key), or None."""
    out = _core.search_counterexample(goal, list(premises), list(decisions), semantics, seed, trials, grid,
                                      regimes)
    return None if out is None else json.loads(out)


def verify_counterexample(serialized):
    return _verify(_text(serialized))


def scan_axioms(rules="SEPAROID_FULL", flags=(), vars=4, decisions=0, regimes=1, trials=100, seed=0, grid=4,
                identity=True):
    return json.loads(_core.scan_axioms(rules, list(flags), vars, decisions, regimes, trials, seed, grid,
                                        identity))


def product_space(model, prior=()):
    """Joint distribution over outcomes and regimes; uniform prior by default."""
    return json.loads(_core.product_space(_text(model), [str(p) for p in prior]))


def ace(model, response="Y", treatment="T", obs="obs", do0="do0", do1="do1"):
    r = json.loads(_core.ace(_text(model), response, treatment, obs, do0, do1))
    for key in ("ace_interventional", "ace_observational"):
        if r.get(key) is not None:
            r[key] = Fraction(r[key])
    return r


def g_formula(model, strategy, k, obs="obs"):
    """E_s{k(Y)} as a Fraction; `k` maps value labels of Y to numbers."""
    return Fraction(_core.g_formula(_text(model), _text(strategy), {str(a): str(b) for a, b in k.items()}, obs))
