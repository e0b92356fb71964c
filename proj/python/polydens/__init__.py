"""Quantitative density of polynomial values at integer points.

Thin Python layer over the native ``_core`` module. Exact exponents come back
as :class:`fractions.Fraction`; composite results as plain dicts.
"""

import json
from fractions import Fraction

from . import _core
from ._core import PolydensError, charpoly_invariants, companion_witness, count_points, enumerate_points, signature

__all__ = [
    "PolydensError",
    "affine_kappa",
    "charpoly_invariants",
    "companion_witness",
    "count_points",
    "counterexample_thresholds",
    "enumerate_points",
    "ergodic_theta",
    "gram_pigeonhole_kappa",
    "growth_exponent",
    "lemma_margin",
    "pigeonhole_kappa",
    "projective_kappa",
    "random_form",
    "run_cli",
    "run_schedule",
    "search",
    "signature",
    "theorem_table",
    "verify_no_solutions",
    "volume_exponent",
]


def _frac(pair):
    return Fraction(*pair)


def pigeonhole_kappa(a, m, d):
    return _frac(_core.pigeonhole_kappa(str(a), m, d))


def gram_pigeonhole_kappa(n, p, q):
    return _frac(_core.gram_pigeonhole_kappa(n, p, q))


def volume_exponent(root_datum):
    return _frac(_core.volume_exponent(root_datum))


def ergodic_theta(p):
    n_e, theta = _core.ergodic_theta(str(p))
    return n_e, _frac(theta)


def affine_kappa(theta, b, zeta):
    return _frac(_core.affine_kappa(str(theta), str(b), str(zeta)))


def projective_kappa(zeta, theta, b, c, d):
    return _frac(_core.projective_kappa(str(zeta), str(theta), str(b), str(c), str(d)))


def counterexample_thresholds(s, n):
    below, floor = _core.counterexample_thresholds(s, n)
    return _frac(below), _frac(floor)


def theorem_table():
    return json.loads(_core.theorem_table())


def random_form(p, q, disc, seed):
    return _core.random_form(p, q, disc, seed)


def growth_exponent(records):
    return json.loads(_core.growth_exponent(list(records)))


def search(family, seed, xi, eps, kappa, **kwargs):
    return json.loads(_core.search(family, seed, list(xi), eps, kappa, **kwargs))


def run_schedule(family, seed, xi, kappa, **kwargs):
    return json.loads(_core.run_schedule(family, seed, list(xi), kappa, **kwargs))


def lemma_margin(alpha, xi, sigma, x_max, **kwargs):
    return json.loads(_core.lemma_margin(list(alpha), xi, sigma, x_max, **kwargs))


def verify_no_solutions(alpha, xi, kappa, epsilons, **kwargs):
    return json.loads(_core.verify_no_solutions(list(alpha), xi, kappa, list(epsilons), **kwargs))


def run_cli(*args):
    """Runs the command-line dispatcher in-process; returns (exit_code, stdout, stderr)."""
    return _core.dispatch([str(a) for a in args])
