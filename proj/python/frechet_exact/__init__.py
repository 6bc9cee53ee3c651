"""Exact continuous Frechet distance for integer polygonal curves."""

from fractions import Fraction
import math

from . import _core
from ._core import IterationBoundExceeded, ParseError, RangeError, read_curve

__all__ = [
    "IterationBoundExceeded",
    "ParseError",
    "RangeError",
    "brute_force_squared",
    "decide",
    "discrete_squared",
    "frechet",
    "frechet_squared",
    "read_curve",
    "simplify",
]


def frechet_squared(a, b, engine="dijkstra", simplify=True):
    (num, den), _, _ = _core.frechet_squared(a, b, engine, simplify)
    return Fraction(num, den)


def frechet(a, b, engine="dijkstra", simplify=True):
    return math.sqrt(frechet_squared(a, b, engine, simplify))


def decide(a, b, delta2):
    delta2 = Fraction(delta2)
    return _core.decide(a, b, delta2.numerator, delta2.denominator)


def brute_force_squared(a, b):
    return Fraction(*_core.brute_force_squared(a, b))


def discrete_squared(a, b):
    return Fraction(*_core.discrete_squared(a, b))


def simplify(curve, mu2):
    mu2 = Fraction(mu2)
    return _core.simplify(curve, mu2.numerator, mu2.denominator)
