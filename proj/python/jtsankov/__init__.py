"""Python bindings for the jtsankov library.

Reports come back as parsed JSON in the same shape the command line tool prints.
"""

import json
from fractions import Fraction

from . import _core
from ._core import ConstraintError, Error, ParseError, kernel_dimension

__all__ = [
    "ConstraintError",
    "Error",
    "ParseError",
    "check_model",
    "kernel_dimension",
    "m14",
    "symmetric_space_check",
    "symmetric_space_residuals",
    "xi",
]


def _doc(x):
    return x if isinstance(x, str) else json.dumps(x)


def m14():
    return json.loads(_core.m14_json())


def check_model(model="m14", properties=()):
    return json.loads(_core.check_model(_doc(model), list(properties)))


def symmetric_space_residuals(params):
    return tuple(Fraction(r) for r in _core.symmetric_space_residuals(_doc(params)))


def symmetric_space_check(params, points=20, seed=1):
    return json.loads(_core.symmetric_space_check(_doc(params), points, seed))


def xi(family, x1, mode="frame"):
    return _core.xi(_doc(family), float(x1), mode)
