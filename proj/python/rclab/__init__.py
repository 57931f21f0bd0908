"""Exact epsilon-relaxation complexity of lattice point sets."""

import json

from ._rclab import (
    InvalidInput,
    max_hiding_set,
    rc_bruteforce,
    separate,
    sgm,
    symmetry_generators,
)
from . import _rclab

__all__ = [
    "InvalidInput",
    "generate_basic",
    "max_hiding_set",
    "rc_bruteforce",
    "root_bounds",
    "separate",
    "sgm",
    "solve",
    "symmetry_generators",
]


def generate_basic(shape, d, radius):
    return json.loads(_rclab.generate_basic_json(shape, d, radius))


def solve(instance, model="compact", hiding=False, sym="0", prop=False, time_limit=600.0):
    text = instance if isinstance(instance, str) else json.dumps(instance)
    return json.loads(_rclab.solve_json(text, model, hiding, sym, prop, time_limit))


def root_bounds(instance):
    text = instance if isinstance(instance, str) else json.dumps(instance)
    return json.loads(_rclab.root_bounds(text))
