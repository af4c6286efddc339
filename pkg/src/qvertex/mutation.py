"""Controlled perturbations of named q-exponents, for negative-control tests.

Formula code reads exponents through ``bump(name)``; inside ``mutate(name, d)``
that exponent is shifted by d.  The active mutation lives in a context
variable, so concurrent evaluations never see each other's perturbations.
"""

import contextvars
from contextlib import contextmanager
from fractions import Fraction

_active = contextvars.ContextVar("qvertex_mutation", default=None)


@contextmanager
def mutate(name, delta=1):
    token = _active.set((name, Fraction(delta)))
    try:
        yield
    finally:
        _active.reset(token)


def bump(name):
    m = _active.get()
    if m is not None and m[0] == name:
        return m[1]
    return 0


def active():
    return _active.get()
