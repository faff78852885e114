import json
import random
from functools import lru_cache
from importlib import resources

import pytest
from hypothesis import settings

from ppsquares.hermitian import IDENTITY, congruent_form, mat_mul
from ppsquares.quadorder import ONE, ZERO, OrderElement

settings.register_profile("ci", max_examples=60, deadline=None)
settings.load_profile("ci")

SAMPLE_DISCS = (-3, -4, -8, -15, -20, -40, -163, -232)


def random_gl2(O, rng, steps=6, span=2):
    """Product of random elementary, unit-diagonal and swap matrices."""
    P = IDENTITY
    for _ in range(steps):
        k = rng.randrange(4)
        lam = OrderElement(rng.randint(-span, span), rng.randint(-span, span))
        if k == 0:
            E = ((ONE, lam), (ZERO, ONE))
        elif k == 1:
            E = ((ONE, ZERO), (lam, ONE))
        elif k == 2:
            E = ((rng.choice(O.units), ZERO), (ZERO, rng.choice(O.units)))
        else:
            E = ((ZERO, ONE), (ONE, ZERO))
        P = mat_mul(O, P, E)
    return P


def random_congruent(M, rng, **kw):
    P = random_gl2(M.order, rng, **kw)
    return congruent_form(M, P), P


@lru_cache(maxsize=None)
def full_report():
    """The bundled full report (regenerated and compared by the acceptance test)."""
    text = resources.files("ppsquares.data").joinpath("report_full.json").read_text()
    return json.loads(text)


@pytest.fixture
def rng():
    return random.Random(20240601)
