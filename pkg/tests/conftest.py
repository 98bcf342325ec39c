import random

import pytest
from loguru import logger

from heunwkb.casecatalog import get_case
from heunwkb.paramrat import ParamRat


@pytest.fixture(autouse=True)
def quiet_logs():
    logger.disable('heunwkb')
    yield
    logger.enable('heunwkb')


@pytest.fixture
def iii3_tinf():
    return get_case('III3.tinf')


@pytest.fixture
def iii3_t0():
    return get_case('III3.t0')


SCALES = ['1', 'i', '1 + s2', '2 - i', 's3', 'c']


def _random_poly(rng, names):
    terms = [str(rng.randint(1, 5))]
    for _ in range(rng.randint(1, 3)):
        coeff = rng.choice([-3, -2, -1, 1, 2, 3])
        monomial = '*'.join(f'{rng.choice(names)}^{rng.randint(1, 2)}' for _ in range(rng.randint(1, 2)))
        terms.append(f'({coeff})*{monomial}')
    return ' + '.join(terms)


@pytest.fixture
def random_rats():
    """Seeded generator of nonzero ParamRat values in nu, hbar and th0, scaled by a tower constant"""
    def generate(seed, count=3, surds=True):
        rng = random.Random(seed)
        names = ['nu', 'hbar', 'th0']
        values = []
        for _ in range(count):
            scale = rng.choice(SCALES) if surds else '1'
            values.append(ParamRat.parse(f'({scale})*({_random_poly(rng, names)})/({_random_poly(rng, names)})'))
        return values
    return generate
