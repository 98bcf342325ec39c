import random
from fractions import Fraction

import pytest

from heunwkb.exceptions import InsufficientDepth, NonInvertibleLeading, TagMismatch
from heunwkb.paramrat import param
from heunwkb.puiseuxseries import PuiseuxSeries


def test_geometric_inverse():
    series = PuiseuxSeries('u', {0: 1, 1: -1}, order=5)
    assert series.inverse() == PuiseuxSeries('u', {k: 1 for k in range(5)}, order=5)


def test_sqrt_of_one_plus_u():
    root = PuiseuxSeries('u', {0: 1, 1: 1}, order=4).sqrt()
    assert root.terms == {0: 1, 1: Fraction(1, 2), 2: Fraction(-1, 8), 3: Fraction(1, 16)}
    assert root.order == 4


def test_ramified_sqrt():
    root = PuiseuxSeries('u', {1: 1}, order=3).sqrt()
    assert root.terms == {Fraction(1, 2): 1}
    assert root.order == Fraction(5, 2)


def test_sqrt_with_pinned_branch():
    root = PuiseuxSeries('u', {0: -1}, order=2).sqrt(root=-param('i'))
    assert root.leading == -param('i')


def test_log():
    assert PuiseuxSeries('u', {0: 1, 1: 1}, order=4).log() == \
        PuiseuxSeries('u', {1: 1, 2: Fraction(-1, 2), 3: Fraction(1, 3)}, order=4)


def test_product_respects_truncation():
    a = PuiseuxSeries('u', {0: 1, 1: 1}, order=3)
    b = PuiseuxSeries('u', {-1: 1}, order=2)
    product = a * b
    assert product.order == 2
    assert product.terms == {-1: 1, 0: 1}


def test_coefficient_beyond_order():
    with pytest.raises(InsufficientDepth):
        PuiseuxSeries('u', {0: 1}, order=1).coefficient(1)


def test_residue():
    assert PuiseuxSeries('u', {-1: param('nu'), 0: 1}, order=3).residue() == param('nu')


def test_mixed_tags():
    with pytest.raises(TagMismatch):
        PuiseuxSeries('u', {0: 1}) + PuiseuxSeries('w', {0: 1})


def test_zero_series_has_no_inverse():
    with pytest.raises(NonInvertibleLeading):
        PuiseuxSeries.zero('u', order=3).inverse()


def test_derive_and_antiderivative():
    series = PuiseuxSeries('u', {Fraction(1, 2): 1, 2: 3}, order=4)
    assert series.antiderivative().derive() == series


def _random_series(random_rats, seed, ramification):
    rng = random.Random(seed)
    exponents = sorted({Fraction(rng.randint(-2 * ramification, 3 * ramification), ramification)
                        for _ in range(4)})
    return PuiseuxSeries('u', dict(zip(exponents, random_rats(seed, count=len(exponents), surds=False))))


SEEDS = range(6)


@pytest.mark.parametrize('seed', SEEDS)
def test_derivative_has_no_residue(random_rats, seed):
    series = _random_series(random_rats, seed, ramification=1 + seed % 3)
    assert series.derive().residue().is_zero


@pytest.mark.parametrize('seed', SEEDS)
def test_truncated_product_agrees_with_exact_product(random_rats, seed):
    a = _random_series(random_rats, seed, ramification=2)
    b = _random_series(random_rats, seed + 100, ramification=3)
    exact = a * b
    ta, tb = a.truncate(1), b.truncate(Fraction(1, 3))
    product = ta * tb
    assert product.order == min(ta.valuation + tb.order, tb.valuation + ta.order)
    assert product.terms == exact.truncate(product.order).terms


@pytest.mark.parametrize('seed', SEEDS)
def test_inverse_is_sound_below_its_order(random_rats, seed):
    (lead, *rest) = random_rats(seed, count=3, surds=False)
    series = PuiseuxSeries('u', {0: lead, Fraction(1, 2): rest[0], 2: rest[1]}, order=4)
    product = series * series.inverse()
    assert product.terms == {0: 1}
