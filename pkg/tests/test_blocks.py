from fractions import Fraction

import pytest

from heunwkb.blockcatalog import BLOCK_IDS, block_catalog, check_dual, check_dual_relations, check_duals, get_block
from heunwkb.blockseries import BlockSeries
from heunwkb.casecatalog import get_case
from heunwkb.exceptions import CatalogMiss, InsufficientDepth, InvariantViolation
from heunwkb.paramrat import ParamRat
from heunwkb.zansatz import get_ansatz, log_expansion, ns_limit


def test_euler_derivative_turns_log_into_constant():
    w = BlockSeries('t', {1: 'a', 2: 'b'}, log='c', order=3)
    assert w.euler_derivative() == BlockSeries('t', {0: 'c', 1: 'a', 2: '2*b'}, order=3)


def test_derivative_lowers_exponents():
    w = BlockSeries('t', {1: 'a', 2: 'b'}, order=3)
    assert w.derivative() == BlockSeries('t', {0: 'a', 1: '2*b'}, order=2)


def test_change_of_variable():
    w = BlockSeries('s', {-1: 1, -2: 'a'}, log='c', order=-3, descending=True)
    in_t = w.in_t('2', Fraction(1, 2))
    assert in_t.variable == 't'
    assert in_t.coefficient(Fraction(-1, 2)) == Fraction(1, 2)
    assert in_t.coefficient(-1) == ParamRat.parse('a/4')
    assert in_t.log == ParamRat.parse('c/2')
    assert in_t.order == Fraction(-3, 2)


def test_identify_even_powers():
    w = BlockSeries('t', {1: 'm^4 + a*m^2'})
    assert w.identify({'m^2': 'thi^2/16', 'a': 'nu'}).coefficient(1) == ParamRat.parse('thi^4/256 + nu*thi^2/16')


def test_identify_rejects_odd_powers():
    with pytest.raises(InvariantViolation):
        BlockSeries('t', {1: 'm^3'}).identify({'m^2': 'thi^2'})


def test_coefficient_beyond_order():
    with pytest.raises(InsufficientDepth):
        BlockSeries('t', {1: 1}, order=2).coefficient(2)


def test_weak_coupling_ns_limit():
    w = ns_limit(get_ansatz('PIII3.weak'), 1)
    assert w.log == ParamRat.parse('a^2 - hbar^2/4')
    assert w.coefficient(1) == ParamRat.parse('2/(4*a^2 - hbar^2)')


def test_ansatz_depth_is_bounded():
    with pytest.raises(InsufficientDepth):
        log_expansion(get_ansatz('PIII3.weak'), 3)


def test_unknown_ansatz():
    with pytest.raises(CatalogMiss):
        get_ansatz('PII.strong')


def test_unknown_block():
    with pytest.raises(CatalogMiss):
        get_block('VII')


def test_weak_coupling_block_matches_display():
    checked = get_block('III3.t0').check_printed()
    assert Fraction(1) in checked
    assert Fraction(2) in checked


def test_dual_expansion_agrees():
    checked = check_duals()['III3.t0~III3.t0.dual']
    assert {Fraction(1), Fraction(2)} <= set(checked)


@pytest.mark.slow
@pytest.mark.parametrize('block_id', BLOCK_IDS)
def test_displayed_blocks_are_reproduced(block_id):
    get_block(block_id).check_printed()


def test_primary_block_of_a_case(iii3_t0):
    assert block_catalog(iii3_t0).log == ParamRat.parse('a^2 - hbar^2/4')


def test_block_dump():
    payload = get_block('VI').to_dict()
    assert payload['block'] == 'VI'
    assert payload['series']['variable'] == 't'


@pytest.mark.parametrize('case_id, expected', [
    ('V.tinf1', {Fraction(1), Fraction(0), Fraction(-1), Fraction(-2)}),
    ('IV.tinf1', {Fraction(1), Fraction(-1), Fraction(-3), Fraction(-5)}),
])
def test_dual_blocks_predict_the_same_accessory_parameter(case_id, expected):
    checked = check_dual_relations(get_case(case_id))
    assert expected <= set(checked)


def test_every_dual_pair_is_checked():
    assert set(check_duals()) == {'III3.t0~III3.t0.dual', 'V.tinf1~V.tinf1.dual', 'IV.tinf1~IV.tinf1.dual'}


def test_mismatched_dual_is_reported():
    with pytest.raises(InvariantViolation):
        check_dual('III3.t0', 'III3.t0.dual', {'dsig': '-a^2 + hbar^2/4'}, 1)
