from fractions import Fraction

import pytest

from heunwkb.blockseries import BlockSeries
from heunwkb.casecatalog import get_case
from heunwkb.comparator import Status, compare, predicted_E, verify, verify_all
from heunwkb.exceptions import ConjectureMismatch
from heunwkb.expansioncase import Operator, Relation
from heunwkb.paramrat import ParamRat
from heunwkb.puiseuxseries import PuiseuxSeries

_RELATION = Relation('test', Operator.T_DDT)
_W = BlockSeries('t', {1: 'nu'}, log='nu^2', order=3)


def test_euler_relation_prediction():
    predicted = predicted_E(_W, _RELATION)
    assert predicted.coefficient(0) == ParamRat.parse('nu^2')
    assert predicted.coefficient(1) == ParamRat.parse('nu')


def test_sign_and_shift_enter_the_prediction():
    relation = Relation('test', Operator.T_DDT, sign=-1, shift={Fraction(0): 'th0^2'})
    predicted = predicted_E(_W, relation)
    assert predicted.coefficient(0) == ParamRat.parse('th0^2 - nu^2')


def test_heun_operator():
    relation = Relation('test', Operator.T_T_MINUS_ONE_DDT)
    predicted = predicted_E(BlockSeries('t', {1: 'a'}, order=3), relation)
    assert predicted.coefficient(1) == ParamRat.parse('-a')
    assert predicted.coefficient(2) == ParamRat.parse('a')


def test_matching_series_pass(iii3_t0):
    E = PuiseuxSeries('t', {0: 'nu^2', 1: 'nu'}, order=3)
    report = compare(iii3_t0, E, _W, 2, _RELATION)
    assert report.status is Status.PASS
    assert report.checked_orders == [0, 1, 2]
    assert 'first_mismatch' not in report.to_dict()


def test_first_mismatch_is_reported(iii3_t0):
    E = PuiseuxSeries('t', {0: 'nu^2', 1: '2*nu'}, order=3)
    report = compare(iii3_t0, E, _W, 2, _RELATION, strict=False)
    assert report.status is Status.FAIL
    assert report.first_mismatch.exponent == 1
    payload = report.to_dict()
    assert payload['status'] == 'fail'
    assert payload['first_mismatch']['t_exp'] == '1'
    with pytest.raises(ConjectureMismatch):
        report.raise_for_status()


def test_strict_comparison_raises(iii3_t0):
    E = PuiseuxSeries('t', {0: 'nu'}, order=3)
    with pytest.raises(ConjectureMismatch):
        compare(iii3_t0, E, _W, 2, _RELATION)


def test_weak_coupling_conjecture(iii3_t0):
    reports = verify(iii3_t0)
    assert [r.status for r in reports] == [Status.PASS, Status.PASS]
    assert reports[0].reached == 2


@pytest.mark.slow
def test_heun_conjecture_through_second_order():
    (report,) = verify(get_case('VI.t0'), Fraction(2))
    assert report.passed
    assert report.reached == 2


@pytest.mark.slow
def test_strong_coupling_conjecture(iii3_tinf):
    (report,) = verify(iii3_tinf)
    assert report.passed
    assert report.to_dict()['checked_orders'][0] == '1/2'


@pytest.mark.slow
def test_all_cases_sorted():
    reports = verify_all()
    case_ids = [r.case_id for r in reports]
    assert case_ids == sorted(case_ids)
    assert all(r.passed for r in reports)


@pytest.mark.slow
@pytest.mark.parametrize('case_id, variant', [('III3.tinf', 'negative-root'), ('I.tinf', 'sigma-minus')])
def test_branch_variants_satisfy_their_relations(case_id, variant):
    reports = verify(get_case(case_id, variant))
    assert reports
    assert all(report.passed for report in reports)
