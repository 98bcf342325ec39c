import json
from fractions import Fraction

import pytest
import sympy

from heunwkb.casecatalog import CASE_IDS, export_registry, get_case
from heunwkb.exceptions import CatalogMiss
from heunwkb.expansioncase import CycleKind
from heunwkb.localframe import X
from heunwkb.potentialspec import POTENTIALS
from heunwkb.rescaledpotential import G, L, h, limiting_curve, rescale_potential
from heunwkb.scalingspec import SCALINGS, verify_scaling
from heunwkb.symmetry import check_symmetries, check_symmetry


def test_seventeen_cases():
    assert len(CASE_IDS) == 17
    assert len(set(CASE_IDS)) == 17


def test_unknown_case():
    with pytest.raises(CatalogMiss):
        get_case('VII.t0')


def test_unknown_variant():
    with pytest.raises(CatalogMiss):
        get_case('III3.t0', 'negative-root')


def test_variant_replaces_the_cycle():
    case = get_case('III3.tinf', 'negative-root')
    assert case.forced_g == '-2'
    assert case.cycle.points[0].location == '-1'
    assert case.variant == 'negative-root'


@pytest.mark.parametrize('equation', sorted(SCALINGS))
def test_scaling_maps_potential_to_hbar_form(equation):
    assert verify_scaling(equation)


def test_every_scaling_has_a_potential():
    assert set(SCALINGS) <= set(POTENTIALS)


def test_strong_coupling_exponents(iii3_tinf):
    assert iii3_tinf.kappa == 1
    assert not iii3_tinf.small_t
    assert iii3_tinf.t_exponent(0) == Fraction(1, 2)
    assert iii3_tinf.t_exponent(6) == -1
    assert iii3_tinf.levels_through(Fraction(-5, 4)) == 7


def test_weak_coupling_exponents(iii3_t0):
    assert iii3_t0.kappa == 0
    assert iii3_t0.small_t
    assert iii3_t0.levels_through(2) == 2


def test_complete_k():
    assert get_case('III3.t0').complete_k(6) is None
    assert get_case('III3.tinf').complete_k(6) == 3
    assert get_case('II.tinf1').complete_k(3, offset=1) == 2


def test_rescaled_potential_of_strong_coupling(iii3_tinf):
    expr = rescale_potential(iii3_tinf).expression
    assert sympy.simplify(expr - (1 / X**3 - G / X**2 + 1 / X)) == 0
    assert not expr.has(L)
    assert not expr.has(h)


def test_rescaled_potential_of_weak_coupling(iii3_t0):
    expr = rescale_potential(iii3_t0).expression
    assert sympy.simplify(expr - (L / X**3 - G / X**2 + 1 / X)) == 0
    assert rescale_potential(iii3_t0).offset == 0


def test_limiting_curve_has_double_zero(iii3_tinf):
    curve = limiting_curve(iii3_tinf)
    assert curve.point == 1
    assert curve.multiplicity == 2


def test_pole_cases_have_no_forced_value():
    for case_id in CASE_IDS:
        case = get_case(case_id)
        if case.cycle.kind is CycleKind.POLE_RESIDUE:
            assert case.forced_g is None


def test_registry_is_versioned_json():
    registry = json.loads(export_registry())
    assert registry['schema'] == 1
    assert [c['case'] for c in registry['cases']] == list(CASE_IDS)
    assert export_registry() == export_registry()


def test_heun_symmetries():
    assert check_symmetries('VI') == ['VI.reflection', 'VI.inversion']


def test_unknown_symmetry():
    with pytest.raises(CatalogMiss):
        check_symmetry('VI.rotation')


def test_conjugate_variant_carries_its_relation_and_tower():
    case = get_case('I.tinf', 'sigma-minus')
    assert case.forced_g == '4*q/3'
    assert case.cycle.points[0].location == '-q'
    assert case.relations[0].s_prefactor == '96*s2*i*p'
    assert case.tower == ('i', 'q', 'p', 's2')
    assert get_case('I.tinf').relations[0].s_prefactor == '96*s2*p'


def test_variant_without_own_tower_keeps_the_case_tower():
    assert get_case('III3.tinf', 'negative-root').tower == ('i',)
