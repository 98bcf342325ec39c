from fractions import Fraction

import pytest

from heunwkb.accessorysolver import (VorosSolver, _affine_root, assemble_E, expand_sminus1, parity_check, riccati_step,
                                     solve)
from heunwkb.casecatalog import get_case
from heunwkb.exceptions import DegeneratePivot, ParityViolation
from heunwkb.paramrat import ParamRat, param
from heunwkb.rationalsolver import check_oracle, rational_solve


def test_leading_accessory_value_is_forced(iii3_tinf):
    expansion = solve(iii3_tinf, 0, 0)
    assert expansion.g_table() == [{'k': 0, 'l': 0, 'coeff': '2'}]


STRONG_COUPLING_TABLE = {
    (0, 0): '2', (0, 1): '-2*nu', (0, 2): 'nu^2/8', (0, 3): 'nu^3/128', (0, 4): '5*nu^4/4096',
    (0, 5): '33*nu^5/131072',
    (1, 0): '0', (1, 1): '0', (1, 2): '9/32', (1, 3): '3*nu/512', (1, 4): '17*nu^2/8192',
    (1, 5): '205*nu^3/262144',
    (2, 0): '0', (2, 1): '0', (2, 2): '0', (2, 3): '0', (2, 4): '9/65536', (2, 5): '405*nu/2097152',
}

STRONG_COUPLING_SERIES = {
    Fraction(1, 2): '2',
    Fraction(1, 4): '-2*nu',
    Fraction(0): '(4*nu^2 + 9*hbar^2)/32',
    Fraction(-1, 4): '(4*nu^3 + 3*hbar^2*nu)/512',
    Fraction(-1, 2): '(80*nu^4 + 136*hbar^2*nu^2 + 9*hbar^4)/65536',
    Fraction(-3, 4): '(528*nu^5 + 1640*hbar^2*nu^3 + 405*hbar^4*nu)/2097152',
    Fraction(-1): '9*(224*nu^6 + 1120*hbar^2*nu^4 + 654*hbar^4*nu^2 + 27*hbar^6)/33554432',
    Fraction(-5, 4): '(33728*nu^7 + 249872*hbar^2*nu^5 + 276004*hbar^4*nu^3 + 41607*hbar^6*nu)/2147483648',
}


@pytest.mark.slow
def test_strong_coupling_table(iii3_tinf):
    expansion = solve(iii3_tinf, 3, 7)
    for (k, l), text in STRONG_COUPLING_TABLE.items():
        assert expansion.coefficient(k, l) == ParamRat.parse(text), (k, l)
    odd = [value for (p, _), value in expansion.raw.items() if p % 2]
    assert odd
    assert all(value.is_zero for value in odd)
    entry = next(row for row in expansion.g_table() if (row['k'], row['l']) == (1, 2))
    assert entry['coeff'] == '9/32'
    series = assemble_E(iii3_tinf, expansion)
    assert set(series.terms) == set(STRONG_COUPLING_SERIES)
    for exponent, text in STRONG_COUPLING_SERIES.items():
        assert series.terms[exponent] == ParamRat.parse(text), exponent


def test_expansion_json_shape(iii3_tinf):
    payload = solve(iii3_tinf, 0, 2).to_dict()
    assert payload['case'] == 'III3.tinf'
    assert (payload['K'], payload['L']) == (0, 2)
    assert {'t_exp': '1/2', 'coeff': '2'} in payload['E_series']


def test_weak_coupling_classical_values(iii3_t0):
    expansion = solve(iii3_t0, 0, 1)
    assert expansion.coefficient(0, 0) == ParamRat.parse('-nu^2')
    assert expansion.coefficient(0, 1) == ParamRat.parse('-1/(2*nu^2)')


def test_residue_condition_is_exact_in_hbar(iii3_t0):
    columns = rational_solve(iii3_t0, 2)
    assert columns[0] == ParamRat.parse('-nu^2 + hbar^2/4')
    assert columns[1] == ParamRat.parse('-2/(4*nu^2 - hbar^2)')
    assert columns[2] == ParamRat.parse('-(20*nu^2 + 7*hbar^2)/(2*(4*nu^2 - hbar^2)^3*(nu^2 - hbar^2))')


@pytest.mark.slow
def test_third_exact_column(iii3_t0):
    columns = rational_solve(iii3_t0, 3)
    assert columns[3] == ParamRat.parse(
        '-4*(144*nu^4 + 232*hbar^2*nu^2 + 29*hbar^4)/((4*nu^2 - hbar^2)^5*(4*nu^2 - 9*hbar^2)*(nu^2 - hbar^2))')


def test_heun_leading_accessory_parameter():
    columns = rational_solve(get_case('VI.t0'), 0)
    assert columns[0] == ParamRat.parse('nu^2 - th0^2 - tht^2 + hbar^2/4')


def test_confluent_leading_accessory_parameter():
    columns = rational_solve(get_case('V.t0'), 0)
    assert columns[0] == ParamRat.parse('th0^2 + tht^2 - hbar^2/4 - nu^2')


def test_table_agrees_with_exact_columns(iii3_t0):
    expansion = solve(iii3_t0, 2, 2)
    valuations = check_oracle(rational_solve(iii3_t0, 2), expansion)
    assert all(v >= 6 for v in valuations.values())


def test_assembled_series_uses_the_t_lattice(iii3_tinf):
    series = assemble_E(iii3_tinf, solve(iii3_tinf, 0, 2))
    assert set(series.terms) <= {Fraction(1, 2), Fraction(1, 4), Fraction(0)}
    assert series.order is None


def test_odd_orders_must_vanish():
    assert parity_check({(0, 0): ParamRat.from_int(2), (1, 0): ParamRat.from_int(0)})
    with pytest.raises(ParityViolation):
        parity_check({(1, 0): ParamRat.parse('nu')})


def test_parity_check_accepts_a_solved_expansion(iii3_tinf):
    expansion = solve(iii3_tinf, 1, 2)
    assert parity_check(expansion)
    expansion.raw[1, 0] = ParamRat.parse('hbar')
    with pytest.raises(ParityViolation):
        parity_check(expansion)


@pytest.mark.parametrize('case_id, K, L', [('III3.tinf', 1, 3), ('III3.t0', 1, 2)])
def test_riccati_residuals_vanish_on_solved_tables(case_id, K, L):
    expansion = solve(get_case(case_id), K, L)
    slots = [(slot, residual) for table in expansion.tables for slot, residual in table.residuals()]
    assert len(slots) > 1
    assert all(residual.is_zero for _, residual in slots)


@pytest.mark.slow
def test_riccati_residuals_vanish_for_heun():
    expansion = solve(get_case('VI.t0'), 1, 1)
    assert all(residual.is_zero for table in expansion.tables for _, residual in table.residuals())


def test_negative_root_branch_is_a_phase_rotation(iii3_tinf):
    base = solve(iii3_tinf, 1, 3)
    variant = solve(get_case('III3.tinf', 'negative-root'), 1, 3)
    assert variant.coefficient(0, 0) == -2
    i = param('i')
    for (k, l), value in base.table.items():
        assert variant.coefficient(k, l) == -(-i) ** l * value, (k, l)


def test_sigma_minus_branch_conjugates_the_tower():
    base = solve(get_case('I.tinf'), 1, 2)
    variant = solve(get_case('I.tinf', 'sigma-minus'), 1, 2)
    assert variant.coefficient(0, 0) == ParamRat.parse('4*q/3')
    assert variant.coefficient(0, 1) == ParamRat.parse('4*i*p*nu')
    assert variant.coefficient(0, 1) != base.coefficient(0, 1)
    for (k, l), value in base.table.items():
        assert variant.coefficient(k, l) == value.subs({'q': '-q', 'p': 'i*p'}), (k, l)
    assert variant.coefficient(1, 2) == Fraction(-7, 48)


def test_leading_row_keeps_one_placeholder(iii3_t0):
    row = expand_sminus1(iii3_t0, {0: ParamRat.parse('-nu^2')}, L=2)
    assert len(row) == 2
    holders = [n for n, series in enumerate(row) if any('G' in c.free_symbols for c in series.terms.values())]
    assert holders == [1]


def test_leading_row_without_prefix_is_solved(iii3_t0):
    row = expand_sminus1(iii3_t0, L=2)
    assert len(row) == 3
    assert not any('G' in c.free_symbols for series in row for c in series.terms.values())


def test_riccati_step_reproduces_a_solved_row(iii3_tinf):
    solved = solve(iii3_tinf, 1, 2)
    solver = VorosSolver(iii3_tinf, 1, 2)
    assert riccati_step(solver, -1) == [2, -2 * param('nu'), ParamRat.parse('nu^2/8')]
    assert all(value.is_zero for value in riccati_step(solver, 0))
    assert riccati_step(solver, 1) == [Fraction(9, 32)]
    assert solver.g == solved.raw


@pytest.mark.parametrize('seed', range(6))
def test_affine_root_solves_linear_residues(random_rats, seed):
    pivot, constant, target = random_rats(seed)
    residue = pivot * param('G') + constant
    root = _affine_root(residue, target, 'test')
    assert residue.subs({'G': root}) == target


def test_affine_root_rejects_degenerate_residues():
    G, nu = param('G'), param('nu')
    with pytest.raises(DegeneratePivot):
        _affine_root(nu, ParamRat.from_int(1), 'test')
    with pytest.raises(DegeneratePivot):
        _affine_root(G * G + nu, ParamRat.from_int(1), 'test')


PRINTED_COEFFICIENTS = [
    ('V.t0', 0, 1, {(0, 1): '-thi*(nu^2 - th0^2 + tht^2)/(2*nu^2)'}),
    ('V.tinf1', 1, 2, {(0, 0): 'nu - thi', (0, 1): '2*nu^2 - 2*thi*nu', (1, 2): '-nu + thi/2'}),
    ('V.tinf2', 1, 2, {(0, 0): '-1/16', (0, 1): '-(i*nu + thi)/2', (1, 2): '1/8'}),
    ('IV.tinf1', 1, 1, {(0, 0): '2*nu', (0, 1): '3*nu^2 + 2*thi*nu - th0^2', (1, 1): '1/4'}),
    ('IV.tinf2', 1, 2, {(0, 1): '2*(i*s3*nu - thi)/3', (0, 2): 'nu^2 - 3*th0^2 - thi^2', (1, 2): '5/12'}),
    ('III1.t0', 1, 1, {(0, 1): '-th0*thi/(2*nu^2)', (1, 0): '1/4', (1, 1): '-th0*thi/(8*nu^4)'}),
    ('III1.tinf', 1, 2, {(0, 0): '-1/2', (0, 1): '-i*nu', (1, 2): '3/8'}),
    ('III2.t0', 1, 1, {(0, 1): '-thi/(2*nu^2)', (1, 1): '-thi/(8*nu^4)'}),
    ('III2.tinf', 1, 2, {(0, 0): '3*c^2/4', (0, 1): '-c*(s3*nu - thi)', (0, 2): '(nu^2 - 2*thi^2)/6',
                         (1, 2): '23/72'}),
    ('II.tinf1', 1, 1, {(0, 0): '2*i*nu', (0, 1): '-(3*nu^2 - thi^2)/8', (1, 1): '-1/8'}),
    ('II.tinf2', 1, 2, {(0, 0): '-1', (0, 1): '2*s2*nu', (1, 2): '-3/16'}),
    ('IIp.tinf1', 1, 1, {(0, 0): '-2*nu', (0, 1): '-(3*nu^2 - th0^2)/2', (1, 1): '-1/8'}),
    ('IIp.tinf2', 1, 2, {(0, 0): '1/4', (0, 1): '-i*s2*nu', (1, 2): '-3/16'}),
    ('I.tinf', 1, 2, {(0, 0): '-4*q/3', (0, 1): '4*p*nu', (0, 2): '-5*nu^2/4', (1, 2): '-7/48'}),
]


@pytest.mark.parametrize('case_id, K, L, printed', PRINTED_COEFFICIENTS, ids=[row[0] for row in PRINTED_COEFFICIENTS])
def test_printed_coefficients(case_id, K, L, printed):
    expansion = solve(get_case(case_id), K, L)
    for (k, l), text in printed.items():
        assert expansion.coefficient(k, l) == ParamRat.parse(text), (k, l)


@pytest.mark.slow
@pytest.mark.parametrize('case_id, text', [
    ('I.tinf', '-101479/(2654208*q)'),
    ('IV.tinf2', '-1105/576'),
    ('III1.tinf', '9/1024'),
    ('V.tinf2', '-105/64'),
])
def test_printed_second_order_coefficients(case_id, text):
    assert solve(get_case(case_id), 2, 4).coefficient(2, 4) == ParamRat.parse(text)


@pytest.mark.slow
def test_heun_first_exact_column():
    columns = rational_solve(get_case('VI.t0'), 1)
    p1 = ('16*(nu^4 - (th0^2 + th1^2 + 3*tht^2 - thi^2)*nu^2 + (th0^2 - tht^2)*(th1^2 - thi^2))'
          ' + 4*(2*nu^2 + th0^2 + th1^2 + 3*tht^2 - thi^2)*hbar^2 - 3*hbar^4')
    assert columns[1] == ParamRat.parse(f'-({p1})/(8*(4*nu^2 - hbar^2))')


@pytest.mark.slow
def test_heun_first_order_in_lambda():
    expansion = solve(get_case('VI.t0'), 0, 1)
    assert expansion.coefficient(0, 1) == ParamRat.parse(
        '-(nu^4 - (th0^2 + th1^2 + 3*tht^2 - thi^2)*nu^2 + (th0^2 - tht^2)*(th1^2 - thi^2))/(2*nu^2)')
