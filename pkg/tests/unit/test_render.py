"""Test rendering module."""

import fwreduce
import json
import pytest


algebra = fwreduce.algebra
render = fwreduce.render.render
TABLE = fwreduce.reference.standard_table()


def sym(name):
    """Build a single-symbol expression."""
    return algebra.symbol(TABLE, name)


def test_text_symbols():
    """Test rendering single symbols and signs."""
    assert render(sym('OE')) == 'OE'
    assert render(-sym('OE')) == '-OE'
    assert render(algebra.zero(TABLE)) == '0'
    assert render(algebra.one(TABLE)) == '1'
    assert str(sym('EE')) == 'EE'


def test_text_order():
    """Test if terms appear by decreasing effective order."""
    assert render(sym('EE') + sym('OE')) == 'OE + EE'
    assert render(sym('EE') - sym('OE')) == '-OE + EE'
    assert render(sym('OE') - sym('EE')) == 'OE - EE'


def test_text_factors():
    """Test rendering coefficients, betas, c-powers, and words."""
    x = fwreduce.engine.rest_energy(TABLE, particles=(1,))
    assert render(x) == 'b1 * m1 * c^2'

    m1 = fwreduce.coeff.M1
    x = algebra.scalar(TABLE, 1 / (2 * m1), -2) * sym('OE') * sym('EE')
    assert render(x) == '(1/2) * m1^-1 * c^-2 * OE*EE'

    x = algebra.beta(TABLE, 1) * algebra.beta(TABLE, 2) * sym('OO') * 3
    assert render(x) == '3 * b1 * b2 * OO'
    assert render(sym('OO') * fwreduce.coeff.I) == 'i * OO'


def test_text_mass_powers():
    """Test rendering monomial coefficients as mass powers."""
    m1, m2 = fwreduce.coeff.M1, fwreduce.coeff.M2
    b1 = algebra.beta(TABLE, 1)
    x = algebra.scalar(TABLE, 1 / (2 * m1), -2) * b1 * sym('OE') ** 2
    assert render(x) == '(1/2) * b1 * m1^-1 * c^-2 * OE*OE'

    x = algebra.scalar(TABLE, -1 / (8 * m1**3), -6) * b1 * sym('OE') ** 4
    assert render(x) == '-(1/8) * b1 * m1^-3 * c^-6 * OE*OE*OE*OE'

    x = algebra.scalar(TABLE, 3 * m2**2 / m1, 0) * sym('EE')
    assert render(x) == '3 * m1^-1 * m2^2 * EE'

    x = fwreduce.reference.reference_expression('eq3_oe')
    assert render(x) == '-(1/2) * i * b1 * m1^-1 * c^-2 * OE'


def test_text_sum_coefficient():
    """Test parenthesizing sums in coefficients."""
    m1, m2 = fwreduce.coeff.M1, fwreduce.coeff.M2
    x = algebra.scalar(TABLE, m1 + m2) * sym('EE')
    assert render(x) == '(m1 + m2) * EE'


def test_latex():
    """Test rendering LaTeX."""
    x = algebra.beta(TABLE, 1) * sym('OE')
    assert render(x, 'latex') == r'\beta_1 \mathcal{OE}'

    x = algebra.scalar(TABLE, 1, -2) * sym('EE')
    assert render(x, 'latex') == r'c^{-2} \mathcal{EE}'
    assert render(algebra.zero(TABLE), 'latex') == '0'


def test_json():
    """Test rendering JSON."""
    x = fwreduce.reference.reference_expression('eq4')
    y = algebra.Expression.from_json(json.loads(render(x, 'json')), TABLE)
    assert y == x


def test_unknown_format():
    """Test if unknown formats raise an error."""
    with pytest.raises(ValueError):
        render(sym('EE'), 'html')


def test_diff_report():
    """Test rendering difference reports."""
    report = fwreduce.reference.diff_report(sym('EE'), sym('EE'))
    assert render(report) == 'no differences'

    x = 2 * sym('EE') + sym('OO')
    report = fwreduce.reference.diff_report(x, sym('EE') + sym('OE'))
    lines = render(report).splitlines()
    assert lines[0] == 'missing: OE'
    assert lines[1] == 'extra: OO'
    assert lines[2].startswith('mismatch ')
    assert len(lines) == 3


def test_diff_report_json():
    """Test rendering difference reports as JSON."""
    x = 2 * sym('EE') + sym('OO')
    report = fwreduce.reference.diff_report(x, sym('EE') + sym('OE'))
    d = json.loads(render(report, 'json'))
    assert set(d) == {'missing', 'extra', 'mismatches'}
    assert len(d['mismatches']) == 1
