"""Test reference expression module."""

import fwreduce
import pytest


algebra = fwreduce.algebra
reference = fwreduce.reference


def test_standard_table():
    """Test symbols, orders, and relations of the standard table."""
    table = reference.standard_table(oo_order=-2)
    assert table.names == ('EE', 'OE', 'EO', 'OO')
    assert [s.c_order for s in table.symbols] == [0, 1, 1, -2]
    assert table.commute('OE', 'EO')
    assert not reference.standard_table(relation=False).commute('OE', 'EO')


def test_generic_hamiltonian():
    """Test the generic one-body Hamiltonian."""
    table = reference.one_body_table()
    H = reference.generic_hamiltonian(table)
    y = fwreduce.engine.rest_energy(table, particles=(1,))
    y += algebra.symbol(table, 'E') + algebra.symbol(table, 'O')
    assert H == y


def test_references_hermitian():
    """Test if every reference expression is Hermitian."""
    for id in reference.IDS:
        x = reference.reference_expression(id)
        assert x
        assert algebra.is_hermitian(x)


def test_reference_parts_sum():
    """Test if references are the sums of their labeled parts."""
    parts = reference.reference_parts('eq4')
    assert tuple(parts) == tuple('abcdefghij')

    out = algebra.zero(reference.standard_table())
    for x in parts.values():
        out += x
    assert out == reference.reference_expression('eq4')


def test_relation_removes_part():
    """Test if the commuting relation removes the double commutator."""
    parts = reference.reference_parts('eq4', reference.standard_table())
    assert not parts['j']

    table = reference.standard_table(relation=False)
    assert reference.reference_parts('eq4', table)['j']


def test_extra_terms_order():
    """Test if extra terms and cleanup generator have order -4."""
    assert reference.reference_expression('eq8').orders() == {-4}
    assert reference.reference_expression('eq9').orders() == {-4}


def test_generators_order():
    """Test if first-round generators have the expected orders."""
    orders = {'eq3_oe': {-1}, 'eq3_eo': {-1}, 'eq3_oo': {-2}}
    for id, y in orders.items():
        assert reference.reference_expression(id).orders() == y


def test_reference_requires_relation():
    """Test if references assuming the relation reject other tables."""
    table = reference.standard_table(relation=False)
    for id in ('eq6', 'eq8', 'eq9'):
        with pytest.raises(reference.ReferenceTableError):
            reference.reference_expression(id, table)


def test_reference_wrong_table():
    """Test if references reject tables without their symbols."""
    with pytest.raises(reference.ReferenceTableError):
        reference.reference_expression('eq7', reference.standard_table())
    with pytest.raises(reference.ReferenceTableError):
        reference.reference_expression('eq4', reference.one_body_table())


def test_reference_unknown():
    """Test if unknown identifiers raise an error."""
    with pytest.raises(reference.ReferenceTableError):
        reference.reference_expression('eq5')
    with pytest.raises(reference.ReferenceTableError):
        reference.reference_parts('eq5', reference.standard_table())


def test_diff_report_empty():
    """Test comparing equal expressions."""
    x = reference.reference_expression('eq6')
    report = reference.diff_report(x, x)
    assert report.is_empty
    assert not report.difference()


def test_diff_report_difference():
    """Test reconstructing the difference from a report."""
    eq6 = reference.reference_expression('eq6')
    eq8 = reference.reference_expression('eq8')
    report = reference.diff_report(eq6 + eq8, eq6)
    assert not report.is_empty
    assert report.difference() == eq8


def test_diff_report_classes():
    """Test classifying missing, extra, and mismatched monomials."""
    table = reference.standard_table()
    EE, OE = algebra.symbol(table, 'EE'), algebra.symbol(table, 'OE')
    OO = algebra.symbol(table, 'OO')
    report = reference.diff_report(2 * EE + OO, EE + OE)
    assert report.missing == OE
    assert report.extra == OO
    assert len(report.mismatches) == 1

    key, a, b = report.mismatches[0]
    assert key == ((0, 0), ('EE',), 0)
    assert a - b == fwreduce.coeff.ONE
