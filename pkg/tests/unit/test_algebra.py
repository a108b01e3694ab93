"""Test operator algebra module."""

import fractions
import fwreduce
import hypothesis
import hypothesis.strategies as st
import pytest


algebra = fwreduce.algebra
TABLE = fwreduce.reference.standard_table(relation=True)
FREE = fwreduce.reference.standard_table(relation=False)
PROPERTY = hypothesis.settings(max_examples=1000, deadline=None)


def sym(name, table=TABLE):
    """Build a single-symbol expression."""
    return algebra.symbol(table, name)


@st.composite
def words(draw, max_size=4):
    """Draw a word over the standard symbols."""
    names = st.sampled_from(TABLE.names)
    return tuple(draw(st.lists(names, max_size=max_size)))


@st.composite
def expressions(draw, max_terms=3):
    """Draw a small expression over the standard table."""
    items = []
    for _ in range(draw(st.integers(0, max_terms))):
        beta = (draw(st.integers(0, 1)), draw(st.integers(0, 1)))
        word = draw(words(max_size=3))
        c_exp = draw(st.integers(-2, 2))
        real = draw(st.integers(-3, 3))
        imag = draw(st.integers(-3, 3))
        mass = draw(st.sampled_from((1, fwreduce.coeff.M1, fwreduce.coeff.M2)))
        k = fwreduce.coeff.Coefficient(
            fwreduce.coeff.lift(real) * mass,
            fwreduce.coeff.lift(imag),
        )
        items.append(((beta, word, c_exp), k))
    return algebra.Expression.from_terms(TABLE, items)


def test_parity_parse():
    """Test parsing parity sectors."""
    assert algebra.Parity.parse('oe') == algebra.OE
    assert algebra.Parity.parse(('even', 'odd')) == algebra.EO
    assert algebra.Parity.parse(algebra.OO) is algebra.OO
    assert str(algebra.OE) == 'oe'
    for x in ('ox', 'odd', ('odd', 'odd', 'odd'), ('odd', 'x')):
        with pytest.raises(ValueError):
            algebra.Parity.parse(x)


def test_parity_product():
    """Test composing parities."""
    assert algebra.OE * algebra.EO == algebra.OO
    assert algebra.OO * algebra.OO == algebra.EE
    assert TABLE.parity(('OE', 'EO', 'OO')) == algebra.EE


def test_declare_duplicate():
    """Test if declaring a symbol twice raises an error."""
    decl = algebra.SymbolDecl('OE', 'oe', 1)
    with pytest.raises(algebra.DeclarationError):
        algebra.declare_symbol(TABLE, decl)


def test_declare_reserved():
    """Test if reserved or malformed names raise an error."""
    for name in ('c', 'b1', 'm2', 'i', 'H', '1x', 'a b'):
        with pytest.raises(algebra.DeclarationError):
            algebra.SymbolDecl(name, 'ee')


def test_declare_order_type():
    """Test if non-integer orders raise an error."""
    with pytest.raises(algebra.DeclarationError):
        algebra.SymbolDecl('X', 'ee', 0.5)


def test_declare_relation_undeclared():
    """Test if relations between undeclared symbols raise an error."""
    with pytest.raises(algebra.DeclarationError):
        algebra.declare_relation(TABLE, 'OE', 'XY')


def test_declare_relation_self():
    """Test if a symbol commuting with itself leaves the table unchanged."""
    assert algebra.declare_relation(FREE, 'OE', 'OE') == FREE


def test_table_lookup():
    """Test looking up symbols."""
    assert TABLE.names == ('EE', 'OE', 'EO', 'OO')
    assert TABLE['EO'].parity == algebra.EO
    assert TABLE.index('OO') == 3
    assert 'OE' in TABLE
    assert 'XY' not in TABLE
    with pytest.raises(algebra.DeclarationError):
        _ = TABLE['XY']


def test_normal_form_relation():
    """Test reordering commuting symbols into declaration order."""
    assert TABLE.normal_form(('EO', 'OE')) == ('OE', 'EO')
    assert TABLE.normal_form(('EO', 'OO', 'OE')) == ('EO', 'OO', 'OE')
    assert TABLE.normal_form(('EO', 'EO', 'OE', 'EE')) == (
        'OE',
        'EO',
        'EO',
        'EE',
    )
    assert FREE.normal_form(('EO', 'OE')) == ('EO', 'OE')


def test_normal_form_undeclared():
    """Test if normalizing words with undeclared symbols raises an error."""
    with pytest.raises(algebra.DeclarationError):
        TABLE.normal_form(('OE', 'XY'))


def test_beta_squares():
    """Test if the beta matrices square to one and commute."""
    b1 = algebra.beta(TABLE, 1)
    b2 = algebra.beta(TABLE, 2)
    assert b1 * b1 == algebra.one(TABLE)
    assert b1 * b2 == b2 * b1
    with pytest.raises(ValueError):
        algebra.beta(TABLE, 3)


def test_beta_parity():
    """Test moving beta matrices past odd and even symbols."""
    b1 = algebra.beta(TABLE, 1)
    b2 = algebra.beta(TABLE, 2)
    assert sym('OE') * b1 == -(b1 * sym('OE'))
    assert sym('OE') * b2 == b2 * sym('OE')
    assert sym('OO') * b1 * b2 == b1 * b2 * sym('OO')
    assert algebra.anticommutator(b1, sym('OE')) == algebra.zero(TABLE)


def test_commutator_relation():
    """Test if declared relations make commutators vanish."""
    assert algebra.commutator(sym('OE'), sym('EO')) == algebra.zero(TABLE)

    x = algebra.commutator(sym('OE', FREE), sym('EO', FREE))
    assert len(x) == 2


def test_bracket_kind():
    """Test if unknown bracket kinds raise an error."""
    with pytest.raises(algebra.UsageError):
        algebra.bracket('jordan', sym('OE'), sym('EO'))


def test_scalar_arithmetic():
    """Test promoting scalars and powers."""
    x = sym('EE')
    assert x + 0 == x
    assert 2 * x - x == x
    assert x * fractions.Fraction(1, 2) * 2 == x
    assert x**0 == algebra.one(TABLE)
    assert x**2 == x * x
    assert (x - x).terms == {}
    assert not algebra.scalar(TABLE, 0)


def test_mixed_tables():
    """Test if combining expressions over different tables raises."""
    with pytest.raises(algebra.UsageError):
        _ = sym('OE') + sym('OE', FREE)
    with pytest.raises(algebra.UsageError):
        algebra.multiply(sym('OE'), sym('OE', FREE))


def test_effective_order():
    """Test bookkeeping of explicit and intrinsic orders."""
    x = algebra.scalar(TABLE, 1, -2) * sym('OE') * sym('OE')
    assert x.orders() == {0}
    assert (x + algebra.scalar(TABLE, 1, 2)).leading_order() == 2
    assert algebra.zero(TABLE).leading_order() is None


def test_multiply_min_order():
    """Test if truncated products equal truncated full products."""
    a = algebra.scalar(TABLE, 1, -2) * sym('OE') + sym('EE')
    b = algebra.scalar(TABLE, 1, -3) + sym('EO')
    out = algebra.multiply(a, b, min_order=-1)
    assert out == algebra.truncate(a * b, -1)


def test_truncate():
    """Test dropping monomials of low effective order."""
    x = algebra.scalar(TABLE, 1, -5) * sym('OE') + sym('EE')
    assert algebra.truncate(x, -3) == sym('EE')
    assert algebra.truncate(x, -4) == x


def test_project():
    """Test extracting parity sectors."""
    b1 = algebra.beta(TABLE, 1)
    x = sym('EE') + b1 * sym('OE') + sym('OE') * sym('EO')
    assert algebra.project(x, 'ee') == sym('EE')
    assert algebra.project(x, algebra.OE) == b1 * sym('OE')
    assert algebra.project(x, 'oo') == sym('OE') * sym('EO')
    assert algebra.is_zero(algebra.project(x, 'eo'))


def test_adjoint():
    """Test Hermitian adjoints of monomials with beta factors."""
    b1 = algebra.beta(TABLE, 1)
    i = fwreduce.coeff.I
    assert algebra.is_hermitian(b1 * sym('OE') * i)
    assert not algebra.is_hermitian(b1 * sym('OE'))
    assert not algebra.is_hermitian(sym('OE') * i)
    assert algebra.is_hermitian(algebra.anticommutator(sym('OE'), sym('OO')))
    assert algebra.adjoint(sym('EE') * sym('OO')) == sym('OO') * sym('EE')


def test_adjoint_unsupported():
    """Test if adjoints of non-Hermitian symbols raise an error."""
    decl = algebra.SymbolDecl('A', 'ee', hermitian=False)
    table = algebra.declare_symbol(TABLE, decl)
    with pytest.raises(algebra.UnsupportedError):
        algebra.adjoint(algebra.symbol(table, 'A'))


def test_mass_limit():
    """Test the limit of infinite mass."""
    M1, M2 = fwreduce.coeff.M1, fwreduce.coeff.M2
    x = algebra.scalar(TABLE, M1 / (M1 + M2)) * sym('EE')
    x += algebra.scalar(TABLE, 1 / M1) * sym('OE')
    assert algebra.mass_limit(x, 1) == sym('EE')
    y = algebra.scalar(TABLE, 1 / M1) * sym('OE')
    assert algebra.mass_limit(x, 2) == y


def test_mass_limit_divergent():
    """Test if monomials growing with the mass raise an error."""
    x = algebra.scalar(TABLE, fwreduce.coeff.M2) * sym('EE')
    with pytest.raises(algebra.LimitError):
        algebra.mass_limit(x, 2)


def test_rename():
    """Test moving an expression to another table."""
    table = fwreduce.reference.one_body_table()
    x = sym('EE') + algebra.beta(TABLE, 1) * sym('OE')
    out = algebra.rename(x, {'EE': 'E', 'OE': 'O'}, table)
    y = algebra.symbol(table, 'E')
    y += algebra.beta(table, 1) * algebra.symbol(table, 'O')
    assert out == y


def test_rename_mismatch():
    """Test if renaming to a symbol of another parity raises an error."""
    table = fwreduce.reference.one_body_table()
    with pytest.raises(algebra.DeclarationError):
        algebra.rename(sym('EE'), {'EE': 'O'}, table)


def test_json():
    """Test converting an expression to JSON and back."""
    i = fwreduce.coeff.I
    x = algebra.beta(TABLE, 2) * sym('OO') * sym('EO') * i + sym('EE')
    assert algebra.Expression.from_json(x.to_json(), TABLE) == x


def test_json_invalid():
    """Test if reading a non-list raises an error."""
    with pytest.raises(ValueError):
        algebra.Expression.from_json({}, TABLE)


def test_describe():
    """Test describing a term key."""
    key = ((1, 0), ('OE', 'EO'), -2)
    assert algebra.describe(TABLE, key) == 'b1 * c^-2 * OE*EO'


@PROPERTY
@hypothesis.given(expressions(), expressions(), expressions())
def test_associativity(a, b, c):
    """Test if multiplication is associative."""
    assert (a * b) * c == a * (b * c)


@PROPERTY
@hypothesis.given(expressions(), expressions(), expressions())
def test_distributivity(a, b, c):
    """Test if multiplication distributes over addition."""
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c


@PROPERTY
@hypothesis.given(expressions(), expressions())
def test_adjoint_antihomomorphism(a, b):
    """Test if the adjoint reverses products and is an involution."""
    adjoint = algebra.adjoint
    assert adjoint(a * b) == adjoint(b) * adjoint(a)
    assert adjoint(adjoint(a)) == a


@PROPERTY
@hypothesis.given(expressions())
def test_sector_partition(a):
    """Test if the four sectors partition every expression."""
    parts = [algebra.project(a, kind) for kind in ('ee', 'oe', 'eo', 'oo')]
    assert sum(parts, start=algebra.zero(TABLE)) == a
    assert sum(len(x) for x in parts) == len(a)


@PROPERTY
@hypothesis.given(words(max_size=6), st.data())
def test_canonical_confluence(word, data):
    """Test if swapping adjacent commuting symbols keeps the normal form."""
    out = TABLE.normal_form(word)
    assert TABLE.normal_form(out) == out
    assert sorted(out) == sorted(word)

    for _ in range(data.draw(st.integers(0, 4))):
        if len(word) < 2:
            break
        j = data.draw(st.integers(0, len(word) - 2))
        if TABLE.commute(word[j], word[j + 1]):
            word = (*word[:j], word[j + 1], word[j], *word[j + 2:])
    assert TABLE.normal_form(word) == out
