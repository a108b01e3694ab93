"""Published reduced Hamiltonians and generators, and exact diff reports.

Builders write every formula in nested commutator form and let the algebra
expand it, so that transcription errors surface as inconsistencies between
independent formulas rather than hide in hand-expanded monomials.

"""

import dataclasses
import fwreduce as fw
import logging


logger = logging.getLogger(__name__)
TWO_BODY = {'EE': 'ee', 'OE': 'oe', 'EO': 'eo', 'OO': 'oo'}
ONE_BODY = {'E': 'ee', 'O': 'oe'}


class ReferenceTableError(ValueError):
    """Table lacking symbols or relations a reference needs."""


def standard_table(relation=True, oo_order=0):
    """Two-body table declaring EE, OE, EO, OO in this order.

    Parameters
    ----------
    relation : bool, optional
        Declare that OE and EO commute.
    oo_order : int, optional
        Intrinsic c-order of OO.

    Returns
    -------
    SymbolTable
        Table.

    """
    orders = {'EE': 0, 'OE': 1, 'EO': 1, 'OO': oo_order}
    table = fw.algebra.SymbolTable()
    for name, kind in TWO_BODY.items():
        parity = fw.algebra.Parity.parse(kind)
        decl = fw.algebra.SymbolDecl(name, parity, orders[name])
        table = fw.algebra.declare_symbol(table, decl)

    if relation:
        table = fw.algebra.declare_relation(table, 'OE', 'EO')
    return table


def one_body_table():
    """One-body table declaring E and O."""
    table = fw.algebra.SymbolTable()
    for name, kind in ONE_BODY.items():
        parity = fw.algebra.Parity.parse(kind)
        order = 1 if name == 'O' else 0
        decl = fw.algebra.SymbolDecl(name, parity, order)
        table = fw.algebra.declare_symbol(table, decl)
    return table


def generic_hamiltonian(table, /):
    """Rest energies plus one copy of each declared standard symbol.

    Tables declaring 'E' or 'O' yield the one-body Hamiltonian
    `b1 m1 c^2 + E + O`, others the two-body `b1 m1 c^2 + b2 m2 c^2 + EE +
    OE + EO + OO`, skipping undeclared symbols.

    """
    one_body = any(name in table for name in ONE_BODY)
    names = ONE_BODY if one_body else TWO_BODY
    particles = (1,) if one_body else (1, 2)

    out = fw.engine.rest_energy(table, particles=particles)
    for name in names:
        if name in table:
            out += fw.algebra.symbol(table, name)
    return out


def _require(table, kinds, relation=False):
    for name, kind in kinds.items():
        if name not in table:
            raise ReferenceTableError(f'table does not declare "{name}"')
        if table[name].parity != fw.algebra.Parity.parse(kind):
            raise ReferenceTableError(f'symbol "{name}" is not {kind}')

    if relation and not table.commute('OE', 'EO'):
        raise ReferenceTableError('reference requires [OE, EO] = 0')


class _Builder:
    """Shorthand for writing formulas over a table."""

    def __init__(self, table):
        self.table = table
        self.b1 = fw.algebra.beta(table, 1)
        self.b2 = fw.algebra.beta(table, 2)
        self.m1 = fw.coeff.M1
        self.m2 = fw.coeff.M2
        self.i = fw.coeff.I

    def __getattr__(self, name):
        return fw.algebra.symbol(self.table, name)

    def k(self, value, c_exp=0):
        return fw.algebra.scalar(self.table, value, c_exp)

    @staticmethod
    def cm(a, b):
        return fw.algebra.commutator(a, b)

    @staticmethod
    def ac(a, b):
        return fw.algebra.anticommutator(a, b)

    def ad(self, x, n, y):
        for _ in range(n):
            y = self.cm(x, y)
        return y


def _eq3(table, kind):
    _require(table, TWO_BODY)
    x = _Builder(table)
    m1, m2, i = x.m1, x.m2, x.i
    if kind == 'oe':
        return x.k(-i / (2 * m1), -2) * x.b1 * x.OE
    if kind == 'eo':
        return x.k(-i / (2 * m2), -2) * x.b2 * x.EO

    d = 2 * (m1**2 - m2**2)
    bm = x.b1 * x.k(m1 / d) - x.b2 * x.k(m2 / d)
    return x.k(-i, -2) * bm * x.OO


def _eq4(table):
    _require(table, TWO_BODY)
    x = _Builder(table)
    b1, b2, m1, m2, k, cm, ac = x.b1, x.b2, x.m1, x.m2, x.k, x.cm, x.ac
    EE, OE, EO, OO = x.EE, x.OE, x.EO, x.OO
    d = m1**2 - m2**2

    out = {}
    out['a'] = b1 * k(m1, 2) + b2 * k(m2, 2) + EE
    out['b'] = (
        k(1 / (2 * m1), -2) * b1 * OE**2
        + k(1 / (2 * m2), -2) * b2 * EO**2
    )
    out['c'] = (
        k(1 / (8 * m1**2), -4) * cm(OE, cm(EE, OE))
        + k(1 / (8 * m2**2), -4) * cm(EO, cm(EE, EO))
    )
    out['d'] = (
        k(-1 / (8 * m1**3), -6) * b1 * OE**4
        + k(-1 / (8 * m2**3), -6) * b2 * EO**4
    )
    out['e'] = (
        k(1 / (8 * m1 * m2), -4) * b1 * b2
        * (ac(OE, ac(EO, OO)) + ac(EO, ac(OE, OO)))
    )
    out['f'] = (b1 * k(m1 / (2 * d), -2) - b2 * k(m2 / (2 * d), -2)) * OO**2
    out['g'] = (
        (b2 * k(m1) - b1 * k(m2)) * k(1 / (8 * m1 * m2 * d), -6)
        * cm(OE, EO)**2
    )
    out['h'] = (
        (b1 * k(m1) + b2 * k(m2)) * k(-1 / (16 * m1**2 * m2**2), -6)
        * ac(OE**2, EO**2)
    )
    out['i'] = (
        k(1 / (8 * m1 * m2**2), -6) * b1 * EO * OE**2 * EO
        + k(1 / (8 * m1**2 * m2), -6) * b2 * OE * EO**2 * OE
    )
    out['j'] = (
        (b1 * b2 * k(m1**2 + m2**2) - k(2 * m1 * m2))
        * k(1 / (8 * m1 * m2 * d), -4)
        * cm(cm(EO, OE), OO)
    )
    return out


def _eq6(table):
    _require(table, TWO_BODY, relation=True)
    x = _Builder(table)
    b1, b2, m1, m2, k, cm, ac = x.b1, x.b2, x.m1, x.m2, x.k, x.cm, x.ac
    EE, OE, EO, OO = x.EE, x.OE, x.EO, x.OO
    d = m1**2 - m2**2
    bm = b1 * k(m1) - b2 * k(m2)
    second = _eq4(table)

    out = {}
    out['a'] = (
        second['a'] + second['b'] + second['f'] + second['c']
        + k(1 / (4 * m1 * m2), -4) * b1 * b2 * ac(OE, ac(EO, OO))
        + second['d']
    )
    out['b'] = (
        k(-1 / (8 * m1**3), -6) * b1 * cm(OE, EE)**2
        + k(-1 / (8 * m2**3), -6) * b2 * cm(EO, EE)**2
    )
    out['c'] = (
        k(1 / (8 * m1 * m2**2), -6) * b1 * ac(EO, OO)**2
        + k(1 / (8 * m1**2 * m2), -6) * b2 * ac(OE, OO)**2
    )
    out['d'] = (
        k(-1 / (16 * m1**2 * d), -6) * bm * ac(OO, ac(OE, ac(OE, OO)))
        + k(-1 / (16 * m1 * d**2), -6) * b1 * bm**2 * ac(OO, ac(OO, OE**2))
        + k(-1 / (16 * m2**2 * d), -6) * bm * ac(OO, ac(EO, ac(EO, OO)))
        + k(-1 / (16 * m2 * d**2), -6) * b2 * bm**2 * ac(OO, ac(OO, EO**2))
    )
    out['e'] = (
        (b1 * k(m2) - b2 * k(m1)) * k(-1 / (8 * m1 * m2 * d), -6)
        * ac(OO, cm(OE, cm(EO, EE)))
        + k(1 / (8 * m1 * m2**2), -6) * b1 * cm(cm(EO, EE), ac(OE, OO))
        + k(1 / (8 * m1**2 * m2), -6) * b2 * cm(cm(OE, EE), ac(EO, OO))
    )
    out['f'] = k(1 / (8 * d**2), -4) * bm**2 * cm(OO, cm(EE, OO))
    out['g'] = (
        k(1 / (384 * m1**4), -8)
        * (x.ad(OE, 4, EE) + 32 * cm(OE**3, cm(OE, EE)))
        + k(1 / (384 * m2**4), -8)
        * (x.ad(EO, 4, EE) + 32 * cm(EO**3, cm(EO, EE)))
    )
    out['h'] = (
        k(1 / (64 * m1**2 * m2**2), -8)
        * cm(OE, cm(OE, cm(EO, cm(EO, EE))))
    )
    out['i'] = (
        k(-1 / (96 * m1**3 * m2), -8) * b1 * b2
        * (ac(OE, ac(OE, ac(OE, ac(EO, OO)))) + 8 * ac(OE**3, ac(EO, OO)))
        + k(-1 / (96 * m1 * m2**3), -8) * b1 * b2
        * (ac(OE, ac(EO, ac(EO, ac(EO, OO)))) + 8 * ac(OE, ac(EO**3, OO)))
    )
    out['j'] = (
        k(1 / (16 * m1**5), -10) * b1 * OE**6
        + k(1 / (16 * m2**5), -10) * b2 * EO**6
    )
    return out


def _eq7(table):
    _require(table, ONE_BODY)
    x = _Builder(table)
    b1, m, k, cm = x.b1, x.m1, x.k, x.cm
    E, O = x.E, x.O

    out = {}
    out['a'] = b1 * k(m, 2) + E + k(1 / (2 * m), -2) * b1 * O**2
    out['b'] = k(1 / (8 * m**2), -4) * cm(O, cm(E, O))
    out['c'] = (
        k(-1 / (8 * m**3), -6) * b1 * O**4
        + k(-1 / (8 * m**3), -6) * b1 * cm(O, E)**2
    )
    out['d'] = (
        k(1 / (384 * m**4), -8) * x.ad(O, 4, E)
        + k(1 / (12 * m**4), -8) * cm(O**3, cm(O, E))
    )
    out['e'] = k(1 / (16 * m**5), -10) * b1 * O**6
    return out


def _eq8(table):
    _require(table, TWO_BODY, relation=True)
    x = _Builder(table)
    b1, b2, m1, m2, k, cm = x.b1, x.b2, x.m1, x.m2, x.k, x.cm
    EE, OE, EO, OO = x.EE, x.OE, x.EO, x.OO
    d = m1**2 - m2**2
    bb = b1 * b2
    u = cm(OE * EO, OO)
    v = EO * OO * OE - OE * OO * EO

    out = {}
    out['a'] = (
        (b1 * k(m2) - b2 * k(m1)) * k(1 / (8 * m1 * m2 * d), -6) * cm(u, EE)
        + (b1 * k(m2) + b2 * k(m1)) * k(1 / (8 * m1 * m2 * d), -6)
        * cm(v, EE)
    )
    out['b'] = (
        (k(m2) - bb * k(m1)) * k(1 / (16 * m1**2 * m2 * d), -8)
        * cm(u, OE**2)
        + (bb * k(m2) - k(m1)) * k(1 / (16 * m1 * m2**2 * d), -8)
        * cm(u, EO**2)
    )
    out['c'] = (
        (k(m2) + bb * k(m1)) * k(1 / (16 * m1**2 * m2 * d), -8)
        * cm(v, OE**2)
        + (bb * k(m2) + k(m1)) * k(1 / (16 * m1 * m2**2 * d), -8)
        * cm(v, EO**2)
    )
    return out


def _eq9(table):
    _require(table, TWO_BODY, relation=True)
    x = _Builder(table)
    b1, b2, m1, m2, k, i = x.b1, x.b2, x.m1, x.m2, x.k, x.i
    OE, EO, OO = x.OE, x.EO, x.OO
    f = -i / (8 * m1 * m2 * (m1**2 - m2**2))

    out = {}
    out['a'] = (b1 * k(m2) - b2 * k(m1)) * k(f, -6) * x.cm(OO, OE * EO)
    out['b'] = (
        (b1 * k(m2) + b2 * k(m1)) * k(f, -6)
        * (OE * OO * EO - EO * OO * OE)
    )
    return out


def _eq26(table):
    _require(table, TWO_BODY)
    x = _Builder(table)
    b1, b2, m1, m2, k = x.b1, x.b2, x.m1, x.m2, x.k
    inner = k(1 / m1**3) * b1 * x.OE**2 + k(1 / m2**3) * b2 * x.EO**2
    return {'a': k(-x.i / 16, -6) * x.cm(inner, x.EE)}


def _eq29(table, particle):
    _require(table, TWO_BODY)
    x = _Builder(table)
    m1, m2, k, i = x.m1, x.m2, x.k, x.i
    OE, EO, OO = x.OE, x.EO, x.OO
    if particle == 1:
        return {
            'a': k(-i / (16 * m1 * m2**2), -6) * x.b1
            * x.cm(x.ac(OE, OO), EO)
        }
    return {
        'b': k(-i / (16 * m1**2 * m2), -6) * x.b2
        * x.cm(x.ac(EO, OO), OE)
    }


BUILDERS = {
    'eq3_oe': lambda t: {'a': _eq3(t, 'oe')},
    'eq3_eo': lambda t: {'a': _eq3(t, 'eo')},
    'eq3_oo': lambda t: {'a': _eq3(t, 'oo')},
    'eq4': _eq4,
    'eq6': _eq6,
    'eq7': _eq7,
    'eq8': _eq8,
    'eq9': _eq9,
    'eq26': _eq26,
    'eq29a': lambda t: _eq29(t, 1),
    'eq29b': lambda t: _eq29(t, 2),
}
IDS = tuple(BUILDERS)


def default_table(id, /):
    """Table a reference is built over by default."""
    if id not in BUILDERS:
        raise ReferenceTableError(f'unknown reference "{id}"')
    return one_body_table() if id == 'eq7' else standard_table()


def reference_parts(id, table=None, /):
    """Build the labeled parts of a reference expression.

    Parameters
    ----------
    id : str
        Reference identifier from `IDS`.
    table : SymbolTable, optional
        Table declaring the symbols with the standard parities. Defaults to
        `default_table(id)`.

    Returns
    -------
    dict
        Part labels 'a', 'b', ... mapping to expanded expressions.

    Raises
    ------
    ReferenceTableError
        If the identifier is unknown or the table lacks what the reference
        needs. Identifiers 'eq6', 'eq8', 'eq9' require `[OE, EO] = 0`.

    """
    if table is None:
        table = default_table(id)
    if id not in BUILDERS:
        raise ReferenceTableError(f'unknown reference "{id}"')

    logger.debug('building reference %s', id)
    return BUILDERS[id](table)


def reference_expression(id, table=None, /):
    """Build a reference expression, the sum of its parts."""
    out, *rest = reference_parts(id, table).values()
    for x in rest:
        out += x
    return out


@dataclasses.dataclass(frozen=True)
class DiffReport:
    """Classification of the monomials of `candidate - reference`.

    Attributes
    ----------
    missing : Expression
        Terms of the reference with a key absent from the candidate.
    extra : Expression
        Terms of the candidate with a key absent from the reference.
    mismatches : tuple
        Triples of key, candidate and reference coefficient for keys
        present in both with different coefficients.

    """

    missing: fw.algebra.Expression
    extra: fw.algebra.Expression
    mismatches: tuple = ()

    @property
    def is_empty(self):
        """Whether candidate and reference are equal."""
        return not self.missing and not self.extra and not self.mismatches

    def difference(self):
        """Reconstruct `candidate - reference`."""
        out = {key: a - b for key, a, b in self.mismatches}
        diff = fw.algebra.Expression(self.extra.table, out)
        return self.extra - self.missing + diff


def diff_report(candidate, reference, /):
    """Compare a candidate expression with a reference monomial by monomial.

    Parameters
    ----------
    candidate, reference : Expression
        Expressions over the same table.

    Returns
    -------
    DiffReport
        Report, empty if and only if the expressions are equal.

    """
    table = candidate.table
    if fw.algebra.equals(candidate, reference):
        empty = fw.algebra.zero(table)
        return DiffReport(empty, empty)

    a, b = candidate.terms, reference.terms
    missing = {key: k for key, k in b.items() if key not in a}
    extra = {key: k for key, k in a.items() if key not in b}
    mismatches = tuple(
        (key, a[key], b[key])
        for key in sorted(a.keys() & b.keys(), key=candidate.sort_key)
        if a[key] != b[key]
    )

    logger.info(
        'diff has %d missing, %d extra, %d mismatched terms',
        len(missing),
        len(extra),
        len(mismatches),
    )
    return DiffReport(
        fw.algebra.Expression(table, missing),
        fw.algebra.Expression(table, extra),
        mismatches,
    )
