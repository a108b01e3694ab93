"""Graded noncommutative algebra of two-particle operator expressions.

An expression is a finite sum of monomials `k * b1^e1 * b2^e2 * c^n * X...Y`,
where `k` is an exact complex coefficient rational in the masses, the Dirac
matrices `b1`, `b2` stand to the left of the word with `b1^2 = b2^2 = 1`, and
the word `X...Y` is a product of declared operator symbols in the
lexicographic normal form that the declared commuting pairs induce.

"""

import dataclasses
import fwreduce as fw
import logging


logger = logging.getLogger(__name__)
RESERVED = frozenset(('H', 'acomm', 'b1', 'b2', 'c', 'comm', 'i', 'm1', 'm2'))
PARITIES = ('even', 'odd')


class DeclarationError(ValueError):
    """Invalid, duplicate, or missing symbol declaration."""


class UsageError(ValueError):
    """Operation applied to incompatible operands."""


class UnsupportedError(ValueError):
    """Operation outside the supported subset of the algebra."""


class LimitError(ArithmeticError):
    """Divergent monomial in a mass limit."""


@dataclasses.dataclass(frozen=True, slots=True)
class Parity:
    """Pair of parities with respect to the Dirac matrices b1 and b2.

    Zero means even (commuting with that particle's beta matrix) and one
    means odd (anticommuting). Products compose componentwise by XOR.

    """

    p1: int = 0
    p2: int = 0

    def __post_init__(self):
        if self.p1 not in (0, 1) or self.p2 not in (0, 1):
            raise ValueError(f'parity ({self.p1}, {self.p2}) not in {{0, 1}}')

    def __mul__(self, other):
        if not isinstance(other, Parity):
            return NotImplemented
        return Parity(self.p1 ^ other.p1, self.p2 ^ other.p2)

    def __str__(self):
        return 'eo'[self.p1] + 'eo'[self.p2]

    @classmethod
    def parse(cls, kind, /):
        """Build a parity from a sector name like 'oe' or a word pair.

        Parameters
        ----------
        kind : str or tuple of str
            Two-letter sector name, first letter for particle 1, or a pair
            of words from `PARITIES`, such as `('odd', 'even')`.

        Returns
        -------
        Parity
            Parity.

        """
        if isinstance(kind, Parity):
            return kind
        if isinstance(kind, str) and len(kind) == 2 and set(kind) <= set('eo'):
            return cls('eo'.index(kind[0]), 'eo'.index(kind[1]))
        if not isinstance(kind, str) and len(kind) == 2:
            if all(x in PARITIES for x in kind):
                return cls(*(PARITIES.index(x) for x in kind))

        raise ValueError(f'"{kind}" does not name a parity sector')


EE = Parity(0, 0)
OE = Parity(1, 0)
EO = Parity(0, 1)
OO = Parity(1, 1)


@dataclasses.dataclass(frozen=True, slots=True)
class SymbolDecl:
    """Abstract operator symbol.

    Parameters
    ----------
    name : str
        Identifier.
    parity : Parity
        Behavior under conjugation with b1 and b2.
    c_order : int, optional
        Intrinsic power of the speed of light the symbol carries.
    hermitian : bool, optional
        Whether the symbol is self-adjoint.

    """

    name: str
    parity: Parity
    c_order: int = 0
    hermitian: bool = True

    def __post_init__(self):
        if not self.name.isidentifier() or self.name in RESERVED:
            raise DeclarationError(f'"{self.name}" is not a valid symbol name')
        if not isinstance(self.c_order, int):
            raise DeclarationError(f'order {self.c_order} is not an integer')
        object.__setattr__(self, 'parity', Parity.parse(self.parity))


@dataclasses.dataclass(frozen=True)
class SymbolTable:
    """Ordered symbol declarations and pairwise commutation relations.

    Declaration order defines the total order used for canonical words.
    Tables are immutable: `declare_symbol` and `declare_relation` return new
    tables. The instance keeps caches of derived word properties.

    """

    symbols: tuple = ()
    relations: frozenset = frozenset()
    _cache: dict = dataclasses.field(
        default_factory=dict,
        init=False,
        compare=False,
        repr=False,
    )

    @property
    def names(self):
        """Symbol names in declaration order."""
        return tuple(s.name for s in self.symbols)

    def __contains__(self, name):
        return name in self._lookup()

    def __getitem__(self, name):
        try:
            return self.symbols[self._lookup()[name]]
        except KeyError:
            raise DeclarationError(f'undeclared symbol "{name}"') from None

    def _lookup(self):
        if 'index' not in self._cache:
            names = (s.name for s in self.symbols)
            self._cache['index'] = {x: i for i, x in enumerate(names)}
        return self._cache['index']

    def check(self, *names):
        """Raise `DeclarationError` unless every name is declared."""
        for name in names:
            if name not in self:
                raise DeclarationError(f'undeclared symbol "{name}"')

    def index(self, name):
        """Position of a symbol in the declaration order."""
        self.check(name)
        return self._lookup()[name]

    def commute(self, a, b):
        """Whether two symbols are declared to commute."""
        return a == b or frozenset((a, b)) in self.relations

    def parity(self, word):
        """Parity of a word, the composition of its symbol parities."""
        cache = self._cache.setdefault('parity', {})
        if word not in cache:
            out = EE
            for name in word:
                out = out * self[name].parity
            cache[word] = out
        return cache[word]

    def order(self, word):
        """Sum of the intrinsic c-orders of the symbols in a word."""
        cache = self._cache.setdefault('order', {})
        if word not in cache:
            cache[word] = sum(self[name].c_order for name in word)
        return cache[word]

    def normal_form(self, word):
        """Canonical representative of a word modulo the relations.

        Repeatedly extracts the earliest-declared symbol that commutes with
        every symbol before it, which yields the lexicographically smallest
        word of the trace monoid the relations induce.

        Parameters
        ----------
        word : tuple of str
            Symbol names.

        Returns
        -------
        tuple of str
            Canonical word.

        """
        cache = self._cache.setdefault('normal', {})
        if word in cache:
            return cache[word]

        index = self._lookup()
        for name in word:
            if name not in index:
                raise DeclarationError(f'undeclared symbol "{name}"')

        rest = list(word)
        out = []
        while rest:
            best = 0
            for j in range(1, len(rest)):
                x = rest[j]
                if index[x] >= index[rest[best]]:
                    continue
                if all(self.commute(y, x) for y in rest[:j]):
                    best = j
            out.append(rest.pop(best))

        cache[word] = out = tuple(out)
        return out


def declare_symbol(table, decl, /):
    """Add a symbol to a table.

    Parameters
    ----------
    table : SymbolTable
        Existing table.
    decl : SymbolDecl
        New symbol, which takes the next position in the canonical order.

    Returns
    -------
    SymbolTable
        New table.

    Raises
    ------
    DeclarationError
        If the name is already declared.

    """
    if decl.name in table:
        raise DeclarationError(f'symbol "{decl.name}" already declared')

    logger.debug('declaring symbol %s', decl)
    return dataclasses.replace(table, symbols=(*table.symbols, decl))


def declare_relation(table, a, b, /):
    """Declare that two symbols commute.

    Parameters
    ----------
    table : SymbolTable
        Existing table.
    a, b : str
        Declared symbol names.

    Returns
    -------
    SymbolTable
        New table.

    """
    table.check(a, b)
    if a == b:
        return table

    logger.debug('declaring relation [%s, %s] = 0', a, b)
    pair = frozenset((a, b))
    return dataclasses.replace(table, relations=table.relations | {pair})


def _accumulate(out, key, k):
    out[key] = out[key] + k if key in out else k


def _prune(out):
    return {key: k for key, k in out.items() if k}


class Expression:
    """Canonical sum of monomials over a symbol table.

    Terms map keys `(beta, word, c_exp)` to nonzero `Coefficient` values.
    Expressions compare structurally and support `+`, `-`, `*` and
    non-negative integer powers, with scalars promoted on the fly. Treat
    instances as immutable.

    """

    __slots__ = ('table', 'terms')

    def __init__(self, table, terms=None):
        self.table = table
        self.terms = {} if terms is None else terms

    @classmethod
    def from_terms(cls, table, items, /):
        """Build an expression from possibly non-canonical terms.

        Parameters
        ----------
        table : SymbolTable
            Symbol table.
        items : iterable
            Pairs of keys `(beta, word, c_exp)` and coefficients.

        Returns
        -------
        Expression
            Canonical expression.

        """
        out = {}
        for (beta, word, c_exp), k in items:
            beta = tuple(int(x) % 2 for x in beta)
            if len(beta) != 2:
                raise UsageError(f'beta exponents {beta} are not a pair')
            key = (beta, table.normal_form(tuple(word)), int(c_exp))
            _accumulate(out, key, fw.coeff.Coefficient.of(k))

        return cls(table, _prune(out))

    def _promote(self, x):
        if isinstance(x, Expression):
            _common(self, x)
            return x
        try:
            return scalar(self.table, x)
        except TypeError:
            return None

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Expression):
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    __hash__ = None

    def __neg__(self):
        return Expression(self.table, {k: -v for k, v in self.terms.items()})

    def __add__(self, other):
        other = self._promote(other)
        if other is None:
            return NotImplemented

        out = dict(self.terms)
        for key, k in other.terms.items():
            _accumulate(out, key, k)
        return Expression(self.table, _prune(out))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._promote(other)
        if other is None:
            return NotImplemented
        return self + -other

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        if isinstance(other, Expression):
            return multiply(self, other)
        try:
            k = fw.coeff.Coefficient.of(other)
        except TypeError:
            return NotImplemented

        out = {key: v * k for key, v in self.terms.items()} if k else {}
        return Expression(self.table, out)

    def __rmul__(self, other):
        # Scalars commute with everything.
        return self * other

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented

        out = one(self.table)
        for _ in range(n):
            out = multiply(out, self)
        return out

    def __repr__(self):
        return f'Expression({len(self)} terms over {self.table.names})'

    def __str__(self):
        return fw.render.render(self, 'text')

    def order(self, key, /):
        """Effective order of a term key: explicit plus intrinsic c-power."""
        return key[2] + self.table.order(key[1])

    def orders(self):
        """Set of effective orders present."""
        return {self.order(key) for key in self.terms}

    def leading_order(self):
        """Highest effective order present, or None if zero."""
        return max(self.orders(), default=None)

    def symbols(self):
        """Set of symbol names appearing in any word."""
        return {name for _, word, _ in self.terms for name in word}

    def sort_key(self, key, /):
        """Key sorting terms by beta, declaration-ordered word, c-power."""
        beta, word, c_exp = key
        return beta, tuple(map(self.table.index, word)), c_exp

    def to_json(self):
        """Convert to a list of JSON-compatible term dictionaries."""
        return [
            {
                'beta': list(key[0]),
                'word': list(key[1]),
                'c_exp': key[2],
                'coeff': self.terms[key].to_json(),
            }
            for key in sorted(self.terms, key=self.sort_key)
        ]

    @classmethod
    def from_json(cls, data, table, /):
        """Build an expression from its JSON term list.

        Parameters
        ----------
        data : list of dict
            Terms, as `to_json` creates.
        table : SymbolTable
            Table declaring every symbol the terms use.

        Returns
        -------
        Expression
            Expression.

        """
        if not isinstance(data, list):
            raise ValueError(f'expression data {data!r} is not a list')

        items = []
        for t in data:
            key = (tuple(t['beta']), tuple(t['word']), t['c_exp'])
            items.append((key, fw.coeff.Coefficient.from_json(t['coeff'])))
        return cls.from_terms(table, items)


def zero(table, /):
    """Zero expression."""
    return Expression(table)


def scalar(table, value, /, c_exp=0):
    """Expression `value * c^c_exp` with an empty word.

    Parameters
    ----------
    table : SymbolTable
        Symbol table.
    value : Coefficient or int or fractions.Fraction or FracElement
        Coefficient.
    c_exp : int, optional
        Power of the speed of light.

    Returns
    -------
    Expression
        Scalar expression.

    """
    k = fw.coeff.Coefficient.of(value)
    if not k:
        return zero(table)
    return Expression(table, {((0, 0), (), c_exp): k})


def one(table, /):
    """Identity expression."""
    return scalar(table, 1)


def symbol(table, name, /):
    """Expression consisting of a single declared symbol."""
    table.check(name)
    return Expression(table, {((0, 0), (name,), 0): fw.coeff.ONE})


def beta(table, particle, /):
    """Dirac matrix b1 or b2 as an expression."""
    if particle not in (1, 2):
        raise ValueError(f'particle {particle} is not 1 or 2')
    key = ((1, 0) if particle == 1 else (0, 1), (), 0)
    return Expression(table, {key: fw.coeff.ONE})


def _common(a, b):
    if a.table is not b.table and a.table != b.table:
        raise UsageError('expressions belong to different symbol tables')
    return a.table


def multiply(a, b, /, min_order=None):
    """Multiply two expressions into canonical form.

    Moving `b1` or `b2` left past a word flips the sign if the word is odd in
    that particle. Words concatenate and return to normal form.

    Parameters
    ----------
    a, b : Expression
        Factors over the same table.
    min_order : int, optional
        Skip products of effective order below this value. The effective
        order is additive, so the result equals `truncate(a * b, min_order)`.

    Returns
    -------
    Expression
        Product.

    Raises
    ------
    UsageError
        If the symbol tables differ.

    """
    table = _common(a, b)
    right = [(key, k, b.order(key)) for key, k in b.terms.items()]

    out = {}
    for (ba, wa, ea), ka in a.terms.items():
        oa = ea + table.order(wa)
        pa = table.parity(wa)
        for (bb, wb, eb), kb, ob in right:
            if min_order is not None and oa + ob < min_order:
                continue

            k = ka * kb
            if (bb[0] & pa.p1) ^ (bb[1] & pa.p2):
                k = -k

            beta = (ba[0] ^ bb[0], ba[1] ^ bb[1])
            key = (beta, table.normal_form(wa + wb), ea + eb)
            _accumulate(out, key, k)

    return Expression(table, _prune(out))


def bracket(kind, a, b, /, min_order=None):
    """Compute a commutator or anticommutator.

    Parameters
    ----------
    kind : {'commutator', 'anticommutator'}
        Bracket type.
    a, b : Expression
        Operands over the same table.
    min_order : int, optional
        Truncation order, see `multiply`.

    Returns
    -------
    Expression
        `ab - ba` or `ab + ba`.

    """
    if kind not in ('commutator', 'anticommutator'):
        raise UsageError(f'unknown bracket kind "{kind}"')

    ab = multiply(a, b, min_order)
    ba = multiply(b, a, min_order)
    return ab - ba if kind == 'commutator' else ab + ba


def commutator(a, b, /, min_order=None):
    """Compute `[a, b] = ab - ba`."""
    return bracket('commutator', a, b, min_order)


def anticommutator(a, b, /, min_order=None):
    """Compute `{a, b} = ab + ba`."""
    return bracket('anticommutator', a, b, min_order)


def adjoint(a, /):
    """Compute the Hermitian adjoint.

    Reverses words, conjugates coefficients, and moves the beta factors back
    to the left, which flips the sign for words odd in that particle.

    Parameters
    ----------
    a : Expression
        Expression over Hermitian symbols.

    Returns
    -------
    Expression
        Adjoint.

    Raises
    ------
    UnsupportedError
        If the expression contains a non-Hermitian symbol.

    """
    table = a.table
    for name in a.symbols():
        if not table[name].hermitian:
            raise UnsupportedError(f'adjoint of non-Hermitian symbol "{name}"')

    out = {}
    for (beta, word, c_exp), k in a.terms.items():
        p = table.parity(word)
        k = k.conjugate()
        if (beta[0] & p.p1) ^ (beta[1] & p.p2):
            k = -k
        key = (beta, table.normal_form(word[::-1]), c_exp)
        _accumulate(out, key, k)

    return Expression(table, _prune(out))


def is_hermitian(a, /):
    """Whether an expression equals its adjoint."""
    return adjoint(a) == a


def project(a, sector, /):
    """Keep the monomials whose word parity matches a sector.

    Parameters
    ----------
    a : Expression
        Expression.
    sector : Parity or str
        Target parity, or its name like 'oe'.

    Returns
    -------
    Expression
        Sector component.

    """
    sector = Parity.parse(sector)
    parity = a.table.parity
    out = {key: k for key, k in a.terms.items() if parity(key[1]) == sector}
    return Expression(a.table, out)


def truncate(a, min_order, /):
    """Drop every monomial of effective order below `min_order`."""
    out = {key: k for key, k in a.terms.items() if a.order(key) >= min_order}
    return Expression(a.table, out)


def is_zero(a, /):
    """Whether an expression has no terms."""
    return not a.terms


def equals(a, b, /):
    """Whether two expressions over the same table are equal."""
    _common(a, b)
    return a.terms == b.terms


def describe(table, key, /):
    """Short human-readable form of a term key for messages."""
    beta, word, c_exp = key
    parts = [f'b{i + 1}' for i, e in enumerate(beta) if e]
    parts.append(f'c^{c_exp}')
    parts.append('*'.join(word) or '1')
    return ' * '.join(parts)


def mass_limit(a, particle, /):
    """Take the limit of infinite mass for one particle.

    Monomials whose coefficient decays with the mass vanish, those with a
    finite limit take it, and growing ones are an error. Remove the rest
    energy of the diverging particle before calling.

    Parameters
    ----------
    a : Expression
        Expression.
    particle : {1, 2}
        Index of the diverging mass.

    Returns
    -------
    Expression
        Limit.

    Raises
    ------
    LimitError
        If a monomial grows with the mass.

    """
    out = {}
    for key, k in a.terms.items():
        degree = k.degree(particle)
        if degree > 0:
            raise LimitError(
                f'monomial {describe(a.table, key)} with coefficient {k} '
                f'diverges as m{particle} grows'
            )
        if degree == 0:
            out[key] = k.limit(particle)

    logger.debug('mass limit kept %d of %d terms', len(out), len(a))
    return Expression(a.table, _prune(out))


def rename(a, mapping, table, /):
    """Move an expression to another table, renaming symbols.

    Parameters
    ----------
    a : Expression
        Expression.
    mapping : dict
        Old to new symbol names. Unmapped names stay.
    table : SymbolTable
        Target table, which must declare the new names with equal parity
        and c-order.

    Returns
    -------
    Expression
        Expression over `table`.

    """
    for old in a.symbols():
        new = mapping.get(old, old)
        x, y = a.table[old], table[new]
        if (x.parity, x.c_order) != (y.parity, y.c_order):
            raise DeclarationError(f'symbol "{old}" does not match "{new}"')

    items = (
        ((beta, tuple(mapping.get(x, x) for x in word), c_exp), k)
        for (beta, word, c_exp), k in a.terms.items()
    )
    return Expression.from_terms(table, items)
