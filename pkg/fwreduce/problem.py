"""Problem files declaring symbols, relations, settings, and a Hamiltonian.

A problem file is a sequence of statements ending in semicolons, with
comments starting at `#`:

    symbol OE odd even order 1;
    commute OE EO;
    set reduction:trunc_order = -6;
    H = b1*m1*c^2 + b2*m2*c^2 + EE + OE + EO + OO;

Expressions combine integers, `i`, the masses `m1` and `m2`, the speed of
light `c`, the Dirac matrices `b1` and `b2`, declared symbols, parentheses,
`comm(x, y)` and `acomm(x, y)` with `+`, `-`, `*`, `^` and division by
scalar monomials. A minus sign may precede any factor. Negative powers apply
to scalar monomials only. Files are read as UTF-8.

"""

import copy
import dataclasses
import fwreduce as fw
import logging
import pathlib
import re


logger = logging.getLogger(__name__)
TOKENS = re.compile(
    r'(?P<space>[ \t\r]+)|(?P<newline>\n)|(?P<comment>#[^\n]*)'
    r'|(?P<int>\d+)|(?P<name>[A-Za-z_]\w*)|(?P<punct>[-+*/^(),;=:.])'
)


class ParseError(ValueError):
    """Malformed problem file, with the position of the offending token."""

    def __init__(self, message, line=0, column=0):
        super().__init__(f'line {line}, column {column}: {message}')
        self.line = line
        self.column = column


@dataclasses.dataclass(frozen=True)
class Token:
    """Lexical token with its position."""

    kind: str
    text: str
    line: int
    column: int


def tokenize(text, /):
    """Split problem text into tokens, dropping spaces and comments.

    Raises
    ------
    ParseError
        At the first character no token matches.

    """
    out = []
    line, start, pos = 1, 0, 0
    while pos < len(text):
        m = TOKENS.match(text, pos)
        if m is None:
            raise ParseError(
                f'unexpected character "{text[pos]}"',
                line,
                pos - start + 1,
            )

        kind = m.lastgroup
        if kind == 'newline':
            line, start = line + 1, m.end()
        elif kind not in ('space', 'comment'):
            out.append(Token(kind, m.group(), line, pos - start + 1))
        pos = m.end()

    return out


def _statements(tokens):
    """Group tokens into statements at semicolons."""
    out, current = [], []
    for t in tokens:
        if t.text == ';':
            if not current:
                raise ParseError('empty statement', t.line, t.column)
            out.append(current)
            current = []
        else:
            current.append(t)

    if current:
        t = current[-1]
        raise ParseError('statement lacks a semicolon', t.line, t.column)
    return out


class _Parser:
    """Recursive-descent parser for the tokens of one expression."""

    def __init__(self, tokens, table):
        self.tokens = tokens
        self.table = table
        self.pos = 0

    def error(self, message):
        if self.pos < len(self.tokens):
            t = self.tokens[self.pos]
        else:
            t = self.tokens[-1]
            message = f'{message} at end of statement'
        return ParseError(message, t.line, t.column)

    def peek(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos].text
        return None

    def take(self, text=None):
        if self.pos == len(self.tokens):
            raise self.error(f'expected "{text}"' if text else 'expected more')
        t = self.tokens[self.pos]
        if text is not None and t.text != text:
            raise self.error(f'expected "{text}", not "{t.text}"')
        self.pos += 1
        return t

    def parse(self):
        out = self.expr()
        if self.pos < len(self.tokens):
            raise self.error(f'unexpected "{self.peek()}"')
        return out

    def expr(self):
        if self.peek() == '+':
            self.take()

        out = self.term()
        while self.peek() in ('+', '-'):
            op = self.take().text
            x = self.term()
            out = out + x if op == '+' else out - x
        return out

    def term(self):
        out = self.signed()
        while self.peek() in ('*', '/'):
            op = self.take().text
            x = self.signed()
            out = out * x if op == '*' else out * self.inverse(x)
        return out

    def signed(self):
        if self.peek() == '-':
            self.take()
            return -self.signed()
        return self.factor()

    def factor(self):
        out = self.atom()
        if self.peek() != '^':
            return out

        self.take('^')
        sign = 1
        if self.peek() == '-':
            self.take()
            sign = -1

        t = self.take()
        if t.kind != 'int':
            self.pos -= 1
            raise self.error('exponent is not an integer')

        n = sign * int(t.text)
        return out**n if n >= 0 else self.inverse(out) ** -n

    def inverse(self, x):
        """Inverse of a nonzero scalar monomial `k c^n`."""
        if len(x) != 1:
            raise self.error('only scalar monomials have inverses')
        ((beta, word, c_exp), k), = x.terms.items()
        if word or any(beta):
            raise self.error('only scalar monomials have inverses')
        return fw.algebra.scalar(self.table, 1 / k, -c_exp)

    def atom(self):
        t = self.take()
        table = self.table
        if t.kind == 'int':
            return fw.algebra.scalar(table, int(t.text))
        if t.text == '(':
            out = self.expr()
            self.take(')')
            return out
        if t.kind != 'name':
            self.pos -= 1
            raise self.error(f'unexpected "{t.text}"')

        if t.text in ('comm', 'acomm'):
            self.take('(')
            a = self.expr()
            self.take(',')
            b = self.expr()
            self.take(')')
            kind = 'commutator' if t.text == 'comm' else 'anticommutator'
            return fw.algebra.bracket(kind, a, b)

        constants = {
            'i': lambda: fw.algebra.scalar(table, fw.coeff.I),
            'm1': lambda: fw.algebra.scalar(table, fw.coeff.M1),
            'm2': lambda: fw.algebra.scalar(table, fw.coeff.M2),
            'c': lambda: fw.algebra.scalar(table, 1, 1),
            'b1': lambda: fw.algebra.beta(table, 1),
            'b2': lambda: fw.algebra.beta(table, 2),
        }
        if t.text in constants:
            return constants[t.text]()
        if t.text not in table:
            self.pos -= 1
            raise self.error(f'undeclared symbol "{t.text}"')
        return fw.algebra.symbol(table, t.text)


def parse_expression(text, table, /):
    """Parse an expression over a symbol table.

    Parameters
    ----------
    text : str
        Expression without a trailing semicolon.
    table : SymbolTable
        Table declaring the symbols.

    Returns
    -------
    Expression
        Expression.

    """
    tokens = tokenize(text)
    if not tokens:
        raise ParseError('empty expression', 1, 1)
    return _Parser(tokens, table).parse()


@dataclasses.dataclass(frozen=True)
class ProblemFile:
    """Parsed problem file.

    Attributes
    ----------
    table : SymbolTable
        Declared symbols and relations.
    hamiltonian : Expression
        Hamiltonian.
    config : dict
        Full configuration, defaults overridden by the file settings.

    """

    table: fw.algebra.SymbolTable
    hamiltonian: fw.algebra.Expression
    config: dict

    @property
    def reduction(self):
        """Reduction settings."""
        return fw.engine.ReductionConfig.from_dict(self.config['reduction'])

    @property
    def numcheck(self):
        """Matrix oracle settings."""
        return dict(self.config['numcheck'])


def _symbol(tokens):
    t = tokens[0]
    words = [x.text for x in tokens]
    usage = 'expected "symbol NAME even|odd even|odd [order INT]"'
    if len(words) < 4 or not set(words[2:4]) <= set(fw.algebra.PARITIES):
        raise ParseError(usage, t.line, t.column)

    order = 0
    if len(words) > 4:
        if words[4] != 'order':
            raise ParseError(usage, t.line, t.column)
        try:
            order = int(''.join(words[5:]))
        except ValueError as e:
            raise ParseError(usage, t.line, t.column) from e

    try:
        return fw.algebra.SymbolDecl(words[1], tuple(words[2:4]), order)
    except ValueError as e:
        raise ParseError(str(e), t.line, t.column) from e


def parse_problem(text, conf=None, /):
    """Parse a problem file.

    Declarations and settings take effect before the Hamiltonian is parsed,
    wherever they appear in the file.

    Parameters
    ----------
    text : str
        File contents.
    conf : dict, optional
        Base configuration. Defaults to `config.load()`. Left unchanged.

    Returns
    -------
    ProblemFile
        Parsed problem.

    Raises
    ------
    ParseError
        For malformed statements, undeclared symbols, unknown settings, or
        a missing or repeated Hamiltonian.

    """
    conf = fw.config.load() if conf is None else copy.deepcopy(conf)
    table = fw.algebra.SymbolTable()
    hamiltonian = None

    for tokens in _statements(tokenize(text)):
        t, words = tokens[0], [x.text for x in tokens]
        try:
            if words[0] == 'symbol':
                table = fw.algebra.declare_symbol(table, _symbol(tokens))

            elif words[0] == 'commute' and len(words) == 3:
                table = fw.algebra.declare_relation(table, *words[1:])

            elif words[0] == 'set' and '=' in words:
                eq = words.index('=')
                key, value = ''.join(words[1:eq]), ''.join(words[eq + 1:])
                fw.config.argparse(conf, f'{key}={value}')

            elif words[:2] == ['H', '=']:
                if hamiltonian is not None:
                    raise ParseError('repeated Hamiltonian', t.line, t.column)
                hamiltonian = tokens[2:]

            else:
                message = f'unknown statement "{words[0]}"'
                raise ParseError(message, t.line, t.column)

        except ParseError:
            raise
        except ValueError as e:
            raise ParseError(str(e), t.line, t.column) from e

    if hamiltonian is None:
        raise ParseError('no Hamiltonian "H = ...;" statement', 1, 1)
    if not hamiltonian:
        raise ParseError('empty Hamiltonian', t.line, t.column)

    H = _Parser(hamiltonian, table).parse()
    logger.info(
        'parsed %d symbols and Hamiltonian with %d terms',
        len(table.symbols),
        len(H),
    )
    return ProblemFile(table, H, conf)


def load_problem(path, conf=None, /):
    """Read and parse a problem file, see `parse_problem`."""
    path = fw.config.qualify_path(path)
    logger.debug('reading problem "%s"', path)
    return parse_problem(pathlib.Path(path).read_text(encoding='utf-8'), conf)
