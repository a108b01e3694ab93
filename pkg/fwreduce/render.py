"""Text, LaTeX, and JSON rendering of expressions and diff reports."""

import fractions
import fwreduce as fw
import json
import logging
import sympy


logger = logging.getLogger(__name__)
EMITS = ('text', 'latex', 'json')
UNIT = sympy.Symbol('i')


def _coefficient(k, unit=sympy.I):
    """SymPy expression of a coefficient."""
    return k.real.as_expr() + unit * k.imag.as_expr()


def _terms(a):
    """Terms sorted by decreasing effective order, then canonical order."""
    keys = sorted(a.terms, key=lambda key: (-a.order(key), a.sort_key(key)))
    return [(key, a.terms[key]) for key in keys]


def _monomial(x):
    """Rational factor and mass exponents of a monomial fraction, or None."""
    num, den = x.numer.terms(), x.denom.terms()
    if len(num) != 1 or len(den) != 1:
        return None

    (a, p), = num
    (b, q), = den
    exps = tuple(i - j for i, j in zip(a, b, strict=True))
    return fractions.Fraction(int(p), int(q)), exps


def _text_scalar(k):
    # Rational, then i, then mass powers, if the coefficient allows.
    x = k.real if not k.imag else k.imag if not k.real else None
    split = None if x is None else _monomial(x)
    if split is None:
        x = _coefficient(k, UNIT)
        negative = x.could_extract_minus_sign()
        x = -x if negative else x
        s = sympy.sstr(x).replace('**', '^')
        return negative, [f'({s})' if x.is_Add else s], []

    r, exps = split
    parts, masses = [], []
    if r.denominator != 1:
        parts.append(f'({abs(r.numerator)}/{r.denominator})')
    elif abs(r) != 1:
        parts.append(str(abs(r)))
    if k.imag:
        parts.append('i')
    for i, e in enumerate(exps, start=1):
        if e:
            masses.append(f'm{i}' if e == 1 else f'm{i}^{e}')
    return r < 0, parts, masses


def _text_term(key, k):
    # Same syntax as problem files.
    beta, word, c_exp = key
    negative, parts, masses = _text_scalar(k)
    parts.extend(f'b{i + 1}' for i, e in enumerate(beta) if e)
    parts.extend(masses)
    if c_exp:
        parts.append(f'c^{c_exp}')
    if word:
        parts.append('*'.join(word))

    return negative, ' * '.join(parts) or '1'


def _latex_term(key, k):
    beta, word, c_exp = key
    x = _coefficient(k)
    negative = x.could_extract_minus_sign()
    if negative:
        x = -x

    parts = [] if x == 1 else [sympy.latex(x)]
    if len(parts) == 1 and x.is_Add:
        parts = [rf'\left({parts[0]}\right)']
    parts.extend(rf'\beta_{i + 1}' for i, e in enumerate(beta) if e)
    if c_exp:
        parts.append(f'c^{{{c_exp}}}')
    parts.extend(rf'\mathcal{{{name}}}' for name in word)

    return negative, ' '.join(parts) or '1'


def _join(terms):
    if not terms:
        return '0'

    out = []
    for i, (negative, s) in enumerate(terms):
        if i == 0:
            out.append(f'-{s}' if negative else s)
        else:
            out.append(f'- {s}' if negative else f'+ {s}')
    return ' '.join(out)


def render(obj, emit='text', /):
    """Render an expression or a diff report.

    Text output reads `(p/q) * b1 * b2 * m1^k * m2^l * c^n * X*Y` per term,
    with `i` after the rational factor for imaginary coefficients, in the
    syntax problem files accept. Coefficients that are no monomial in the
    masses print whole, as SymPy writes them. LaTeX output uses subscripted
    betas and fractions, and JSON output is the term list of
    `Expression.to_json`. Terms appear by decreasing effective order.

    Parameters
    ----------
    obj : Expression or DiffReport
        Object to render.
    emit : {'text', 'latex', 'json'}, optional
        Output format.

    Returns
    -------
    str
        Rendered string.

    """
    if emit not in EMITS:
        raise ValueError(f'output format "{emit}" not in {EMITS}')
    if isinstance(obj, fw.reference.DiffReport):
        return _render_diff(obj, emit)

    if emit == 'json':
        return json.dumps(obj.to_json(), indent=1)

    f = _text_term if emit == 'text' else _latex_term
    return _join([f(key, k) for key, k in _terms(obj)])


def _render_diff(report, emit):
    if emit == 'json':
        out = {
            'missing': report.missing.to_json(),
            'extra': report.extra.to_json(),
            'mismatches': [
                {
                    'term': fw.algebra.Expression(
                        report.extra.table,
                        {key: fw.coeff.ONE},
                    ).to_json(),
                    'candidate': a.to_json(),
                    'reference': b.to_json(),
                }
                for key, a, b in report.mismatches
            ],
        }
        return json.dumps(out, indent=1)

    if report.is_empty:
        return 'no differences'

    lines = []
    if report.missing:
        lines.append(f'missing: {render(report.missing, emit)}')
    if report.extra:
        lines.append(f'extra: {render(report.extra, emit)}')
    for key, a, b in report.mismatches:
        term = fw.algebra.describe(report.extra.table, key)
        lines.append(f'mismatch {term}: {a} instead of {b}')
    return '\n'.join(lines)
