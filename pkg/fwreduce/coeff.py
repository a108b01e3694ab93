"""Exact complex coefficients, rational in the particle masses."""

import dataclasses
import fractions
import logging
import numpy as np
import sympy.polys.domains
import sympy.polys.fields
import sympy.polys.orderings


logger = logging.getLogger(__name__)
FIELD, M1, M2 = sympy.polys.fields.field(
    'm1,m2',
    sympy.polys.domains.ZZ,
    sympy.polys.orderings.grlex,
)
RING = FIELD.ring


def lift(x, /):
    """Convert a scalar into an element of the mass field.

    Parameters
    ----------
    x : int or fractions.Fraction or FracElement
        Real scalar.

    Returns
    -------
    FracElement
        Reduced fraction of integer polynomials in m1, m2.

    Raises
    ------
    TypeError
        If the scalar has an unsupported type.

    """
    if isinstance(x, bool):
        raise TypeError(f'boolean {x} is not a coefficient')
    if isinstance(x, int):
        return FIELD(x)
    if isinstance(x, fractions.Fraction):
        return FIELD(x.numerator) / FIELD(x.denominator)
    if isinstance(x, sympy.polys.fields.FracElement) and x.field == FIELD:
        return x

    raise TypeError(f'cannot convert {type(x).__name__} to a mass fraction')


@dataclasses.dataclass(frozen=True, slots=True)
class Coefficient:
    """Complex coefficient with real and imaginary parts in Q(m1, m2).

    Each part is a `FracElement` of the field `FIELD`, which keeps numerator
    and denominator coprime with a positive leading denominator coefficient
    in graded-lexicographic order, so that equal values compare equal.

    """

    real: object = FIELD.zero
    imag: object = FIELD.zero

    @classmethod
    def of(cls, x, /):
        """Convert a scalar or coefficient into a coefficient.

        Parameters
        ----------
        x : Coefficient or int or fractions.Fraction or FracElement
            Value.

        Returns
        -------
        Coefficient
            Coefficient.

        """
        if isinstance(x, cls):
            return x
        return cls(lift(x), FIELD.zero)

    @property
    def is_real(self):
        """Whether the imaginary part vanishes."""
        return not self.imag

    def __bool__(self):
        return bool(self.real) or bool(self.imag)

    def __neg__(self):
        return Coefficient(-self.real, -self.imag)

    def __add__(self, other):
        try:
            other = Coefficient.of(other)
        except TypeError:
            return NotImplemented
        return Coefficient(self.real + other.real, self.imag + other.imag)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = Coefficient.of(other)
        except TypeError:
            return NotImplemented
        return Coefficient(self.real - other.real, self.imag - other.imag)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        try:
            other = Coefficient.of(other)
        except TypeError:
            return NotImplemented

        a, b = self.real, self.imag
        c, d = other.real, other.imag
        if not b and not d:
            return Coefficient(a * c, FIELD.zero)
        if not a and not d:
            return Coefficient(FIELD.zero, b * c)
        if not b and not c:
            return Coefficient(FIELD.zero, a * d)
        return Coefficient(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = Coefficient.of(other)
        except TypeError:
            return NotImplemented
        if not other:
            raise ZeroDivisionError('division by zero coefficient')

        norm = other.real**2 + other.imag**2
        out = self * other.conjugate()
        return Coefficient(out.real / norm, out.imag / norm)

    def __rtruediv__(self, other):
        return Coefficient.of(other) / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return ONE / self**-n

        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def __str__(self):
        if self.is_real:
            return str(self.real.as_expr())
        return f'({self.real.as_expr()}) + i*({self.imag.as_expr()})'

    def conjugate(self):
        """Return the complex conjugate."""
        return Coefficient(self.real, -self.imag)

    def degree(self, particle):
        """Compute the asymptotic degree in one of the masses.

        Parameters
        ----------
        particle : {1, 2}
            Mass index.

        Returns
        -------
        int
            Numerator minus denominator degree, maximized over the nonzero
            real and imaginary parts.

        """
        i = _index(particle)
        parts = [x for x in (self.real, self.imag) if x]
        if not parts:
            raise ValueError('zero coefficient has no degree')

        return max(x.numer.degree(i) - x.denom.degree(i) for x in parts)

    def limit(self, particle):
        """Compute the limit of a coefficient as one mass grows without bound.

        Parameters
        ----------
        particle : {1, 2}
            Index of the diverging mass.

        Returns
        -------
        Coefficient
            Finite limit, a function of the other mass only.

        Raises
        ------
        ValueError
            If the coefficient grows with the mass.

        """
        degree = self.degree(particle)
        if degree > 0:
            raise ValueError(f'coefficient {self} grows with m{particle}')
        if degree < 0:
            return ZERO

        i = _index(particle)

        def lead(x):
            if not x or x.numer.degree(i) - x.denom.degree(i) < 0:
                return FIELD.zero
            num = _leading(x.numer, i)
            den = _leading(x.denom, i)
            return FIELD.new(num, den)

        return Coefficient(lead(self.real), lead(self.imag))

    def evaluate(self, m1, m2, /, dtype=np.longdouble):
        """Evaluate the coefficient at numeric masses.

        Parameters
        ----------
        m1, m2 : float
            Mass values.
        dtype : numpy.dtype, optional
            Real floating-point type used for the arithmetic.

        Returns
        -------
        numpy.complexfloating
            Complex value.

        Raises
        ------
        ZeroDivisionError
            If a denominator vanishes at the masses.

        """
        m = (dtype(m1), dtype(m2))

        def poly(p):
            out = dtype(0)
            for (d1, d2), c in p.terms():
                out += dtype(int(c)) * m[0]**d1 * m[1]**d2
            return out

        def frac(x):
            if not x:
                return dtype(0)
            den = poly(x.denom)
            if den == 0:
                raise ZeroDivisionError(
                    f'denominator {x.denom.as_expr()} vanishes at '
                    f'm1={m1}, m2={m2}'
                )
            return poly(x.numer) / den

        re, im = frac(self.real), frac(self.imag)
        return re + 1j * im

    def to_json(self):
        """Convert to a JSON-compatible dictionary."""
        return {'real': _frac_json(self.real), 'imag': _frac_json(self.imag)}

    @classmethod
    def from_json(cls, d, /):
        """Build a coefficient from its JSON dictionary.

        Parameters
        ----------
        d : dict
            Dictionary with keys 'real' and 'imag', as `to_json` creates.

        Returns
        -------
        Coefficient
            Coefficient.

        """
        return cls(_frac_parse(d['real']), _frac_parse(d['imag']))


ZERO = Coefficient()
ONE = Coefficient(FIELD.one, FIELD.zero)
I = Coefficient(FIELD.zero, FIELD.one)


def _index(particle):
    if particle not in (1, 2):
        raise ValueError(f'particle {particle} is not 1 or 2')
    return particle - 1


def _leading(p, i):
    """Collect the terms of highest degree in generator `i`, set to one."""
    d = p.degree(i)
    out = {}
    for monom, c in p.terms():
        if monom[i] == d:
            monom = list(monom)
            monom[i] = 0
            out[tuple(monom)] = c
    return RING.from_dict(out)


def _poly_json(p):
    return [
        {'coef': str(int(c)), 'd1': int(d1), 'd2': int(d2)}
        for (d1, d2), c in p.terms()
    ]


def _frac_json(x):
    return {'num': _poly_json(x.numer), 'den': _poly_json(x.denom)}


def _frac_parse(d):
    def poly(terms):
        out = {}
        for t in terms:
            key = (int(t['d1']), int(t['d2']))
            out[key] = out.get(key, 0) + int(t['coef'])
        return RING.from_dict(out)

    num, den = poly(d['num']), poly(d['den'])
    if not den:
        raise ValueError(f'fraction {d} has a zero denominator')

    logger.debug('parsed fraction with %d numerator terms', len(num))
    return FIELD.new(num, den)
