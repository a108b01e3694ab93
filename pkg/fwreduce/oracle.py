"""Numeric oracle checking reductions with random matrix representations.

The oracle substitutes random Hermitian matrices of the declared parities
for the symbols, conjugates the numeric Hamiltonian exactly with the
exponentials of the applied generators, and fits how the distance to the
transformed Hamiltonian falls off with the speed of light.

"""

import dataclasses
import fwreduce as fw
import logging
import math
import numpy as np


logger = logging.getLogger(__name__)
DTYPE = np.clongdouble
DIRAC = np.array((1, 1, -1, -1))


class EvaluationError(ArithmeticError):
    """Coefficient that cannot be evaluated at the chosen masses."""


class OracleError(RuntimeError):
    """Representation or numeric check that fails to work out."""


@dataclasses.dataclass(frozen=True)
class OracleConfig:
    """Matrix oracle settings.

    Parameters
    ----------
    m1, m2 : float
        Masses.
    c_values : tuple of float
        Speeds of light, at least four distinct positive values.
    seed : int
        Seed of the random matrices.
    aux_dim : int
        Dimension of the auxiliary factor of each particle.
    floor : float
        Smallest residual considered above rounding noise.
    margin : float
        Slope required below the truncation order.
    unitarity : float
        Tolerance of the unitarity check of the transformation.
    fault : bool
        Perturb the transformed Hamiltonian to check that the oracle fails.

    """

    m1: float = 1
    m2: float = 2
    c_values: tuple = (8, 16, 32, 64, 128)
    seed: int = 0
    aux_dim: int = 2
    floor: float = 1e-13
    margin: float = 0.5
    unitarity: float = 1e-10
    fault: bool = False

    def __post_init__(self):
        c = np.atleast_1d(self.c_values).tolist()
        c = tuple(sorted(set(c)))
        object.__setattr__(self, 'c_values', c)
        if len(c) < 4:
            raise ValueError(f'need four distinct speeds of light, got {c}')
        if c[0] <= 0:
            raise ValueError(f'speeds of light {c} are not positive')
        if self.m1 <= 0 or self.m2 <= 0:
            raise ValueError(f'masses {self.m1}, {self.m2} are not positive')
        if not isinstance(self.aux_dim, int) or self.aux_dim < 1:
            raise ValueError(f'aux_dim {self.aux_dim} is not a positive int')

    @classmethod
    def from_dict(cls, d, /):
        """Build settings from a configuration section, rejecting extras."""
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f'unknown numcheck settings {sorted(unknown)}')
        return cls(**d)

    def to_dict(self):
        """Convert to a JSON-compatible dictionary."""
        out = dataclasses.asdict(self)
        out['c_values'] = list(self.c_values)
        return out


@dataclasses.dataclass(frozen=True, eq=False)
class MatrixAssignment:
    """Matrices substituted for the symbols of a table.

    The space factors as `(d1, a1, d2, a2)`, with four Dirac components and
    `aux_dim` auxiliary components per particle. Each symbol matrix has unit
    spectral norm, and evaluates to `c^order` times it.

    """

    table: fw.algebra.SymbolTable
    matrices: dict
    beta1: np.ndarray
    beta2: np.ndarray
    m1: float = 1
    m2: float = 2
    c: float = 1
    seed: int = 0
    aux_dim: int = 2
    cache: dict = dataclasses.field(
        default_factory=dict,
        compare=False,
        repr=False,
    )

    @property
    def dirac_dim(self):
        """Dimension of the two Dirac factors together."""
        return len(DIRAC) ** 2

    @property
    def dim(self):
        """Dimension of the space."""
        return len(self.beta1)

    def at(self, c, /):
        """Same assignment at another speed of light, sharing the cache."""
        return dataclasses.replace(self, c=c, cache=self.cache)

    def word(self, word, /):
        """Product of the symbol matrices of a word, without c-powers."""
        if word not in self.cache:
            if not word:
                self.cache[word] = np.eye(self.dim, dtype=DTYPE)
            else:
                prefix = self.word(word[:-1])
                self.cache[word] = prefix @ self.matrices[word[-1]]
        return self.cache[word]


def _mask(parity, s1, s2):
    """Entries a matrix of a parity may occupy, given the beta diagonals."""
    p = fw.algebra.Parity.parse(parity)
    out = np.outer(s1, s1) == (-1) ** p.p1
    if s2 is not None:
        out &= np.outer(s2, s2) == (-1) ** p.p2
    return out


def random_sector_matrix(sector, beta1, beta2, rng, /):
    """Draw a random Hermitian matrix of a parity sector.

    Parameters
    ----------
    sector : Parity or str
        Parity, as 'oe' for odd in particle 1 and even in particle 2.
    beta1, beta2 : numpy.ndarray
        Diagonals of the beta matrices. Pass None for `beta2` to ignore the
        second particle.
    rng : numpy.random.Generator
        Random number generator.

    Returns
    -------
    numpy.ndarray
        Matrix of unit spectral norm, in extended precision.

    """
    n = len(beta1)
    x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    x = (x + x.conj().T) / 2
    x *= _mask(sector, beta1, beta2)

    norm = np.linalg.norm(x, ord=2)
    if norm == 0:
        raise OracleError(f'sector {sector} admits no nonzero matrix')
    return (x / norm).astype(DTYPE)


def _sides(table):
    """Split symbols with relations into two sides with a 2-coloring.

    Symbols on side 1 act on the factor `(d1, a1)` only and must be even in
    particle 2. Symbols on side 2 act on `(d2, a2)` and must be even in
    particle 1. Related symbols end up on opposite sides, which makes them
    commute exactly.

    """
    graph = {}
    for a, b in map(tuple, table.relations):
        graph.setdefault(a, set()).add(b)
        graph.setdefault(b, set()).add(a)

    def fits(name, side):
        p = table[name].parity
        return not (p.p2 if side == 1 else p.p1)

    out = {}
    for start in table.names:
        if start not in graph or start in out:
            continue

        # Color one connected component.
        color = {start: 1}
        queue = [start]
        while queue:
            a = queue.pop()
            for b in graph[a]:
                if b not in color:
                    color[b] = 3 - color[a]
                    queue.append(b)
                elif color[b] == color[a]:
                    raise OracleError(
                        f'relations around "{a}" and "{b}" are not bipartite'
                    )

        for flip in (False, True):
            sides = {k: 3 - v if flip else v for k, v in color.items()}
            if all(fits(k, v) for k, v in sides.items()):
                out.update(sides)
                break
        else:
            raise OracleError(
                f'cannot represent relations among {sorted(color)} by '
                'tensor factors'
            )

    return out


def assign(table, /, m1=1, m2=2, c=1, seed=0, aux_dim=2):
    """Draw random matrices for the symbols of a table.

    Parameters
    ----------
    table : SymbolTable
        Symbol table.
    m1, m2 : float, optional
        Masses.
    c : float, optional
        Speed of light.
    seed : int, optional
        Random seed.
    aux_dim : int, optional
        Auxiliary dimension per particle.

    Returns
    -------
    MatrixAssignment
        Assignment.

    Raises
    ------
    OracleError
        If the relations have no tensor-factor representation.

    """
    rng = np.random.default_rng(seed)
    half = np.repeat(DIRAC, aux_dim)
    ones = np.ones_like(half)
    beta1 = np.kron(half, ones)
    beta2 = np.kron(ones, half)
    eye = np.eye(len(half), dtype=DTYPE)

    sides = _sides(table)
    matrices = {}
    for s in table.symbols:
        side = sides.get(s.name)
        if side == 1:
            x = random_sector_matrix(s.parity, half, None, rng)
            matrices[s.name] = np.kron(x, eye)
        elif side == 2:
            p = fw.algebra.Parity(s.parity.p2, 0)
            x = random_sector_matrix(p, half, None, rng)
            matrices[s.name] = np.kron(eye, x)
        else:
            x = random_sector_matrix(s.parity, beta1, beta2, rng)
            matrices[s.name] = x

    logger.debug(
        'assigned %d matrices of size %d with seed %d',
        len(matrices),
        len(beta1),
        seed,
    )
    return MatrixAssignment(
        table,
        matrices,
        beta1,
        beta2,
        m1=m1,
        m2=m2,
        c=c,
        seed=seed,
        aux_dim=aux_dim,
    )


def evaluate(expr, assignment, /):
    """Evaluate an expression as a matrix.

    Parameters
    ----------
    expr : Expression
        Expression over the table of the assignment.
    assignment : MatrixAssignment
        Symbol matrices, masses and speed of light.

    Returns
    -------
    numpy.ndarray
        Extended-precision complex matrix.

    Raises
    ------
    EvaluationError
        If a coefficient has a vanishing denominator at the masses.

    """
    if expr.table != assignment.table:
        raise fw.algebra.UsageError('expression and matrices differ in table')

    a = assignment
    c = np.longdouble(a.c)
    out = np.zeros((a.dim, a.dim), dtype=DTYPE)
    for key, k in expr.terms.items():
        beta, word, _ = key
        try:
            x = k.evaluate(a.m1, a.m2)
        except ZeroDivisionError as e:
            raise EvaluationError(str(e)) from e

        m = a.word(word) * (x * c ** expr.order(key))
        if beta[0]:
            m = a.beta1[:, None] * m
        if beta[1]:
            m = a.beta2[:, None] * m
        out += m

    return out


def norm(x, /):
    """Frobenius norm in the precision of the input."""
    return np.sqrt(np.sum(np.abs(x) ** 2))


def expm(x, /):
    """Matrix exponential by Taylor expansion and squaring.

    Scales the input to a 1-norm of at most one half, sums a Taylor
    polynomial of degree 20 with Horner's scheme, and squares back, which
    is accurate to rounding in extended precision for such arguments.

    """
    n = len(x)
    size = np.abs(x).sum(axis=0).max()
    square = max(0, math.ceil(math.log2(float(size))) + 1) if size else 0
    x = x / DTYPE(2**square)

    degree = 20
    eye = np.eye(n, dtype=x.dtype)
    out = eye.copy()
    for i in range(degree, 0, -1):
        out = eye + (x @ out) / i

    for _ in range(square):
        out = out @ out
    return out


def transformation(trace, assignment, /, tolerance=1e-10):
    """Unitary of the applied generators, later ones to the left.

    Raises
    ------
    OracleError
        If the result fails the unitarity check.

    """
    eye = np.eye(assignment.dim, dtype=DTYPE)
    u = eye
    for S in trace.generators():
        u = expm(1j * evaluate(S, assignment)) @ u

    error = norm(u @ u.conj().T - eye)
    if error > tolerance:
        raise OracleError(f'transformation is not unitary, error {error}')
    return u


def exact_conjugation_residual(
    H,
    trace,
    assignment,
    /,
    reduced=None,
    tolerance=1e-10,
):
    """Relative distance between exact and symbolic transformed Hamiltonian.

    Parameters
    ----------
    H : Expression
        Original Hamiltonian.
    trace : ReductionTrace
        Reduction of `H`.
    assignment : MatrixAssignment
        Matrices at the speed of light of interest.
    reduced : Expression, optional
        Transformed Hamiltonian to compare with, by default that of the
        trace.
    tolerance : float, optional
        Unitarity tolerance of the transformation.

    Returns
    -------
    float
        Frobenius norm of `U H U^+ - H_tr`, divided by that of `H` at unit
        speed of light.

    """
    if reduced is None:
        reduced = trace.hamiltonian

    u = transformation(trace, assignment, tolerance)
    exact = u @ evaluate(H, assignment) @ u.conj().T
    diff = exact - evaluate(reduced, assignment)
    scale = norm(evaluate(H, assignment.at(1)))
    return float(norm(diff) / scale)


def order_scaling_slope(c_values, residuals, /):
    """Slope of a least-squares fit of log-residual against log-c."""
    x = np.log(np.asarray(c_values, dtype=np.float64))
    y = np.log(np.asarray(residuals, dtype=np.float64))
    return float(np.polyfit(x, y, deg=1)[0])


@dataclasses.dataclass(frozen=True)
class ScalingReport:
    """Residuals over the speeds of light and the fitted slope.

    A residual counts as saturated once it drops below the floor or the
    rounding level of the matrices at its speed of light. The slope uses the
    unsaturated points before the first saturated one, and is None if fewer
    than two remain, in which case the check passes.

    """

    config: dict
    seed: int
    c_values: tuple
    residuals: tuple
    slope: float
    passed: bool
    fitted: int = 0

    def to_json(self):
        """Convert to a JSON-compatible dictionary."""
        return {
            'config': self.config,
            'seed': self.seed,
            'c_values': list(self.c_values),
            'residuals': list(self.residuals),
            'slope': self.slope,
            'pass': self.passed,
        }


def fault(trace, seed, /):
    """Add a random even-even term at the truncation order."""
    rng = np.random.default_rng(seed)
    H = trace.hamiltonian
    table = H.table
    trunc = trace.config.trunc_order
    names = [s.name for s in table.symbols if s.parity == fw.algebra.EE]

    word = (str(rng.choice(names)),) if names else ()
    k = int(rng.integers(1, 10))
    term = fw.algebra.Expression.from_terms(table, [(((0, 0), word, 0), k)])
    term *= fw.algebra.scalar(table, 1, trunc - table.order(word))
    logger.info('perturbing transformed Hamiltonian by %s', term)
    return H + term


def order_scaling(H, trace, config=None, /):
    """Check that the reduction error falls off faster than truncated terms.

    Parameters
    ----------
    H : Expression
        Original Hamiltonian.
    trace : ReductionTrace
        Reduction of `H`.
    config : OracleConfig, optional
        Settings.

    Returns
    -------
    ScalingReport
        Report. Passes if the slope is at most the truncation order minus
        the margin.

    """
    if config is None:
        config = OracleConfig()

    reduced = fault(trace, config.seed) if config.fault else None
    base = assign(
        H.table,
        m1=config.m1,
        m2=config.m2,
        seed=config.seed,
        aux_dim=config.aux_dim,
    )
    scale = norm(evaluate(H, base))
    eps = np.finfo(np.longdouble).eps

    residuals = []
    fitted = 0
    for c in config.c_values:
        a = base.at(c)
        r = exact_conjugation_residual(
            H,
            trace,
            a,
            reduced=reduced,
            tolerance=config.unitarity,
        )
        residuals.append(r)

        noise = 64 * eps * norm(evaluate(H, a)) / scale
        saturated = r < max(config.floor, float(noise))
        if not saturated and fitted == len(residuals) - 1:
            fitted += 1
        logger.info('residual %.3e at c=%s', r, c)

    trunc = trace.config.trunc_order
    slope = None
    passed = True
    if fitted >= 2:
        c = config.c_values[:fitted]
        slope = order_scaling_slope(c, residuals[:fitted])
        passed = slope <= trunc - config.margin

    logger.info('fitted slope %s over %d points', slope, fitted)
    out = {'reduction': trace.config.to_dict(), 'numcheck': config.to_dict()}
    return ScalingReport(
        out,
        config.seed,
        config.c_values,
        tuple(residuals),
        slope,
        passed,
        fitted,
    )
