"""Iterative Foldy-Wouthuysen reduction by truncated BCH conjugation."""

import dataclasses
import fwreduce as fw
import logging


logger = logging.getLogger(__name__)
KINDS = ('oe', 'eo', 'oo')


class EqualMassError(ValueError):
    """Odd-odd elimination requested or needed for equal masses."""


class GeneratorOrderError(ValueError):
    """Generator of non-negative effective order, for which BCH diverges."""


class HamiltonianError(ValueError):
    """Input Hamiltonian without the expected structure."""


class GeneratorError(RuntimeError):
    """Generator that fails to be Hermitian."""


class DivergenceError(RuntimeError):
    """Reduction that stops making progress."""


@dataclasses.dataclass(frozen=True)
class ReductionConfig:
    """Reduction settings.

    Parameters
    ----------
    sequence : tuple of str
        Order in which each round applies the generators, a permutation of a
        nonempty subset of `KINDS`. A comma-separated string also works.
    trunc_order : int
        Lowest effective order kept.
    cleanup : bool
        Apply the even-even cleanup transformation after the rounds.
    masses_equal : bool
        Treat the masses as equal, which rules out odd-odd elimination.
    bch_cleanup_first_order_only : bool
        Keep only the first commutator of the cleanup transformation.
    max_rounds : int
        Number of rounds before giving up.
    combined : bool
        Apply the sum of the sequence generators at once in every round.

    """

    sequence: tuple = KINDS
    trunc_order: int = -4
    cleanup: bool = False
    masses_equal: bool = False
    bch_cleanup_first_order_only: bool = True
    max_rounds: int = 16
    combined: bool = False

    def __post_init__(self):
        seq = self.sequence
        if isinstance(seq, str):
            seq = seq.split(',')
        seq = tuple(x.strip() for x in seq)
        object.__setattr__(self, 'sequence', seq)

        if not seq or len(set(seq)) < len(seq) or not set(seq) <= set(KINDS):
            raise ValueError(f'sequence {seq} is not part of {KINDS}')
        if self.masses_equal and 'oo' in seq:
            raise EqualMassError('odd-odd generator requires unequal masses')
        for k in ('trunc_order', 'max_rounds'):
            v = getattr(self, k)
            if not isinstance(v, int) or isinstance(v, bool):
                raise ValueError(f'{k} value {v!r} is not an integer')
        if self.max_rounds < 1:
            raise ValueError(f'max_rounds {self.max_rounds} is not positive')

    @classmethod
    def from_dict(cls, d, /):
        """Build settings from a configuration section, rejecting extras."""
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f'unknown reduction settings {sorted(unknown)}')
        return cls(**d)

    def to_dict(self):
        """Convert to a JSON-compatible dictionary."""
        out = dataclasses.asdict(self)
        out['sequence'] = list(self.sequence)
        return out


@dataclasses.dataclass(frozen=True)
class Step:
    """Generator applied in a given round.

    Kinds are the sectors of `KINDS`, 'sum' for the combined generator, or
    'ee' for the cleanup transformation.

    """

    round: int
    kind: str
    generator: fw.algebra.Expression


@dataclasses.dataclass(frozen=True)
class ReductionTrace:
    """Applied generators in order and the transformed Hamiltonian."""

    steps: tuple
    hamiltonian: fw.algebra.Expression
    config: ReductionConfig = ReductionConfig()

    @property
    def rounds(self):
        """Number of elimination rounds, excluding cleanup."""
        return len({s.round for s in self.steps if s.kind != 'ee'})

    def generators(self):
        """Generators in the order of application."""
        return [s.generator for s in self.steps]

    def to_json(self):
        """Convert to a JSON-compatible dictionary."""
        steps = [
            {
                'round': s.round,
                'kind': s.kind,
                'generator': s.generator.to_json(),
            }
            for s in self.steps
        ]
        return {
            'config': self.config.to_dict(),
            'steps': steps,
            'hamiltonian': self.hamiltonian.to_json(),
        }

    @classmethod
    def from_json(cls, d, table, /):
        """Build a trace from its JSON dictionary over a symbol table."""
        Expression = fw.algebra.Expression
        steps = tuple(
            Step(
                s['round'],
                s['kind'],
                Expression.from_json(s['generator'], table),
            )
            for s in d['steps']
        )
        return cls(
            steps=steps,
            hamiltonian=Expression.from_json(d['hamiltonian'], table),
            config=ReductionConfig.from_dict(d['config']),
        )


def rest_energy(table, /, particles=(1, 2)):
    """Large terms `b1 m1 c^2 + b2 m2 c^2` of the Hamiltonian.

    Parameters
    ----------
    table : SymbolTable
        Symbol table.
    particles : sequence of int, optional
        Particles to include.

    Returns
    -------
    Expression
        Rest-energy terms.

    """
    m = {1: fw.coeff.M1, 2: fw.coeff.M2}
    out = fw.algebra.zero(table)
    for i in particles:
        out += fw.algebra.beta(table, i) * fw.algebra.scalar(table, m[i], 2)
    return out


def _prefactor(table, kind):
    """Factor multiplying the sector component in a generator."""
    b1 = fw.algebra.beta(table, 1)
    b2 = fw.algebra.beta(table, 2)
    m1, m2 = fw.coeff.M1, fw.coeff.M2
    i = fw.coeff.I

    if kind == 'oe':
        k = b1 * (-i * (1 / (2 * m1)))
    elif kind == 'eo':
        k = b2 * (-i * (1 / (2 * m2)))
    else:
        d = 2 * (m1**2 - m2**2)
        k = b1 * (-i * (m1 / d)) + b2 * (i * (m2 / d))

    return k * fw.algebra.scalar(table, 1, -2)


def build_generator(H, kind, config, /):
    """Build the generator that removes one odd sector of a Hamiltonian.

    The generator multiplies the entire current sector component by a fixed
    prefactor, `-i b1 / (2 m1 c^2)` for 'oe', `-i b2 / (2 m2 c^2)` for 'eo',
    and `-i (b1 m1 - b2 m2) / (2 (m1^2 - m2^2) c^2)` for 'oo'.

    Parameters
    ----------
    H : Expression
        Hamiltonian whose sector component the generator removes.
    kind : {'oe', 'eo', 'oo'}
        Sector to remove.
    config : ReductionConfig
        Settings.

    Returns
    -------
    Expression
        Hermitian generator, zero if the sector is empty.

    Raises
    ------
    EqualMassError
        For kind 'oo' with `config.masses_equal`.

    """
    if kind not in KINDS:
        raise ValueError(f'generator kind "{kind}" not in {KINDS}')
    if kind == 'oo' and config.masses_equal:
        raise EqualMassError('odd-odd generator requires unequal masses')

    component = fw.algebra.project(H, kind)
    if not component:
        return fw.algebra.zero(H.table)

    return fw.algebra.multiply(_prefactor(H.table, kind), component)


def combined_generator(H, config, /):
    """Sum of the generators of every kind in the sequence."""
    out = fw.algebra.zero(H.table)
    for kind in config.sequence:
        out += build_generator(H, kind, config)
    return out


def conjugate_bch(H, S, min_order, /):
    """Conjugate a Hamiltonian by `exp(iS)` through the truncated BCH series.

    Sums `(i^n / n!) ad_S^n(H)`, computing each term from the previous one
    and truncating at `min_order`, until a term vanishes. Each commutator
    with `S` lowers the effective order, so the series is finite.

    Parameters
    ----------
    H : Expression
        Hamiltonian.
    S : Expression
        Hermitian generator with every effective order at most -1.
    min_order : int
        Lowest effective order kept.

    Returns
    -------
    Expression
        Truncated `exp(iS) H exp(-iS)`.

    Raises
    ------
    GeneratorOrderError
        If `S` has a monomial of effective order 0 or higher.

    """
    if S and S.leading_order() > -1:
        raise GeneratorOrderError(
            f'generator has effective order {S.leading_order()}, not below 0'
        )

    out = term = fw.algebra.truncate(H, min_order)
    n = 0
    while term:
        n += 1
        term = fw.algebra.commutator(S, term, min_order) * (fw.coeff.I / n)
        out += term
        logger.debug('commutator %d has %d terms', n, len(term))

    return out


def _residual(H):
    """Highest effective order outside the even-even sector, or None."""
    odd = H - fw.algebra.project(H, fw.algebra.EE)
    return odd.leading_order()


def _sectors(H):
    """Describe nonzero odd sectors and their leading orders."""
    out = {}
    for kind in KINDS:
        x = fw.algebra.project(H, kind)
        if x:
            out[kind] = x.leading_order()
    return out


def reduce(H, config=None, /, large=None):
    """Reduce a Hamiltonian to even-even form by repeated conjugation.

    The first round builds every generator of the sequence from the sector
    components of the input Hamiltonian and applies them in turn. Later
    rounds build each generator from the current Hamiltonian, so that they
    remove the residual odd components, until no odd monomial of effective
    order `config.trunc_order` or higher remains.

    Parameters
    ----------
    H : Expression
        Hermitian Hamiltonian.
    config : ReductionConfig, optional
        Settings. Defaults to `ReductionConfig()`.
    large : Expression, optional
        Expected terms of effective order 2 and higher. Defaults to the rest
        energies of both particles.

    Returns
    -------
    ReductionTrace
        Generators and the even-even transformed Hamiltonian.

    Raises
    ------
    HamiltonianError
        If `H` is not Hermitian or its large terms differ from `large`.
    EqualMassError
        If the masses are equal and odd-odd terms of effective order
        `config.trunc_order` or higher are given or generated.
    DivergenceError
        If the leading odd order fails to decrease or rounds run out.

    """
    if config is None:
        config = ReductionConfig()

    table = H.table
    if large is None:
        large = rest_energy(table)

    # Input structure.
    if not fw.algebra.is_hermitian(H):
        raise HamiltonianError('Hamiltonian is not Hermitian')
    top = {key: k for key, k in H.terms.items() if H.order(key) >= 2}
    if fw.algebra.Expression(table, top) != large:
        raise HamiltonianError(
            'terms of order 2 and above differ from the rest energies'
        )

    trunc = config.trunc_order
    kinds = ('sum',) if config.combined else config.sequence
    current = source = fw.algebra.truncate(H, trunc)
    leading = _residual(current)
    steps = []
    rounds = 0
    while leading is not None:
        if rounds == config.max_rounds:
            raise DivergenceError(
                f'odd sectors {_sectors(current)} remain after {rounds} rounds'
            )
        oo = fw.algebra.project(current, 'oo')
        if config.masses_equal and oo:
            raise EqualMassError(
                f'odd-odd terms of order {oo.leading_order()} need unequal '
                'masses'
            )

        for kind in kinds:
            # First-round generators use the input components.
            x = current if rounds else source
            if kind == 'sum':
                S = combined_generator(x, config)
            else:
                S = build_generator(x, kind, config)
            if not S:
                continue
            if not fw.algebra.is_hermitian(S):
                raise GeneratorError(f'{kind} generator is not Hermitian')

            current = conjugate_bch(current, S, trunc)
            steps.append(Step(rounds, kind, S))
            logger.debug('applied %s generator with %d terms', kind, len(S))

        new = _residual(current)
        if new is not None and new >= leading:
            raise DivergenceError(
                f'leading odd order {new} did not decrease from {leading}'
            )

        logger.info('round %d left odd sectors %s', rounds, _sectors(current))
        leading = new
        rounds += 1

    ee = fw.algebra.project(current, fw.algebra.EE)
    trace = ReductionTrace(tuple(steps), ee, config)
    logger.info('reduced in %d rounds to %d terms', rounds, len(ee))
    if not config.cleanup:
        return trace

    S = cleanup_generator(trace)
    ee = apply_cleanup(ee, S, config)
    return ReductionTrace((*steps, Step(rounds, 'ee', S)), ee, config)


def cleanup_generator(trace, /):
    """Build the even-even cleanup generator `[S_oe, [S_eo, S_oo]]`.

    Parameters
    ----------
    trace : ReductionTrace
        Trace with all three generators in the first round.

    Returns
    -------
    Expression
        Hermitian even-even generator from the first-round generators.

    Raises
    ------
    UnsupportedError
        If a first-round generator is missing.

    """
    first = {s.kind: s.generator for s in trace.steps if s.round == 0}
    missing = [k for k in KINDS if k not in first]
    if missing:
        raise fw.algebra.UnsupportedError(
            f'cleanup needs first-round generators {missing}'
        )

    inner = fw.algebra.commutator(first['eo'], first['oo'])
    return fw.algebra.commutator(first['oe'], inner)


def apply_cleanup(H, S, config, /):
    """Conjugate a transformed Hamiltonian by an even-even generator.

    Parameters
    ----------
    H : Expression
        Transformed Hamiltonian.
    S : Expression
        Hermitian even-even generator.
    config : ReductionConfig
        Settings. With `bch_cleanup_first_order_only`, compute only
        `H + i[S, H]`, otherwise the full truncated BCH series.

    Returns
    -------
    Expression
        Truncated result.

    Raises
    ------
    UsageError
        If `S` is not even-even.

    """
    if fw.algebra.project(S, fw.algebra.EE) != S:
        raise fw.algebra.UsageError('cleanup generator is not even-even')

    trunc = config.trunc_order
    if not config.bch_cleanup_first_order_only:
        return conjugate_bch(H, S, trunc)

    term = fw.algebra.commutator(S, H, trunc) * fw.coeff.I
    return fw.algebra.truncate(H + term, trunc)


def one_body_trace(H, trunc=-4, /):
    """Reduce a one-particle Hamiltonian `b1 m1 c^2 + E + O`.

    Parameters
    ----------
    H : Expression
        Hamiltonian over symbols even in particle 2, without `b2`.
    trunc : int, optional
        Lowest effective order kept.

    Returns
    -------
    ReductionTrace
        Trace of the odd-even elimination.

    """
    for name in H.symbols():
        if H.table[name].parity.p2:
            raise fw.algebra.UsageError(f'symbol "{name}" acts on particle 2')
    if any(beta[1] for beta, _, _ in H.terms):
        raise fw.algebra.UsageError('one-body Hamiltonian contains b2')

    config = ReductionConfig(sequence=('oe',), trunc_order=trunc)
    large = rest_energy(H.table, particles=(1,))
    return reduce(H, config, large=large)


def one_body_reduce(H, trunc=-4, /):
    """Transformed one-particle Hamiltonian, see `one_body_trace`."""
    return one_body_trace(H, trunc).hamiltonian
