"""Golden files storing reference expressions as problem-file text."""

import fwreduce as fw
import katy
import logging
import pathlib
import re


logger = logging.getLogger(__name__)


def table_to_json(table, /):
    """Convert a symbol table to a JSON-compatible dictionary."""
    symbols = [
        {
            'name': s.name,
            'parity': str(s.parity),
            'c_order': s.c_order,
            'hermitian': s.hermitian,
        }
        for s in table.symbols
    ]
    relations = sorted(sorted(pair) for pair in table.relations)
    return {'symbols': symbols, 'relations': relations}


def table_from_json(d, /):
    """Build a symbol table from its JSON dictionary."""
    table = fw.algebra.SymbolTable()
    for s in d['symbols']:
        decl = fw.algebra.SymbolDecl(**s)
        table = fw.algebra.declare_symbol(table, decl)
    for a, b in d['relations']:
        table = fw.algebra.declare_relation(table, a, b)
    return table


def path(conf, /, id):
    """Construct the golden path of a reference identifier.

    Parameters
    ----------
    conf : os.PathLike or dict
        Configuration.
    id : str
        Reference identifier.

    Returns
    -------
    pathlib.Path
        Golden path.

    """
    if not isinstance(conf, dict):
        conf = fw.config.load(conf)

    folder = fw.config.qualify_path(conf['golden']['folder'])
    return folder / conf['golden']['path'].format(name=id)


def name(conf, /, path):
    """Extract the reference identifier from a golden path."""
    if not isinstance(conf, dict):
        conf = fw.config.load(conf)

    match = re.search(conf['golden']['regex'], str(path))
    if match is None:
        raise ValueError(f'path "{path}" does not name a golden file')
    return match['name']


def list(conf, /):
    """List golden paths in ascending order.

    Raises
    ------
    FileNotFoundError
        If the golden folder holds no files.

    """
    if not isinstance(conf, dict):
        conf = fw.config.load(conf)

    folder = fw.config.qualify_path(conf['golden']['folder'])
    files = sorted(folder.glob(conf['golden']['glob']))
    if not files:
        raise FileNotFoundError(f'no golden files in "{folder}"')
    return files


def save(conf, /, id, expr=None):
    """Write a reference and its table to a golden file.

    The parts are stored as problem-file expressions, so that golden files
    can be read and reviewed by hand. Long parts may be split into a list of
    lines, which `load` joins with spaces.

    Parameters
    ----------
    conf : os.PathLike or dict
        Configuration.
    id : str
        Reference identifier.
    expr : Expression, optional
        Expression to store as a single part. Defaults to the labeled parts
        of the built reference.

    Returns
    -------
    pathlib.Path
        Written path.

    """
    if expr is None:
        parts = fw.reference.reference_parts(id)
    else:
        parts = {'a': expr}

    table = next(iter(parts.values())).table
    out = path(conf, id)
    out.parent.mkdir(parents=True, exist_ok=True)
    data = {
        'id': id,
        'table': table_to_json(table),
        'parts': {k: fw.render.render(x) for k, x in parts.items()},
    }
    katy.io.save(data, out)
    logger.info('saved %d parts of %s to "%s"', len(parts), id, out)
    return out


def load(conf, /, id):
    """Read a reference expression from its golden file.

    Returns
    -------
    Expression
        Sum of the stored parts.

    Raises
    ------
    FileNotFoundError
        If there is no golden file for the identifier.
    ValueError
        If the file stores no parts.

    """
    f = path(conf, id)
    if not pathlib.Path(f).exists():
        raise FileNotFoundError(f'no golden file "{f}" for {id}')

    data = katy.io.load(f)
    table = table_from_json(data['table'])
    if not data['parts']:
        raise ValueError(f'golden file "{f}" has no parts')

    out = fw.algebra.zero(table)
    for label, text in data['parts'].items():
        if not isinstance(text, str):
            text = ' '.join(text)
        logger.debug('parsing part %s of %s', label, id)
        out += fw.problem.parse_expression(text, table)

    logger.info('loaded golden %s from "%s"', id, f)
    return out


def check(conf, /, id):
    """Compare a golden file with the freshly built reference."""
    stored = load(conf, id)
    built = fw.reference.reference_expression(id, stored.table)
    return fw.reference.diff_report(built, stored)
