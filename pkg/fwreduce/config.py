"""Layered JSON settings. Importable without SymPy or NumPy installed."""

import json
import logging
import os
import pathlib


logger = logging.getLogger(__name__)
DEFAULTS = 'config/defaults.json'
SECTIONS = ('reduction', 'numcheck', 'render', 'golden')


def _read(path):
    with open(path) as f:
        d = json.load(f)
    if not isinstance(d, dict):
        raise ValueError(f'settings file "{path}" does not hold a dict')

    unknown = set(d).difference(SECTIONS)
    if unknown:
        logger.warning('file "%s" has unknown sections %s', path, unknown)
    return d


def load(*files):
    """Read reduction, oracle, rendering, and golden-file settings.

    Starts from `DEFAULTS`, unless falsy, then merges each file in turn with
    `merge`, so later files take precedence.

    Parameters
    ----------
    *files : os.PathLike, optional
        JSON files holding a `dict` keyed by section. Passed through
        `qualify_path`.

    Returns
    -------
    dict
        Settings.

    """
    out = _read(qualify_path(DEFAULTS)) if DEFAULTS else {}
    for f in files:
        out = merge(out, _read(qualify_path(f)))
        logger.info('merged settings from "%s"', f)

    return out


def merge(old, new):
    """Merge settings into `old`, in place.

    Sections merge key by key. A section of `new` setting `clear` to True
    replaces the section of `old` instead.

    """
    for k, v in new.items():
        if not isinstance(v, dict) or not isinstance(old.get(k), dict):
            old[k] = v
        elif v.pop('clear', False):
            logger.info('replacing settings section "%s"', k)
            old[k] = v
        else:
            merge(old[k], v)

    return old


def cast(x, /):
    """Convert an option string to a setting value.

    Comma-separated strings become lists of values. Otherwise 'true' and
    'false' become booleans, and the first of `int`, `float`, `str` that
    accepts the string converts it.

    """
    x = x.strip()
    if ',' in x:
        return [cast(s) for s in x.split(',') if s.strip()]

    booleans = {'true': True, 'false': False}
    if x in booleans:
        return booleans[x]

    for t in (int, float):
        try:
            return t(x)
        except ValueError:
            continue
    return x


def argparse(config, /, *options):
    """Apply 'section:key=value' option strings to settings, in place.

    Used for command-line `-s` options, the command flags that map onto
    settings, and `set` statements of problem files. Values go through
    `cast`.

    Parameters
    ----------
    config : dict
        Settings to update.
    *options : sequence of str
        Options. Nested keys separated by colons must exist already.

    Raises
    ------
    ValueError
        For options without a single '=' or setting unknown keys.

    """
    for option in options:
        path, sep, value = option.partition('=')
        if not sep or '=' in value:
            raise ValueError(f'option "{option}" is not of form key=value')

        *parents, key = path.strip().split(':')
        sub = config
        for k in parents:
            sub = sub.get(k) if isinstance(sub, dict) else None
        if not isinstance(sub, dict) or key not in sub:
            raise ValueError(f'option "{option}" sets an unknown key')

        sub[key] = cast(value)
        logger.debug('set option %s', option)


def qualify_path(path):
    """Resolve a relative path against `FWREDUCE_HOME` if it does not exist.

    Lets the command run from any directory while finding the default
    settings, problem files, and golden folder of the checkout that
    `FWREDUCE_HOME` names. Absolute and existing paths stay unchanged.

    Parameters
    ----------
    path : os.PathLike
        Path.

    Returns
    -------
    pathlib.Path
        Path, prefixed with `FWREDUCE_HOME` if applicable.

    """
    p = pathlib.Path(path)
    if p.is_absolute() or p.exists():
        return p

    home = os.getenv('FWREDUCE_HOME')
    if not home:
        logger.debug('path "%s" not found and FWREDUCE_HOME unset', p)
        return p

    logger.info('resolving "%s" against FWREDUCE_HOME="%s"', p, home)
    return home / p
