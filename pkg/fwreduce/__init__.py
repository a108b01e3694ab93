"""FWReduce: two-body Foldy-Wouthuysen reduction with a matrix oracle."""

import importlib


__version__ = '0.1'
__all__ = (
    'algebra',
    'cli',
    'coeff',
    'config',
    'engine',
    'golden',
    'oracle',
    'problem',
    'reference',
    'render',
)


def __getattr__(name):
    """Import a submodule listed in `__all__` when first accessed.

    Keeps `fwreduce -h` and configuration handling free of SymPy and NumPy
    imports. The symbolic modules load without katy.

    """
    if name not in __all__:
        raise AttributeError(f'module {__name__!r} has no attribute {name!r}')

    module = globals()[name] = importlib.import_module(f'.{name}', __name__)
    return module
