"""Test package initialization."""

import fwreduce
import pytest
import re


def test_version():
    """Test if the version is a dotted sequence of numbers."""
    assert re.fullmatch(r'\d+(\.\d+)*', fwreduce.__version__)


def test_lazy_submodules():
    """Test if every listed submodule imports on access."""
    for name in fwreduce.__all__:
        assert getattr(fwreduce, name).__name__ == f'fwreduce.{name}'


def test_missing_attribute():
    """Test if accessing an unknown attribute raises an error."""
    with pytest.raises(AttributeError):
        _ = fwreduce.nonexistent
