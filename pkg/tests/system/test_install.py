"""Tests for package install."""

import fwreduce
import subprocess
import sys


def test_install_package(tmp_path):
    """Test install from requirements file and command-line version."""
    # Paths.
    venv = tmp_path
    pip = venv / 'bin' / 'pip'
    python = venv / 'bin' / 'python'

    # Helper.
    def run(*f):
        env = dict(PIP_CACHE_DIR=str(venv / 'cache'))
        p = subprocess.run(f, env=env, capture_output=True, text=True)
        assert not p.returncode, p.stderr
        return p.stdout

    # Virtual environment.
    run(sys.executable, '-m', 'venv', venv)
    run(pip, 'install', '-r', 'requirements.txt')
    out = run(python, '-m', 'fwreduce.cli', '-V')
    assert out.strip() == fwreduce.__version__
