import io
import sys
from contextlib import redirect_stderr, redirect_stdout

import pytest

sys.path.insert(0, str(__import__("pathlib").Path(__file__).parent))

from ritz import Route, run_convergence
from ritz.cli import main as cli_main


@pytest.fixture(scope="session")
def report_lambda0():
    """Full-precision convergence report for lam=0, N=4..20 (default route)."""
    return run_convergence(0, 4, 20, 4, precision=256, route=Route.LDLT)


@pytest.fixture(scope="session")
def report_lambda1():
    """Full-precision convergence report for lam=1, N=4..20 (default route)."""
    return run_convergence(1, 4, 20, 4, precision=256, route=Route.LDLT)


def run_cli(*argv):
    """Invoke the CLI in-process; returns (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = cli_main(list(argv))
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def cli():
    return run_cli
