import numpy as np
import pytest

from wentzell import GaussianBump, Problem


@pytest.fixture
def showcase_problem():
    """Drift toward the wall, extracting boundary: the sign-changing configuration."""
    return Problem(mu=1.0, nu=-0.5)


@pytest.fixture
def showcase_datum():
    return GaussianBump(center=2.5, width=1.0)


@pytest.fixture
def table_csv(tmp_path):
    """Two-column CSV sampling exp(-x) on [0, 10]."""
    xs = np.linspace(0.0, 10.0, 101)
    path = tmp_path / "datum.csv"
    np.savetxt(path, np.column_stack([xs, np.exp(-xs)]), delimiter=",")
    return str(path)
