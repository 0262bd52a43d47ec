import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from maxcone.params import SurfaceParams


@pytest.fixture
def p10():
    """Minimal admissible instance: one cone on the positive axis."""
    return SurfaceParams(m=1, n=0, a=(1, 2), alpha=(1,))


@pytest.fixture
def p11():
    """Symmetric (1, 1) with a horizontal end at 0 (product telescopes)."""
    return SurfaceParams(m=1, n=1, a=(1, 2), b=(-1, -2), alpha=(1,), beta=(1,))


@pytest.fixture
def p21():
    """Mixed-direction (2, 1)."""
    return SurfaceParams(
        m=2, n=1, a=(1.0, 1.8, 2.5, 3.6), b=(-1.2, -2.4), alpha=(1, -1), beta=(1,)
    )


@pytest.fixture
def p22():
    return SurfaceParams(
        m=2, n=2, a=(1, 2, 3, 4), b=(-1, -2, -3, -4), alpha=(1, -1), beta=(1, -1)
    )
