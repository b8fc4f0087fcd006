import numpy as np
import pytest

from fractaldyn.core import GridSpec, OrbitStatus, RasterField
from fractaldyn.fji import IterParams, render_julia


def analytic_disk(grid: GridSpec, radius: float) -> RasterField:
    """Predicate raster |z| <= radius, independent of any orbit code."""
    field = RasterField.filled(grid, OrbitStatus.ESCAPED)
    field.status[np.abs(grid.points()) <= radius] = OrbitStatus.BOUNDED
    return field


@pytest.fixture(scope="session")
def basilica_512():
    """Filled Julia set for c = -1 (fat interior, fast to classify)."""
    grid = GridSpec(0j, 3.4, 3.4, 512, 512)
    return render_julia(grid, -1 + 0j, IterParams(400, 2.0))
