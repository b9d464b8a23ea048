"""
Pytest configuration and shared fixtures
"""
import pytest

from src.models.cube import DyadicCube
from src.models.grid import Grid
from src.services.analysis.bump import BumpProfile, build_phi_hat
from src.services.analysis.packets import PacketCache
from src.services.analysis.signals import random_test_function
from src.services.combinatorics.universe import TileUniverse
from src.services.ensemble import random_E_and_N
from src.services.operators.coefficients import TileWeights


def pytest_configure(config):
    """Register pytest markers"""
    config.addinivalue_line("markers", "unit: Unit tests")
    config.addinivalue_line("markers", "integration: Integration tests")
    config.addinivalue_line("markers", "slow: Slow running tests")


TINY_CONFIG = {
    "dim": 2,
    "grid": {"log2_length": 4, "log2_points": 6},
    "universe": {"k_min": 1, "k_max": 2, "time_box": "2:(0,0)", "freq_box": "0:(0,0)"},
    "ensemble": {
        "counting_mass": 2,
        "counting_energy": 2,
        "decompose": 1,
        "tree_inequality": 2,
        "bessel": 2,
        "weak_l2": 1,
        "sjolin": 1,
        "claim1": 1,
    },
    "tile_count": 12,
    "tree_max_tiles": 8,
    "seed": 7,
    "zeta_refinement": 1,
    "sjolin_zeta_per_axis": 2,
    "target_measure": 0.5,
}


@pytest.fixture
def tiny_config_dict():
    """Small two-dimensional config (32-tile universe on a 64² grid)"""
    import copy
    return copy.deepcopy(TINY_CONFIG)


@pytest.fixture(scope="session")
def grid_1d():
    """L = 16, 64 points, h = 1/4"""
    return Grid(1, 4, 6)


@pytest.fixture(scope="session")
def grid_2d():
    return Grid(2, 4, 6)


@pytest.fixture(scope="session")
def window_2d():
    return DyadicCube(2, (0, 0))


@pytest.fixture(scope="session")
def universe_1d():
    """Scales 1..2 in [0,4) × [0,1): 8 tiles"""
    return TileUniverse.generate(1, 1, 2, DyadicCube(2, (0,)), DyadicCube(0, (0,)))


@pytest.fixture(scope="session")
def universe_2d(window_2d):
    """Scales 1..2 in [0,4)² × [0,1)²: 32 tiles"""
    return TileUniverse.generate(2, 1, 2, window_2d, DyadicCube(0, (0, 0)))


@pytest.fixture(scope="session")
def phi_hat_1d(grid_1d):
    return build_phi_hat(BumpProfile(), grid_1d)


@pytest.fixture(scope="session")
def phi_hat_2d(grid_2d):
    return build_phi_hat(BumpProfile(), grid_2d)


@pytest.fixture(scope="session")
def cache_2d(phi_hat_2d, universe_2d):
    return PacketCache(phi_hat_2d).warm(universe_2d.tiles)


@pytest.fixture(scope="session")
def cache_1d(phi_hat_1d, universe_1d):
    return PacketCache(phi_hat_1d).warm(universe_1d.tiles)


@pytest.fixture(scope="session")
def f_2d(grid_2d):
    """Unit-norm smooth noise"""
    return random_test_function("smooth-noise", 3, grid_2d)


@pytest.fixture(scope="session")
def coeffs_2d(f_2d, universe_2d, cache_2d):
    """Coefficients ⟨f, φ_p⟩ for every universe tile"""
    return TileWeights.from_function(f_2d, universe_2d.tiles, cache_2d)


@pytest.fixture(scope="session")
def coeffs_1d(grid_1d, universe_1d, cache_1d):
    f = random_test_function("smooth-noise", 5, grid_1d)
    return TileWeights.from_function(f, universe_1d.tiles, cache_1d)


@pytest.fixture(scope="session")
def sets_2d(grid_2d, universe_2d, window_2d):
    """Seeded (E, N) with |E| = 1/2 inside the window, N from semitile-2 centers"""
    return random_E_and_N(11, grid_2d, universe_2d, 0.5, 2, window_2d)
