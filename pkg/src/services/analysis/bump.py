"""
Flat-top Bump

φ̂ is a tensor product of even 1-D profiles equal to 1 on [−a, a] and 0
outside (−b, b), with a C^∞ transition built from e^{−1/t}.
"""
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from src.models.grid import Grid, GridError, GridFunction


@dataclass(frozen=True)
class BumpProfile:
    """1-D flat-top profile; inner/outer radii default to 9/100 and 1/10"""

    inner: Fraction = Fraction(9, 100)
    outer: Fraction = Fraction(1, 10)

    def __post_init__(self):
        if not 0 < self.inner < self.outer:
            raise ValueError(f"need 0 < inner < outer, got {self.inner}, {self.outer}")

    def evaluate_1d(self, t) -> np.ndarray:
        a, b = float(self.inner), float(self.outer)
        u = (np.abs(np.asarray(t, dtype=float)) - a) / (b - a)
        inside = np.clip(u, 0.0, 1.0)
        up, down = _edge(1.0 - inside), _edge(inside)
        transition = up / (up + down)
        return np.where(u <= 0.0, 1.0, np.where(u >= 1.0, 0.0, transition))

    def evaluate(self, *axes) -> np.ndarray:
        """Product of 1-D profiles over broadcastable per-axis arrays"""
        out = np.ones(())
        for t in axes:
            out = out * self.evaluate_1d(t)
        return out

    def l2_norm_sq_1d(self, samples: int = 1 << 16) -> float:
        """∫ φ̂¹(t)² dt by a fine Riemann sum (compactly supported, smooth)"""
        b = float(self.outer)
        t = np.linspace(-b, b, samples, endpoint=False)
        return float(np.sum(self.evaluate_1d(t) ** 2) * (2 * b / samples))


def _edge(u: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", over="ignore"):
        return np.where(u > 0.0, np.exp(-1.0 / np.where(u > 0.0, u, 1.0)), 0.0)


@dataclass(frozen=True)
class PhiHat(GridFunction):
    """Frequency samples of φ̂ that also remember the profile they came from"""

    profile: BumpProfile = field(default_factory=BumpProfile)


def build_phi_hat(profile: BumpProfile, grid: Grid) -> PhiHat:
    """
    Sample φ̂ on the dual frequency grid

    Raises:
        GridError: If the frequency span does not strictly contain [−b, b]ⁿ
    """
    if not grid.frequency_span > float(profile.outer):
        raise GridError(
            f"frequency span {grid.frequency_span} must exceed the bump radius {float(profile.outer)}"
        )
    values = profile.evaluate(*grid.frequencies())
    return PhiHat(grid, np.broadcast_to(values, grid.shape), "frequency", profile)
