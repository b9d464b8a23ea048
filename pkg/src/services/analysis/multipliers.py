"""
Homogeneous Multipliers

Degree-0 homogeneous symbols m: ℝⁿ∖{0} → ℂ evaluated on arrays of
frequency vectors (last axis = coordinates).
"""
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.special import erf


class SingularMultiplierError(ValueError):
    """Raised when a multiplier is evaluated at the origin without a convention"""
    pass


@dataclass(frozen=True)
class Multiplier:
    """Named homogeneous degree-0 symbol"""

    name: str
    symbol: Callable[[np.ndarray, np.ndarray], np.ndarray]
    origin: Optional[complex] = None  # continuous extension to ξ = 0, if any

    def __call__(self, xi: np.ndarray, origin_value: Optional[complex] = None) -> np.ndarray:
        """
        Evaluate m(ξ) for an array of shape (..., n)

        Args:
            xi: Frequency vectors
            origin_value: Value used where ξ = 0; None makes ξ = 0 an error

        Raises:
            SingularMultiplierError: If ξ = 0 occurs and origin_value is None
        """
        xi = np.asarray(xi, dtype=float)
        radius = np.sqrt(np.sum(xi * xi, axis=-1))
        at_origin = radius == 0.0
        if np.any(at_origin) and origin_value is None:
            raise SingularMultiplierError(f"multiplier {self.name} evaluated at ξ = 0")
        safe = np.where(at_origin, 1.0, radius)
        values = np.asarray(self.symbol(xi, safe), dtype=np.complex128)
        if np.any(at_origin):
            values = np.where(at_origin, origin_value, values)
        return values


def riesz(j: int) -> Multiplier:
    """m(ξ) = ξ_j/|ξ| (j is 1-based)"""
    if j < 1:
        raise ValueError(f"riesz index must be >= 1, got {j}")
    return Multiplier(f"riesz_{j}", lambda xi, radius: xi[..., j - 1] / radius)


def constant_one() -> Multiplier:
    return Multiplier("constant_one", lambda xi, radius: np.ones(radius.shape), origin=1.0)


def halfspace_sign(sharpness: float = 4.0) -> Multiplier:
    """Smoothed sign(ξ₁): erf(κ ξ₁/|ξ|)/erf(κ)"""
    norm = erf(sharpness)
    return Multiplier(
        "halfspace_sign",
        lambda xi, radius: erf(sharpness * xi[..., 0] / radius) / norm,
    )


def get_multiplier(name: str, dim: int) -> Multiplier:
    """
    Look up a built-in multiplier by name

    Raises:
        ValueError: If the name is unknown or the Riesz index exceeds dim
    """
    if name == "constant_one":
        return constant_one()
    if name == "halfspace_sign":
        return halfspace_sign()
    if name.startswith("riesz_"):
        try:
            j = int(name.split("_", 1)[1])
        except ValueError as e:
            raise ValueError(f"Unknown multiplier: {name}") from e
        if not 1 <= j <= dim:
            raise ValueError(f"riesz index must lie in 1..{dim}, got {j}")
        return riesz(j)
    raise ValueError(f"Unknown multiplier: {name}")
