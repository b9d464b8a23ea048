"""
Grid Fourier Transforms

Continuum-normalized transforms f̂(ξ) = ∫ f(x) e^{−2πi x·ξ} dx on the
centered periodic grid, plus the translation, modulation and dilation
operators acting on grid functions.

With x_i = −L/2 + i·h and ξ_k = k/L the Riemann sum reads
    f̂(ξ_k) = hⁿ (−1)^{Σk} DFT(f)[k mod N],
so both directions are a DFT with an fftshift and a checkerboard sign.
"""
import logging
from functools import lru_cache

import numpy as np
import scipy.fft

from src.models.grid import Grid, GridError, GridFunction

logger = logging.getLogger(__name__)


@lru_cache(maxsize=32)
def _checkerboard(grid: Grid) -> np.ndarray:
    sign = np.where(grid.frequency_index % 2 == 0, 1.0, -1.0)
    out = np.ones(grid.shape)
    for j in range(grid.dim):
        shape = [1] * grid.dim
        shape[j] = grid.points
        out = out * sign.reshape(shape)
    out.setflags(write=False)
    return out


def forward(f: GridFunction) -> GridFunction:
    """Space samples → frequency samples on the dual grid"""
    if f.domain != "space":
        raise GridError("forward transform expects a space-domain function")
    grid = f.grid
    spectrum = scipy.fft.fftshift(scipy.fft.fftn(f.samples))
    return GridFunction(grid, spectrum * _checkerboard(grid) * grid.cell_volume, "frequency")


def inverse(f_hat: GridFunction) -> GridFunction:
    """Frequency samples → space samples"""
    if f_hat.domain != "frequency":
        raise GridError("inverse transform expects a frequency-domain function")
    grid = f_hat.grid
    values = scipy.fft.ifftn(scipy.fft.ifftshift(f_hat.samples * _checkerboard(grid)))
    return GridFunction(grid, values / grid.cell_volume, "space")


def inverse_array(grid: Grid, spectrum: np.ndarray) -> np.ndarray:
    """Array version of inverse() for hot loops that skip GridFunction wrapping"""
    values = scipy.fft.ifftn(scipy.fft.ifftshift(spectrum * _checkerboard(grid)))
    return values / grid.cell_volume


def forward_array(grid: Grid, values: np.ndarray) -> np.ndarray:
    spectrum = scipy.fft.fftshift(scipy.fft.fftn(values))
    return spectrum * _checkerboard(grid) * grid.cell_volume


def translate(f: GridFunction, y) -> GridFunction:
    """
    T_y f(x) = f(x − y) on the torus

    Raises:
        GridError: If y is not a multiple of the grid spacing
    """
    grid = f.grid
    shifts = []
    for yj in np.atleast_1d(np.asarray(y, dtype=float)):
        steps = yj / grid.spacing
        if steps != np.round(steps):
            raise GridError(f"translation {yj} is not a multiple of h = {grid.spacing}")
        shifts.append(int(np.round(steps)))
    if len(shifts) != grid.dim:
        raise GridError(f"translation must have {grid.dim} components")
    return GridFunction(grid, np.roll(f.samples, shifts, axis=tuple(range(grid.dim))))


def modulate(f: GridFunction, eta) -> GridFunction:
    """M_η f(x) = e^{2πi η·x} f(x)"""
    grid = f.grid
    eta = np.asarray(eta, dtype=float)
    phase = np.zeros(grid.shape)
    for xj, ej in zip(grid.coordinates(), eta):
        phase = phase + xj * ej
    return GridFunction(grid, f.samples * np.exp(2j * np.pi * phase))


def dilate(f: GridFunction, log2_factor: int) -> GridFunction:
    """
    L²-normalized dilation D_λ f(x) = λ^{−n/2} f(x/λ), λ = 2^log2_factor

    Frequency side (D_λ f)̂(ξ) = λ^{n/2} f̂(λξ). Spreading (λ > 1) subsamples
    the spectrum; shrinking (λ < 1) evaluates f̂ on a finer lattice by
    zero-padding f, treating f as supported in the box. Both are exact for
    functions that are negligible outside the box and band-limited within
    the span.
    """
    grid = f.grid
    n = grid.dim
    if log2_factor == 0:
        return f
    N = grid.points
    k = grid.frequency_index
    if log2_factor > 0:
        step = 1 << log2_factor
        f_hat = forward(f).samples
        src = k * step
        valid = (src >= -N // 2) & (src < N // 2)
        idx = np.where(valid, src + N // 2, 0)
        out = f_hat
        for axis in range(n):
            out = np.take(out, idx, axis=axis)
            shape = [1] * n
            shape[axis] = N
            out = out * valid.reshape(shape)
        spectrum = out * (2.0 ** (log2_factor * n / 2))
    else:
        big = Grid(n, grid.log2_length - log2_factor, grid.log2_points - log2_factor)
        padded = np.zeros(big.shape, dtype=np.complex128)
        offset = (big.points - N) // 2
        padded[tuple(slice(offset, offset + N) for _ in range(n))] = f.samples
        big_hat = forward_array(big, padded)
        # big lattice spacing is 1/(2^j·L); ξ/2^j at ξ = k/L is big index k
        centre = big.points // 2
        sel = k + centre
        out = big_hat
        for axis in range(n):
            out = np.take(out, sel, axis=axis)
        spectrum = out * (2.0 ** (log2_factor * n / 2))
    return inverse(GridFunction(grid, spectrum, "frequency"))
