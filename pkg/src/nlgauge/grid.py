"""Periodic uniform grids in 1D/2D with spectral differentiation and quadrature.

Fields are plain numpy arrays of shape ``grid.shape``; the grid object carries
the geometry and the cached wavenumber layout. All derivatives are FFT-based,
hence exact (to rounding) on resolvable Fourier modes. The Nyquist mode is
zeroed for odd-order derivatives, the standard symmetric convention.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import fft as _fft


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic box: ``n`` points per axis on ``[0, length)``."""

    dimension: int
    n: int
    length: float

    @property
    def dx(self) -> float:
        return self.length / self.n

    @property
    def shape(self) -> tuple:
        return (self.n,) * self.dimension

    @property
    def npoints(self) -> int:
        return self.n ** self.dimension

    def axis_coordinate(self, axis: int = 0) -> np.ndarray:
        """Coordinates x_i = i*dx along one axis (periodic: x_n == x_0)."""
        return np.arange(self.n) * self.dx

    def coordinates(self):
        """1D: coordinate array. 2D: (X, Y) meshgrid with 'ij' indexing."""
        x = self.axis_coordinate()
        if self.dimension == 1:
            return x
        return np.meshgrid(x, x, indexing="ij")

    @cached_property
    def _k(self) -> np.ndarray:
        # wavenumbers k in {-n/2+1, ..., n/2} * (2*pi/length), fft layout
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)

    @cached_property
    def _k_odd(self) -> np.ndarray:
        # Nyquist zeroed: the convention for odd-order derivatives
        k = self._k.copy()
        k[self.n // 2] = 0.0
        return k

    def wavenumbers(self, axis: int = 0, zero_nyquist: bool = False) -> np.ndarray:
        """Spectral wavenumbers along ``axis``, broadcast to the grid rank."""
        k = self._k_odd if zero_nyquist else self._k
        if self.dimension == 1:
            return k
        shape = [1] * self.dimension
        shape[axis] = self.n
        return k.reshape(shape)

    @cached_property
    def k_squared_total(self) -> np.ndarray:
        """Sum of k_i^2 over axes (the symbol of -Laplacian)."""
        total = np.zeros(self.shape)
        for axis in range(self.dimension):
            total = total + self.wavenumbers(axis) ** 2
        return total


def make_grid(dimension: int, n: int, length: float) -> GridSpec:
    """Build a validated periodic grid.

    Requires dimension in {1, 2}, even n >= 8, length > 0.
    """
    if dimension not in (1, 2):
        raise ValueError(f"dimension must be 1 or 2, got {dimension}")
    if n < 8:
        raise ValueError(f"n must be >= 8, got {n}")
    if n % 2 != 0:
        raise ValueError(f"n must be even for the spectral layout, got {n}")
    if not length > 0:
        raise ValueError(f"length must be positive, got {length}")
    return GridSpec(dimension=dimension, n=int(n), length=float(length))


def ensure_field(f: np.ndarray, grid: GridSpec, name: str = "field") -> np.ndarray:
    """Check shape and finiteness of a field; returns the array unchanged."""
    f = np.asarray(f)
    if f.shape != grid.shape:
        raise ValueError(f"{name} has shape {f.shape}, expected {grid.shape}")
    if not np.all(np.isfinite(f)):
        raise ValueError(f"{name} contains non-finite entries")
    return f


def differentiate(f: np.ndarray, grid: GridSpec, axis: int = 0, order: int = 1) -> np.ndarray:
    """Spectral derivative of given order (1 or 2) along an axis."""
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    if not 0 <= axis < grid.dimension:
        raise ValueError(f"axis {axis} out of range for dimension {grid.dimension}")
    fk = _fft.fft(f, axis=axis)
    if order == 1:
        mult = 1j * grid.wavenumbers(axis, zero_nyquist=True)
    else:
        mult = -grid.wavenumbers(axis) ** 2
    return _fft.ifft(mult * fk, axis=axis)


def laplacian(f: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Spectral Laplacian (sum of second derivatives over all axes)."""
    fk = _fft.fftn(f)
    return _fft.ifftn(-grid.k_squared_total * fk)


def integrate(f: np.ndarray, grid: GridSpec) -> float:
    """Rectangle-rule quadrature of a real field (exact trapezoid on a periodic grid)."""
    f = np.asarray(f)
    if np.iscomplexobj(f):
        raise ValueError("integrate expects a real field; handle real/imag parts separately")
    return float(np.sum(f) * grid.dx ** grid.dimension)


def inner_product(f: np.ndarray, g: np.ndarray, grid: GridSpec) -> complex:
    """L2 inner product <f, g> = sum conj(f) g dx^d."""
    return complex(np.vdot(f, g) * grid.dx ** grid.dimension)


def l2_norm(f: np.ndarray, grid: GridSpec) -> float:
    """L2 norm with the grid measure."""
    return float(np.sqrt(np.sum(np.abs(f) ** 2) * grid.dx ** grid.dimension))
