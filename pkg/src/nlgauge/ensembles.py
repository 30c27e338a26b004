"""Mixed states, density matrices, and the two ensemble experiments:
decomposition-dependence of nonlinear evolution, and separability of product
states under the 2D realization of the family.

A mixed state is a weighted list {(lambda_j, psi_j)}; its kernel is
W(x, y) = sum_j lambda_j psi_j(x) conj(psi_j(y)), discretized as an N x N
matrix with trace sum_i W(x_i, x_i) dx. Equal-weight mixtures of an
orthonormal pair are invariant under rotations of the pair, which supplies
pairs of distinct decompositions with identical W. Linear evolution keeps the
kernels of such pairs equal; a nonlinear member of the family does not, and
the divergence D(t) quantifies the split.
"""

from dataclasses import dataclass

import numpy as np

from .dynamics import NLSECoefficients, SimulationConfig, Trajectory, evolve
from .grid import GridSpec, l2_norm, make_grid


class InvariantViolation(RuntimeError):
    """An experiment precondition (e.g. equal kernels at t=0) failed."""


@dataclass
class MixedState:
    """Weights summing to 1 and normalized component states on one grid."""

    weights: np.ndarray
    states: list
    grid: GridSpec

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        if len(self.weights) != len(self.states):
            raise ValueError("weights and states must have equal length")
        if np.any(self.weights <= 0):
            raise ValueError("weights must be positive")
        if abs(self.weights.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {self.weights.sum()!r}")
        for j, psi in enumerate(self.states):
            nrm = l2_norm(psi, self.grid)
            if abs(nrm - 1.0) > 1e-10:
                raise ValueError(f"component {j} is not normalized: ||psi|| = {nrm!r}")


def density_matrix(m: MixedState) -> np.ndarray:
    """Kernel W(x, y) = sum_j w_j psi_j(x) conj(psi_j(y)) (1D states)."""
    if m.grid.dimension != 1:
        raise ValueError("density_matrix expects 1D component states")
    psis = np.asarray(m.states)
    return np.einsum("j,jx,jy->xy", m.weights, psis, psis.conj())


def frobenius_distance(w1: np.ndarray, w2: np.ndarray, grid: GridSpec) -> float:
    """dx-weighted Frobenius norm of the kernel difference."""
    return float(np.linalg.norm(w1 - w2) * grid.dx)


def trace_distance(w1: np.ndarray, w2: np.ndarray, grid: GridSpec) -> float:
    """(1/2) sum |eigenvalues| of the kernel difference (slower metric)."""
    eigs = np.linalg.eigvalsh((w1 - w2) * grid.dx)
    return 0.5 * float(np.sum(np.abs(eigs)))


def equivalent_decompositions(psi_a: np.ndarray, psi_b: np.ndarray,
                              angle: float, grid: GridSpec):
    """Two equal-weight decompositions with the same kernel: {psi_a, psi_b}
    and its rotation by ``angle`` inside the span. Requires an orthonormal
    input pair; the same-kernel property is self-checked at generation."""
    overlap = np.vdot(psi_a, psi_b) * grid.dx ** grid.dimension
    if abs(overlap) > 1e-10:
        raise ValueError(f"input states are not orthogonal: <a,b> = {overlap:.3e}")
    half = np.array([0.5, 0.5])
    dec_a = MixedState(half, [np.array(psi_a), np.array(psi_b)], grid)
    ca, sa = np.cos(angle), np.sin(angle)
    dec_b = MixedState(half, [ca * psi_a + sa * psi_b,
                              -sa * psi_a + ca * psi_b], grid)
    check = frobenius_distance(density_matrix(dec_a), density_matrix(dec_b), grid)
    if check > 1e-12 * max(1.0, abs(psi_a).max() ** 2):
        raise InvariantViolation(
            f"rotated decomposition kernel deviates by {check:.3e}")
    return dec_a, dec_b


def _evolve_components(c, m: MixedState, config, V):
    return [evolve(c, psi, m.grid, config, V) for psi in m.states]


def mixed_divergence(c: NLSECoefficients, dec_a: MixedState, dec_b: MixedState,
                     config: SimulationConfig, V: np.ndarray | None = None):
    """Evolve every component of both decompositions independently and return
    [(t, D(t))] with D the dx-weighted Frobenius distance of the kernels.

    Precondition: the kernels agree at t=0 (the decompositions are
    physically equivalent)."""
    grid = dec_a.grid
    d0 = frobenius_distance(density_matrix(dec_a), density_matrix(dec_b), grid)
    if d0 > 1e-10:
        raise InvariantViolation(
            f"decompositions are not equivalent at t=0: D(0) = {d0:.3e}")
    trajs_a = _evolve_components(c, dec_a, config, V)
    trajs_b = _evolve_components(c, dec_b, config, V)
    times = trajs_a[0].times
    series = []
    for i, t in enumerate(times):
        wa = _kernel_at(dec_a.weights, trajs_a, i)
        wb = _kernel_at(dec_b.weights, trajs_b, i)
        series.append((float(t), frobenius_distance(wa, wb, grid)))
    return series


def _kernel_at(weights, trajs, frame_index):
    psis = np.asarray([tr.frames[frame_index] for tr in trajs])
    return np.einsum("j,jx,jy->xy", weights, psis, psis.conj())


def tensor_product(psi1: np.ndarray, psi2: np.ndarray) -> np.ndarray:
    """Product state Psi(x, y) = psi1(x) psi2(y) of two 1D states."""
    psi1, psi2 = np.asarray(psi1), np.asarray(psi2)
    if psi1.ndim != 1 or psi2.ndim != 1 or psi1.shape != psi2.shape:
        raise ValueError("tensor_product expects two 1D states on the same grid")
    return np.multiply.outer(psi1, psi2)


def product_grid(grid: GridSpec) -> GridSpec:
    """The 2D box with the same per-axis layout as a 1D grid."""
    if grid.dimension != 1:
        raise ValueError("product_grid expects a 1D grid")
    return make_grid(2, grid.n, grid.length)


def marginal_density(psi2d: np.ndarray, grid2: GridSpec, axis: int = 0) -> np.ndarray:
    """Integrate |Psi|^2 over the other axis."""
    rho = np.abs(psi2d) ** 2
    return rho.sum(axis=1 - axis) * grid2.dx


def separability_residual(c: NLSECoefficients, psi1: np.ndarray, psi2: np.ndarray,
                          grid: GridSpec, config: SimulationConfig,
                          V1: np.ndarray | None = None,
                          V2: np.ndarray | None = None):
    """Compare the 2D family evolution of psi1 x psi2 (additive potential)
    against the tensor product of the 1D evolutions; returns [(t, L2 dist)].

    Returns the series plus the two trajectories for further diagnostics
    (e.g. marginal-density checks): (series, traj_2d, traj_1, traj_2).
    """
    grid2 = product_grid(grid)
    psi0 = tensor_product(psi1, psi2)
    v2d = None
    if V1 is not None or V2 is not None:
        vx = np.zeros(grid.n) if V1 is None else np.asarray(V1)
        vy = np.zeros(grid.n) if V2 is None else np.asarray(V2)
        v2d = vx[:, None] + vy[None, :]
    traj_2d = evolve(c, psi0, grid2, config, v2d)
    traj_1 = evolve(c, psi1, grid, config, V1)
    traj_2 = evolve(c, psi2, grid, config, V2)
    series = []
    for i, t in enumerate(traj_2d.times):
        prod = tensor_product(traj_1.frames[i], traj_2.frames[i])
        series.append((float(t), l2_norm(traj_2d.frames[i] - prod, grid2)))
    return series, traj_2d, traj_1, traj_2
