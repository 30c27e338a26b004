"""Right-hand side and time integration of the 10-coefficient nonlinear family

    i d/dt psi = (nu1 lap + mu0 V) psi + i nu2 R2[psi] psi
                 + sum_i mu_i R_i[psi] psi
                 + alpha1 log|psi|^2 psi + alpha2 (arg psi) psi

where R1..R5 are the quotient functionals of :mod:`nlgauge.functionals` built
with the equation's own nu1, and arg is the unwrapped phase. Every term except
the i*nu2 one acts as a real multiplier and conserves the norm pointwise; the
nu2 term adds 2*nu2*lap(rho) to d/dt rho, whose integral vanishes on the
periodic box. Hence the norm is conserved for every coefficient setting.

Integration is classical RK4, uniform across the family. The linear equation
has an exact split-step propagator (exact to rounding when V == 0) used as the
oracle for linearizability experiments.
"""

from dataclasses import dataclass, field, replace

import numpy as np
from scipy import fft as _fft

from .functionals import DEFAULT_POLICY, RegularizationPolicy, density, unwrap_phase
from .grid import GridSpec, l2_norm


class NumericalBlowupError(RuntimeError):
    """Raised when the state leaves the finite/normalized regime."""


@dataclass(frozen=True)
class NLSECoefficients:
    """The ten real coefficients. Defaults give the free linear equation."""

    nu1: float = -0.5
    nu2: float = 0.0
    mu0: float = 0.0
    mu1: float = 0.0
    mu2: float = 0.0
    mu3: float = 0.0
    mu4: float = 0.0
    mu5: float = 0.0
    alpha1: float = 0.0
    alpha2: float = 0.0

    def __post_init__(self):
        if not all(np.isfinite(v) for v in self.as_array()):
            raise ValueError("coefficients must be finite")

    def linear_case(self) -> bool:
        """True when only nu1 and mu0 may be nonzero."""
        return (self.nu2 == self.mu1 == self.mu2 == self.mu3 == self.mu4
                == self.mu5 == self.alpha1 == self.alpha2 == 0.0)

    def as_array(self) -> np.ndarray:
        return np.array([self.nu1, self.nu2, self.mu0, self.mu1, self.mu2,
                         self.mu3, self.mu4, self.mu5, self.alpha1, self.alpha2])

    @classmethod
    def from_array(cls, a) -> "NLSECoefficients":
        a = [float(v) for v in a]
        return cls(nu1=a[0], nu2=a[1], mu0=a[2], mu1=a[3], mu2=a[4],
                   mu3=a[5], mu4=a[6], mu5=a[7], alpha1=a[8], alpha2=a[9])


@dataclass(frozen=True)
class SimulationConfig:
    """Time stepping and output cadence."""

    dt: float
    t_final: float
    output_every: int = 1
    policy: RegularizationPolicy = field(default_factory=RegularizationPolicy)
    force_dt: bool = False

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not self.t_final > 0:
            raise ValueError("t_final must be positive")
        if self.output_every < 1:
            raise ValueError("output_every must be >= 1")

    def n_steps(self) -> int:
        return max(1, int(round(self.t_final / self.dt)))

    def refined(self, factor: int = 2) -> "SimulationConfig":
        return replace(self, dt=self.dt / factor,
                       output_every=self.output_every * factor)


@dataclass
class Trajectory:
    """Output frames (t=0 and t=t_final always included) plus diagnostics."""

    grid: GridSpec
    times: np.ndarray
    frames: list
    norms: np.ndarray
    regularized_fractions: np.ndarray

    def __len__(self):
        return len(self.frames)

    def final(self) -> np.ndarray:
        return self.frames[-1]

    @property
    def norm_drift(self) -> float:
        return float(np.max(np.abs(self.norms - self.norms[0])))


def stability_bound(c: NLSECoefficients, grid: GridSpec) -> float:
    """Heuristic explicit-scheme bound 0.2*dx^2 / max(|nu1|, |nu2|, dx^2)."""
    dx2 = grid.dx ** 2
    return 0.2 * dx2 / max(abs(c.nu1), abs(c.nu2), dx2)


def rhs(c: NLSECoefficients, psi: np.ndarray, grid: GridSpec,
        V: np.ndarray | None = None,
        policy: RegularizationPolicy = DEFAULT_POLICY) -> np.ndarray:
    """d/dt psi for the family; shares FFTs across the functional terms."""
    psi_k = _fft.fftn(psi)
    lap_psi = _fft.ifftn(-grid.k_squared_total * psi_k)
    h = c.nu1 * lap_psi
    if c.mu0 != 0.0 and V is not None:
        h = h + c.mu0 * V * psi

    need_rho_derivs = c.nu2 != 0.0 or c.mu2 != 0.0 or c.mu4 != 0.0 or c.mu5 != 0.0
    need_j = c.mu1 != 0.0 or c.mu3 != 0.0 or c.mu4 != 0.0
    need_rho = need_rho_derivs or need_j or c.alpha1 != 0.0

    if need_rho:
        rho = density(psi)
        eps = policy.floor(rho)
        rho_s = np.maximum(rho, eps)
        # Below the floor the quotient numerators (spectral globals) do not
        # shrink with the local density, so numerator/eps would pump invisible
        # tail amplitudes until they blow up. The quotient terms are switched
        # off there; on a nodeless state the gate never engages.
        valid = rho > eps
        gate = None if valid.all() else valid.astype(float)

    def _gated(field):
        return field if gate is None else field * gate

    if need_rho_derivs:
        rho_k = _fft.fftn(rho)
        lap_rho = _fft.ifftn(-grid.k_squared_total * rho_k).real
        if c.nu2 != 0.0 or c.mu2 != 0.0:
            r2 = _gated(lap_rho / rho_s)
            if c.nu2 != 0.0:
                h = h + 1j * c.nu2 * r2 * psi
            if c.mu2 != 0.0:
                h = h + c.mu2 * r2 * psi
        if c.mu4 != 0.0 or c.mu5 != 0.0:
            grad_rho = [
                _fft.ifftn(1j * grid.wavenumbers(a, zero_nyquist=True) * rho_k).real
                for a in range(grid.dimension)
            ]
            if c.mu5 != 0.0:
                r5 = _gated(sum(g * g for g in grad_rho) / rho_s ** 2)
                h = h + c.mu5 * r5 * psi

    if need_j:
        jvec = [
            -2.0 * c.nu1 * np.imag(
                np.conj(psi)
                * _fft.ifftn(1j * grid.wavenumbers(a, zero_nyquist=True) * psi_k))
            for a in range(grid.dimension)
        ]
        if c.mu1 != 0.0:
            div_j = np.zeros(grid.shape)
            for a in range(grid.dimension):
                div_j += _fft.ifftn(
                    1j * grid.wavenumbers(a, zero_nyquist=True) * _fft.fftn(jvec[a])).real
            h = h + c.mu1 * _gated(div_j / rho_s) * psi
        if c.mu3 != 0.0:
            r3 = _gated(sum(j * j for j in jvec) / rho_s ** 2)
            h = h + c.mu3 * r3 * psi
        if c.mu4 != 0.0:
            r4 = _gated(sum(j * g for j, g in zip(jvec, grad_rho)) / rho_s ** 2)
            h = h + c.mu4 * r4 * psi

    if c.alpha1 != 0.0:
        h = h + c.alpha1 * np.log(rho_s) * psi
    if c.alpha2 != 0.0:
        rho_a2 = density(psi) if not need_rho else rho
        valid = rho_a2 > policy.floor(rho_a2)
        h = h + c.alpha2 * unwrap_phase(psi, valid=valid) * psi

    return -1j * h


def step_rk4(c: NLSECoefficients, psi: np.ndarray, grid: GridSpec, dt: float,
             V: np.ndarray | None = None,
             policy: RegularizationPolicy = DEFAULT_POLICY) -> np.ndarray:
    """One classical Runge-Kutta step; local error O(dt^5)."""
    k1 = rhs(c, psi, grid, V, policy)
    k2 = rhs(c, psi + 0.5 * dt * k1, grid, V, policy)
    k3 = rhs(c, psi + 0.5 * dt * k2, grid, V, policy)
    k4 = rhs(c, psi + dt * k3, grid, V, policy)
    return psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _check_initial(psi0: np.ndarray, grid: GridSpec) -> None:
    if psi0.shape != grid.shape:
        raise ValueError(f"initial state shape {psi0.shape} != grid shape {grid.shape}")
    if not np.all(np.isfinite(psi0)):
        raise ValueError("initial state contains non-finite entries")
    nrm = l2_norm(psi0, grid)
    if abs(nrm - 1.0) > 1e-10:
        raise ValueError(f"initial state must be normalized, got ||psi0|| = {nrm!r}")


def _run_steps(stepper, psi0, grid, config, label):
    """Shared driver: step, watch for NaN/norm blow-up, collect output frames."""
    n_steps = config.n_steps()
    policy = config.policy
    times = [0.0]
    frames = [np.array(psi0, dtype=complex)]
    norms = [l2_norm(psi0, grid)]
    fracs = [policy.regularized_fraction(density(psi0))]
    psi = frames[0]
    for step in range(1, n_steps + 1):
        psi = stepper(psi)
        if not np.all(np.isfinite(psi)):
            raise NumericalBlowupError(
                f"{label}: non-finite state at step {step} (t={step * config.dt:g}); "
                "try a smaller dt")
        if step % config.output_every == 0 or step == n_steps:
            nrm = l2_norm(psi, grid)
            if abs(nrm - norms[0]) > 1e-3:
                raise NumericalBlowupError(
                    f"{label}: norm drifted by {abs(nrm - norms[0]):.3e} at "
                    f"t={step * config.dt:g}; the run is unresolved")
            times.append(step * config.dt)
            frames.append(np.array(psi))
            norms.append(nrm)
            fracs.append(policy.regularized_fraction(density(psi)))
    return Trajectory(grid=grid, times=np.array(times), frames=frames,
                      norms=np.array(norms),
                      regularized_fractions=np.array(fracs))


def evolve(c: NLSECoefficients, psi0: np.ndarray, grid: GridSpec,
           config: SimulationConfig, V: np.ndarray | None = None) -> Trajectory:
    """Integrate the family with RK4 up to t_final.

    Norm is never renormalized during the run; drift is a diagnostic and a
    drift beyond 1e-3 aborts the run as unresolved.
    """
    _check_initial(psi0, grid)
    bound = stability_bound(c, grid)
    if config.dt > bound and not config.force_dt:
        raise ValueError(
            f"dt={config.dt:g} exceeds the stability bound {bound:g} "
            "(pass force_dt=True to override)")
    policy = config.policy
    return _run_steps(lambda p: step_rk4(c, p, grid, config.dt, V, policy),
                      psi0, grid, config, "evolve")


def evolve_linear_exact(nu1: float, psi0: np.ndarray, grid: GridSpec,
                        config: SimulationConfig, V: np.ndarray | None = None,
                        mu0: float = 1.0) -> Trajectory:
    """Strang split-step for i d/dt psi = (nu1 lap + mu0 V) psi.

    The kinetic factor is the exact Fourier phase, so with V == 0 the
    propagator is exact to rounding for any dt; with V != 0 it is the
    second-order Strang composition. No stability bound applies.
    """
    _check_initial(psi0, grid)
    kinetic = np.exp(1j * nu1 * grid.k_squared_total * config.dt)
    if V is None or mu0 == 0.0:
        def stepper(p):
            return _fft.ifftn(kinetic * _fft.fftn(p))
    else:
        half_v = np.exp(-0.5j * mu0 * V * config.dt)

        def stepper(p):
            return half_v * _fft.ifftn(kinetic * _fft.fftn(half_v * p))
    return _run_steps(stepper, psi0, grid, config, "evolve_linear_exact")
