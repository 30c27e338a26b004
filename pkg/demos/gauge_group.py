"""The nonlinear gauge group in action.

Applies transforms to random nodeless states and checks, numerically, the
three statements that make the family of maps a symmetry group of the
position density: the density never changes, parameters compose, and the
composed map equals the two applications in sequence.
"""

import numpy as np

import nlgauge as ng
from nlgauge import GaugeTransform, apply_gauge, compose, invert

rng = np.random.default_rng(7)
grid = ng.make_grid(1, 128, 20.0)

print("density invariance, 1000 random (state, transform) pairs:")
worst = 0.0
for _ in range(1000):
    psi = ng.states.random_nodeless_field(grid, rng)
    g = GaugeTransform(gamma=rng.uniform(-5, 5),
                       lam=rng.choice([-1, 1]) * 10.0 ** rng.uniform(-1, 1),
                       theta=rng.uniform(-3, 3))
    rho = ng.density(psi)
    worst = max(worst, np.max(np.abs(ng.density(apply_gauge(g, psi)) - rho)) / rho.max())
print(f"  worst relative deviation: {worst:.3e}")

g1 = GaugeTransform(1.0, 5.0)
g2 = GaugeTransform(3.0, 2.0)
comp = compose(g2, g1)
print(f"\ncomposition (3,2,0) o (1,5,0) -> gamma={comp.gamma}, lam={comp.lam}")
inv = invert(GaugeTransform(1.0, 2.0))
print(f"inverse of (1,2,0)           -> gamma={inv.gamma}, lam={inv.lam}")
print(f"(0,-1,0) is an involution    -> {invert(GaugeTransform(0.0, -1.0))}")

print("\nfunctional homomorphism on a random nodeless state:")
psi = ng.states.random_nodeless_field(grid, rng)
g1 = GaugeTransform(0.8, 1.4, 0.05)
g2 = GaugeTransform(-0.5, 0.7, -0.02)
two = apply_gauge(g2, apply_gauge(g1, psi))
one = apply_gauge(compose(g2, g1), psi)
print(f"  |apply(g2) o apply(g1) - apply(g2 o g1)|_max = {np.max(np.abs(two - one)):.3e}")
back = apply_gauge(invert(g1), apply_gauge(g1, psi))
print(f"  |apply(g1^-1) o apply(g1) - id|_max          = {np.max(np.abs(back - psi)):.3e}")
