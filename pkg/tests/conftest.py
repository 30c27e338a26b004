import numpy as np
import pytest

import nlgauge as ng


def trig_packet(grid, depth=1.2, ripple=0.15, s1=0.3, s2=0.2):
    """Normalized nodeless state with band-limited log-modulus and phase.

    Being a trig polynomial in both u and s makes the state (and every gauge
    image of it) periodic-analytic with zero phase winding, so spectral
    operations on it are exact to rounding. The workhorse state for
    diagram-closure and convergence tests.
    """
    x = grid.axis_coordinate()
    length = grid.length
    u = -depth * (1.0 - np.cos(2 * np.pi * (x - length / 2) / length)) \
        + ripple * np.cos(4 * np.pi * x / length)
    s = s1 * np.sin(2 * np.pi * x / length) + s2 * np.cos(4 * np.pi * x / length)
    if grid.dimension == 2:
        u = u[:, None] + u[None, :]
        s = s[:, None] + s[None, :]
    psi = np.exp(u + 1j * s)
    return psi / ng.l2_norm(psi, grid)


@pytest.fixture
def grid64():
    return ng.make_grid(1, 64, 20.0)


@pytest.fixture
def grid128():
    return ng.make_grid(1, 128, 20.0)


@pytest.fixture
def packet64(grid64):
    return trig_packet(grid64)


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
