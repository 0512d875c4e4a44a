"""Level-set field utilities: smoothed characteristic functions, initial
fields, clamping to [-1, 1] and volume measurement."""
from dataclasses import dataclass

import numpy as np

# 3-point Gauss rule on triangles (degree 2), barycentric coordinates
QUAD_BARY = np.array([
    [2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0],
    [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0],
    [1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0],
])
QUAD_WEIGHTS = np.full(3, 1.0 / 3.0)


@dataclass(frozen=True)
class SmoothingParams:
    matw: float = 0.8  # half-width of the material transition band
    matd: float = 1e-3  # ersatz stiffness floor

    def __post_init__(self):
        if not 0.0 < self.matd < 1.0:
            raise ValueError("matd must lie in (0, 1)")
        if not 0.0 < self.matw <= 1.0:
            raise ValueError("matw must lie in (0, 1]")


def _smooth_step(s):
    s = np.asarray(s, dtype=float)
    poly = 0.5 + s * (15.0 / 16.0 - s**2 * (5.0 / 8.0 - 3.0 / 16.0 * s**2))
    return np.where(s > 1.0, 1.0, np.where(s < -1.0, 0.0, poly))


def chi_x(phi, matw=0.8):
    """C1 quintic step rising from 0 at ``phi = -matw`` to 1 at ``phi = matw``."""
    return _smooth_step(np.asarray(phi, dtype=float) / matw)


def chi_p(phi, matw=0.8, matd=1e-3):
    """Material coefficient ``max((1 - matd) chi_x + matd, matd)``, in [matd, 1]."""
    return np.maximum((1.0 - matd) * chi_x(phi, matw) + matd, matd)


def chi_v(phi):
    """Volume indicator: the quintic step with unit half-width."""
    return _smooth_step(phi)


def clamp(phi):
    """Map values outside [-1, 1] to their sign."""
    return np.clip(np.asarray(phi, dtype=float), -1.0, 1.0)


def clamp_phi(phi_raw, phi_previous):
    """Clamp a freshly evolved field; also return ``|phi - phi_previous|``."""
    phi = clamp(phi_raw)
    return phi, np.abs(phi - phi_previous)


def init_phi(kind, mesh, upper_threshold=0.4):
    """Initial level set (already clamped).

    ``perforated``: ``4 (max(cos 10 pi x, cos 10 pi y) - 0.5)``;
    ``full``: ones; ``upper``: +1 above ``y = upper_threshold``, -1 below.
    """
    x, y = mesh.nodes[:, 0], mesh.nodes[:, 1]
    if kind == "perforated":
        raw = 4.0 * (np.maximum(np.cos(10.0 * np.pi * x), np.cos(10.0 * np.pi * y)) - 0.5)
    elif kind == "full":
        raw = np.ones(mesh.n_nodes)
    elif kind == "upper":
        raw = 2.0 * ((y - upper_threshold > 0).astype(float) - 0.5)
    else:
        raise ValueError(f"unknown initial configuration {kind!r}")
    return clamp(raw)


def at_quadrature(mesh, nodal):
    """P1 interpolant evaluated at the 3 Gauss points, shape (T, 3)."""
    return np.asarray(nodal)[mesh.triangles] @ QUAD_BARY.T


def integrate_pointwise(mesh, values_at_qp):
    """Integrate values given at the Gauss points over the mesh."""
    return float(np.sum(mesh.areas * (values_at_qp @ QUAD_WEIGHTS)))


def volume(mesh, phi):
    """Integral of ``chi_v(phi)`` over the mesh."""
    return integrate_pointwise(mesh, chi_v(at_quadrature(mesh, phi)))


def domain_volume(mesh):
    return mesh.area
