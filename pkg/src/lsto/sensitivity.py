"""Topological derivative of the compliance and its normalizer."""
from dataclasses import dataclass

import numpy as np

from .elasticity import element_coefficient, element_strains
from .levelset import SmoothingParams, at_quadrature, integrate_pointwise


@dataclass(frozen=True)
class PolarizationData:
    A1: float
    A2: float

    @property
    def A(self):
        a1, a2 = self.A1, self.A2
        return np.array([
            [a1 + 2 * a2, a1, 0.0],
            [a1, a1 + 2 * a2, 0.0],
            [0.0, 0.0, a2],
        ])


def polarization(E=2.1e11, nu=0.3):
    """Coefficients of the polarization tensor for a circular hole."""
    A1 = -3.0 * (1 - nu) * (1 - 14 * nu + 15 * nu**2) * E / (
        2.0 * (1 + nu) * (7 - 5 * nu) * (1 - 2 * nu) ** 2)
    A2 = 15.0 * (1 - nu) * E / (2.0 * (1 + nu) * (7 - 5 * nu))
    return PolarizationData(A1, A2)


def element_topological_derivative(mesh, u, phi, pol, smoothing=SmoothingParams()):
    """Per-element ``(A e(u)) . e(u) * chi_p(phi)``."""
    eps = element_strains(mesh, u)
    energy = np.einsum("ti,ij,tj->t", eps, pol.A, eps)
    return energy * element_coefficient(mesh, phi, smoothing)


def project_to_nodes(mesh, element_values):
    """Area-weighted average of element values over the elements around each node."""
    w = np.repeat(mesh.areas, 3)
    idx = mesh.triangles.ravel()
    num = np.bincount(idx, weights=w * np.repeat(element_values, 3), minlength=mesh.n_nodes)
    den = np.bincount(idx, weights=w, minlength=mesh.n_nodes)
    return num / den


def topological_derivative(mesh, u, phi, pol, smoothing=SmoothingParams()):
    """Nodal topological-derivative field (before the volume multiplier)."""
    return project_to_nodes(mesh, element_topological_derivative(mesh, u, phi, pol, smoothing))


def abs_td_normalizer(mesh, td):
    """Mean of ``|td|`` over the domain (``td`` nodal, P1-interpolated)."""
    value = integrate_pointwise(mesh, np.abs(at_quadrature(mesh, td))) / mesh.area
    if not value > 0.0:
        raise ZeroDivisionError("topological derivative vanishes identically; cannot normalize")
    return value
