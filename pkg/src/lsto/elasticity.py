"""Plane-strain linear elasticity with P1 triangles and an ersatz material.

Displacements are stored node-interleaved: dof ``2 * i + c`` is component
``c`` of node ``i``. Strains use Voigt order
``(du1/dx, du2/dy, du1/dy + du2/dx)``.
"""
from dataclasses import dataclass

import numpy as np

from .exceptions import ModelError
from .levelset import SmoothingParams, at_quadrature, chi_p, QUAD_WEIGHTS
from .sparse import SparseSymMatrix, assemble_from_triplets, cg_solve


@dataclass(frozen=True)
class MaterialData:
    E: float = 2.1e11
    nu: float = 0.3
    g: tuple = (0.0, -1.0e3)

    @property
    def lam(self):
        return self.E * self.nu / ((1.0 + self.nu) * (1.0 - 2.0 * self.nu))

    @property
    def mu(self):
        return self.E / (2.0 * (1.0 + self.nu))

    @property
    def D(self):
        lam, mu = self.lam, self.mu
        return np.array([
            [lam + 2 * mu, lam, 0.0],
            [lam, lam + 2 * mu, 0.0],
            [0.0, 0.0, mu],
        ])


def material_data(E=2.1e11, nu=0.3, g=(0.0, -1.0e3)):
    if E <= 0:
        raise ValueError("E must be positive")
    if not -1.0 < nu < 0.5:
        raise ValueError("nu must lie in (-1, 0.5)")
    return MaterialData(float(E), float(nu), tuple(map(float, g)))


def strain_matrices(mesh):
    """Per-element strain-displacement matrices ``B``, shape (T, 3, 6)."""
    p = mesh.nodes[mesh.triangles]
    x, y = p[..., 0], p[..., 1]
    two_a = 2.0 * mesh.areas
    # gradients of the barycentric coordinates
    bx = np.stack([y[:, 1] - y[:, 2], y[:, 2] - y[:, 0], y[:, 0] - y[:, 1]], axis=1) / two_a[:, None]
    by = np.stack([x[:, 2] - x[:, 1], x[:, 0] - x[:, 2], x[:, 1] - x[:, 0]], axis=1) / two_a[:, None]
    B = np.zeros((mesh.n_triangles, 3, 6))
    B[:, 0, 0::2] = bx
    B[:, 1, 1::2] = by
    B[:, 2, 0::2] = by
    B[:, 2, 1::2] = bx
    return B


def element_dofs(mesh):
    t = mesh.triangles
    dofs = np.empty((t.shape[0], 6), dtype=np.int64)
    dofs[:, 0::2] = 2 * t
    dofs[:, 1::2] = 2 * t + 1
    return dofs


def element_coefficient(mesh, phi, smoothing=SmoothingParams()):
    """Element mean of ``chi_p(phi)`` from the 3-point rule."""
    return chi_p(at_quadrature(mesh, phi), smoothing.matw, smoothing.matd) @ QUAD_WEIGHTS


def element_strains(mesh, u):
    """Constant strain of each element, shape (T, 3)."""
    u = np.asarray(u, dtype=float).reshape(-1)
    return np.einsum("tij,tj->ti", strain_matrices(mesh), u[element_dofs(mesh)])


def assemble_stiffness(mesh, D, coeff=None):
    """Global stiffness ``sum_e coeff_e * area_e * B_e^T D B_e`` (no boundary conditions)."""
    B = strain_matrices(mesh)
    w = mesh.areas if coeff is None else mesh.areas * coeff
    Ke = np.einsum("tki,kl,tlj->tij", B, D, B) * w[:, None, None]
    Ke = 0.5 * (Ke + Ke.transpose(0, 2, 1))  # exact symmetry
    dofs = element_dofs(mesh)
    rows = np.repeat(dofs, 6, axis=1)
    cols = np.tile(dofs, (1, 6))
    return assemble_from_triplets(2 * mesh.n_nodes, rows, cols, Ke)


def traction_load(mesh, labels, g):
    """Consistent nodal load of a constant traction ``g`` on labeled edges."""
    f = np.zeros(2 * mesh.n_nodes)
    idx = mesh.edges_with_labels(labels)
    edges = mesh.boundary_edges[idx]
    half = 0.5 * mesh.edge_lengths[idx]
    for c in range(2):
        np.add.at(f, 2 * edges[:, 0] + c, g[c] * half)
        np.add.at(f, 2 * edges[:, 1] + c, g[c] * half)
    return f


@dataclass
class StateSystem:
    """Stiffness and load before elimination, plus the clamped dofs."""

    K: SparseSymMatrix
    f: np.ndarray
    fixed_dofs: np.ndarray
    fixed_values: np.ndarray

    @property
    def free_dofs(self):
        mask = np.ones(self.K.n, dtype=bool)
        mask[self.fixed_dofs] = False
        return np.flatnonzero(mask)

    def reduced(self):
        """Free-dof system ``(K_ff, f_f - K_fd u_d)`` after symmetric elimination."""
        free = self.free_dofs
        Kff = self.K.restrict(free)
        rhs = self.f[free]
        if np.any(self.fixed_values != 0.0):
            rhs = rhs - self.K.restrict(free, self.fixed_dofs) @ self.fixed_values
        return Kff, rhs, free


def wall_dofs(mesh, wall_labels):
    nodes = mesh.nodes_with_labels(wall_labels)
    if nodes.size == 0:
        raise ModelError("no wall edges: the elasticity system would be singular")
    return np.sort(np.concatenate([2 * nodes, 2 * nodes + 1]))


def assemble_state_system(mesh, phi, mat, smoothing, wall_labels, traction_labels):
    """Stiffness weighted by ``chi_p(phi)`` and traction load, with ``u = 0`` on walls."""
    fixed = wall_dofs(mesh, wall_labels)
    K = assemble_stiffness(mesh, mat.D, element_coefficient(mesh, phi, smoothing))
    f = traction_load(mesh, traction_labels, mat.g)
    return StateSystem(K, f, fixed, np.zeros(fixed.size))


def solve_system(system, tol=1e-10, precond="jacobi", x0=None, maxit=None):
    """Solve a :class:`StateSystem`; returns nodal displacements (N, 2) and CG info."""
    Kff, rhs, free = system.reduced()
    guess = None if x0 is None else np.asarray(x0).reshape(-1)[free]
    uf, info = cg_solve(Kff, rhs, tol=tol, maxit=maxit, precond=precond, x0=guess)
    u = np.zeros(system.K.n)
    u[free] = uf
    u[system.fixed_dofs] = system.fixed_values
    return u.reshape(-1, 2), info


def solve_state(mesh, phi, mat, smoothing, wall_labels, traction_labels, tol=1e-10,
                precond="jacobi", x0=None):
    """Displacement of the ersatz-material structure described by ``phi``."""
    system = assemble_state_system(mesh, phi, mat, smoothing, wall_labels, traction_labels)
    u, info = solve_system(system, tol=tol, precond=precond, x0=x0)
    return u, info, system


def compliance(mesh, u, g, traction_labels):
    """Mean compliance: boundary integral of ``g . u`` over the traction edges."""
    return float(traction_load(mesh, traction_labels, g) @ np.asarray(u).reshape(-1))


def strain_energy(K, u):
    """``u^T K u``."""
    u = np.asarray(u).reshape(-1)
    return float(u @ (K @ u))
