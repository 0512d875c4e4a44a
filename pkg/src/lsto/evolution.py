"""One fictitious-time step of the level-set update.

Both schemes solve the same semi-implicit system

    (M / dt + tau L^2 K) phi = M (r + h / dt)

with consistent P1 mass ``M`` and stiffness ``K``. The plain
reaction-diffusion step (RD) uses the history term ``h = ophi``; the
accelerated step (NLHP) adds momentum with ``h = 2 ophi - oophi``.
"""
import math
from dataclasses import dataclass

import numpy as np

from .sparse import assemble_from_triplets, cg_solve

_MASS_REF = np.array([[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]]) / 12.0


@dataclass(frozen=True)
class EvolutionParams:
    dt: float = 0.7
    tau: float = 5e-4
    L: float = 1.0  # characteristic length
    CdF: float = 1.2  # sensitivity scaling
    StatIt: int = 5  # last iteration that always takes an RD step
    SwitchBackIt: float = math.inf  # from this iteration on, NLHP reverts to RD
    boundary: str = "phione"  # or "homogeneous": phi = 0 on the whole boundary
    tol: float = 1e-10

    def __post_init__(self):
        for name in ("dt", "tau", "L", "CdF"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.StatIt < 1:
            raise ValueError("StatIt must be >= 1")
        if self.boundary not in ("phione", "homogeneous"):
            raise ValueError(f"unknown level-set boundary condition {self.boundary!r}")


def mass_matrix(mesh):
    Me = mesh.areas[:, None, None] * _MASS_REF
    t = mesh.triangles
    return assemble_from_triplets(mesh.n_nodes, np.repeat(t, 3, axis=1), np.tile(t, (1, 3)), Me)


def laplace_matrix(mesh):
    p = mesh.nodes[mesh.triangles]
    x, y = p[..., 0], p[..., 1]
    two_a = 2.0 * mesh.areas[:, None]
    bx = np.stack([y[:, 1] - y[:, 2], y[:, 2] - y[:, 0], y[:, 0] - y[:, 1]], axis=1) / two_a
    by = np.stack([x[:, 2] - x[:, 1], x[:, 0] - x[:, 2], x[:, 1] - x[:, 0]], axis=1) / two_a
    Ke = (bx[:, :, None] * bx[:, None, :] + by[:, :, None] * by[:, None, :]) * mesh.areas[:, None, None]
    t = mesh.triangles
    return assemble_from_triplets(mesh.n_nodes, np.repeat(t, 3, axis=1), np.tile(t, (1, 3)), Ke)


def reaction_field(td, abs_td1, LagGv, CdF):
    """Reaction term ``CdF * (td / abs_td1 - LagGv)``."""
    return CdF * (np.asarray(td) / abs_td1 - LagGv)


def pinned_nodes(mesh, params, phione_labels):
    """Nodes with a prescribed level-set value and that value."""
    if params.boundary == "homogeneous":
        return mesh.boundary_nodes(), 0.0
    return mesh.nodes_with_labels(phione_labels), 1.0


class LevelSetEvolver:
    """Holds the assembled left-hand side; reused by both schemes."""

    def __init__(self, mesh, params, pinned=(), pin_value=1.0):
        self.mesh = mesh
        self.params = params
        self.M = mass_matrix(mesh)
        self.K = laplace_matrix(mesh)
        self.A = self.M * (1.0 / params.dt) + self.K * (params.tau * params.L**2)

        n = mesh.n_nodes
        self.pinned = np.asarray(pinned, dtype=np.int64)
        self.pin_value = float(pin_value)
        mask = np.ones(n, dtype=bool)
        mask[self.pinned] = False
        self.free = np.flatnonzero(mask)
        self.A_ff = self.A.restrict(self.free)
        if self.pinned.size and self.pin_value != 0.0:
            pins = np.full(self.pinned.size, self.pin_value)
            self._shift = self.A.restrict(self.free, self.pinned) @ pins
        else:
            self._shift = np.zeros(self.free.size)
        self.last_info = None

    @classmethod
    def for_model(cls, mesh, params, phione_labels):
        nodes, value = pinned_nodes(mesh, params, phione_labels)
        return cls(mesh, params, nodes, value)

    def _solve(self, r, history, guess):
        rhs = self.M @ (np.asarray(r, dtype=float) + history / self.params.dt)
        b = rhs[self.free] - self._shift
        x, info = cg_solve(self.A_ff, b, tol=self.params.tol, x0=np.asarray(guess)[self.free])
        self.last_info = info
        phi = np.empty(self.mesh.n_nodes)
        phi[self.free] = x
        phi[self.pinned] = self.pin_value
        return phi

    def rd_step(self, ophi, r):
        ophi = np.asarray(ophi, dtype=float)
        return self._solve(r, ophi, ophi)

    def nlhp_step(self, ophi, oophi, r):
        ophi = np.asarray(ophi, dtype=float)
        return self._solve(r, 2.0 * ophi - np.asarray(oophi, dtype=float), ophi)


def rd_step(mesh, ophi, r, params, phione_labels):
    """Reaction-diffusion step; returns the unclamped field."""
    return LevelSetEvolver.for_model(mesh, params, phione_labels).rd_step(ophi, r)


def nlhp_step(mesh, ophi, oophi, r, params, phione_labels):
    """Accelerated step with momentum ``ophi - oophi``; returns the unclamped field."""
    return LevelSetEvolver.for_model(mesh, params, phione_labels).nlhp_step(ophi, oophi, r)
