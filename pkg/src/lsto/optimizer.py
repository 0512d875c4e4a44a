"""Outer optimization loop for minimum mean compliance under a volume limit.

Each iteration solves the state, evaluates compliance and volume, tests for
convergence, updates the volume multiplier, advances the level set by one RD
or NLHP step and clamps it back to [-1, 1].
"""
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .elasticity import MaterialData, compliance, solve_state
from .evolution import EvolutionParams, LevelSetEvolver, reaction_field
from .levelset import SmoothingParams, clamp_phi, init_phi, volume
from .multiplier import MultiplierParams, extended_upper_limit, update_multiplier
from .sensitivity import abs_td_normalizer, polarization, topological_derivative

log = logging.getLogger(__name__)

METHODS = ("rd", "nlhp")


@dataclass(frozen=True)
class OptParams:
    MaxLoop: int = 50000
    epsOpt: float = 1e-3
    FlagOptMax: int = 10
    method: str = "nlhp"
    multiplier: MultiplierParams = field(default_factory=MultiplierParams)
    evolution: EvolutionParams = field(default_factory=EvolutionParams)
    smoothing: SmoothingParams = field(default_factory=SmoothingParams)
    material: MaterialData = field(default_factory=MaterialData)
    state_tol: float = 1e-10
    record_timing: bool = True

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if not self.epsOpt > 0:
            raise ValueError("epsOpt must be positive")
        if not self.MaxLoop > self.multiplier.GvLoop:
            raise ValueError("MaxLoop must exceed GvLoop")
        if self.FlagOptMax < 0:
            raise ValueError("FlagOptMax must be non-negative")


@dataclass(frozen=True)
class IterationRecord:
    iter: int
    F: float
    vol_frac: float
    Gv: float
    GvMaxEx: float
    LagGv: float
    LsfDiffMax: float
    AbsTd1: float
    cg_iters: int
    wall_ms: float


FIELDS = tuple(IterationRecord.__dataclass_fields__)


@dataclass
class IterationSnapshot:
    """Fields seen by an iteration callback.

    ``phi`` is the level set the state was solved on; ``phi_next`` the clamped
    result of this iteration's evolution step (``None`` on the terminating
    iteration).
    """

    iter: int
    phi: np.ndarray
    u: np.ndarray
    system: object
    phi_next: Optional[np.ndarray] = None
    step: Optional[str] = None


@dataclass
class OptState:
    ophi: np.ndarray
    oophi: np.ndarray
    LagGvp: Optional[float]
    iter: int
    flag: int
    u: Optional[np.ndarray] = None


@dataclass
class OptResult:
    state: OptState
    history: list
    converged: bool

    @property
    def iterations(self):
        """Index of the last iteration run (the convergence iteration if converged)."""
        return self.history[-1].iter if self.history else -1

    def column(self, name):
        return np.array([getattr(r, name) for r in self.history])


def check_convergence(lsf_diff_max, Gv, iter, flag, params):
    """Advance the consecutive-pass counter; converged once it exceeds ``FlagOptMax``."""
    if lsf_diff_max <= params.epsOpt and iter > params.multiplier.GvLoop and Gv <= params.epsOpt:
        flag += 1
        return flag > params.FlagOptMax, flag
    return False, 0


def choose_step(method, iter, evolution):
    if method == "rd" or iter <= evolution.StatIt or iter >= evolution.SwitchBackIt:
        return "rd"
    return "nlhp"


def run(model, mesh, params, init_kind="perforated", upper_threshold=0.4, phi0=None,
        callback: Optional[Callable] = None):
    """Run the optimization from an initial configuration.

    ``model`` supplies the boundary label sets. Returns an :class:`OptResult`;
    if ``MaxLoop`` is exhausted ``converged`` is False and the history is kept.
    """
    mat, smooth, mp, ep = params.material, params.smoothing, params.multiplier, params.evolution
    pol = polarization(mat.E, mat.nu)
    evolver = LevelSetEvolver.for_model(mesh, ep, model.phione_labels)

    ophi = init_phi(init_kind, mesh, upper_threshold) if phi0 is None else np.clip(phi0, -1, 1)
    oophi = ophi.copy()
    volFDD = mesh.area
    volInit = volume(mesh, ophi)
    lsf_diff_max = math.inf
    flag = 0
    mult = None
    u = None
    history = []
    converged = False
    clock = time.perf_counter if params.record_timing else (lambda: 0.0)

    for it in range(params.MaxLoop):
        t0 = clock()
        u, info, system = solve_state(mesh, ophi, mat, smooth, model.wall_labels,
                                      model.traction_labels, tol=params.state_tol, x0=u)
        cg_iters = info.iterations
        F = compliance(mesh, u, mat.g, model.traction_labels)
        vol_frac = volume(mesh, ophi) / volFDD
        GvMaxEx = extended_upper_limit(it, volInit, volFDD, mp.GvMax, mp.GvLoop)
        Gv = vol_frac - mp.GvMax

        converged, flag = check_convergence(lsf_diff_max, Gv, it, flag, params)
        if converged:
            history.append(IterationRecord(it, F, vol_frac, Gv, GvMaxEx, math.nan, lsf_diff_max,
                                           math.nan, cg_iters, 1e3 * (clock() - t0)))
            if callback is not None:
                callback(history[-1], IterationSnapshot(it, ophi, u, system))
            break

        td = topological_derivative(mesh, u, ophi, pol, smooth)
        abs_td1 = abs_td_normalizer(mesh, td)
        mult = update_multiplier(mult, vol_frac * volFDD, volFDD, GvMaxEx, mp, it)
        r = reaction_field(td, abs_td1, mult.LagGv, ep.CdF)

        step = choose_step(params.method, it, ep)
        if step == "rd":
            phi_raw = evolver.rd_step(ophi, r)
        else:
            phi_raw = evolver.nlhp_step(ophi, oophi, r)
        cg_iters += evolver.last_info.iterations

        phi_new, lsf_diff = clamp_phi(phi_raw, ophi)
        record = IterationRecord(it, F, vol_frac, Gv, GvMaxEx, mult.LagGv, lsf_diff_max,
                                 abs_td1, cg_iters, 1e3 * (clock() - t0))
        history.append(record)
        if callback is not None:
            callback(record, IterationSnapshot(it, ophi, u, system, phi_new, step))
        oophi, ophi = ophi, phi_new
        lsf_diff_max = float(lsf_diff.max())
        if it % 50 == 0:
            log.info("iter %d F=%.6e vol=%.4f LsfDiff=%.3e", it, F, vol_frac, lsf_diff_max)

    state = OptState(ophi, oophi, None if mult is None else mult.LagGvp,
                     history[-1].iter if history else 0, flag, u)
    return OptResult(state, history, converged)
