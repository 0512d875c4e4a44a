"""Augmented-Lagrangian multiplier for the volume constraint."""
from dataclasses import dataclass


@dataclass(frozen=True)
class MultiplierParams:
    GvMax: float = 0.45  # target volume fraction
    GvLoop: int = 15  # iterations over which the limit is ramped down
    LagGvA: float = 2.0  # slope of the linear extension
    LagGvinit: float = 1.0
    LagGvC: float = 1.0  # step size of the multiplier update
    LagGvMax: float = 5.0
    LagGvMin: float = 0.1

    def __post_init__(self):
        if not self.LagGvMin < self.LagGvinit <= self.LagGvMax:
            raise ValueError("need LagGvMin < LagGvinit <= LagGvMax")
        if self.GvLoop < 1:
            raise ValueError("GvLoop must be >= 1")
        if not 0.0 < self.GvMax <= 1.0:
            raise ValueError("GvMax must lie in (0, 1]")


@dataclass(frozen=True)
class MultiplierState:
    LagGvp: float  # clamped multiplier carried between iterations
    LagGv: float  # extended multiplier fed to the reaction term


def extended_upper_limit(iter, volInit, volFDD, GvMax, GvLoop):
    """Volume-fraction limit ramped linearly from the initial fraction to ``GvMax``."""
    if iter < GvLoop:
        start = volInit / volFDD
        return start - ((start - GvMax) / GvLoop) * iter
    return GvMax


def update_multiplier(state, vol, volFDD, GvMaxEx, params, iter):
    """One multiplier update. ``state`` may be ``None`` at ``iter == 0``."""
    if GvMaxEx <= 0.0:
        raise ValueError("GvMaxEx must be positive")
    if iter == 0 or state is None:
        LagGvp = params.LagGvinit
    else:
        LagGvp = state.LagGvp
    ratio = (vol / volFDD - GvMaxEx) / GvMaxEx
    if vol / volFDD - GvMaxEx < 0:
        step = -params.LagGvC * abs(ratio)
    else:
        step = params.LagGvC * abs(ratio)
    LagGvp = max(min(params.LagGvMax, LagGvp + step), params.LagGvMin)
    return MultiplierState(LagGvp=LagGvp, LagGv=LagGvp * (1.0 + params.LagGvA * ratio))
