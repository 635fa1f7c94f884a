"""Free evolution on equispaced ladders, energy moments and orthogonality times.

Everything here works in natural units (``hbar = epsilon = 1``): energies are
multiples of epsilon and times multiples of ``hbar / epsilon``.  The survival
amplitude is ``S(t) = sum_k p_k exp(-i E_k t)``; with ``z = exp(-i t)`` it is a
polynomial in ``z`` whose unit-circle roots are the orthogonality angles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .core_math import unit_circle_roots
from .entanglement import concurrence
from .errors import BothZero
from .states import (
    BosonCoeffMatrix,
    FermionCoeffMatrix,
    TwoQubitState,
    require_valid,
    spectral_weights,
)

__all__ = [
    "EnergyLadder",
    "EnergyMoments",
    "SpeedReport",
    "TMIN_VARIANTS",
    "evolve",
    "overlap",
    "energy_moments",
    "t_min_bound",
    "t_min_variant_boson_paper",
    "orthogonality_time",
]

TMIN_VARIANTS = ("eq11", "boson-paper")

_QUBIT_ENERGIES = np.array([0.0, 1.0, 1.0, 2.0])
_BOSON_LEVELS = np.array([0.0, 1.0])
_FERMION_LEVELS = np.array([0.0, 1.0, 2.0, 3.0])


@dataclass(frozen=True)
class EnergyLadder:
    """Physical scale of the level spacing and of Planck's constant."""

    epsilon: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.epsilon > 0 and self.hbar > 0):
            raise ValueError("epsilon and hbar must be positive")

    @property
    def time_unit(self) -> float:
        return self.hbar / self.epsilon


@dataclass(frozen=True)
class EnergyMoments:
    e_mean: float
    h2_mean: float
    delta_e: float


@dataclass(frozen=True)
class SpeedReport:
    family: str
    concurrence: float
    e_mean: float
    delta_e: float
    t_min: float
    tau: Optional[float]
    ratio: Optional[float]
    root_angles: tuple
    tmin_variant: str = "eq11"
    t_min_eq11: Optional[float] = None
    t_min_boson_paper: Optional[float] = None

    @property
    def attainable(self) -> bool:
        return self.tau is not None

    def scaled(self, ladder: EnergyLadder) -> "SpeedReport":
        """Copy with energies in units of ``ladder.epsilon`` and times in seconds-like units."""
        tu = ladder.time_unit

        def t(v):
            return None if v is None else v * tu

        return replace(
            self,
            e_mean=self.e_mean * ladder.epsilon,
            delta_e=self.delta_e * ladder.epsilon,
            t_min=self.t_min * tu,
            tau=t(self.tau),
            t_min_eq11=t(self.t_min_eq11),
            t_min_boson_paper=t(self.t_min_boson_paper),
        )

    def to_dict(self) -> dict:
        d = {
            "family": self.family,
            "concurrence": self.concurrence,
            "e_mean": self.e_mean,
            "delta_e": self.delta_e,
            "t_min": self.t_min,
            "tmin_variant": self.tmin_variant,
            "tau": self.tau,
            "ratio": self.ratio,
            "attainable": self.attainable,
            "root_angles": list(self.root_angles),
            "t_min_eq11": self.t_min_eq11,
        }
        if self.t_min_boson_paper is not None:
            d["t_min_boson_paper"] = self.t_min_boson_paper
        return d


def evolve(state, t: float):
    """State after time ``t``; every coefficient picks up ``exp(-i E t)``."""
    require_valid(state)
    if isinstance(state, TwoQubitState):
        return TwoQubitState(state.c * np.exp(-1j * _QUBIT_ENERGIES * t))
    if isinstance(state, BosonCoeffMatrix):
        e = _BOSON_LEVELS
        return BosonCoeffMatrix(state.v * np.exp(-1j * (e[:, None] + e[None, :]) * t))
    if isinstance(state, FermionCoeffMatrix):
        e = _FERMION_LEVELS
        return FermionCoeffMatrix(state.w * np.exp(-1j * (e[:, None] + e[None, :]) * t))
    raise TypeError(f"cannot evolve {type(state).__name__}")


def _survival(weights: np.ndarray, energies: np.ndarray, t):
    t = np.asarray(t, dtype=float)
    return np.exp(-1j * np.multiply.outer(t, energies)) @ weights


def overlap(state, t):
    """``<psi(0)|psi(t)>``; accepts a scalar or an array of times."""
    sw = spectral_weights(state)
    out = _survival(np.asarray(sw.weights), sw.energies.astype(float), t)
    return complex(out) if np.ndim(out) == 0 else out


def energy_moments(state) -> EnergyMoments:
    sw = spectral_weights(state)
    p = np.asarray(sw.weights)
    e = sw.energies.astype(float)
    mean = float(p @ e)
    var = float(p @ (e - mean) ** 2)
    return EnergyMoments(e_mean=mean, h2_mean=float(p @ e**2), delta_e=math.sqrt(var))


def t_min_bound(m: EnergyMoments) -> float:
    """``max(pi / 2E, pi / 2 dE)``; a vanishing moment drops out of the max."""
    bounds = [math.pi / (2.0 * v) for v in (m.e_mean, m.delta_e) if v > 0.0]
    if not bounds:
        raise BothZero("E and dE are both zero: stationary ground state")
    return max(bounds)


def t_min_variant_boson_paper(m: EnergyMoments | None = None) -> float:
    """The constant ``pi hbar / 2 epsilon`` quoted for the two-boson family.

    Differs from :func:`t_min_bound` whenever ``dE < epsilon``.
    """
    return math.pi / 2.0


def orthogonality_time(state, tmin_variant: str = "eq11", tol: float = 1e-9) -> SpeedReport:
    """First time at which ``state`` evolves into an orthogonal state, plus context."""
    if tmin_variant not in TMIN_VARIANTS:
        raise ValueError(f"tmin_variant must be one of {TMIN_VARIANTS}")
    sw = spectral_weights(state)
    moments = energy_moments(state)
    t_eq11 = t_min_bound(moments)
    is_boson = isinstance(state, BosonCoeffMatrix)
    t_paper = t_min_variant_boson_paper(moments) if is_boson else None
    t_min = t_paper if (is_boson and tmin_variant == "boson-paper") else t_eq11

    angles = unit_circle_roots(sw.weights, tol) if len(sw.weights) > 1 else []
    low = [a for a in angles if a <= math.pi + 1e-12]
    tau = min(low) if low else None
    return SpeedReport(
        family=state.family,
        concurrence=concurrence(state),
        e_mean=moments.e_mean,
        delta_e=moments.delta_e,
        t_min=t_min,
        tau=tau,
        ratio=None if tau is None else tau / t_min,
        root_angles=tuple(angles),
        tmin_variant=tmin_variant if is_boson else "eq11",
        t_min_eq11=t_eq11,
        t_min_boson_paper=t_paper,
    )
