"""Concurrence for the three families and the reduced entropy of two qubits."""
from __future__ import annotations

import cmath
import math

from .states import (
    BosonCoeffMatrix,
    FermionCoeffMatrix,
    TwoQubitState,
    require_valid,
)

__all__ = [
    "concurrence_qubit",
    "concurrence_boson",
    "concurrence_fermion",
    "concurrence",
    "entanglement_entropy_qubit",
    "saturating_family_concurrence",
]


def concurrence_qubit(s: TwoQubitState) -> float:
    """``C = 2 |c0 c3 - c1 c2|``."""
    require_valid(s)
    c0, c1, c2, c3 = s.c
    return float(2.0 * abs(c0 * c3 - c1 * c2))


def concurrence_boson(m: BosonCoeffMatrix) -> float:
    """``C_B = 4 |v00 v11 - v01^2|``."""
    require_valid(m)
    v = m.v
    return float(4.0 * abs(v[0, 0] * v[1, 1] - v[0, 1] ** 2))


def concurrence_fermion(m: FermionCoeffMatrix) -> float:
    """``C_F = 8 |w01 w23 - w02 w13 + w03 w12|`` (eight times the Pfaffian)."""
    require_valid(m)
    w = m.w
    return float(8.0 * abs(w[0, 1] * w[2, 3] - w[0, 2] * w[1, 3] + w[0, 3] * w[1, 2]))


def concurrence(state) -> float:
    if isinstance(state, TwoQubitState):
        return concurrence_qubit(state)
    if isinstance(state, BosonCoeffMatrix):
        return concurrence_boson(state)
    if isinstance(state, FermionCoeffMatrix):
        return concurrence_fermion(state)
    raise TypeError(f"no concurrence for {type(state).__name__}")


def entanglement_entropy_qubit(s: TwoQubitState) -> float:
    """Von Neumann entropy of either reduced state, in nats.

    The reduced eigenvalues are ``(1 +- sqrt(1 - C^2)) / 2``.
    """
    c = min(concurrence_qubit(s), 1.0)
    root = math.sqrt(max(1.0 - c * c, 0.0))
    lam = 0.5 * (1.0 + root)
    # small eigenvalue written as C^2 / (2 (1 + root)) to avoid cancellation
    mu = 0.5 * c * c / (1.0 + root)
    return -sum(p * math.log(p) for p in (lam, mu) if p > 0.0)


def saturating_family_concurrence(phi01: float, phi02: float, phi13: float, phi23: float) -> float:
    """Closed-form ``C_F`` of the fermion states with ``beta = pi, alpha = pi/3``."""
    return abs(cmath.exp(1j * (phi01 + phi23)) - cmath.exp(1j * (phi02 + phi13))) / 2.0
