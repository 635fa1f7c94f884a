"""Pure states of two qubits, two bosons and two fermions.

States are stored by their coefficient arrays: four amplitudes over
``|00>, |01>, |10>, |11>`` for qubits, a symmetric 2x2 matrix for two bosons
in two modes and an antisymmetric 4x4 matrix for two fermions in four levels.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .core_math import UnitCirclePolynomial
from .errors import DomainError, NotNormalized, StateFormatError

__all__ = [
    "TwoQubitState",
    "BosonCoeffMatrix",
    "FermionCoeffMatrix",
    "QubitOrthoParams",
    "BosonOrthoParams",
    "FermionOrthoParams",
    "SpectralWeights",
    "Violation",
    "qubit_from_params",
    "boson_from_params",
    "fermion_from_params",
    "spectral_weights",
    "validate",
    "require_valid",
    "state_to_dict",
    "state_from_dict",
    "load_state",
    "dump_state",
]

NORM_TOL = 1e-12
REJECT_TOL = 1e-10
_ANGLE_SLACK = 1e-12

FERMION_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def _frozen(a, dtype=complex) -> np.ndarray:
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    c: np.ndarray

    family = "qubit"
    energies = (0, 1, 1, 2)

    def __post_init__(self):
        arr = _frozen(self.c)
        if arr.shape != (4,):
            raise StateFormatError(f"qubit state needs 4 amplitudes, got shape {arr.shape}")
        object.__setattr__(self, "c", arr)

    def entries(self) -> np.ndarray:
        return self.c

    def norm(self) -> float:
        return float(np.sum(np.abs(self.c) ** 2))


@dataclass(frozen=True, eq=False)
class BosonCoeffMatrix:
    """Symmetric ``v_ij``; normalization ``2 sum_ij |v_ij|^2 = 1``."""

    v: np.ndarray

    family = "boson"

    def __post_init__(self):
        arr = _frozen(self.v)
        if arr.shape != (2, 2):
            raise StateFormatError(f"boson matrix must be 2x2, got shape {arr.shape}")
        object.__setattr__(self, "v", arr)

    @classmethod
    def from_entries(cls, v00, v01, v11) -> "BosonCoeffMatrix":
        return cls([[v00, v01], [v01, v11]])

    def entries(self) -> np.ndarray:
        return np.array([self.v[0, 0], self.v[0, 1], self.v[1, 1]])

    def norm(self) -> float:
        return float(2.0 * np.sum(np.abs(self.v) ** 2))


@dataclass(frozen=True, eq=False)
class FermionCoeffMatrix:
    """Antisymmetric ``w_ij``; normalization ``sum_ij |w_ij|^2 = 1/2``."""

    w: np.ndarray

    family = "fermion"

    def __post_init__(self):
        arr = _frozen(self.w)
        if arr.shape != (4, 4):
            raise StateFormatError(f"fermion matrix must be 4x4, got shape {arr.shape}")
        object.__setattr__(self, "w", arr)

    @classmethod
    def from_entries(cls, entries: Sequence[complex]) -> "FermionCoeffMatrix":
        """Build from ``(w01, w02, w03, w12, w13, w23)``."""
        if len(entries) != 6:
            raise StateFormatError(f"fermion state needs 6 entries, got {len(entries)}")
        w = np.zeros((4, 4), dtype=complex)
        for (i, j), val in zip(FERMION_PAIRS, entries):
            w[i, j] = val
            w[j, i] = -val
        return cls(w)

    def entries(self) -> np.ndarray:
        return np.array([self.w[i, j] for i, j in FERMION_PAIRS])

    def norm(self) -> float:
        # stored on the 1/2 scale; report on the unit scale like the others
        return float(2.0 * np.sum(np.abs(self.w) ** 2))


State = Union[TwoQubitState, BosonCoeffMatrix, FermionCoeffMatrix]


@dataclass(frozen=True)
class QubitOrthoParams:
    alpha: float
    delta: float = 0.5
    phases: tuple = (0.0, 0.0, 0.0, 0.0)

    @property
    def gamma(self) -> float:
        return 1.0 / (2.0 * (1.0 - math.cos(self.alpha)))


@dataclass(frozen=True)
class BosonOrthoParams:
    alpha: float
    phases: tuple = (0.0, 0.0, 0.0)

    @property
    def gamma(self) -> float:
        return 1.0 / (4.0 * (1.0 - math.cos(self.alpha)))


@dataclass(frozen=True)
class FermionOrthoParams:
    """Root angles ``alpha, beta``, split ``lam`` of the w03/w12 weight, and
    phases ordered as ``(w01, w02, w03, w12, w13, w23)``."""

    alpha: float
    beta: float = math.pi
    lam: float = 0.5
    phases: tuple = (0.0,) * 6

    @property
    def x(self) -> float:
        return 1.0 / (16.0 * (1.0 - math.cos(self.alpha)) * (1.0 - math.cos(self.beta)))


def _nonneg(value: float, what: str) -> float:
    if value < -_ANGLE_SLACK:
        raise DomainError(f"{what} = {value!r} is negative")
    return max(value, 0.0)


def _check_unit(value: float, name: str):
    if not (0.0 <= value <= 1.0):
        raise DomainError(f"{name} = {value!r} outside [0, 1]")


def _check_half_turn_window(alpha: float):
    if not (math.pi / 2 - _ANGLE_SLACK <= alpha <= 3 * math.pi / 2 + _ANGLE_SLACK):
        raise DomainError(f"alpha = {alpha!r} outside [pi/2, 3pi/2] (cos alpha must be <= 0)")


def qubit_from_params(p: QubitOrthoParams) -> TwoQubitState:
    _check_half_turn_window(p.alpha)
    _check_unit(p.delta, "delta")
    if len(p.phases) != 4:
        raise DomainError("qubit family needs 4 phases")
    cos_a = math.cos(p.alpha)
    g = p.gamma
    mags2 = [
        g,
        _nonneg(-2.0 * p.delta * g * cos_a, "|c1|^2"),
        _nonneg(-2.0 * (1.0 - p.delta) * g * cos_a, "|c2|^2"),
        g,
    ]
    c = [math.sqrt(m) * np.exp(1j * ph) for m, ph in zip(mags2, p.phases)]
    return TwoQubitState(c)


def boson_from_params(p: BosonOrthoParams) -> BosonCoeffMatrix:
    _check_half_turn_window(p.alpha)
    if len(p.phases) != 3:
        raise DomainError("boson family needs 3 phases")
    g = p.gamma
    mags2 = [g, _nonneg(-g * math.cos(p.alpha), "|v01|^2"), g]
    v00, v01, v11 = (math.sqrt(m) * np.exp(1j * ph) for m, ph in zip(mags2, p.phases))
    return BosonCoeffMatrix.from_entries(v00, v01, v11)


def fermion_from_params(p: FermionOrthoParams) -> FermionCoeffMatrix:
    for name, ang in (("alpha", p.alpha), ("beta", p.beta)):
        if not (0.0 < ang <= math.pi + _ANGLE_SLACK):
            raise DomainError(f"{name} = {ang!r} outside (0, pi]")
    _check_unit(p.lam, "lam")
    if len(p.phases) != 6:
        raise DomainError("fermion family needs 6 phases")
    ca, cb = math.cos(p.alpha), math.cos(p.beta)
    if ca + cb > _ANGLE_SLACK:
        raise DomainError(f"cos(alpha) + cos(beta) = {ca + cb!r} > 0")
    if 1.0 + 2.0 * ca * cb < -_ANGLE_SLACK:
        raise DomainError(f"1 + 2 cos(alpha) cos(beta) = {1 + 2 * ca * cb!r} < 0")
    x = p.x
    mid = 2.0 * x * max(1.0 + 2.0 * ca * cb, 0.0)
    side = 2.0 * x * max(-(ca + cb), 0.0)
    mags2 = [x, side, p.lam * mid, (1.0 - p.lam) * mid, side, x]
    entries = [math.sqrt(m) * np.exp(1j * ph) for m, ph in zip(mags2, p.phases)]
    return FermionCoeffMatrix.from_entries(entries)


@dataclass(frozen=True)
class SpectralWeights:
    """Total probability on each energy level ``(k + offset) * epsilon``."""

    weights: tuple
    offset: int = 0

    @property
    def energies(self) -> np.ndarray:
        return np.arange(len(self.weights)) + self.offset

    def polynomial(self) -> UnitCirclePolynomial:
        return UnitCirclePolynomial(self.weights)


class Violation(enum.Enum):
    SHAPE = "shape"
    NONFINITE = "nonfinite"
    NORM = "norm"
    SYMMETRY = "symmetry"
    ANTISYMMETRY = "antisymmetry"
    DIAGONAL = "diagonal"

    def __repr__(self):
        return f"{self.name.title()}Violation"


def validate(state) -> list[Violation]:
    """Every broken invariant of ``state``; empty when the state is valid."""
    out = []
    if isinstance(state, TwoQubitState):
        arr = state.c
    elif isinstance(state, BosonCoeffMatrix):
        arr = state.v
    elif isinstance(state, FermionCoeffMatrix):
        arr = state.w
    else:
        return [Violation.SHAPE]
    if not np.all(np.isfinite(arr)):
        return [Violation.NONFINITE]
    if isinstance(state, BosonCoeffMatrix) and arr[0, 1] != arr[1, 0]:
        out.append(Violation.SYMMETRY)
    if isinstance(state, FermionCoeffMatrix):
        off_diag = ~np.eye(4, dtype=bool)
        if np.any((arr != -arr.T) & off_diag):
            out.append(Violation.ANTISYMMETRY)
        if np.any(np.diag(arr) != 0):
            out.append(Violation.DIAGONAL)
    if abs(state.norm() - 1.0) > NORM_TOL:
        out.append(Violation.NORM)
    return out


def require_valid(state, tol: float = REJECT_TOL):
    """Raise :class:`NotNormalized` if ``state`` breaks structure or norm beyond ``tol``."""
    bad = [v for v in validate(state) if v is not Violation.NORM]
    if bad:
        raise NotNormalized(f"state violates invariants: {[repr(v) for v in bad]}")
    if abs(state.norm() - 1.0) > tol:
        raise NotNormalized(f"state norm {state.norm()!r} differs from 1 by more than {tol}")


def spectral_weights(state) -> SpectralWeights:
    require_valid(state)
    if isinstance(state, TwoQubitState):
        a = np.abs(state.c) ** 2
        return SpectralWeights(_renormalize((a[0], a[1] + a[2], a[3])), 0)
    if isinstance(state, BosonCoeffMatrix):
        a = np.abs(state.entries()) ** 2
        return SpectralWeights(_renormalize((2 * a[0], 4 * a[1], 2 * a[2])), 0)
    a = 4.0 * np.abs(state.entries()) ** 2
    # pair energies 1, 2, 3, 3, 4, 5; the common factor z is carried by offset
    return SpectralWeights(_renormalize((a[0], a[1], a[2] + a[3], a[4], a[5])), 1)


def _renormalize(w: tuple) -> tuple:
    s = math.fsum(w)
    return tuple(float(x) / s for x in w)


_FAMILY_SIZES = {"qubit": 4, "boson": 3, "fermion": 6}


def state_to_dict(state) -> dict:
    return {
        "family": state.family,
        "amplitudes": [[float(z.real), float(z.imag)] for z in state.entries()],
    }


def state_from_dict(doc: dict):
    """Parse the interchange form ``{"family": ..., "amplitudes": [[re, im], ...]}``."""
    if not isinstance(doc, dict):
        raise StateFormatError("state document must be a JSON object")
    unknown = set(doc) - {"family", "amplitudes"}
    if unknown:
        raise StateFormatError(f"unknown keys: {sorted(unknown)}")
    family = doc.get("family")
    if family not in _FAMILY_SIZES:
        raise StateFormatError(f"family must be one of {sorted(_FAMILY_SIZES)}, got {family!r}")
    amps = doc.get("amplitudes")
    if not isinstance(amps, list) or len(amps) != _FAMILY_SIZES[family]:
        raise StateFormatError(
            f"{family} state needs {_FAMILY_SIZES[family]} amplitudes, got "
            f"{len(amps) if isinstance(amps, list) else type(amps).__name__}"
        )
    vals = []
    for a in amps:
        if not (isinstance(a, list) and len(a) == 2):
            raise StateFormatError(f"amplitude {a!r} is not a [re, im] pair")
        try:
            vals.append(complex(float(a[0]), float(a[1])))
        except (TypeError, ValueError) as exc:
            raise StateFormatError(f"amplitude {a!r} is not numeric") from exc
    if family == "qubit":
        return TwoQubitState(vals)
    if family == "boson":
        return BosonCoeffMatrix.from_entries(*vals)
    return FermionCoeffMatrix.from_entries(vals)


def load_state(path) -> State:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise StateFormatError(f"{path}: not valid JSON ({exc})") from exc
    return state_from_dict(doc)


def dump_state(state, path):
    Path(path).write_text(json.dumps(state_to_dict(state)) + "\n")
