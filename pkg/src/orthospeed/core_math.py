"""Survival-amplitude polynomials and their roots on the unit circle.

A polynomial ``P(z) = p_0 + p_1 z + ... + p_D z^D`` with nonnegative weights
summing to one is the survival amplitude of a state whose energies are
equispaced, written in the variable ``z = exp(-i theta)``.  The state becomes
orthogonal to its initial value exactly when ``P`` has a root on the unit
circle, and the first such angle fixes the orthogonality time.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ZeroPolynomial

__all__ = [
    "UnitCirclePolynomial",
    "from_polar",
    "poly_roots",
    "unit_circle_roots",
    "first_orthogonality_angle",
]

TWO_PI = 2.0 * math.pi
MAX_DEGREE = 5

# roots of a float polynomial with an exact k-fold root scatter by ~eps**(1/k);
# for k <= 5 that stays below this radius
_CLUSTER_RADIUS = 1e-2
_MERGE_NOISE = 1e3 * np.finfo(float).eps
_WOBBLE_WINDOW = 1e-6
_ANGLE_DEDUP = 1e-9


def from_polar(r: float, phi: float) -> complex:
    return cmath.rect(r, phi)


@dataclass(frozen=True)
class UnitCirclePolynomial:
    """Spectral weights ``p_0..p_D`` read as polynomial coefficients (ascending powers)."""

    coeffs: tuple

    def __post_init__(self):
        c = tuple(float(x) for x in self.coeffs)
        if not c:
            raise ValueError("polynomial needs at least one coefficient")
        if len(c) - 1 > MAX_DEGREE:
            raise ValueError(f"degree {len(c) - 1} exceeds {MAX_DEGREE}")
        if any(not math.isfinite(x) for x in c):
            raise ValueError("coefficients must be finite")
        if min(c) < 0.0:
            raise ValueError("weights must be nonnegative")
        if abs(math.fsum(c) - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {math.fsum(c)!r}, expected 1")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(_strip(np.asarray(self.coeffs))) - 1

    def __call__(self, z):
        return _horner(np.asarray(self.coeffs), z)


PolyLike = Union[UnitCirclePolynomial, Sequence[float], np.ndarray]


def _coeff_array(poly: PolyLike) -> np.ndarray:
    if isinstance(poly, UnitCirclePolynomial):
        return np.asarray(poly.coeffs, dtype=float)
    arr = np.asarray(poly, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("coefficients must be a non-empty 1-D sequence")
    return arr


def _strip(c: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(c)
    if nz.size == 0:
        raise ZeroPolynomial("all coefficients are zero")
    return c[: nz[-1] + 1]


def _horner(c: np.ndarray, z):
    acc = np.zeros_like(np.asarray(z, dtype=complex)) if np.ndim(z) else 0j
    for a in c[::-1]:
        acc = acc * z + a
    return acc


def _merge_clusters(roots: np.ndarray) -> np.ndarray:
    """Collapse groups of roots that are a rounding-split multiple root.

    A k-fold root perturbed by relative noise ``eta`` spreads over a radius of
    about ``eta**(1/k)``; groups tighter than that (with ``eta`` a few hundred
    ulps) are replaced by k copies of their centroid, which is well conditioned.
    """
    n = roots.size
    if n < 2:
        return roots
    label = list(range(n))

    def find(i):
        while label[i] != i:
            label[i] = label[label[i]]
            i = label[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(roots[i] - roots[j]) < _CLUSTER_RADIUS * max(1.0, abs(roots[i])):
                label[find(i)] = find(j)
    out = roots.copy()
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    for members in groups.values():
        k = len(members)
        if k < 2:
            continue
        centroid = roots[members].mean()
        spread = np.abs(roots[members] - centroid).max()
        if spread <= (_MERGE_NOISE ** (1.0 / k)) * max(1.0, abs(centroid)):
            out[members] = centroid
    return out


def poly_roots(poly: PolyLike) -> list[complex]:
    """All complex roots of ``poly`` (ascending coefficients), with multiplicity.

    Roots come from the companion-matrix eigenvalues.  A multiple root comes
    back from the eigensolver as a small ring of perturbed copies; such rings
    are collapsed onto their centroid so the root keeps full precision.
    """
    c = _strip(_coeff_array(poly))
    if c.size == 1:
        return []
    if c[-1] < 0:
        c = -c
    roots = _merge_clusters(np.asarray(np.roots(c[::-1]), dtype=complex))
    order = np.lexsort((roots.imag, roots.real))
    return [complex(z) for z in roots[order]]


def _canonical_angle(z: complex) -> float:
    # z = exp(-i theta)
    theta = (-cmath.phase(z)) % TWO_PI
    return TWO_PI if theta == 0.0 else theta


def _polish_angle(c: np.ndarray, theta0: float, width: float) -> tuple[float, float]:
    def g(th):
        return abs(_horner(c, cmath.exp(-1j * th))) ** 2

    res = minimize_scalar(
        g, bounds=(theta0 - width, theta0 + width), method="bounded",
        options={"xatol": 1e-14},
    )
    if res.fun < g(theta0):
        return float(res.x), math.sqrt(res.fun)
    return theta0, math.sqrt(g(theta0))


def unit_circle_roots(poly: PolyLike, tol: float = 1e-9) -> list[float]:
    """Angles ``theta`` in ``(0, 2 pi]`` with ``P(exp(-i theta)) = 0``, ascending.

    A root is kept when its modulus is within ``tol`` of one.  Roots that miss
    by a little more (up to ``1e-6``, typical of rounded sampled inputs) get
    their angle polished on ``|P(exp(-i theta))|^2`` and are kept if the
    polished value is below ``tol`` times the coefficient sum.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    c = _strip(_coeff_array(poly))
    scale = float(np.abs(c).sum())
    angles = []
    for z in poly_roots(c):
        off = abs(abs(z) - 1.0)
        theta = _canonical_angle(z)
        if off <= tol:
            angles.append(theta)
        elif off <= _WOBBLE_WINDOW:
            theta, resid = _polish_angle(c, theta, max(10.0 * off, 1e-9))
            if resid <= tol * scale:
                angles.append(theta % TWO_PI or TWO_PI)
    angles.sort()
    out: list[float] = []
    for a in angles:
        if not out or a - out[-1] > _ANGLE_DEDUP:
            out.append(a)
    if len(out) > 1 and out[0] + TWO_PI - out[-1] <= _ANGLE_DEDUP:
        out.pop(0)
    return out


def first_orthogonality_angle(poly: PolyLike, tol: float = 1e-9) -> Optional[float]:
    """Smallest root angle in ``(0, pi]``, or ``None`` if the circle holds no root."""
    c = _strip(_coeff_array(poly))
    if c.size == 1:
        return None
    angles = unit_circle_roots(c, tol)
    if not angles:
        return None
    return min(min(a, TWO_PI - a) if a > math.pi else a for a in angles)
