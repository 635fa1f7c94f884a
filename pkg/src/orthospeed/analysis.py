"""Extremal speed curves, seeded samplers and the brute-force time oracle.

Random draws use numpy's PCG64.  Samples are produced in fixed-size chunks;
chunk ``i`` of a run with seed ``s`` draws from
``PCG64(SeedSequence(s, spawn_key=(i,)))``, so the output depends only on
``(family, count, seed)`` and never on how many workers produced it.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .dynamics import energy_moments, orthogonality_time
from .errors import DomainError
from .states import (
    BosonCoeffMatrix,
    BosonOrthoParams,
    FermionCoeffMatrix,
    FermionOrthoParams,
    QubitOrthoParams,
    TwoQubitState,
    boson_from_params,
    fermion_from_params,
    qubit_from_params,
    require_valid,
)

__all__ = [
    "FAMILIES",
    "SpeedPoint",
    "VerificationReport",
    "qubit_ratio_of_gamma",
    "qubit_extremal_curves",
    "boson_extremal_alphas",
    "boson_ratio_of_alpha",
    "boson_extremal_curves",
    "fermion_tmin_of_alpha",
    "fermion_ratio_of_alpha",
    "fermion_concurrence_range",
    "FERMION_RATIO_LOW",
    "FERMION_RATIO_HIGH",
    "sample_states",
    "brute_force_tau",
    "survival_oracle",
    "fd_moments",
    "verify",
]

FAMILIES = ("qubit", "boson", "fermion")
FERMION_RATIO_LOW = math.sqrt(10.0) / 3.0
FERMION_RATIO_HIGH = 2.0
CHUNK_SIZE = 256
_SLACK = 1e-12


# -- extremal curves ---------------------------------------------------------

def qubit_ratio_of_gamma(gamma: float) -> float:
    """``tau / T_min = (2/pi) sqrt(2 G) arccos((2G - 1) / 2G)`` for ``G`` in [1/4, 1/2]."""
    if not (0.25 - _SLACK <= gamma <= 0.5 + _SLACK):
        raise DomainError(f"gamma = {gamma!r} outside [1/4, 1/2]")
    arg = min(max((2.0 * gamma - 1.0) / (2.0 * gamma), -1.0), 0.0)
    return (2.0 / math.pi) * math.sqrt(2.0 * gamma) * math.acos(arg)


def qubit_extremal_curves(c: float) -> tuple[float, Optional[float]]:
    """Lowest and highest ``tau / T_min`` at concurrence ``c``.

    The minimum branch sits at ``G = (1 + C) / 4``.  The maximum branch
    ``G = C / 2`` only exists for ``C >= 1/2``; below that it is ``None``.
    """
    if not (-_SLACK <= c <= 1.0 + _SLACK):
        raise DomainError(f"concurrence {c!r} outside [0, 1]")
    c = min(max(c, 0.0), 1.0)
    low = qubit_ratio_of_gamma((1.0 + c) / 4.0)
    high = qubit_ratio_of_gamma(c / 2.0) if c / 2.0 >= 0.25 else None
    return low, high


def boson_extremal_alphas(c: float) -> tuple[float, Optional[float]]:
    """Root angles of the fastest and slowest two-boson states at concurrence ``c``.

    ``C = (1 + cos a_min) / (1 - cos a_min)`` and ``C = 1 / (1 - cos a_max)``;
    the second has a solution only for ``C >= 1/2``.  At ``C = 0`` the minimum
    branch takes its limit ``pi``.
    """
    if not (-_SLACK <= c <= 1.0 + _SLACK):
        raise DomainError(f"concurrence {c!r} outside [0, 1]")
    c = min(max(c, 0.0), 1.0)
    a_min = math.acos((c - 1.0) / (c + 1.0))
    a_max = None
    if c > 0.0:
        arg = 1.0 - 1.0 / c
        if arg >= -1.0 - _SLACK:
            a_max = math.acos(max(arg, -1.0))
    return a_min, a_max


def boson_ratio_of_alpha(alpha: float, tmin_variant: str = "eq11") -> float:
    """``tau / T_min`` of the two-boson family state with first root angle ``alpha``."""
    if not (math.pi / 2 - _SLACK <= alpha <= math.pi + _SLACK):
        raise DomainError(f"alpha = {alpha!r} outside [pi/2, pi]")
    if tmin_variant == "boson-paper":
        return alpha / (math.pi / 2.0)
    gamma = 1.0 / (4.0 * (1.0 - math.cos(alpha)))
    t_min = max(math.pi / 2.0, math.pi / (2.0 * 2.0 * math.sqrt(gamma)))
    return alpha / t_min


def boson_extremal_curves(c: float, tmin_variant: str = "eq11"):
    a_min, a_max = boson_extremal_alphas(c)
    r_min = boson_ratio_of_alpha(a_min, tmin_variant)
    r_max = None if a_max is None else boson_ratio_of_alpha(a_max, tmin_variant)
    return r_min, r_max, a_min, a_max


def fermion_tmin_of_alpha(alpha: float) -> float:
    """Speed-limit time of the ``beta = pi`` fermion family, valid for ``cos alpha <= 1/2``."""
    ca = math.cos(alpha)
    if ca > 0.5 + _SLACK or not (0.0 < alpha <= math.pi + _SLACK):
        raise DomainError(f"alpha = {alpha!r} needs cos(alpha) <= 1/2")
    return (math.pi / 2.0) * math.sqrt(2.0 * (1.0 - ca) / (3.0 - ca))


def fermion_ratio_of_alpha(alpha: float) -> float:
    return alpha / fermion_tmin_of_alpha(alpha)


def fermion_concurrence_range(alpha: float, beta: float = math.pi) -> tuple[float, float]:
    """Range of ``C_F`` over all phases and splits at fixed root angles.

    ``C_F/8`` is the modulus of a sum of three complex terms of moduli
    ``|w01 w23|, |w02 w13|, |w03 w12|``; the last ranges over
    ``[0, m/2]`` with the split.
    """
    ca, cb = math.cos(alpha), math.cos(beta)
    x = 1.0 / (16.0 * (1.0 - ca) * (1.0 - cb))
    a = x
    b = 2.0 * x * max(-(ca + cb), 0.0)
    m = 2.0 * x * max(1.0 + 2.0 * ca * cb, 0.0)
    hi = 8.0 * (a + b + m / 2.0)
    # smallest modulus: choose the third term's size in [0, m/2] to best cancel
    gap = abs(a - b)
    lo = 8.0 * max(gap - m / 2.0, 0.0)
    if lo < 1e-12:
        lo = 0.0
    return lo, min(hi, 1.0)


# -- sampling ----------------------------------------------------------------

@dataclass(frozen=True)
class SpeedPoint:
    family: str
    concurrence: float
    ratio: float
    tau: float
    t_min: float
    alpha: float
    beta: Optional[float]
    delta_or_lambda: Optional[float]
    phases: tuple
    tmin_variant: str = "eq11"

    def params(self):
        if self.family == "qubit":
            return QubitOrthoParams(self.alpha, self.delta_or_lambda, tuple(self.phases))
        if self.family == "boson":
            return BosonOrthoParams(self.alpha, tuple(self.phases))
        return FermionOrthoParams(self.alpha, self.beta, self.delta_or_lambda, tuple(self.phases))

    def state(self):
        return state_from_params(self.params())


def state_from_params(p):
    if isinstance(p, QubitOrthoParams):
        return qubit_from_params(p)
    if isinstance(p, BosonOrthoParams):
        return boson_from_params(p)
    return fermion_from_params(p)


def point_from_params(p, tmin_variant: str = "eq11") -> SpeedPoint:
    rep = orthogonality_time(state_from_params(p), tmin_variant=tmin_variant)
    if rep.tau is None:
        raise RuntimeError(f"family state {p} did not reach an orthogonal state")
    if isinstance(p, QubitOrthoParams):
        fam, beta, split = "qubit", None, p.delta
    elif isinstance(p, BosonOrthoParams):
        fam, beta, split = "boson", None, None
    else:
        fam, beta, split = "fermion", p.beta, p.lam
    return SpeedPoint(
        family=fam,
        concurrence=rep.concurrence,
        ratio=rep.ratio,
        tau=rep.tau,
        t_min=rep.t_min,
        alpha=p.alpha,
        beta=beta,
        delta_or_lambda=split,
        phases=tuple(p.phases),
        tmin_variant=rep.tmin_variant,
    )


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def _phases(rng, n):
    return tuple(float(v) for v in rng.uniform(0.0, 2.0 * math.pi, n))


def _draw_params(family: str, rng: np.random.Generator):
    if family == "qubit":
        alpha = float(rng.uniform(math.pi / 2, 3 * math.pi / 2))
        return QubitOrthoParams(alpha, float(rng.uniform()), _phases(rng, 4))
    if family == "boson":
        alpha = float(rng.uniform(math.pi / 2, 3 * math.pi / 2))
        return BosonOrthoParams(alpha, _phases(rng, 3))
    while True:
        # uniform on (0, pi]^2, rejected onto the region where all weights are >= 0
        alpha, beta = (math.pi * (1.0 - float(u)) for u in rng.uniform(size=2))
        ca, cb = math.cos(alpha), math.cos(beta)
        if ca + cb <= 0.0 and 1.0 + 2.0 * ca * cb >= 0.0:
            break
    return FermionOrthoParams(alpha, beta, float(rng.uniform()), _phases(rng, 6))


def _sample_chunk(args):
    family, seed, index, n, tmin_variant = args
    rng = _chunk_rng(seed, index)
    return [point_from_params(_draw_params(family, rng), tmin_variant) for _ in range(n)]


def sample_params(family: str, count: int, seed: int) -> list:
    """Generating parameters only, in the same order :func:`sample_states` uses."""
    _check_sampling_args(family, count)
    out = []
    for index, start in enumerate(range(0, count, CHUNK_SIZE)):
        rng = _chunk_rng(seed, index)
        out.extend(_draw_params(family, rng) for _ in range(min(CHUNK_SIZE, count - start)))
    return out


def _check_sampling_args(family, count):
    if family not in FAMILIES:
        raise ValueError(f"family must be one of {FAMILIES}, got {family!r}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")


def sample_states(family: str, count: int, seed: int, tmin_variant: str = "eq11",
                  workers: int = 1) -> list[SpeedPoint]:
    """Random orthogonality-reaching states of ``family`` and their speed ratios.

    Parameters are uniform over each family's admissible range; phases are
    uniform on ``[0, 2 pi)``.
    """
    _check_sampling_args(family, count)
    jobs = [
        (family, seed, index, min(CHUNK_SIZE, count - start), tmin_variant)
        for index, start in enumerate(range(0, count, CHUNK_SIZE))
    ]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_sample_chunk, jobs))
    else:
        chunks = [_sample_chunk(j) for j in jobs]
    return [p for chunk in chunks for p in chunk]


# -- brute-force oracle ------------------------------------------------------
#
# The oracle never touches spectral weights or polynomial roots: it rebuilds
# the survival amplitude from the raw coefficients, scans it on a grid and
# refines local minima by golden-section search.

def _entry_weights(state):
    """(probability, energy) per stored coefficient, straight from the state."""
    require_valid(state)
    if isinstance(state, TwoQubitState):
        return np.abs(state.c) ** 2, np.array([0.0, 1.0, 1.0, 2.0])
    if isinstance(state, BosonCoeffMatrix):
        e = np.array([0.0, 1.0])
        return 2.0 * np.abs(state.v.ravel()) ** 2, (e[:, None] + e[None, :]).ravel()
    if isinstance(state, FermionCoeffMatrix):
        e = np.arange(4.0)
        return 2.0 * np.abs(state.w.ravel()) ** 2, (e[:, None] + e[None, :]).ravel()
    raise TypeError(f"unsupported state {type(state).__name__}")


def survival_oracle(state):
    """Return ``S(t)`` evaluated directly as ``sum_n |a_n|^2 exp(-i E_n t)``."""
    prob, energy = _entry_weights(state)

    def s(t):
        return complex(np.sum(prob * np.exp(-1j * energy * t)))

    return s


@lru_cache(maxsize=2)
def _grid(grid_points: int):
    t = np.linspace(0.0, 2.0 * math.pi, grid_points + 1)[1:]
    return t, np.exp(-1j * t)


def _golden_min(f, a, b, width=1e-12):
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > width:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (a + b) / 2.0


def brute_force_tau(state, grid_points: int = 10**6, tol: float = 1e-6) -> Optional[float]:
    """First zero of ``|S(t)|`` on ``(0, 2 pi]`` found by scanning, or ``None``.

    Local minima of the grid scan below ``1e-3`` are refined to width
    ``1e-12``; the earliest refined minimum with ``|S| <= tol`` is returned.
    """
    if grid_points < 10**4:
        raise ValueError("grid_points must be at least 1e4")
    prob, energy = _entry_weights(state)
    # per-level totals; the scan evaluates sum_E q_E z^E by Horner on a cached grid
    q = np.bincount(np.rint(energy).astype(int), weights=prob)
    levels = np.flatnonzero(q)
    if levels.size < 2:
        return None
    q = q[levels[0]: levels[-1] + 1]
    t, z = _grid(grid_points)
    acc = np.full(z.shape, q[-1], dtype=complex)
    for coef in q[-2::-1]:
        acc = acc * z + coef
    mag = np.abs(acc)

    padded = np.concatenate(([1.0], mag, [1.0]))
    inner = padded[1:-1]
    idx = np.flatnonzero((inner <= padded[:-2]) & (inner < padded[2:]) & (inner < 1e-3))
    s = survival_oracle(state)
    step = t[1] - t[0]
    for i in idx:
        lo, hi = t[i] - step, t[i] + step
        tm = _golden_min(lambda x: abs(s(x)), max(lo, 0.0), hi)
        if abs(s(tm)) <= tol:
            return tm
    return None


def fd_moments(state, h: float = 1e-4) -> tuple[float, float]:
    """``(i S'(0), -S''(0))`` by Richardson-extrapolated central differences."""
    s = survival_oracle(state)

    def d1(step):
        return (s(step) - s(-step)) / (2.0 * step)

    def d2(step):
        return (s(step) - 2.0 * s(0.0) + s(-step)) / step**2

    first = (4.0 * d1(h / 2) - d1(h)) / 3.0
    second = (4.0 * d2(h / 2) - d2(h)) / 3.0
    return float((1j * first).real), float((-second).real)


@dataclass
class VerificationReport:
    family: str
    count: int
    seed: int
    tol: float
    max_tau_deviation: float = 0.0
    max_moment_deviation: float = 0.0
    failures: list = field(default_factory=list)
    records: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self, with_records: bool = True) -> dict:
        d = {
            "family": self.family,
            "count": self.count,
            "seed": self.seed,
            "tol": self.tol,
            "max_tau_deviation": self.max_tau_deviation,
            "max_moment_deviation": self.max_moment_deviation,
            "failures": self.failures,
        }
        if with_records:
            d["records"] = self.records
        return d


MEAN_FD_TOL = 1e-6
SQUARE_FD_TOL = 1e-5


def verify(family: str, count: int, seed: int, tol: float = 1e-6,
           grid_points: int = 10**6) -> VerificationReport:
    """Check analytic orthogonality times and moments against the oracle.

    ``tol`` bounds the allowed gap between root-based and scanned ``tau``;
    moments must match finite differences within 1e-6 (mean) and 1e-5
    (second moment).
    """
    params = sample_params(family, count, seed)
    report = VerificationReport(family, count, seed, tol)
    for i, p in enumerate(params):
        state = state_from_params(p)
        rep = orthogonality_time(state)
        oracle = brute_force_tau(state, grid_points=grid_points, tol=max(tol, 1e-6))
        m = energy_moments(state)
        fd_e, fd_h2 = fd_moments(state)
        dev_e, dev_h2 = abs(fd_e - m.e_mean), abs(fd_h2 - m.h2_mean)
        report.max_moment_deviation = max(report.max_moment_deviation, dev_e, dev_h2)

        problems = []
        tau_dev = None
        if (rep.tau is None) != (oracle is None):
            problems.append("attainability mismatch")
        elif rep.tau is not None:
            tau_dev = abs(rep.tau - oracle)
            report.max_tau_deviation = max(report.max_tau_deviation, tau_dev)
            if tau_dev > tol:
                problems.append(f"tau deviation {tau_dev:.3g}")
        if dev_e > MEAN_FD_TOL:
            problems.append(f"mean-energy deviation {dev_e:.3g}")
        if dev_h2 > SQUARE_FD_TOL:
            problems.append(f"second-moment deviation {dev_h2:.3g}")

        rec = {
            "index": i,
            "tau": rep.tau,
            "tau_oracle": oracle,
            "tau_deviation": tau_dev,
            "t_min_eq11": rep.t_min_eq11,
        }
        if rep.t_min_boson_paper is not None:
            rec["t_min_boson_paper"] = rep.t_min_boson_paper
        report.records.append(rec)
        if problems:
            report.failures.append({"index": i, "params": _params_dict(p), "problems": problems})
    return report


def _params_dict(p) -> dict:
    d = {"alpha": p.alpha, "phases": list(p.phases)}
    if isinstance(p, QubitOrthoParams):
        d["delta"] = p.delta
    if isinstance(p, FermionOrthoParams):
        d.update(beta=p.beta, lam=p.lam)
    return d
