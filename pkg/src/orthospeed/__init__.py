"""Entanglement and the speed of quantum evolution for two-particle pure states."""

__version__ = "0.1.0"

from .core_math import (  # noqa: E402
    UnitCirclePolynomial,
    first_orthogonality_angle,
    poly_roots,
    unit_circle_roots,
)
from .dynamics import (  # noqa: E402
    EnergyLadder,
    EnergyMoments,
    SpeedReport,
    energy_moments,
    evolve,
    orthogonality_time,
    overlap,
    t_min_bound,
    t_min_variant_boson_paper,
)
from .entanglement import (  # noqa: E402
    concurrence,
    concurrence_boson,
    concurrence_fermion,
    concurrence_qubit,
    entanglement_entropy_qubit,
    saturating_family_concurrence,
)
from .states import (  # noqa: E402
    BosonCoeffMatrix,
    BosonOrthoParams,
    FermionCoeffMatrix,
    FermionOrthoParams,
    QubitOrthoParams,
    TwoQubitState,
    boson_from_params,
    fermion_from_params,
    qubit_from_params,
    spectral_weights,
    validate,
)
