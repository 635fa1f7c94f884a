import json
import math

import numpy as np
import pytest

from orthospeed.analysis import state_from_params
from orthospeed.errors import DomainError, NotNormalized, StateFormatError
from orthospeed.states import (
    BosonCoeffMatrix,
    BosonOrthoParams,
    FermionCoeffMatrix,
    FermionOrthoParams,
    QubitOrthoParams,
    TwoQubitState,
    Violation,
    boson_from_params,
    dump_state,
    fermion_from_params,
    load_state,
    qubit_from_params,
    spectral_weights,
    state_from_dict,
    state_to_dict,
    validate,
)

S2 = 1 / math.sqrt(2)


def test_qubit_params_bell_corner():
    s = qubit_from_params(QubitOrthoParams(math.pi / 2, 0.5))
    np.testing.assert_allclose(s.c, [S2, 0, 0, S2], atol=1e-12)


def test_qubit_params_equal_weights():
    s = qubit_from_params(QubitOrthoParams(math.pi, 0.5))
    np.testing.assert_allclose(np.abs(s.c) ** 2, [0.25] * 4, atol=1e-12)


@pytest.mark.parametrize("alpha", [math.pi / 3, 0.0, 1.7 * math.pi])
def test_qubit_params_domain(alpha):
    with pytest.raises(DomainError):
        qubit_from_params(QubitOrthoParams(alpha))


def test_qubit_params_moduli(rng):
    for _ in range(50):
        a = rng.uniform(math.pi / 2, 3 * math.pi / 2)
        d = rng.uniform()
        p = QubitOrthoParams(a, d, tuple(rng.uniform(0, 2 * math.pi, 4)))
        s = qubit_from_params(p)
        g = 1 / (2 * (1 - math.cos(a)))
        expected = [g, -2 * d * g * math.cos(a), -2 * (1 - d) * g * math.cos(a), g]
        np.testing.assert_allclose(np.abs(s.c) ** 2, expected, atol=1e-14)
        np.testing.assert_allclose(np.angle(s.c[0]), np.angle(np.exp(1j * p.phases[0])), atol=1e-12)
        assert 0.25 - 1e-15 <= p.gamma <= 0.5 + 1e-15


def test_boson_params_examples():
    m = boson_from_params(BosonOrthoParams(math.pi / 2))
    np.testing.assert_allclose(np.abs(m.v) ** 2, [[0.25, 0], [0, 0.25]], atol=1e-12)
    m = boson_from_params(BosonOrthoParams(math.pi))
    np.testing.assert_allclose(np.abs(m.v) ** 2, np.full((2, 2), 1 / 8), atol=1e-12)
    assert m.v[0, 1] == m.v[1, 0]
    with pytest.raises(DomainError):
        boson_from_params(BosonOrthoParams(0.0))


def test_fermion_beta_pi_alpha_pi_3():
    m = fermion_from_params(FermionOrthoParams(math.pi / 3, math.pi, 0.3))
    a = np.abs(m.entries()) ** 2
    np.testing.assert_allclose(a[[0, 1, 4, 5]], [1 / 16] * 4, atol=1e-12)
    assert a[2] + a[3] == pytest.approx(0.0, abs=1e-12)


def test_fermion_symmetric_angles():
    m = fermion_from_params(FermionOrthoParams(2 * math.pi / 3, 2 * math.pi / 3, 0.5))
    a = np.abs(m.entries()) ** 2
    # x = 1/(16 * 1.5 * 1.5) = 1/36; -2x(-1) = 1/18; 2x(1 + 1/2) = 1/12
    np.testing.assert_allclose(a, [1 / 36, 1 / 18, 1 / 24, 1 / 24, 1 / 18, 1 / 36], atol=1e-14)
    assert a.sum() == pytest.approx(0.25, abs=1e-14)


def test_fermion_domain():
    with pytest.raises(DomainError):
        fermion_from_params(FermionOrthoParams(math.pi / 4, math.pi / 4))
    with pytest.raises(DomainError):
        # 1 + 2 cos a cos b < 0
        fermion_from_params(FermionOrthoParams(0.3, 2.9))


def test_fermion_beta_pi_matches_printed_list(rng):
    for a in rng.uniform(math.pi / 3, math.pi, 100):
        lam = rng.uniform()
        m = fermion_from_params(FermionOrthoParams(a, math.pi, lam, tuple(rng.uniform(0, 6, 6))))
        w = np.abs(m.entries()) ** 2
        c = math.cos(a)
        np.testing.assert_allclose(w[0], 1 / (32 * (1 - c)), atol=1e-12)
        np.testing.assert_allclose(w[1], 1 / 16, atol=1e-12)
        np.testing.assert_allclose(w[2] + w[3], (1 - 2 * c) / (16 * (1 - c)), atol=1e-12)
        np.testing.assert_allclose(w[4], 1 / 16, atol=1e-12)
        np.testing.assert_allclose(w[5], 1 / (32 * (1 - c)), atol=1e-12)
        np.testing.assert_allclose(w[2], lam * (1 - 2 * c) / (16 * (1 - c)), atol=1e-12)


def test_fermion_matrix_structure():
    m = fermion_from_params(FermionOrthoParams(2.0, 2.5, 0.2, (0.1, 0.2, 0.3, 0.4, 0.5, 0.6)))
    np.testing.assert_array_equal(m.w, -m.w.T)
    np.testing.assert_array_equal(np.diag(m.w), 0)
    assert np.sum(np.abs(m.w) ** 2) == pytest.approx(0.5, abs=1e-12)


def test_spectral_weight_examples():
    assert spectral_weights(TwoQubitState([S2, 0, 0, S2])).weights == pytest.approx((0.5, 0, 0.5), abs=1e-15)
    sw = spectral_weights(boson_from_params(BosonOrthoParams(math.pi)))
    assert sw.weights == pytest.approx((0.25, 0.5, 0.25), abs=1e-12)
    sw = spectral_weights(fermion_from_params(FermionOrthoParams(math.pi / 3)))
    assert sw.weights == pytest.approx((0.25, 0.25, 0, 0.25, 0.25), abs=1e-12)
    assert sw.offset == 1


def test_family_weights_sum_to_one(rng):
    for _ in range(100):
        for p in (
            QubitOrthoParams(rng.uniform(math.pi / 2, 3 * math.pi / 2), rng.uniform()),
            BosonOrthoParams(rng.uniform(math.pi / 2, 3 * math.pi / 2)),
        ):
            assert math.fsum(spectral_weights(state_from_params(p)).weights) == pytest.approx(1, abs=1e-12)


def test_spectral_weights_rejects_unnormalized():
    with pytest.raises(NotNormalized):
        spectral_weights(TwoQubitState([1, 1, 0, 0]))


def test_validate_examples():
    assert validate(TwoQubitState([S2, 0, 0, S2])) == []
    assert validate(TwoQubitState([1, 1, 0, 0])) == [Violation.NORM]
    assert repr(Violation.NORM) == "NormViolation"
    w = np.zeros((4, 4), complex)
    w[0, 1] = 0.5
    w[1, 0] = -0.4
    assert Violation.ANTISYMMETRY in validate(FermionCoeffMatrix(w))
    w = np.zeros((4, 4), complex)
    w[0, 1], w[1, 0] = S2 / 2, -S2 / 2
    w[2, 2] = 0.1
    assert Violation.DIAGONAL in validate(FermionCoeffMatrix(w))
    assert Violation.SYMMETRY in validate(BosonCoeffMatrix([[0.5, 0.1], [0.2, 0.3]]))


def test_single_slater_determinant_is_valid():
    m = FermionCoeffMatrix.from_entries([0.5, 0, 0, 0, 0, 0])
    assert validate(m) == []


@pytest.mark.parametrize(
    "doc",
    [
        {"family": "qubit", "amplitudes": [[1, 0], [0, 0], [0, 0]]},
        {"family": "boson", "amplitudes": [[1, 0]] * 4},
        {"family": "fermion", "amplitudes": [[1, 0]] * 3},
        {"family": "trion", "amplitudes": []},
        {"family": "qubit", "amplitudes": [[1, 0, 0], [0, 0], [0, 0], [0, 0]]},
        {"family": "qubit", "amplitudes": [["a", 0], [0, 0], [0, 0], [0, 0]]},
        {"family": "qubit", "amplitudes": [[1, 0]] * 4, "extra": 1},
    ],
)
def test_interchange_rejects_malformed(doc):
    with pytest.raises(StateFormatError):
        state_from_dict(doc)


def test_interchange_roundtrip(tmp_path):
    for s in (
        qubit_from_params(QubitOrthoParams(2.0, 0.3, (0.1, 0.2, 0.3, 0.4))),
        boson_from_params(BosonOrthoParams(2.5, (1.0, 2.0, 3.0))),
        fermion_from_params(FermionOrthoParams(2.0, 2.5, 0.2, (0.1, 0.2, 0.3, 0.4, 0.5, 0.6))),
    ):
        path = tmp_path / f"{s.family}.json"
        dump_state(s, path)
        back = load_state(path)
        assert type(back) is type(s)
        np.testing.assert_array_equal(back.entries(), s.entries())
        assert json.loads(path.read_text()) == state_to_dict(s)
    # symmetric / antisymmetric completion is implied by the short form
    b = state_from_dict({"family": "boson", "amplitudes": [[0.5, 0], [0.1, 0.2], [0.3, 0]]})
    assert b.v[1, 0] == b.v[0, 1]
    f = load_state(tmp_path / "fermion.json")
    np.testing.assert_array_equal(f.w, -f.w.T)


def test_states_are_immutable():
    s = TwoQubitState([S2, 0, 0, S2])
    with pytest.raises(ValueError):
        s.c[0] = 1
