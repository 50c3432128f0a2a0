import math

import numpy as np
import pytest

from giantcavity import (
    ModelError,
    PhysicalParams,
    StateSpaceModel,
    build_model,
    complex_to_quadrature,
    coupling_from_gamma,
    gamma_from_coupling,
    markovian_limit,
)


def test_paper_coefficient_matrices(paper_model):
    # hand expansion of the complex mode equation into quadratures
    m = paper_model
    np.testing.assert_array_equal(m.A, [[-4e8, 1e9], [-1e9, -4e8]])
    np.testing.assert_array_equal(m.A_d, [[-4e8, 0.0], [0.0, -4e8]])
    g2 = math.sqrt(8e8 / 2.0)
    np.testing.assert_array_equal(m.B, [[0.0, g2], [-g2, 0.0]])
    for other in (m.B_d, m.C, m.C_d):
        np.testing.assert_array_equal(other, m.B)
    np.testing.assert_array_equal(m.D_d, np.eye(2))


def test_delay_is_exact_ratio(paper_params, paper_model):
    assert paper_model.T == paper_params.L / paper_params.v_g
    assert math.isclose(paper_model.T, 1.5e-8, rel_tol=1e-12)


def test_measurement_noise_identity(paper_model):
    np.testing.assert_array_equal(paper_model.measurement_noise_cov, np.eye(2))


def test_zero_coupling_limit():
    m = build_model(PhysicalParams(omega_c=1e9, gamma=0.0, L=1.5e-5, v_g=1e3))
    np.testing.assert_array_equal(m.A, [[0.0, 1e9], [-1e9, 0.0]])
    for z in (m.A_d, m.B, m.B_d, m.C, m.C_d):
        np.testing.assert_array_equal(z, np.zeros((2, 2)))
    np.testing.assert_array_equal(m.D_d, np.eye(2))


def test_eigenvalues_of_drift():
    rng = np.random.default_rng(3)
    for _ in range(20):
        w = 10.0 ** rng.uniform(6, 10)
        g = 10.0 ** rng.uniform(6, 10)
        m = build_model(PhysicalParams(omega_c=w, gamma=g, L=1e-5, v_g=1e3))
        eigs = np.sort_complex(np.linalg.eigvals(m.A))
        want = np.sort_complex(np.array([-g / 2 + 1j * w, -g / 2 - 1j * w]))
        assert np.all(np.abs(eigs - want) <= 1e-12 * np.abs(want))


def test_gamma_from_coupling_values():
    assert gamma_from_coupling(0.0, 1e3) == 0.0
    assert math.isclose(gamma_from_coupling(1.0, 4.0 * math.pi), 1.0, rel_tol=1e-15)


def test_gamma_round_trip_ten_digits():
    v_q = coupling_from_gamma(8e8, 1e3)
    assert math.isclose(v_q, math.sqrt(8e8 * 1e3 / (4 * math.pi)), rel_tol=1e-12)
    back = gamma_from_coupling(v_q, 1e3)
    assert abs(back - 8e8) <= 1e-10 * 8e8


def test_gamma_monotone_and_velocity_scaling():
    rng = np.random.default_rng(11)
    for _ in range(20):
        v1, v2 = sorted(rng.uniform(0.1, 10.0, size=2))
        vg = rng.uniform(1.0, 1e4)
        assert gamma_from_coupling(v2, vg) > gamma_from_coupling(v1, vg)
        assert math.isclose(
            gamma_from_coupling(v1, 2 * vg), gamma_from_coupling(v1, vg) / 2,
            rel_tol=1e-15,
        )
        # sign of the coupling does not matter
        assert gamma_from_coupling(-v1, vg) == gamma_from_coupling(v1, vg)


def test_coupling_given_instead_of_gamma():
    v_q = coupling_from_gamma(8e8, 1e3)
    p = PhysicalParams(omega_c=1e9, L=1.5e-5, v_g=1e3, V_q=v_q)
    assert math.isclose(p.decay_rate, 8e8, rel_tol=1e-12)
    m = build_model(p)
    assert math.isclose(m.A[0, 0], -4e8, rel_tol=1e-12)


def test_markovian_limit_merges(paper_model):
    m0 = markovian_limit(paper_model)
    np.testing.assert_array_equal(m0.A, [[-8e8, 1e9], [-1e9, -8e8]])
    np.testing.assert_array_equal(m0.B, 2 * paper_model.B)
    np.testing.assert_array_equal(m0.C, 2 * paper_model.C)
    assert m0.T == 0.0
    assert not m0.has_delay_terms


def test_markovian_limit_gamma_zero_is_identity():
    m = build_model(PhysicalParams(omega_c=1e9, gamma=0.0, L=1.5e-5, v_g=1e3))
    m0 = markovian_limit(m)
    np.testing.assert_array_equal(m0.A, m.A)
    np.testing.assert_array_equal(m0.B, m.B)
    np.testing.assert_array_equal(m0.C, m.C)


def test_complex_to_quadrature_map():
    np.testing.assert_array_equal(complex_to_quadrature(1.0), np.eye(2))
    np.testing.assert_array_equal(
        complex_to_quadrature(-1j), [[0.0, 1.0], [-1.0, 0.0]]
    )


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(omega_c=-1.0, gamma=1.0, L=1.0, v_g=1.0),
        dict(omega_c=1.0, gamma=-1.0, L=1.0, v_g=1.0),
        dict(omega_c=1.0, gamma=1.0, L=-1.0, v_g=1.0),
        dict(omega_c=1.0, gamma=1.0, L=1.0, v_g=0.0),
        dict(omega_c=float("nan"), gamma=1.0, L=1.0, v_g=1.0),
        dict(omega_c=1.0, L=1.0, v_g=1.0),  # no coupling given
        dict(omega_c=1.0, gamma=1.0, V_q=1.0, L=1.0, v_g=1.0),  # both given
    ],
)
def test_invalid_physical_params(kwargs):
    with pytest.raises(ModelError):
        PhysicalParams(**kwargs)


def test_invalid_coupling_args():
    with pytest.raises(ModelError):
        gamma_from_coupling(1.0, 0.0)
    with pytest.raises(ModelError):
        coupling_from_gamma(-1.0, 1.0)


def test_model_rejects_singular_measurement_noise():
    z = np.zeros((2, 2))
    with pytest.raises(ModelError):
        StateSpaceModel(A=z, A_d=z, B=z, B_d=z, C=z, C_d=z, D_d=z, T=0.0)


def test_model_rejects_bad_matrix():
    z = np.zeros((2, 2))
    with pytest.raises(ModelError):
        StateSpaceModel(A=np.zeros((3, 3)), A_d=z, B=z, B_d=z, C=z, C_d=z, D_d=np.eye(2), T=0.0)
    with pytest.raises(ModelError):
        StateSpaceModel(A=[[np.inf, 0], [0, 0]], A_d=z, B=z, B_d=z, C=z, C_d=z, D_d=np.eye(2), T=0.0)
    with pytest.raises(ModelError):
        StateSpaceModel(A=z, A_d=z, B=z, B_d=z, C=z, C_d=z, D_d=np.eye(2), T=-1.0)


def test_model_matrices_immutable(paper_model):
    with pytest.raises(ValueError):
        paper_model.A[0, 0] = 0.0
