import math

import numpy as np
import pytest

from giantcavity import (
    ConfigError,
    PhysicalParams,
    SimConfig,
    build_model,
    delay_steps,
    simulate,
    waveguide_field,
)

from scenario import HORIZON, X0


def test_rotation_quarter_period():
    # zero coupling: the quadratures just rotate at omega_c
    p = PhysicalParams(omega_c=1e9, gamma=0.0, L=1.5e-5, v_g=1e3)
    m = build_model(p)
    h = m.T / 1000
    t_star = (math.pi / 2) / p.omega_c
    K = int(round(t_star / h))
    cfg = SimConfig(horizon=K * h, h=h, seed=1, x0=[1.0, 0.0], noise_variance_scale=0.0)
    tr = simulate(m, cfg)
    assert np.linalg.norm(tr.x[-1] - [0.0, -1.0]) < 3 * h * p.omega_c


def test_one_step_recurrence_gated_delay(paper_model):
    # before t = T the delayed terms are gated off: x_{k+1} = x_k + A x_k h
    m = paper_model
    h = m.T / 25
    cfg = SimConfig(horizon=m.T, h=h, seed=9, x0=[-4.0, 4.0], noise_variance_scale=0.0)
    tr = simulate(m, cfg)
    for k in range(tr.N):
        np.testing.assert_array_equal(tr.x[k + 1], tr.x[k] + (m.A @ tr.x[k]) * h)


def test_hold_initial_prehistory(paper_model):
    m = paper_model
    h = m.T / 25
    cfg = SimConfig(
        horizon=m.T, h=h, seed=9, x0=[-4.0, 4.0],
        noise_variance_scale=0.0, prehistory="hold-initial",
    )
    tr = simulate(m, cfg)
    x0 = np.array([-4.0, 4.0])
    np.testing.assert_array_equal(
        tr.x[1], x0 + (m.A @ x0 + m.A_d @ x0) * h
    )


def test_reproducibility(paper_model):
    cfg = SimConfig(horizon=HORIZON / 10, h=paper_model.T / 50, seed=77, x0=X0)
    a = simulate(paper_model, cfg)
    b = simulate(paper_model, cfg)
    np.testing.assert_array_equal(a.x, b.x)
    np.testing.assert_array_equal(a.dw, b.dw)
    np.testing.assert_array_equal(a.dy, b.dy)
    c = simulate(paper_model, SimConfig(horizon=HORIZON / 10, h=paper_model.T / 50, seed=78, x0=X0))
    assert not np.array_equal(a.x, c.x)


def test_noise_increment_covariance(paper_model):
    h = paper_model.T / 50
    cfg = SimConfig(horizon=10_000 * h, h=h, seed=11, x0=[0.0, 0.0])
    tr = simulate(paper_model, cfg)
    emp = tr.dw.T @ tr.dw / len(tr.dw)
    np.testing.assert_allclose(np.diag(emp), h, rtol=0.05)
    assert abs(emp[0, 1]) < 0.05 * h


def test_noise_scale_zero_is_deterministic(paper_model):
    cfg = SimConfig(horizon=paper_model.T, h=paper_model.T / 20, seed=5, x0=X0,
                    noise_variance_scale=0.0)
    tr = simulate(paper_model, cfg)
    np.testing.assert_array_equal(tr.dw, 0.0)


def test_ensemble_mean_matches_deterministic(paper_model, paper_ensemble):
    # linearity: the ensemble mean follows the noise-free flow
    stats, _ = paper_ensemble
    cfg = SimConfig(horizon=HORIZON, h=paper_model.T / 100, seed=1, x0=X0,
                    noise_variance_scale=0.0)
    det = simulate(paper_model, cfg).x
    dev = np.abs(stats.mean_x - det)
    bound = 3.0 * stats.stderr_x() + 1e-12
    assert np.all(dev <= bound)


def test_grid_refinement_first_order(paper_model):
    m = paper_model
    horizon = 2.5 * m.T
    ends = []
    for div in (200, 400, 800, 1600):
        cfg = SimConfig(horizon=horizon, h=m.T / div, seed=1, x0=X0,
                        noise_variance_scale=0.0)
        ends.append(simulate(m, cfg).x[-1])
    d = [np.linalg.norm(ends[i + 1] - ends[i]) for i in range(3)]
    assert d[1] < d[0] and d[2] < d[1]
    for i in range(2):
        assert 1.4 < d[i] / d[i + 1] < 3.5  # halving h roughly halves the change


def test_delay_snap_rejects_offgrid():
    with pytest.raises(ConfigError):
        delay_steps(1.5e-8, 7.853981633974483e-13)
    N, err = delay_steps(1.5e-8, 1.5e-8 / 100)
    assert N == 100 and err <= 1e-6 * 1.5e-8


def test_trajectory_dw_indexing(paper_model):
    cfg = SimConfig(horizon=paper_model.T, h=paper_model.T / 10, seed=2, x0=X0)
    tr = simulate(paper_model, cfg)
    np.testing.assert_array_equal(tr.dw_at(-tr.N), tr.dw[0])
    np.testing.assert_array_equal(tr.dw_at(tr.K - 1), tr.dw[-1])
    with pytest.raises(IndexError):
        tr.dw_at(tr.K)
    with pytest.raises(IndexError):
        tr.dw_at(-tr.N - 1)


@pytest.fixture(scope="module")
def field_setup(paper_params, paper_model):
    m = paper_model
    h = m.T / 50
    cfg = SimConfig(horizon=4 * m.T, h=h, seed=5, x0=X0)
    return paper_params, m, simulate(m, cfg)


def test_field_just_past_output_matches_dy(field_setup):
    # the field one cell past the second coupler is the output record,
    # shifted by the one-cell propagation time
    p, m, tr = field_setup
    cell = p.v_g * tr.h
    fs = waveguide_field(tr, m, p.L + cell, p)
    assert fs.k_start == 1
    ks = np.arange(fs.k_start, tr.K)
    inner = ks - (tr.N + 1) >= 1  # skip the single theta(0) boundary sample
    got = fs.increments[inner]
    want = tr.dy[ks[inner] - 1]
    np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-18)


def test_field_before_first_coupler_is_input_noise(field_setup):
    p, m, tr = field_setup
    cell = p.v_g * tr.h
    fs = waveguide_field(tr, m, -cell, p)
    ks = np.arange(fs.k_start, fs.k_start + len(fs.increments))
    np.testing.assert_array_equal(fs.increments, tr.dw[ks + 1 + tr.N])


def test_field_midpoint_single_emission(field_setup):
    # between the couplers only the upstream emission contributes; check
    # against a direct evaluation of the closed form at random grid points
    p, m, tr = field_setup
    fs = waveguide_field(tr, m, p.L / 2, p)
    s = tr.N // 2
    rng = np.random.default_rng(0)
    for k in rng.integers(fs.k_start, tr.K, size=10):
        k = int(k)
        i = k - s
        want = tr.dw[k - s + tr.N].copy()
        if i > 0:
            want = want + tr.h * (m.C @ tr.x[i])
        elif i == 0:
            want = want + 0.5 * tr.h * (m.C @ tr.x[0])
        np.testing.assert_allclose(
            fs.increments[k - fs.k_start], want, rtol=1e-12, atol=1e-20
        )


def test_field_time_before_history_errors(field_setup):
    p, m, tr = field_setup
    cell = p.v_g * tr.h
    with pytest.raises(ConfigError, match="earliest valid time"):
        waveguide_field(tr, m, p.L + cell, p, t_start=0.0)


def test_field_position_window(field_setup):
    p, m, tr = field_setup
    with pytest.raises(ConfigError):
        waveguide_field(tr, m, 2 * p.L + p.L, p)
    with pytest.raises(ConfigError):
        waveguide_field(tr, m, -1.5 * p.L, p)


def test_bad_sim_config(paper_model):
    with pytest.raises(ConfigError):
        SimConfig(horizon=0.0, h=1e-10, seed=0, x0=X0)
    with pytest.raises(ConfigError):
        SimConfig(horizon=1e-7, h=-1e-10, seed=0, x0=X0)
    with pytest.raises(ConfigError):
        SimConfig(horizon=1e-7, h=1e-10, seed=0, x0=[1.0, 2.0, 3.0])
    with pytest.raises(ConfigError):
        SimConfig(horizon=1e-7, h=1e-10, seed=0, x0=X0, prehistory="mirror")
    with pytest.raises(ConfigError):
        SimConfig(horizon=1e-7, h=1e-10, seed=0, x0=X0, noise_variance_scale=-1.0)
