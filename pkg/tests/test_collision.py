import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import medium
from oracles import finite_size_factor, phase_exact
from polaritongate.collision import (
    EnvelopeTruncationError,
    PulseEnvelope,
    TwoParticleGrid,
    UndefinedMetricError,
    closed_form_phase,
    compare_phase,
    default_envelopes,
    evolve_two_particle,
    homogeneity_metric,
    phase_bound,
    phase_profile,
    phase_shift,
    schmidt_number,
    schmidt_spectrum,
)
from polaritongate.eit import derive_eit, feasibility
from polaritongate.serialize import read_grid, write_grid

C = 4.9621891814547785e-09
W = 3e-5


def _exact_grid(cfg, der, points=192):
    """F12 built directly from the antiderivative phase, independent of the quadrature path."""
    env1, env2 = default_envelopes(cfg, der)
    sig = env1.sigma_z
    t = der.t_out
    z = np.linspace(-6 * sig, cfg.L + 6 * sig, points)
    dz = z[1] - z[0]
    # uniform grid: phi depends only on i - j
    diag = {k: phase_exact(k * dz, 0.0, t, der.v, cfg.w, cfg.rydberg.interaction_constant_C, der.sin4_theta)
            for k in range(-(points - 1), points)}
    i, j = np.indices((points, points))
    phi = np.vectorize(diag.get)(i - j)
    f1 = np.exp(-((z - der.v * t) ** 2) / (4 * sig**2))
    f2 = np.exp(-((z + der.v * t - cfg.L) ** 2) / (4 * sig**2))
    return z, f1[:, None] * f2[None, :] * np.exp(1j * phi)


def test_no_phase_at_time_zero(paper_der):
    assert phase_shift(1e-5, 2e-5, 0.0, paper_der, C, W) == 0.0


def test_negative_time_rejected(paper_der):
    with pytest.raises(ValueError):
        phase_shift(0.0, 0.0, -1.0, paper_der, C, W)


def test_closed_form_at_paper_point(paper_der):
    phi = closed_form_phase(paper_der, C, W)
    assert phi == pytest.approx(2 * C / (paper_der.v * W**2), rel=1e-7)
    assert 0.8 * math.pi < phi < 0.9 * math.pi
    assert phi == pytest.approx(2.57, abs=0.01)


def test_closed_form_scalings(paper_der):
    assert closed_form_phase(paper_der, 0.0, W) == 0.0
    assert closed_form_phase(paper_der, C, 2 * W) == pytest.approx(closed_form_phase(paper_der, C, W) / 4, rel=1e-14)


def test_bound_at_paper_point(paper_cfg, paper_der):
    bound = phase_bound(paper_der, paper_cfg)
    assert bound == pytest.approx(0.5 * 3e-5 * math.sqrt(paper_der.kappa0 / (math.pi * 1e-4)), rel=1e-14)
    assert bound == pytest.approx(2.9, abs=0.05)
    longer = medium(L=4e-4)
    assert phase_bound(derive_eit(longer), longer) == pytest.approx(bound / 2, rel=1e-14)


@settings(max_examples=200)
@given(
    st.floats(18, 21), st.floats(-5, -3), st.floats(-7, -4.3),
    st.floats(6.5, 8), st.floats(6, 8), st.integers(10, 60),
)
def test_bound_holds_whenever_shift_check_passes(log_rho, log_L, log_w, log_Om, log_g, n):
    cfg = medium(rho=10**log_rho, L=10**log_L, w=10**log_w, Omega=10**log_Om, gamma_ge=10**log_g, n=n, q=n - 1)
    der = derive_eit(cfg)
    if feasibility(cfg, der)["shift_within_bandwidth"].passed:
        assert closed_form_phase(der, cfg.rydberg.interaction_constant_C, cfg.w) <= phase_bound(der, cfg)


@given(st.floats(-3e-4, 3e-4), st.floats(-3e-4, 3e-4), st.floats(0, 1e-4))
def test_quadrature_phase_matches_antiderivative(z1, z2, t, ):
    der = derive_eit(medium())
    expected = phase_exact(z1, z2, t, der.v, W, C, der.sin4_theta)
    got = phase_shift(z1, z2, t, der, C, W)
    assert got == pytest.approx(expected, rel=1e-8, abs=1e-12)


@given(st.floats(-2e-4, 2e-4), st.floats(-2e-4, 2e-4), st.floats(-2e-4, 2e-4), st.floats(1e-7, 5e-5))
def test_phase_depends_only_on_separation(z1, z2, shift, t):
    der = derive_eit(medium())
    a = phase_shift(z1, z2, t, der, C, W)
    b = phase_shift(z1 + shift, z2 + shift, t, der, C, W)
    assert a == pytest.approx(b, rel=1e-9, abs=1e-13)


@given(st.floats(-2e-4, 2e-4), st.floats(1e-7, 5e-5), st.floats(0.01, 100.0))
def test_phase_linear_in_interaction(d, t, k):
    der = derive_eit(medium())
    assert phase_shift(d, 0.0, t, der, k * C, W) == pytest.approx(k * phase_shift(d, 0.0, t, der, C, W), rel=1e-9, abs=1e-14)


@pytest.mark.parametrize("ratio", [3.3, 20.0, 23.0, 200.0, 224.0])
def test_finite_medium_correction(ratio):
    cfg = medium(L=ratio * W)
    der = derive_eit(cfg)
    result = compare_phase(der, C, W, cfg.L)
    expected = 1.0 - finite_size_factor(ratio)
    assert result.rel_difference == pytest.approx(expected, rel=1e-7)
    assert result.phi_quadrature < result.phi_closed


def test_finite_medium_correction_shrinks_with_length():
    diffs = []
    for ratio in (5, 10, 20, 50, 100, 200):
        cfg = medium(L=ratio * W)
        diffs.append(compare_phase(derive_eit(cfg), C, W, cfg.L).rel_difference)
    assert all(a > b for a, b in zip(diffs, diffs[1:]))
    # 1/(2X^2) leading behaviour: below 1e-3 beyond ~22.4 widths, below 1e-5 beyond ~224
    assert diffs[2] > 1e-3


def test_phase_profile_is_an_s_curve(paper_cfg, paper_der):
    tau, phi = phase_profile(paper_der, W, paper_cfg.L)
    assert phi[0] == 0.0
    assert np.all(np.diff(phi) > 0)
    slope = np.diff(phi) / np.diff(tau)
    mid = 0.5 * (tau[1:] + tau[:-1])
    assert abs(mid[np.argmax(slope)] - paper_cfg.L / (2 * W)) < 2 * (tau[1] - tau[0])
    X = paper_cfg.L / W
    assert phi[-1] == pytest.approx(paper_der.sin4_theta * finite_size_factor(X), rel=1e-9)


def test_phase_profile_saturates_for_long_media():
    cfg = medium(L=30 * W)
    der = derive_eit(cfg)
    _, phi = phase_profile(der, W, cfg.L)
    assert phi[-1] == pytest.approx(1.0, abs=1e-3)


def test_envelope_normalisation():
    env = PulseEnvelope(1e-5, 3e-6, 1e-4)
    z = np.linspace(-5e-5, 7e-5, 20001)
    assert np.trapezoid(env.amplitude(z) ** 2, z) == pytest.approx(1e-4, rel=1e-9)
    assert env.mass_fraction(-1.0, 1.0) == pytest.approx(1.0)


def test_bad_envelopes():
    with pytest.raises(ValueError):
        PulseEnvelope(0.0, 0.0, 1e-4)
    with pytest.raises(ValueError):
        PulseEnvelope(0.0, 1e-6, 1e-4, shape="square")


def test_free_product_at_time_zero(paper_cfg, paper_der):
    env1, env2 = default_envelopes(paper_cfg, paper_der)
    grid = evolve_two_particle(env1, env2, 0.0, paper_der, 0.0, W, grid_points=64)
    expected = env1.amplitude(grid.z1_grid)[:, None] * env2.amplitude(grid.z2_grid)[None, :]
    np.testing.assert_allclose(grid.amplitude, expected, rtol=1e-15)
    assert np.all(grid.amplitude.imag == 0) and np.all(grid.amplitude.real >= 0)


def test_free_swap_at_exit(paper_cfg, paper_der):
    env1, env2 = default_envelopes(paper_cfg, paper_der)
    grid = evolve_two_particle(env1, env2, paper_der.t_out, paper_der, 0.0, W, grid_points=64)
    assert np.all(np.angle(grid.amplitude) == 0)
    weight = np.abs(grid.amplitude) ** 2
    z1_mean = np.sum(weight.sum(axis=1) * grid.z1_grid) / weight.sum()
    z2_mean = np.sum(weight.sum(axis=0) * grid.z2_grid) / weight.sum()
    assert z1_mean == pytest.approx(paper_cfg.L, rel=1e-6)
    assert abs(z2_mean) < 1e-9


@pytest.mark.parametrize("frac", [0.0, 0.25, 0.5, 1.0])
def test_intensity_marginals_are_translated_inputs(paper_cfg, paper_der, frac):
    env1, env2 = default_envelopes(paper_cfg, paper_der)
    t = frac * paper_der.t_out
    grid = evolve_two_particle(env1, env2, t, paper_der, C, W, grid_points=128)
    dz = grid.z2_grid[1] - grid.z2_grid[0]
    f1 = env1.amplitude(grid.z1_grid - paper_der.v * t)
    f2 = env2.amplitude(grid.z2_grid + paper_der.v * t)
    marginal = np.sum(np.abs(grid.amplitude) ** 2, axis=1) * dz
    np.testing.assert_allclose(marginal, f1**2 * np.sum(f2**2) * dz, rtol=1e-12)
    assert np.sum(f2**2) * dz == pytest.approx(paper_cfg.L, rel=1e-6)


def test_grid_phases_match_pointwise_quadrature(paper_cfg, paper_der):
    env1, env2 = default_envelopes(paper_cfg, paper_der)
    grid = evolve_two_particle(env1, env2, paper_der.t_out, paper_der, C, W, grid_points=48)
    rng = np.random.default_rng(3)
    for i, j in rng.integers(0, 48, size=(10, 2)):
        phi = phase_shift(grid.z1_grid[i], grid.z2_grid[j], paper_der.t_out, paper_der, C, W)
        assert np.angle(grid.amplitude[i, j]) == pytest.approx(phi, abs=1e-9)


def test_unequal_grids_use_general_path(paper_cfg, paper_der):
    env1, env2 = default_envelopes(paper_cfg, paper_der)
    sig = env1.sigma_z
    z1 = np.linspace(paper_cfg.L - 7 * sig, paper_cfg.L + 7 * sig, 21)
    z2 = np.linspace(-7 * sig, 7 * sig, 17)
    grid = evolve_two_particle(env1, env2, paper_der.t_out, paper_der, C, W, z1_grid=z1, z2_grid=z2)
    phi = phase_shift(z1[4], z2[9], paper_der.t_out, paper_der, C, W)
    assert np.angle(grid.amplitude[4, 9]) == pytest.approx(phi, abs=1e-9)


def test_truncating_grid_names_envelope(paper_cfg, paper_der):
    env1, env2 = default_envelopes(paper_cfg, paper_der)
    z = np.linspace(0.0, paper_cfg.L, 32)
    with pytest.raises(EnvelopeTruncationError, match="env1"):
        evolve_two_particle(env1, env2, 0.0, paper_der, C, W, z1_grid=z, z2_grid=z)


def test_grid_validation():
    z = np.linspace(0, 1, 4)
    with pytest.raises(ValueError):
        TwoParticleGrid(z[::-1], z, np.zeros((4, 4)), 0.0)
    with pytest.raises(ValueError):
        TwoParticleGrid(np.array([0, 1, 3.0, 4]), z, np.zeros((4, 4)), 0.0)
    with pytest.raises(ValueError):
        TwoParticleGrid(z, z, np.zeros((3, 4)), 0.0)


def test_homogeneity_of_constant_phase():
    z = np.linspace(0, 1, 8)
    amp = np.outer(np.exp(-z), np.exp(-z)) * np.exp(2.9j)
    assert homogeneity_metric(TwoParticleGrid(z, z, amp, 0.0)) == 0.0


def test_homogeneity_undefined_for_zero_amplitude():
    z = np.linspace(0, 1, 8)
    with pytest.raises(UndefinedMetricError):
        homogeneity_metric(TwoParticleGrid(z, z, np.zeros((8, 8), complex), 0.0))


def test_homogeneity_handles_branch_cut():
    z = np.linspace(0, 1, 8)
    rng = np.random.default_rng(0)
    phase = math.pi + 0.01 * rng.standard_normal((8, 8))
    grid = TwoParticleGrid(z, z, np.exp(1j * phase), 0.0)
    expected = np.std(phase) / np.mean(np.abs(phase))
    assert homogeneity_metric(grid) == pytest.approx(expected, rel=1e-9)


def test_paper_homogeneity_against_direct_evaluation(paper_cfg, paper_der):
    env1, env2 = default_envelopes(paper_cfg, paper_der)
    grid = evolve_two_particle(env1, env2, paper_der.t_out, paper_der, C, W, grid_points=192)
    metric = homogeneity_metric(grid)
    z, amp = _exact_grid(paper_cfg, paper_der, points=192)
    weight = np.abs(amp) ** 2
    phase = np.angle(amp)
    mean = np.sum(weight * phase) / weight.sum()
    direct = math.sqrt(np.sum(weight * (phase - mean) ** 2) / weight.sum()) / (np.sum(weight * np.abs(phase)) / weight.sum())
    assert metric == pytest.approx(direct, rel=1e-6)
    assert metric < 0.01


def test_homogeneity_improves_with_medium_length():
    values = []
    for ratio in (1.0, 4.0, 20.0):
        cfg = medium(L=ratio * W)
        der = derive_eit(cfg)
        env1, env2 = default_envelopes(cfg, der)
        grid = evolve_two_particle(env1, env2, der.t_out, der, C, W, grid_points=96)
        values.append(homogeneity_metric(grid))
    assert values[0] > values[1] > values[2] > 0


def test_product_state_schmidt(paper_cfg, paper_der):
    env1, env2 = default_envelopes(paper_cfg, paper_der)
    grid = evolve_two_particle(env1, env2, paper_der.t_out, paper_der, 0.0, W, grid_points=96)
    sigma = schmidt_spectrum(grid)
    assert sigma[0] == pytest.approx(1.0, abs=1e-12)
    assert schmidt_number(sigma) == pytest.approx(1.0, abs=1e-9)


def test_uniform_phase_does_not_entangle():
    z = np.linspace(-1, 1, 64)
    amp = np.outer(np.exp(-z**2), np.exp(-(z - 0.2) ** 2)) * np.exp(1.7j)
    sigma = schmidt_spectrum(TwoParticleGrid(z, z, amp, 0.0))
    assert schmidt_number(sigma) == pytest.approx(1.0, abs=1e-6)


def test_schmidt_sum_rule_and_order(paper_cfg, paper_der):
    env1, env2 = default_envelopes(paper_cfg, paper_der)
    grid = evolve_two_particle(env1, env2, paper_der.t_out, paper_der, C, W, grid_points=96)
    sigma = schmidt_spectrum(grid)
    assert np.sum(sigma**2) == pytest.approx(1.0, abs=1e-9)
    assert np.all(np.diff(sigma) <= 0)


def test_inhomogeneous_collision_entangles():
    cfg = medium(L=4 * W)
    der = derive_eit(cfg)
    env1, env2 = default_envelopes(cfg, der)
    grid = evolve_two_particle(env1, env2, der.t_out, der, C, W, grid_points=128)
    K = schmidt_number(schmidt_spectrum(grid))
    dense = scipy.linalg.svd(grid.amplitude, compute_uv=False, lapack_driver="gesvd")
    dense /= np.sqrt(np.sum(dense**2))
    assert K == pytest.approx(1.0 / np.sum(dense**4), rel=1e-10)
    assert K > 1.0 + 1e-5


def test_grid_round_trip(tmp_path, paper_cfg, paper_der):
    env1, env2 = default_envelopes(paper_cfg, paper_der)
    grid = evolve_two_particle(env1, env2, paper_der.t_out, paper_der, C, W, grid_points=24)
    write_grid(grid, tmp_path / "g.csv", tmp_path / "g.json", {"w": W})
    back = read_grid(tmp_path / "g.json")
    np.testing.assert_allclose(back.amplitude, grid.amplitude, rtol=1e-10, atol=1e-10 * np.abs(grid.amplitude).max())
    np.testing.assert_allclose(back.z1_grid, grid.z1_grid, rtol=1e-11)
    assert back.time == pytest.approx(grid.time, rel=1e-11)
    first = (tmp_path / "g.csv").read_text().splitlines()[0]
    assert first == "z1,z2,re,im"
