import math

import numpy as np
import pytest

from fracbb.errors import ConvergenceError, InputError
from fracbb.experiments import (
    ExperimentConfig,
    bilinear_A,
    bilinear_A_diracs,
    dirac_pair_bound_scan,
    dirac_pair_limit,
    random_field,
    verify_bb,
)
from fracbb.norms import sobolev_norm
from fracbb.spectral import SpectralField

from oracles import harmonic_sum


# -- bilinear pairing -----------------------------------------------------------


def test_bilinear_antisymmetric_cancellation():
    g = {1: 1.0 + 0j, -1: 1.0 + 0j}
    assert bilinear_A(g, g, 5) == 0j


def test_bilinear_zero_argument():
    g1 = {1: 2.0, -3: 1j}
    assert bilinear_A(g1, {}, 10) == 0j


def test_bilinear_matches_brute_force_loop():
    rng = np.random.default_rng(0)
    N = 6
    g1 = {n: complex(rng.normal(), rng.normal()) for n in range(-N, N + 1) if n}
    g2 = {n: complex(rng.normal(), rng.normal()) for n in range(-N, N + 1) if n}
    expected = 0j
    for n in list(range(-N, 0)) + list(range(1, N + 1)):
        expected += math.copysign(1.0, n) * g1[n] * g2[-n] / (1j * abs(n))
    assert abs(bilinear_A(g1, g2, N) - expected) < 1e-13


def test_bilinear_dirac_pair_reduces_to_sine_series():
    a, b, N = 1.3, 0.4, 50
    g1 = {n: np.exp(1j * n * a) for n in range(-N, N + 1) if n}
    g2 = {n: np.exp(1j * n * b) for n in range(-N, N + 1) if n}
    via_pairing = bilinear_A(g1, g2, N)
    trace = bilinear_A_diracs(a, b, [N])
    assert abs(via_pairing - trace.partial_sums[0]) < 1e-10
    assert abs(via_pairing.imag) < 1e-10


def test_dirac_series_theta_pi_vanishes():
    # sin(n*pi) only vanishes to roundoff in floating point
    trace = bilinear_A_diracs(2.0, 2.0 - math.pi, [10, 1000])
    assert all(abs(v) < 1e-9 for v in trace.partial_sums)
    assert trace.sup_partial < 1e-9
    assert trace.limit == pytest.approx(0.0)


def test_dirac_series_limit_and_convergence():
    trace = bilinear_A_diracs(math.pi / 2, 0.0, [100_000])
    assert trace.limit == pytest.approx(math.pi - math.pi / 2)
    assert abs(trace.partial_sums[0] - trace.limit) < 1e-3


def test_dirac_series_gibbs_bound():
    # Partial sums stay below the jump limit plus the overshoot allowance.
    for theta in (0.1, 0.35, 1.0, 3.0, 5.0):
        trace = bilinear_A_diracs(theta, 0.0, [20_000])
        assert trace.sup_partial <= math.pi + 0.6


def test_dirac_limit_wraps_periodically():
    assert dirac_pair_limit(0.5) == pytest.approx(math.pi - 0.5)
    assert dirac_pair_limit(0.5 + 2 * math.pi) == pytest.approx(math.pi - 0.5)
    assert dirac_pair_limit(-0.5) == pytest.approx(math.pi - (2 * math.pi - 0.5))


def test_dirac_pair_bound_scan_full_grid():
    # The uniform partial-sum bound over 10^3 random pairs up to N = 10^5;
    # the measured sup is the empirical continuity constant on point masses.
    sup, limit = dirac_pair_bound_scan(1000, 100_000, seed=3)
    assert sup <= math.pi + 0.6
    assert limit <= math.pi


# -- random fields ----------------------------------------------------------------


def test_random_field_determinism():
    cfg = ExperimentConfig(dim=1, band=16, samples=4, seed=9)
    f1 = random_field(cfg, 2)
    f2 = random_field(cfg, 2)
    assert f1.coeffs.keys() == f2.coeffs.keys()
    for m in f1.coeffs:
        assert (f1.get(m) - f2.get(m)).is_zero()
    f3 = random_field(cfg, 3)
    assert any(not (f1.get(m) - f3.get(m)).is_zero() for m in f1.coeffs)


def test_random_field_band_one_mode_count():
    cfg = ExperimentConfig(dim=2, band=1, samples=1, seed=0)
    f = random_field(cfg)
    assert len(f.coeffs) <= 8  # the 3x3 cube minus the origin
    assert f.get((0, 0)).is_zero()


def test_random_field_magnitude_law():
    cfg = ExperimentConfig(dim=1, band=32, samples=1, seed=4, decay=1.0)
    f = random_field(cfg)
    for (n,), value in f.scalar_coeffs().items():
        assert abs(abs(value) - abs(n) ** -1.0) < 1e-12


def test_random_field_sobolev_growth_follows_harmonic_sum():
    # With unit-decay magnitudes the H^{1/2} norm squared is exactly twice
    # the harmonic number of the band, so it grows like sqrt(log N).
    for band in (8, 32, 128):
        cfg = ExperimentConfig(dim=1, band=band, samples=1, seed=1, decay=1.0)
        f = random_field(cfg)
        value = sobolev_norm(f, 0.5) ** 2
        assert value == pytest.approx(2.0 * harmonic_sum(band), rel=1e-12)
    # and the negative-order norm stays finite (bounded by zeta(3) tails)
    cfg = ExperimentConfig(dim=1, band=128, samples=1, seed=1, decay=1.0)
    assert sobolev_norm(random_field(cfg), -0.5) < 2.0


# -- the inequality harness ---------------------------------------------------------


def test_verify_bb_lhs_is_coefficient_norm_and_ratio_bounded():
    # Each mixed norm is at most the pure-Sobolev cost of its operand, and
    # for (-Lap)^{1/4} pieces that cost equals the coefficient norm of u,
    # so the S1 ratio is at least 1/2 up to optimizer tolerance.
    cfg = ExperimentConfig(dim=1, band=4, samples=1, seed=5, decay=1.0, tol=1e-8)
    report = verify_bb(cfg)
    row = report.rows[0]
    assert row.lhs == pytest.approx(
        random_field(cfg).l2_coefficient_norm(), rel=1e-12
    )
    assert row.ratio >= 0.5 - 1e-6
    assert math.isfinite(row.ratio) and row.ratio > 0


def test_verify_bb_ratios_scale_invariant():
    cfg = ExperimentConfig(dim=1, band=8, samples=3, seed=6, tol=1e-7)
    report = verify_bb(cfg)
    for row in report.rows:
        scaled = random_field(cfg, row.sample_id).scale(37.5)
        # the harness normalizes internally, so re-running it on the scaled
        # field through the public path must reproduce the ratio exactly
        from fracbb.experiments import _sample_row

        assert _sample_row(cfg, row.sample_id).ratio == pytest.approx(
            row.ratio, abs=1e-9
        )
        assert scaled.l2_coefficient_norm() == pytest.approx(
            37.5 * row.lhs, rel=1e-12
        )


def test_verify_bb_ratio_tracks_pure_sobolev_bound():
    # For decaying samples the Sobolev-only split is feasible (and, at these
    # scales, optimal), so each ratio matches the pure-Sobolev-bound ratio up
    # to tolerance slack.
    cfg = ExperimentConfig(dim=1, band=16, samples=3, seed=12, decay=1.0, tol=1e-7)
    report = verify_bb(cfg)
    from fracbb.operators import fractional_laplacian, riesz

    for row in report.rows:
        u = random_field(cfg, row.sample_id)
        unit = u.scale(1.0 / u.l2_coefficient_norm())
        pure_rhs = 0.0
        for j in range(cfg.dim + 1):
            v = unit if j == 0 else riesz(unit, j)
            pure_rhs += sobolev_norm(
                fractional_laplacian(v, cfg.dim / 4.0), -cfg.dim / 2.0
            )
        pure_ratio = 1.0 / pure_rhs
        assert row.ratio <= pure_ratio + 10 * cfg.tol
        assert row.ratio >= pure_ratio - 10 * cfg.tol


def test_verify_bb_report_structure():
    cfg = ExperimentConfig(dim=2, band=3, samples=4, seed=7, tol=1e-6)
    report = verify_bb(cfg)
    assert len(report.rows) == 4
    assert [row.sample_id for row in report.rows] == [0, 1, 2, 3]
    for row in report.rows:
        assert len(row.gaps) == cfg.dim + 1
        assert all(g >= 0 for g in row.gaps)
        assert row.rhs > 0 and row.ratio == pytest.approx(row.lhs / row.rhs, rel=1e-12)
    quantiles = report.ratio_quantiles()
    assert set(quantiles) == {"q10", "q50", "q90"}
    assert report.failure_rate == 0.0


def test_verify_bb_failure_strictness():
    # An absurdly tight tolerance with a tiny iteration cap must surface
    # non-convergence rather than a silently wrong report.
    cfg = ExperimentConfig(
        dim=1, band=8, samples=2, seed=8, tol=1e-14, max_iterations=100
    )
    with pytest.raises(ConvergenceError) as err:
        verify_bb(cfg)
    assert err.value.partial is not None
    report = verify_bb(cfg, strict=False)
    assert len(report.failures) == 2


def test_lhs_monotone_under_added_modes():
    cfg = ExperimentConfig(dim=1, band=8, samples=1, seed=11)
    u = random_field(cfg)
    lhs = u.l2_coefficient_norm()
    extended = u + SpectralField(1, 8, {(5,): 10.0})
    assert extended.l2_coefficient_norm() >= lhs


def test_thread_env_var_does_not_change_results(monkeypatch):
    cfg = ExperimentConfig(dim=1, band=6, samples=4, seed=13, tol=1e-7)
    serial = verify_bb(cfg)
    monkeypatch.setenv("FRACBB_THREADS", "4")
    threaded = verify_bb(cfg)
    assert [r.sample_id for r in threaded.rows] == [r.sample_id for r in serial.rows]
    for a, b in zip(serial.rows, threaded.rows):
        assert a.lhs == b.lhs and a.rhs == b.rhs and a.ratio == b.ratio


def test_experiment_config_validation():
    with pytest.raises(InputError):
        ExperimentConfig(dim=0)
    with pytest.raises(InputError):
        ExperimentConfig(samples=0)
    with pytest.raises(InputError):
        bilinear_A({}, {}, 0)
    with pytest.raises(InputError):
        bilinear_A_diracs(1.0, 0.0, [])
