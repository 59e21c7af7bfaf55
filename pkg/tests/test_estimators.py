"""Estimator checks: weight kernels, moment statistics, oracle agreement."""

import math
import warnings

import numpy as np
import pytest

from ghzsampling import (
    GhzSpec,
    MeasurementPlan,
    RngStream,
    build_state,
    estimate_A,
    estimate_number_q,
    expect_pauli_string,
    oracle_A,
    sample_batch,
    sample_q,
    scatter_points,
    v_from_A,
    weight_A_pp_number,
    weight_A_pp_schwinger,
    weight_A_q,
)
from ghzsampling.estimators import (
    MomentEstimate,
    estimate_pauli_string_q,
    moment_from_weights,
    pauli_weights_q,
)

PLUS = MeasurementPlan((0.0,), (1,))
MINUS = MeasurementPlan((0.0,), (-1,))


def test_weight_q_single_site_values():
    # z = 0 is the all-down pole: the raising weight vanishes there
    assert weight_A_q(np.array([[0.0 + 0.0j]]), PLUS)[0] == 0.0
    # z = 1 on the equator: 3 * 2*conj(z) / (1 + 1) = 3
    assert weight_A_q(np.array([[1.0 + 0.0j]]), PLUS)[0] == pytest.approx(3.0)
    # lowering keeps z itself
    assert weight_A_q(np.array([[1j]]), MINUS)[0] == pytest.approx(3j)
    # analyzer rotation multiplies by e^{-i s theta}
    rot = MeasurementPlan((math.pi / 2,), (1,))
    assert weight_A_q(np.array([[1.0 + 0.0j]]), rot)[0] == pytest.approx(-3j)


def test_weight_pp_number_single_site_values():
    mu = np.array([[1.0 + 0.0j]])
    nu = np.array([[0.0 + 0.0j]])
    # pure raising keeps only the creation coordinate beta = conj(mu - nu)
    assert weight_A_pp_number(mu, nu, PLUS)[0] == pytest.approx(2.0)
    assert weight_A_pp_number(mu, nu, MINUS)[0] == pytest.approx(2.0)
    mu = np.array([[0.5 + 0.5j]])
    nu = np.array([[0.25 - 0.25j]])
    assert weight_A_pp_number(mu, nu, PLUS)[0] == pytest.approx(
        2.0 * np.conj(mu[0, 0] - nu[0, 0])
    )
    assert weight_A_pp_number(mu, nu, MINUS)[0] == pytest.approx(2.0 * (mu[0, 0] + nu[0, 0]))


def test_weight_pp_schwinger_single_site_values():
    mu1 = np.array([[1.0 + 0.0j]])
    mu2 = np.array([[0.5 + 0.0j]])
    zero = np.zeros((1, 1), dtype=complex)
    # raising: 2 * conj(mu1) * mu2; lowering: 2 * conj(mu2) * mu1
    assert weight_A_pp_schwinger(mu1, mu2, zero, zero, PLUS)[0] == pytest.approx(1.0)
    assert weight_A_pp_schwinger(mu1, mu2, zero, zero, MINUS)[0] == pytest.approx(1.0)


def test_weight_zero_coordinate_gives_exact_zero():
    plan = MeasurementPlan((0.0, 0.3), (1, 1))
    z = np.array([[0.0 + 0.0j, 1.0 + 1.0j]])
    assert weight_A_q(z, plan)[0] == 0.0


def test_weight_rejects_nonfinite():
    plan = MeasurementPlan((0.0,), (1,))
    with pytest.raises(ValueError):
        weight_A_q(np.array([[np.inf + 0.0j]]), plan)


def test_moment_from_weights_constant():
    est = moment_from_weights(np.full(640, 2.0 - 1.0j), sub_batches=64)
    assert est.mean == pytest.approx(2.0 - 1.0j)
    assert est.se_re == pytest.approx(0.0, abs=1e-14)
    assert est.se_im == pytest.approx(0.0, abs=1e-14)
    assert est.n == 640 and est.sub_batches == 64


def test_moment_from_weights_plain_se():
    rng = np.random.default_rng(0)
    x = rng.normal(size=4000)
    est = moment_from_weights(x, sub_batches=None)
    assert est.mean.real == pytest.approx(np.mean(x))
    assert est.se_re == pytest.approx(np.std(x, ddof=1) / math.sqrt(x.size))
    assert est.sub_batches == est.n


def test_moment_from_weights_mean_independent_of_grouping():
    rng = np.random.default_rng(1)
    w = rng.normal(size=6400) + 1j * rng.normal(size=6400)
    a = moment_from_weights(w, sub_batches=64).mean
    b = moment_from_weights(w, sub_batches=None).mean
    assert a == pytest.approx(b, rel=1e-12)


def test_moment_from_weights_edge_cases():
    with pytest.raises(ValueError):
        moment_from_weights(np.array([]))
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        est = moment_from_weights(np.ones(5), sub_batches=64)
    assert est.sub_batches == 5
    assert any("sub-batch" in str(w.message) for w in rec)


def test_se_shrinks_as_sqrt_n():
    spec = GhzSpec(3, math.pi / 2)
    plan = MeasurementPlan((0.0,) * 3, (1,) * 3)
    small = estimate_A(sample_q(spec, 1 << 15, RngStream(21)), plan, sub_batches=512)
    large = estimate_A(sample_q(spec, 1 << 17, RngStream(22)), plan, sub_batches=2048)
    ratio = small.se_im / large.se_im
    assert ratio == pytest.approx(2.0, rel=0.15)


def test_streaming_estimate_matches_batch_path():
    """Sub-batch streaming reproduces the all-in-memory estimate exactly."""
    from ghzsampling import estimate_A_streaming

    spec = GhzSpec(3, math.pi / 2)
    plan = MeasurementPlan((0.0,) * 3, (1,) * 3)
    n, B, seed = 4096, 16, 13
    batch = sample_batch(spec, n, "su2q", seed=seed, sub_batches=B)
    direct = estimate_A(batch, plan, sub_batches=B)
    streamed = estimate_A_streaming(spec, plan, n, "su2q", seed=seed, sub_batches=B)
    assert streamed.mean == direct.mean
    assert streamed.se_re == direct.se_re
    assert streamed.se_im == direct.se_im
    assert streamed.n == direct.n and streamed.sub_batches == direct.sub_batches


def test_v_from_A_arithmetic():
    est = MomentEstimate(3.0 + 4.0j, 0.3, 0.4, 100, 10)
    v, se = v_from_A(est, 2)
    assert v == pytest.approx(7.0)
    assert se == pytest.approx(0.5)
    v, se = v_from_A(est, 3)
    assert v == pytest.approx(4.0 * math.sqrt(2.0))
    assert se == pytest.approx(0.4 * math.sqrt(2.0))
    # the statistic is reported as a magnitude
    v, _ = v_from_A(MomentEstimate(-3.0 - 4.0j, 0.0, 0.0, 1, 1), 2)
    assert v == pytest.approx(7.0)


def test_estimates_match_oracle_all_representations():
    """Sampled <A> agrees with the dense oracle for random uniform-sign plans."""
    rng = np.random.default_rng(123)
    n = 1 << 16
    for trial in range(4):
        M = int(rng.integers(1, 6))
        spec = GhzSpec(M, float(rng.uniform(0, 2 * math.pi)))
        s = int(rng.choice([-1, 1]))
        plan = MeasurementPlan(tuple(rng.uniform(0, 2 * math.pi, M)), (s,) * M)
        truth = oracle_A(build_state(spec), plan)
        for rep in ("su2q", "pp-number", "pp-schwinger"):
            batch = sample_batch(spec, n, rep, seed=1000 + trial)
            est = estimate_A(batch, plan)
            pull_re = abs(est.mean.real - truth.real) / max(est.se_re, 1e-12)
            pull_im = abs(est.mean.imag - truth.imag) / max(est.se_im, 1e-12)
            assert pull_re < 5.0, f"{rep} M={M} trial={trial} re pull {pull_re:.1f}"
            assert pull_im < 5.0, f"{rep} M={M} trial={trial} im pull {pull_im:.1f}"


def test_estimate_mixed_sign_plan_consistent_with_zero():
    spec = GhzSpec(3, 1.0)
    plan = MeasurementPlan((0.2, 0.4, 0.6), (1, -1, 1))
    batch = sample_batch(spec, 1 << 16, "su2q", seed=4)
    est = estimate_A(batch, plan)
    assert abs(est.mean.real) < 5 * est.se_re
    assert abs(est.mean.imag) < 5 * est.se_im


def test_pauli_weight_values():
    batch = sample_q(GhzSpec(2, 0.0), 4, RngStream(0))
    batch.points = np.array([[1.0 + 0.0j, 1j]])
    w = pauli_weights_q(batch, "XY")
    # site 0: 6*1/2 = 3 ; site 1: -6*1/2 = -3
    assert w[0] == pytest.approx(-9.0)
    w = pauli_weights_q(batch, "ZI")
    assert w[0] == pytest.approx(0.0)
    with pytest.raises(ValueError):
        pauli_weights_q(batch, "X")
    with pytest.raises(ValueError):
        pauli_weights_q(batch, "XQ")


def test_pauli_estimates_match_oracle():
    spec = GhzSpec(3, 1.3)
    state = build_state(spec)
    batch = sample_q(spec, 1 << 16, RngStream(77))
    for string in ("XXX", "ZZZ", "XYI", "ZIZ", "YYX"):
        truth = expect_pauli_string(state, string).real
        est = estimate_pauli_string_q(batch, string)
        pull = abs(est.mean.real - truth) / max(est.se_re, 1e-12)
        assert pull < 5.0, f"{string}: pull {pull:.1f}"


def test_number_estimate_mean_and_relative_error():
    n = 1 << 16
    for M in (2, 5, 9):
        batch = sample_q(GhzSpec(M, math.pi / 2), n, RngStream(M))
        est = estimate_number_q(batch)
        assert est.mean.real == pytest.approx(M / 2.0, abs=4 * est.se_re)
        # relative error follows sqrt(1 + 2/M) / sqrt(n)
        predicted = math.sqrt(1.0 + 2.0 / M) / math.sqrt(n)
        assert est.se_re / est.mean.real == pytest.approx(predicted, rel=0.15)


def test_scatter_points_shape_and_escape():
    spec = GhzSpec(2, math.pi)
    plan = MeasurementPlan((0.0, math.pi / 4), (-1, -1))
    for rep in ("su2q", "pp-number", "pp-schwinger"):
        batch = sample_batch(spec, 4096, rep, seed=8)
        pts = scatter_points(batch, plan)
        assert pts.shape == (4096, 2)
        outside = np.mean(np.any(np.abs(pts) > 1.0, axis=1))
        assert outside > 0.01, f"{rep}: no weight escapes the eigenvalue box"
    with pytest.raises(ValueError):
        scatter_points(batch, plan, site_pair=(0, 5))
