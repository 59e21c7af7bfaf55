"""Moment estimators over sampled phase-space batches.

Each representation has a per-sample weight whose batch mean is an
unbiased estimate of <A> = <prod_j (sigma^x_j + i s_j sigma^y_j)
e^{-i s_j theta_j}>.  The per-site factor always carries the operator's
creation/annihilation content: for s = +1 the site operator is
sigma^x + i sigma^y = 2 sigma^+ (pure raising), for s = -1 it is
2 sigma^- (pure lowering), so the weight keeps only the corresponding
phase-space coordinate:

  SU(2)-Q:     [3/(1+|z|^2)] ((1+s) z* + (1-s) z)
  number P:    (1+s) beta + (1-s) alpha,  alpha = mu+nu, beta = (mu-nu)*
  Schwinger P: (1+s) beta' alpha'' + (1-s) beta'' alpha'

Standard errors come from splitting the batch into B equal sub-batches
(default 64) and taking the spread of sub-batch means, which is robust
for the heavy-tailed weights these distributions produce.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .model import MeasurementPlan
from .numerics import compensated_mean, logpolar_product, neumaier_sum
from .samplers import (
    SampleBatchP,
    SampleBatchQ,
    SampleBatchSchwinger,
    sample_sub_batch,
    sub_batch_sizes,
)

DEFAULT_SUB_BATCHES = 64


@dataclass(frozen=True)
class MomentEstimate:
    mean: complex
    se_re: float
    se_im: float
    n: int
    sub_batches: int


def _plan_arrays(plan: MeasurementPlan, M: int):
    if len(plan) != M:
        raise ValueError(f"plan length {len(plan)} != qubit count {M}")
    thetas = np.asarray(plan.thetas)
    signs = np.asarray(plan.signs)
    return thetas, np.exp(-1j * signs * thetas), signs


def weight_A_q(z, plan: MeasurementPlan):
    """SU(2)-Q weights for <A>; z has shape (n, M) or (M,)."""
    z = np.atleast_2d(np.asarray(z))
    if not np.all(np.isfinite(z)):
        raise ValueError("non-finite coordinates in batch")
    _, phase, signs = _plan_arrays(plan, z.shape[1])
    ladder = (1 + signs) * np.conj(z) + (1 - signs) * z
    factors = 3.0 * ladder * phase / (1.0 + np.abs(z) ** 2)
    return logpolar_product(factors, axis=1)


def weight_A_pp_number(mu, nu, plan: MeasurementPlan):
    """Number-state positive-P weights for <A>."""
    mu = np.atleast_2d(np.asarray(mu))
    nu = np.atleast_2d(np.asarray(nu))
    if not (np.all(np.isfinite(mu)) and np.all(np.isfinite(nu))):
        raise ValueError("non-finite coordinates in batch")
    _, phase, signs = _plan_arrays(plan, mu.shape[1])
    alpha = mu + nu
    beta = np.conj(mu - nu)
    factors = ((1 + signs) * beta + (1 - signs) * alpha) * phase
    return logpolar_product(factors, axis=1)


def weight_A_pp_schwinger(mu1, mu2, nu1, nu2, plan: MeasurementPlan):
    """Schwinger positive-P weights for <A> (two modes per qubit)."""
    mu1, mu2 = np.atleast_2d(np.asarray(mu1)), np.atleast_2d(np.asarray(mu2))
    nu1, nu2 = np.atleast_2d(np.asarray(nu1)), np.atleast_2d(np.asarray(nu2))
    for arr in (mu1, mu2, nu1, nu2):
        if not np.all(np.isfinite(arr)):
            raise ValueError("non-finite coordinates in batch")
    _, phase, signs = _plan_arrays(plan, mu1.shape[1])
    alpha1, beta1 = mu1 + nu1, np.conj(mu1 - nu1)
    alpha2, beta2 = mu2 + nu2, np.conj(mu2 - nu2)
    factors = ((1 + signs) * beta1 * alpha2 + (1 - signs) * beta2 * alpha1) * phase
    return logpolar_product(factors, axis=1)


def batch_weights_A(batch, plan: MeasurementPlan):
    """Per-sample <A> weights for any of the three batch types."""
    if isinstance(batch, SampleBatchQ):
        return weight_A_q(batch.points, plan)
    if isinstance(batch, SampleBatchP):
        return weight_A_pp_number(batch.mu, batch.nu, plan)
    if isinstance(batch, SampleBatchSchwinger):
        return weight_A_pp_schwinger(batch.mu1, batch.mu2, batch.nu1, batch.nu2, plan)
    raise TypeError(f"unsupported batch type {type(batch).__name__}")


def moment_from_weights(weights, sub_batches=DEFAULT_SUB_BATCHES) -> MomentEstimate:
    """Mean and sub-batch standard errors of per-sample weights.

    sub_batches=None makes every sample its own sub-batch (plain standard
    error of the mean), appropriate for light-tailed real observables.
    """
    weights = np.asarray(weights)
    n = weights.size
    if n == 0:
        raise ValueError("empty weight array")
    B = n if sub_batches is None else sub_batches
    if B > n:
        warnings.warn(f"reducing sub-batch count from {B} to {n}", stacklevel=2)
        B = n
    if B == n:
        mean = compensated_mean(weights)
        se_re = float(np.std(weights.real, ddof=1)) / math.sqrt(n) if n > 1 else 0.0
        se_im = float(np.std(weights.imag, ddof=1)) / math.sqrt(n) if n > 1 else 0.0
        return MomentEstimate(mean, se_re, se_im, n, B)
    sizes = sub_batch_sizes(n, B)
    means = np.empty(B, dtype=complex)
    start = 0
    for b, size in enumerate(sizes):
        means[b] = compensated_mean(weights[start : start + size])
        start += size
    return combine_sub_means(means, sizes)


def combine_sub_means(means, sizes) -> MomentEstimate:
    """Size-weighted mean and spread-of-means standard errors."""
    means = np.asarray(means, dtype=complex)
    B = means.size
    n = int(sum(sizes))
    w = np.asarray(sizes, dtype=float)
    mean_re = neumaier_sum(w * means.real) / n
    mean_im = neumaier_sum(w * means.imag) / n
    se_re = float(np.std(means.real, ddof=1)) / math.sqrt(B)
    se_im = float(np.std(means.imag, ddof=1)) / math.sqrt(B)
    return MomentEstimate(complex(mean_re, mean_im), se_re, se_im, n, B)


def estimate_A(batch, plan: MeasurementPlan, sub_batches=DEFAULT_SUB_BATCHES):
    """Estimate <A> from a sampled batch."""
    return moment_from_weights(batch_weights_A(batch, plan), sub_batches)


def estimate_A_streaming(
    spec, plan, n, representation, seed, sub_batches=DEFAULT_SUB_BATCHES
):
    """Sample and estimate <A> one sub-batch at a time.

    Bit-identical to sample_batch followed by estimate_A with the same
    sub-batch count, but peak memory is a single sub-batch instead of the
    whole run, which matters for n in the 2^24 range.
    """
    sizes = sub_batch_sizes(n, sub_batches)
    means = np.empty(len(sizes), dtype=complex)
    for b, n_b in enumerate(sizes):
        batch = sample_sub_batch(spec, n_b, representation, seed, b)
        means[b] = compensated_mean(batch_weights_A(batch, plan))
    return combine_sub_means(means, sizes)


def v_from_A(est: MomentEstimate, M: int):
    """MABK V statistic |<V>| and its standard error from an <A> estimate.

    Even M uses Re+Im (Ardehali form), odd M uses sqrt(2) Im (Mermin form).
    """
    if M % 2 == 0:
        value = est.mean.real + est.mean.imag
        se = math.hypot(est.se_re, est.se_im)
    else:
        value = math.sqrt(2.0) * est.mean.imag
        se = math.sqrt(2.0) * est.se_im
    return abs(value), se


_Q_SITE_WEIGHTS = {
    "I": lambda z: np.ones(z.shape, dtype=float),
    "X": lambda z: 6.0 * z.real / (1.0 + np.abs(z) ** 2),
    "Y": lambda z: -6.0 * z.imag / (1.0 + np.abs(z) ** 2),
    "Z": lambda z: 3.0 * (np.abs(z) ** 2 - 1.0) / (1.0 + np.abs(z) ** 2),
}


def pauli_weights_q(batch: SampleBatchQ, string):
    """Per-sample weights of a Pauli string under the SU(2)-Q batch."""
    string = list(string)
    if len(string) != batch.M:
        raise ValueError(f"expected {batch.M} selectors, got {len(string)}")
    out = np.ones(batch.n, dtype=float)
    for j, sel in enumerate(string):
        try:
            site = _Q_SITE_WEIGHTS[sel]
        except KeyError:
            raise ValueError(f"unknown Pauli selector {sel!r}") from None
        out = out * site(batch.points[:, j])
    return out


def estimate_pauli_string_q(batch, string, sub_batches=DEFAULT_SUB_BATCHES):
    """Estimate <O_1 x ... x O_M> with selectors in {I, X, Y, Z}."""
    return moment_from_weights(pauli_weights_q(batch, string), sub_batches)


def number_weights_q(batch: SampleBatchQ):
    """Per-sample values of the spin-up count sum_j (sigma^z_j + 1)/2."""
    wz = _Q_SITE_WEIGHTS["Z"](batch.points)
    return np.sum((wz + 1.0) / 2.0, axis=1)


def estimate_number_q(batch, sub_batches=None):
    """Estimate the total spin-up number; per-sample SE by default."""
    return moment_from_weights(number_weights_q(batch), sub_batches)


def scatter_points(batch, plan: MeasurementPlan, site_pair=(0, 1)):
    """Per-sample (Re w_x, Re w_x) pairs at two sites for scatter output.

    w_x is the single-site weight of the analyzer observable sigma^theta
    at the site's plan angle, so values are not confined to the
    eigenvalue range [-1, 1].
    """
    i, j = site_pair
    if not (0 <= i < batch.M and 0 <= j < batch.M):
        raise ValueError(f"site pair {site_pair} out of range for M={batch.M}")
    cols = []
    for site in (i, j):
        theta = plan.thetas[site]
        if isinstance(batch, SampleBatchQ):
            z = batch.points[:, site]
            wx = _Q_SITE_WEIGHTS["X"](z)
            wy = _Q_SITE_WEIGHTS["Y"](z)
        elif isinstance(batch, SampleBatchP):
            alpha = batch.mu[:, site] + batch.nu[:, site]
            beta = np.conj(batch.mu[:, site] - batch.nu[:, site])
            wx = (alpha + beta).real
            wy = ((beta - alpha) / 1j).real
        elif isinstance(batch, SampleBatchSchwinger):
            a1 = batch.mu1[:, site] + batch.nu1[:, site]
            b1 = np.conj(batch.mu1[:, site] - batch.nu1[:, site])
            a2 = batch.mu2[:, site] + batch.nu2[:, site]
            b2 = np.conj(batch.mu2[:, site] - batch.nu2[:, site])
            wx = (b1 * a2 + b2 * a1).real
            wy = ((b1 * a2 - b2 * a1) / 1j).real
        else:
            raise TypeError(f"unsupported batch type {type(batch).__name__}")
        cols.append(math.cos(theta) * wx + math.sin(theta) * wy)
    return np.column_stack(cols)
