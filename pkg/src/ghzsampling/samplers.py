"""Rejection samplers for the three positive GHZ phase-space distributions.

All three distributions share the same structure: an exactly-sampleable
two-component reference mixture (equal weights, each component a product
of normalized single-coordinate densities) bounding the target from above
with a global factor of 2, so the mean acceptance rate is exactly 1/2
regardless of M and phi.

The acceptance ratio is always of the form (1 + sech(dL/2) cos(p)) / 2
with dL a difference of summed log squared magnitudes, which is manifestly
in [0, 1] and free of overflow up to M = 64.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .model import GhzSpec
from .numerics import stable_sech

PROPOSAL_CHUNK = 1 << 15  # fixed so accepted streams do not depend on n

REPRESENTATIONS = ("su2q", "pp-number", "pp-schwinger")


@dataclass(frozen=True)
class RngStream:
    """Reproducible, splittable random stream.

    Distinct (seed, stream, domain) triples give statistically independent
    Philox streams; identical triples reproduce identical output.
    """

    seed: int
    stream: int = 0
    domain: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.domain, self.stream))
        return np.random.Generator(np.random.Philox(ss))


@dataclass
class SampleBatchQ:
    """Accepted SU(2)-Q samples: one stereographic coordinate per qubit."""

    M: int
    points: np.ndarray  # (n, M) complex
    accepted: int = 0
    proposed: int = 0

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def acceptance_rate(self):
        return self.accepted / self.proposed if self.proposed else math.nan


@dataclass
class SampleBatchP:
    """Accepted number-state positive-P samples (mu rejected, nu Gaussian)."""

    M: int
    mu: np.ndarray  # (n, M) complex
    nu: np.ndarray  # (n, M) complex
    accepted: int = 0
    proposed: int = 0

    @property
    def n(self):
        return self.mu.shape[0]

    @property
    def acceptance_rate(self):
        return self.accepted / self.proposed if self.proposed else math.nan


@dataclass
class SampleBatchSchwinger:
    """Accepted Schwinger-boson positive-P samples (two modes per qubit)."""

    M: int
    mu1: np.ndarray
    mu2: np.ndarray
    nu1: np.ndarray
    nu2: np.ndarray
    accepted: int = 0
    proposed: int = 0

    @property
    def n(self):
        return self.mu1.shape[0]

    @property
    def acceptance_rate(self):
        return self.accepted / self.proposed if self.proposed else math.nan


def radial_inverse_f1(u):
    """Inverse CDF of the density 4r/(1+r^2)^3: F(r) = 1 - (1+r^2)^{-2}."""
    u = np.asarray(u, dtype=float)
    if np.any((u < 0.0) | (u >= 1.0)):
        raise ValueError("u must lie in [0, 1)")
    return np.sqrt((1.0 - u) ** -0.5 - 1.0)


def radial_inverse_f2(u):
    """Inverse CDF of the density 4r^3/(1+r^2)^3: F(r) = (r^2/(1+r^2))^2."""
    u = np.asarray(u, dtype=float)
    if np.any((u < 0.0) | (u >= 1.0)):
        raise ValueError("u must lie in [0, 1)")
    root = np.sqrt(u)
    return np.sqrt(root / (1.0 - root))


def radial_cdf_f1(r):
    r = np.asarray(r, dtype=float)
    return 1.0 - (1.0 + r * r) ** -2.0


def radial_cdf_f2(r):
    r = np.asarray(r, dtype=float)
    return (r * r / (1.0 + r * r)) ** 2


def _acceptance_ratio(log_mag2_diff, phase):
    """(1 + sech(dL/2) cos(p)) / 2, asserted to be a probability."""
    ratio = 0.5 * (1.0 + stable_sech(0.5 * log_mag2_diff) * np.cos(phase))
    assert np.all((ratio >= 0.0) & (ratio <= 1.0 + 1e-12))
    return ratio


def _complex_gaussian(g, shape):
    """Standard complex Gaussian: density exp(-|c|^2)/pi."""
    return (g.standard_normal(shape) + 1j * g.standard_normal(shape)) * math.sqrt(0.5)


def _exp_variate(g, shape):
    # 1 - u maps [0, 1) to (0, 1], keeping the log finite.
    return -np.log(1.0 - g.random(shape))


def _gamma2_variate(g, shape):
    """Gamma(shape 2, scale 1) as -ln(u1 u2), branch-free."""
    return -np.log((1.0 - g.random(shape)) * (1.0 - g.random(shape)))


def _log_mag2_and_phase(r2, phases):
    with np.errstate(divide="ignore"):
        log_mag2 = np.sum(np.log(r2), axis=1)
    phase = np.sum(phases, axis=1)
    assert not np.any(np.isnan(log_mag2)) and not np.any(log_mag2 == np.inf)
    return log_mag2, phase


def sample_q(spec: GhzSpec, n: int, rng: RngStream) -> SampleBatchQ:
    """Draw n accepted samples of the SU(2) Q-function of the GHZ state.

    Reference mixture: fair coin between all coordinates f1-distributed
    (radius density 4r/(1+r^2)^3, uniform phase) and all f2-distributed
    (4r^3/(1+r^2)^3); accept with |prod z_j + e^{-i phi}|^2 /
    (2 (prod |z_j|^2 + 1)).
    """
    if n < 1:
        raise ValueError("need n >= 1")
    g = rng.generator()
    M = spec.M
    out = []
    accepted = proposed = 0
    while accepted < n:
        coin = g.random(PROPOSAL_CHUNK) < 0.5
        u = g.random((PROPOSAL_CHUNK, M))
        r = np.where(coin[:, None], radial_inverse_f1(u), radial_inverse_f2(u))
        phases = g.random((PROPOSAL_CHUNK, M)) * (2.0 * math.pi)
        accept_u = g.random(PROPOSAL_CHUNK)

        log_mag2, phase = _log_mag2_and_phase(r * r, phases)
        ratio = _acceptance_ratio(log_mag2, phase + spec.phi)
        keep = accept_u < ratio
        out.append((r[keep] * np.exp(1j * phases[keep])).astype(complex))
        accepted += int(keep.sum())
        proposed += PROPOSAL_CHUNK
    points = np.concatenate(out)[:n]
    return SampleBatchQ(M, points, accepted, proposed)


def sample_pp_number(spec: GhzSpec, n: int, rng: RngStream) -> SampleBatchP:
    """Draw n accepted number-state positive-P samples.

    nu_j are standard complex Gaussians; mu is rejected from the mixture of
    |mu|^2 ~ Gamma(2,1) (component A) and standard complex Gaussian
    (component B), both with uniform phases, with acceptance
    |prod mu_j + e^{-i phi}|^2 / (2 (prod |mu_j|^2 + 1)).
    """
    if n < 1:
        raise ValueError("need n >= 1")
    g = rng.generator()
    M = spec.M
    mu_out, nu_out = [], []
    accepted = proposed = 0
    while accepted < n:
        coin = g.random(PROPOSAL_CHUNK) < 0.5
        r2_a = _gamma2_variate(g, (PROPOSAL_CHUNK, M))
        r2_b = _exp_variate(g, (PROPOSAL_CHUNK, M))
        r2 = np.where(coin[:, None], r2_a, r2_b)
        phases = g.random((PROPOSAL_CHUNK, M)) * (2.0 * math.pi)
        accept_u = g.random(PROPOSAL_CHUNK)

        log_mag2, phase = _log_mag2_and_phase(r2, phases)
        ratio = _acceptance_ratio(log_mag2, phase + spec.phi)
        keep = accept_u < ratio
        k = int(keep.sum())
        mu_out.append(np.sqrt(r2[keep]) * np.exp(1j * phases[keep]))
        nu_out.append(_complex_gaussian(g, (k, M)))
        accepted += k
        proposed += PROPOSAL_CHUNK
    mu = np.concatenate(mu_out)[:n]
    nu = np.concatenate(nu_out)[:n]
    return SampleBatchP(M, mu, nu, accepted, proposed)


def sample_pp_schwinger(spec: GhzSpec, n: int, rng: RngStream) -> SampleBatchSchwinger:
    """Draw n accepted Schwinger positive-P samples (doubled modes).

    The (mu', mu'') pair is rejected from the two-component mixture where
    one mode family has |mu|^2 ~ Gamma(2,1) and the other is Gaussian,
    roles swapped between components; acceptance is
    |prod mu'_j + e^{-i phi} prod mu''_j|^2 /
    (2 (prod |mu'_j|^2 + prod |mu''_j|^2)).
    """
    if n < 1:
        raise ValueError("need n >= 1")
    g = rng.generator()
    M = spec.M
    m1_out, m2_out, n1_out, n2_out = [], [], [], []
    accepted = proposed = 0
    while accepted < n:
        coin = g.random(PROPOSAL_CHUNK) < 0.5
        gam1 = _gamma2_variate(g, (PROPOSAL_CHUNK, M))
        exp1 = _exp_variate(g, (PROPOSAL_CHUNK, M))
        gam2 = _gamma2_variate(g, (PROPOSAL_CHUNK, M))
        exp2 = _exp_variate(g, (PROPOSAL_CHUNK, M))
        r2_1 = np.where(coin[:, None], gam1, exp1)
        r2_2 = np.where(coin[:, None], exp2, gam2)
        ph1 = g.random((PROPOSAL_CHUNK, M)) * (2.0 * math.pi)
        ph2 = g.random((PROPOSAL_CHUNK, M)) * (2.0 * math.pi)
        accept_u = g.random(PROPOSAL_CHUNK)

        log1, p1 = _log_mag2_and_phase(r2_1, ph1)
        log2, p2 = _log_mag2_and_phase(r2_2, ph2)
        ratio = _acceptance_ratio(log1 - log2, p1 - p2 + spec.phi)
        keep = accept_u < ratio
        k = int(keep.sum())
        m1_out.append(np.sqrt(r2_1[keep]) * np.exp(1j * ph1[keep]))
        m2_out.append(np.sqrt(r2_2[keep]) * np.exp(1j * ph2[keep]))
        n1_out.append(_complex_gaussian(g, (k, M)))
        n2_out.append(_complex_gaussian(g, (k, M)))
        accepted += k
        proposed += PROPOSAL_CHUNK
    return SampleBatchSchwinger(
        M,
        np.concatenate(m1_out)[:n],
        np.concatenate(m2_out)[:n],
        np.concatenate(n1_out)[:n],
        np.concatenate(n2_out)[:n],
        accepted,
        proposed,
    )


_SAMPLERS = {
    "su2q": sample_q,
    "pp-number": sample_pp_number,
    "pp-schwinger": sample_pp_schwinger,
}


def _sample_sub_batch(args):
    representation, spec, n_b, seed, index = args
    return _SAMPLERS[representation](spec, n_b, RngStream(seed, index))


def _concatenate(representation, M, parts):
    accepted = sum(p.accepted for p in parts)
    proposed = sum(p.proposed for p in parts)
    if representation == "su2q":
        return SampleBatchQ(M, np.concatenate([p.points for p in parts]), accepted, proposed)
    if representation == "pp-number":
        return SampleBatchP(
            M,
            np.concatenate([p.mu for p in parts]),
            np.concatenate([p.nu for p in parts]),
            accepted,
            proposed,
        )
    return SampleBatchSchwinger(
        M,
        np.concatenate([p.mu1 for p in parts]),
        np.concatenate([p.mu2 for p in parts]),
        np.concatenate([p.nu1 for p in parts]),
        np.concatenate([p.nu2 for p in parts]),
        accepted,
        proposed,
    )


def sample_sub_batch(spec, n_b, representation, seed, index):
    """One sub-batch of a partitioned run, on its own stream.

    Sub-batch `index` always draws from RngStream(seed, index), so callers
    that process sub-batches one at a time reproduce exactly the samples
    that sample_batch would have concatenated.
    """
    if representation not in _SAMPLERS:
        raise ValueError(f"unknown representation {representation!r}")
    return _SAMPLERS[representation](spec, n_b, RngStream(seed, index))


def sub_batch_sizes(n: int, sub_batches: int):
    """Deterministic partition of n into sub_batches nearly-equal parts."""
    if sub_batches < 1 or n < sub_batches:
        raise ValueError(f"need 1 <= sub_batches <= n, got {sub_batches} for n={n}")
    base, extra = divmod(n, sub_batches)
    return [base + (1 if b < extra else 0) for b in range(sub_batches)]


def sample_batch(spec, n, representation, seed, sub_batches=64, workers=1):
    """Sample n accepted points, partitioned over per-sub-batch streams.

    Sub-batch b always uses RngStream(seed, b), so the result is
    bit-identical for any worker count; workers only change scheduling.
    """
    if representation not in _SAMPLERS:
        raise ValueError(f"unknown representation {representation!r}")
    sizes = sub_batch_sizes(n, sub_batches)
    tasks = [(representation, spec, n_b, seed, b) for b, n_b in enumerate(sizes)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_sample_sub_batch, tasks))
    else:
        parts = [_sample_sub_batch(t) for t in tasks]
    return _concatenate(representation, spec.M, parts)
