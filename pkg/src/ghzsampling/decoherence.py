"""Collective dephasing noise and super-decoherence of the V statistic.

One Gaussian field value per sample per time step is shared by all M
qubits, so each sample's product weight picks up a phase e^{i M Theta}
with Theta the accumulated noise.  Phase averaging then decays V as
exp(-eps^2 M^2 tau / 2): quadratic in M, the super-decoherence signature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .estimators import batch_weights_A, moment_from_weights, v_from_A
from .model import GhzSpec, MeasurementPlan
from .samplers import RngStream

NOISE_DOMAIN = 1  # RngStream domain tag reserved for dephasing noise


@dataclass(frozen=True)
class DecoherenceRun:
    spec: GhzSpec
    plan: MeasurementPlan
    epsilon: float
    n_steps: int
    series: tuple  # (tau, v_hat, v_se) per step, tau = 0 .. n_steps


def analytic_decay(epsilon: float, M: int, tau) -> float:
    """Ensemble-averaged decay factor exp(-eps^2 M^2 tau / 2)."""
    return np.exp(-0.5 * epsilon**2 * M**2 * np.asarray(tau, dtype=float))


def evolve_v(spec, plan, epsilon, n_steps, batch, rng: RngStream, sub_batches=64):
    """Evolve the sampled V statistic under collective dephasing.

    The tau = 0 entry is bit-identical to the static estimate on the same
    batch; each later step multiplies every sample's weight by a fresh
    unit-modulus collective-noise phase.
    """
    if epsilon < 0.0:
        raise ValueError("epsilon must be non-negative")
    weights = batch_weights_A(batch, plan)
    n = weights.size
    g = rng.generator()
    series = []
    theta = np.zeros(n)
    for tau in range(n_steps + 1):
        if tau > 0:
            theta = theta + epsilon * g.standard_normal(n)
        factor = np.exp(1j * spec.M * theta)
        assert np.allclose(np.abs(factor), 1.0)
        est = moment_from_weights(weights * factor, sub_batches)
        v_hat, v_se = v_from_A(est, spec.M)
        series.append((tau, v_hat, v_se))
    return DecoherenceRun(spec, plan, float(epsilon), int(n_steps), tuple(series))


def fit_decay_rate(series, se_cut=5.0, min_points=10) -> float:
    """Exponential decay rate from ln V(tau) over points above the noise floor."""
    usable = [(tau, v) for tau, v, se in series if v > se_cut * se and v > 0.0]
    if len(usable) < min_points:
        raise ValueError(
            f"only {len(usable)} usable points above the noise floor, need {min_points}"
        )
    taus = np.array([t for t, _ in usable], dtype=float)
    logs = np.log([v for _, v in usable])
    slope, _ = np.polyfit(taus, logs, 1)
    return float(-slope)
