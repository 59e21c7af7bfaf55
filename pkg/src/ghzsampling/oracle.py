"""Exact dense state-vector ground truth for small qubit counts.

Basis convention: computational index i encodes site j in bit j, with
up = 1, down = 0.  The all-up GHZ branch therefore sits at index 2^M - 1
and the all-down branch at index 0.  Single-site operators are applied by
reshaping the amplitude array, never by building 2^M x 2^M matrices.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .model import GhzSpec, MeasurementPlan

DEFAULT_QUBIT_CAP = 14

# 2x2 matrices in the (down, up) = (index 0, index 1) basis.
_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, 1j], [-1j, 0]], dtype=complex),
    "Z": np.array([[-1, 0], [0, 1]], dtype=complex),
}


@dataclass(frozen=True)
class StateVector:
    M: int
    amplitudes: np.ndarray

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))


def build_state(spec: GhzSpec, max_qubits: int = DEFAULT_QUBIT_CAP) -> StateVector:
    """Dense GHZ state vector; refuses to allocate beyond max_qubits."""
    if spec.M > max_qubits:
        raise MemoryError(
            f"state vector for M={spec.M} exceeds the cap of {max_qubits} qubits"
        )
    amps = np.zeros(2**spec.M, dtype=complex)
    amps[2**spec.M - 1] = 1.0 / math.sqrt(2.0)
    amps[0] = cmath.exp(1j * spec.phi) / math.sqrt(2.0)
    return StateVector(spec.M, amps)


def sigma_theta(theta: float) -> np.ndarray:
    """sigma^theta = sigma^x cos(theta) + sigma^y sin(theta)."""
    return _PAULI["X"] * math.cos(theta) + _PAULI["Y"] * math.sin(theta)


def _selector_matrix(sel) -> np.ndarray:
    if isinstance(sel, str):
        try:
            return _PAULI[sel]
        except KeyError:
            raise ValueError(f"unknown Pauli selector {sel!r}") from None
    return sigma_theta(float(sel))


def _apply_one_site(amps: np.ndarray, M: int, site: int, mat: np.ndarray) -> np.ndarray:
    """Apply a 2x2 matrix to one site via a strided reshape."""
    view = amps.reshape(2 ** (M - 1 - site), 2, 2**site)
    return np.einsum("ab,ibj->iaj", mat, view).reshape(amps.shape)


def expect_pauli_string(state: StateVector, ops) -> complex:
    """<psi| O_1 x ... x O_M |psi> for selectors in {I, X, Y, Z, angle}."""
    ops = list(ops)
    if len(ops) != state.M:
        raise ValueError(f"expected {state.M} selectors, got {len(ops)}")
    work = state.amplitudes
    for site, sel in enumerate(ops):
        mat = _selector_matrix(sel)
        if sel == "I":
            continue
        work = _apply_one_site(work, state.M, site, mat)
    return complex(np.vdot(state.amplitudes, work))


def oracle_A(state: StateVector, plan: MeasurementPlan) -> complex:
    """Exact <prod_j (sigma^theta_j + i s_j sigma^{theta_j+pi/2})>."""
    if len(plan) != state.M:
        raise ValueError(f"plan length {len(plan)} != qubit count {state.M}")
    work = state.amplitudes
    for site, (theta, s) in enumerate(zip(plan.thetas, plan.signs)):
        mat = (_PAULI["X"] + 1j * s * _PAULI["Y"]) * cmath.exp(-1j * s * theta)
        work = _apply_one_site(work, state.M, site, mat)
    return complex(np.vdot(state.amplitudes, work))
