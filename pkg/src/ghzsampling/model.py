"""GHZ state parametrization, measurement plans and closed-form reference values.

Everything here is exact arithmetic: the state is (|up...up> + e^{i phi}
|down...down>)/sqrt(2), a measurement plan fixes one analyzer angle theta_j
and one conjugation sign s_j per qubit, and the product observable is

    A = prod_j (sigma^{theta_j}_j + i s_j sigma^{theta_j + pi/2}_j)
      = prod_j (sigma^x_j + i s_j sigma^y_j) e^{-i s_j theta_j}.

For uniform signs the GHZ expectation has a closed form; mixed signs
annihilate both branches and give exactly zero.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi

MAX_QUBITS = 64


@dataclass(frozen=True)
class GhzSpec:
    """Qubit count and relative branch phase of a GHZ state."""

    M: int
    phi: float

    def __post_init__(self):
        if not isinstance(self.M, int) or isinstance(self.M, bool):
            raise ValueError(f"qubit count must be an integer, got {self.M!r}")
        if not 1 <= self.M <= MAX_QUBITS:
            raise ValueError(f"qubit count must be in [1, {MAX_QUBITS}], got {self.M}")
        object.__setattr__(self, "phi", float(self.phi) % TWO_PI)


@dataclass(frozen=True)
class MeasurementPlan:
    """Per-qubit analyzer angles theta_j and conjugation signs s_j."""

    thetas: tuple
    signs: tuple

    def __post_init__(self):
        thetas = tuple(float(t) for t in self.thetas)
        signs = tuple(int(s) for s in self.signs)
        if len(thetas) != len(signs):
            raise ValueError("thetas and signs must have equal length")
        if any(s not in (-1, 1) for s in signs):
            raise ValueError("signs must be +1 or -1")
        object.__setattr__(self, "thetas", thetas)
        object.__setattr__(self, "signs", signs)

    def __len__(self):
        return len(self.thetas)

    @property
    def uniform_sign(self):
        """The common sign if all s_j agree, else None."""
        s = set(self.signs)
        return self.signs[0] if len(s) == 1 else None


@dataclass(frozen=True)
class ReferenceValues:
    """Closed-form quantum value and LHV bounds for the V statistic."""

    M: int
    qm_A: complex
    qm_V: float
    mabk_bound: float
    svetlichny_bound: float


def make_ghz(M, phi):
    """Build a GHZ spec, wrapping phi into [0, 2*pi)."""
    return GhzSpec(M, phi)


def mermin_preset(M):
    """Maximal-violation settings for odd M: phi = pi/2, theta = 0, s = +1."""
    if M % 2 == 0:
        raise ValueError(f"Mermin preset requires odd M, got {M}")
    spec = GhzSpec(M, math.pi / 2)
    plan = MeasurementPlan((0.0,) * M, (1,) * M)
    return spec, plan


def ardehali_preset(M):
    """Maximal-violation settings for even M.

    phi = pi, all conjugation signs -1, and the last analyzer rotated by
    pi/4.  With these settings |Re<A> + Im<A>| = 2^{M-1/2}; the convention
    is pinned by the exact oracle at M = 2 and 4.
    """
    if M % 2 != 0:
        raise ValueError(f"Ardehali preset requires even M, got {M}")
    spec = GhzSpec(M, math.pi)
    thetas = (0.0,) * (M - 1) + (math.pi / 4,)
    plan = MeasurementPlan(thetas, (-1,) * M)
    return spec, plan


def auto_preset(M):
    """Mermin preset for odd M, Ardehali preset for even M."""
    return mermin_preset(M) if M % 2 else ardehali_preset(M)


def closed_form_A(spec: GhzSpec, plan: MeasurementPlan) -> complex:
    """Exact GHZ expectation of the product observable.

    Uniform s = +1: the product of raising operators connects the down
    branch to the up branch, giving 2^{M-1} e^{+i(phi - sum theta_j)}.
    Uniform s = -1 is the conjugate route, 2^{M-1} e^{-i(phi - sum theta_j)}.
    Mixed signs kill both branches exactly.
    """
    if len(plan) != spec.M:
        raise ValueError(f"plan length {len(plan)} != qubit count {spec.M}")
    s = plan.uniform_sign
    if s is None:
        return 0.0 + 0.0j
    theta_sum = math.fsum(plan.thetas)
    return (2.0 ** (spec.M - 1)) * cmath.exp(1j * s * (spec.phi - theta_sum))


def reference_values(M: int) -> ReferenceValues:
    """Quantum prediction and LHV/Svetlichny bounds at qubit count M."""
    if not 2 <= M <= MAX_QUBITS:
        raise ValueError(f"M must be in [2, {MAX_QUBITS}], got {M}")
    spec, plan = auto_preset(M)
    return ReferenceValues(
        M=M,
        qm_A=closed_form_A(spec, plan),
        qm_V=2.0 ** (M - 0.5),
        mabk_bound=2.0 ** (M / 2.0),
        svetlichny_bound=2.0 ** (M - 1),
    )
