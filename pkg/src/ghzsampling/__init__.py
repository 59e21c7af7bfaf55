"""Phase-space Monte Carlo sampling of multipartite GHZ Bell violations."""

from .bell import BellReport, ScalingFit, bell_report, fit_error_exponent
from .decoherence import DecoherenceRun, analytic_decay, evolve_v, fit_decay_rate
from .estimators import (
    MomentEstimate,
    combine_sub_means,
    estimate_A,
    estimate_A_streaming,
    estimate_number_q,
    estimate_pauli_string_q,
    scatter_points,
    v_from_A,
    weight_A_pp_number,
    weight_A_pp_schwinger,
    weight_A_q,
)
from .model import (
    GhzSpec,
    MeasurementPlan,
    ReferenceValues,
    ardehali_preset,
    auto_preset,
    closed_form_A,
    make_ghz,
    mermin_preset,
    reference_values,
)
from .oracle import StateVector, build_state, expect_pauli_string, oracle_A
from .samplers import (
    RngStream,
    SampleBatchP,
    SampleBatchQ,
    SampleBatchSchwinger,
    radial_inverse_f1,
    radial_inverse_f2,
    sample_batch,
    sample_pp_number,
    sample_pp_schwinger,
    sample_q,
    sample_sub_batch,
)

__version__ = "0.1.0"
