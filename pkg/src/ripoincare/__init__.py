"""Rearrangement-invariant norms on finite metric measure spaces, with an
experiment harness for Poincare inequalities and the doubling condition."""

from .space import Ball, MetricMeasureSpace, ball_members, dilate, doubling_constant, measure_of
from .stepfn import StepFunction
from .rearrangement import (
    decreasing_rearrangement,
    distribution,
    layer_cake,
    localized_rearrangement,
)
from .young import YoungFunction, young_function
from .rispaces import (
    LambdaSpace,
    LorentzSpace,
    LorentzZygmundSpace,
    LpSpace,
    MarcinkiewiczSpace,
    OrliczSpace,
    fundamental_function,
    fundamental_inverse,
    local_norm,
    luxemburg_norm,
    norm,
    parse_ri_spec,
)
from .gain import (
    GainFunction,
    SlowlyVaryingExample,
    ermakoff_test,
    gain_from_psi,
    gain_log_alpha,
    gain_pow,
    parse_gain,
    series_c1,
)
from .indices import (
    claim_check,
    index_gap_doubling_criterion,
    psi_gain,
    young_gain_check,
    zippin_dilation,
    zippin_indices,
)
from .graphs import GraphStructure, discrete_upper_gradient, neighbor_graph
from .poincare import PoincareSpec, estimate_poincare_constant, poincare_ratio
from .certificate import (
    CertificateConfig,
    cutoff_function,
    cutoff_gradient_bound,
    doubling_verdict,
    induction_step_check,
    key_inequality_check,
    pj_value,
    radii_sequence,
)

__version__ = "0.1.0"
