"""No-collapse quantum measurement simulator and branch-measure analyzer.

Measurement is modeled as pure unitary entanglement between system,
apparatus, observer and environment registers; nothing ever projects. On top
of that sit exact and log-domain statistics of the resulting outcome
branches under the counting measure and the Born measure, plus a
conventional-collapse sampling baseline for contrast.
"""

from .branches import (
    Branch,
    MaverickCriterion,
    MeasureReport,
    classify,
    enumerate_branches,
    everett_limit_scan,
    measure_report_analytic,
    measure_report_exact,
    typical_set_bounds,
)
from .errors import CapacityError, ShapeError, ValidationError
from .measurement import (
    OverlapCurve,
    PointerModel,
    ReducedDensityMatrix,
    SpinPreparation,
    branch_overlap,
    conditional_kick,
    entangle_environment,
    overlap_curve,
    premeasure,
    premeasure_n,
    reduce_to_system,
)
from .sampling import (
    RunComparison,
    SampleRun,
    compare_runs,
    sample_born,
    sample_counting,
)
from .states import (
    HermitianOperator,
    StateVector,
    UnitaryOperator,
    apply_unitary,
    evolve,
    evolve_reverse,
    fidelity,
    inner_product,
    tensor_product,
)

__version__ = "0.1.0"

__all__ = [
    "Branch",
    "CapacityError",
    "HermitianOperator",
    "MaverickCriterion",
    "MeasureReport",
    "OverlapCurve",
    "PointerModel",
    "ReducedDensityMatrix",
    "RunComparison",
    "SampleRun",
    "ShapeError",
    "SpinPreparation",
    "StateVector",
    "UnitaryOperator",
    "ValidationError",
    "apply_unitary",
    "branch_overlap",
    "classify",
    "compare_runs",
    "conditional_kick",
    "entangle_environment",
    "enumerate_branches",
    "everett_limit_scan",
    "evolve",
    "evolve_reverse",
    "fidelity",
    "inner_product",
    "measure_report_analytic",
    "measure_report_exact",
    "overlap_curve",
    "premeasure",
    "premeasure_n",
    "reduce_to_system",
    "sample_born",
    "sample_counting",
    "tensor_product",
    "typical_set_bounds",
]
