"""Loop statistics of random error subgraphs on contracted qudit surface-code lattices.

Submodules: :mod:`lattice` (geometry), :mod:`sampling` (error patterns),
:mod:`graph` (bridges, cycles, spans), :mod:`metrics` (aggregation),
:mod:`model` (closed-form estimators), :mod:`twirl` (Heisenberg-Weyl
discretization) and :mod:`cli`.
"""
from .errors import (
    InconsistentSyndromeError,
    NoStabilizerError,
    ParameterError,
    PartialDiscretizationError,
    ResourceError,
    ShapeError,
    ValidationError,
)
from .graph import (
    ErrorSubgraph,
    SampleRecord,
    SubgraphAnalysis,
    analyze,
    betti,
    bridges,
    build_subgraph,
    cycle_basis,
    loop_metrics,
    loop_span,
)
from .kernels import BACKEND
from .lattice import (
    DUAL,
    DUMMY,
    PRIMAL,
    CodeLattice,
    CodeShape,
    EdgeRef,
    Loop,
    build,
    dual_counterpart,
    elementary_loops,
    incident_edges,
    primal_counterpart,
)
from .metrics import Estimate, ExperimentRecord, aggregate, estimate
from .runner import run_point, run_samples
from .sampling import ErrorPattern, SeedSpec, pattern_from_list, sample_pattern

__version__ = "0.1.0"
