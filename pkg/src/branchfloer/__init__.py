"""branchfloer: knot Floer homology of double branched covers and its Borel localization."""

from importlib.metadata import version as _version

__version__ = _version("branchfloer")

from branchfloer.algebra import (
    F2Matrix,
    PolyMatrix,
    ZMatrix,
    f2_homology_ranks,
    f2_rank,
    f2_solve,
    fq_matrix_rank,
    fq_matrix_rank_by_evaluation,
    integer_snf,
    smith_decomposition,
)
from branchfloer.checks import (
    check_i1_surjectivity,
    check_i2_surjectivity,
    run_checks,
    sigma_doubling,
    sym_wedge_betti,
)
from branchfloer.complex import (
    AlexanderPolynomial,
    FloerComplex,
    GradedRanks,
    SpinCPartition,
    alexander_polynomial,
    build_complex,
    decompose_lifted_generator,
    differential,
    enumerate_generators,
    hfk_tilde,
)
from branchfloer.constructions import (
    FIGURE_EIGHT_GRID,
    TREFOIL_GRID,
    UNKNOT_GRID,
    BridgeSpec,
    GridSpec,
    from_grid,
    two_bridge,
)
from branchfloer.cover import (
    CoveredDiagram,
    MonodromyAssignment,
    branched_double_cover,
    check_monodromy,
    gauge_shift,
    lift_diagram,
    solve_monodromy,
)
from branchfloer.diagram import Diagram, Quadrant, ValidationReport, is_nice, validate
from branchfloer.domains import (
    Domain,
    domain_between,
    epsilon,
    is_weakly_admissible,
    maslov_index,
    relative_gradings,
)
from branchfloer.equivariant import (
    BorelReport,
    EquivariantComplex,
    Verdict,
    build_equivariant,
    localized_ranks,
    tau_sharp,
    verify_corollaries,
)
from branchfloer.fileformat import parse_diagram, parse_grid, serialize_covered_diagram, serialize_diagram
from branchfloer.pipeline import DiagramSource, Pipeline
from branchfloer.settings import Settings

__all__ = [
    "F2Matrix",
    "ZMatrix",
    "PolyMatrix",
    "f2_rank",
    "f2_solve",
    "f2_homology_ranks",
    "integer_snf",
    "smith_decomposition",
    "fq_matrix_rank",
    "fq_matrix_rank_by_evaluation",
    "Diagram",
    "Quadrant",
    "ValidationReport",
    "validate",
    "is_nice",
    "is_weakly_admissible",
    "GridSpec",
    "BridgeSpec",
    "UNKNOT_GRID",
    "TREFOIL_GRID",
    "FIGURE_EIGHT_GRID",
    "from_grid",
    "two_bridge",
    "parse_diagram",
    "serialize_diagram",
    "serialize_covered_diagram",
    "parse_grid",
    "MonodromyAssignment",
    "CoveredDiagram",
    "solve_monodromy",
    "check_monodromy",
    "gauge_shift",
    "lift_diagram",
    "branched_double_cover",
    "Domain",
    "epsilon",
    "domain_between",
    "maslov_index",
    "relative_gradings",
    "enumerate_generators",
    "SpinCPartition",
    "differential",
    "FloerComplex",
    "build_complex",
    "hfk_tilde",
    "GradedRanks",
    "AlexanderPolynomial",
    "alexander_polynomial",
    "decompose_lifted_generator",
    "tau_sharp",
    "EquivariantComplex",
    "build_equivariant",
    "localized_ranks",
    "BorelReport",
    "Verdict",
    "verify_corollaries",
    "sigma_doubling",
    "sym_wedge_betti",
    "check_i1_surjectivity",
    "check_i2_surjectivity",
    "run_checks",
    "DiagramSource",
    "Pipeline",
    "Settings",
]
