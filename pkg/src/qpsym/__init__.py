"""Groups of invertible linear symmetries of quadratically constrained quadratic programs."""

from .apply import Cut, Orbit, breaking_cut, group_local_optima, map_point, orbit
from .discrete import DiscreteCoset, SearchOptions, admissible_permutations, coset_solution_space, dedup_cosets, find_cosets
from .errors import (
    AssumptionViolated,
    DimensionError,
    NotOrthogonal,
    NotPositiveDefinite,
    QpsymError,
    SearchBudgetExceeded,
    SingularMatrix,
    WrongComponent,
)
from .group import SymmetryReport, analyze, penalty_residual, verify_report
from .lie import LieBasis, build_commutant_system, in_identity_component, lie_basis, sample_continuous
from .linalg import Tolerances, expm_skew, logm_special_orthogonal, skew_basis
from .problem import CanonicalForm, QcqpProblem, back_transform, build_problem, canonicalize, invariance_residual

__version__ = "0.1.0"
