"""Pseudomultipliers on finite models of reproducing kernel Hilbert spaces.

Modules
-------
linalg_core
    Gram inner products, frames, subspace lattice and the gap metric.
spaces
    Hardy-type coefficient models, kernel-sample models, composition,
    kernel metrics and the Sobolev membership oracle.
pseudomult
    Regular space, multiplication operator and the singular-space analysis.
singularity
    Seeing vectors, definable values, polar witnesses, ambiguous points.
visibility
    Visibility of subspaces and the value operator.
local
    Kernel spans, taut checks, local search, support points.
cli
    JSON configs, reports and the demo catalog.
"""
from .linalg_core import (DEFAULT_TOL, Frame, InnerProductSpace, Tolerances, adjoint_of,
                          canonical_basis, combine, complement, gap, kernel_frame, orthonormalize,
                          project_onto)
from .spaces import (KERNELS, CoefficientModel, ComposedModel, KernelFormula, KernelSampleModel,
                     MembershipVerdict, ModelSpace, PointError, SingularGramError,
                     build_coefficient_model, build_kernel_sample_model, compose_models,
                     kernel_nonvanishing_check, kernel_vector, metric_d, metric_p,
                     projective_completeness_probe, pseudo_hyperbolic_factorization,
                     read_kernel_table, sobolev_membership, table_kernel, write_kernel_table)
from .pseudomult import (DomainError, PseudomultiplierAnalysis, PseudomultiplierSpec, RationalSymbol,
                         RegularSpaceError, SobolevOracle, TableSymbol, analyze, constant_symbol,
                         multiplication_operator, regular_space)
from .singularity import (InconsistentValueError, NotDefinableError, PointClassification, PolarWitness,
                          PolarWitnessError, VisibilityVerdict, classify_point, decompose_singular_space,
                          definable_value, polar_witness, pseudopole_check, sees_vector)
from .visibility import SubspaceVerdict, sees_subspace, value_operator
from .local import (LocalSearchReport, TrackingAmbiguityError, analyze_locality, containment_gap,
                    convergent_subsequence, disc_grid, kernel_distance_formula, local_search,
                    punctual_decomposition, span_kernels, support_points, taut_check)

__version__ = "0.1.0"
