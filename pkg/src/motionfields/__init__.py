"""Operator fields over the unitary dual of Cartan motion groups.

Desk-scale computational harmonic analysis for the semidirect products of a
compact rotation group with its flat tangent space: chamber and orbit
geometry, induced-representation Fourier transforms as truncated operator
matrices, Fell-topology convergence certificates, and numerical
certification of the operator-field conditions cutting out the group
C*-algebra inside the bounded fields over the dual.
"""

from .dual import (
    ConvergenceCertificate,
    DualPoint,
    converges,
    equivalent,
    in_neighborhood,
    make_dual_point,
    neighborhood_cross_check,
    transport_label,
    weyl_action_on_pairs,
)
from .errors import (
    ConfigError,
    EmptyBasis,
    EmptySequence,
    EpsilonTooLarge,
    MixedInstance,
    MissingGamma2Data,
    MotionFieldsError,
    NonIntegerMultiplicity,
    PathCrossesStrata,
    QuadratureOrderTooLow,
    StratumMismatch,
    UnknownInstance,
)
from .fourier import (
    OperatorFieldSample,
    TruncatedOperator,
    default_order,
    hs_norm,
    kernel,
    operator_norm,
    pi_matrix,
    pi_mu0_matrix,
    sample_field,
    tau_matrix,
)
from .groups import IrrepDescriptor, QuadratureRule
from .induction import (
    PeterWeylBasis,
    branching_multiplicity,
    character,
    enumerate_irreps,
    full_group,
    haar_quadrature,
    irrep_matrix,
    peter_weyl_basis,
    restriction_multiplicity,
)
from .pairs import (
    ChamberPoint,
    StabilizerDescriptor,
    SymmetricPairDescriptor,
    WeylElement,
    adjoint_action,
    build_instance,
    classify_chamber_point,
    dominant_representative,
    stabilizer,
    weyl_orbit,
)
from .testfunctions import MatrixCoefficient, PolyGaussian, Term, TestFunction
from .verifier import (
    ConditionReport,
    MembershipReport,
    Thresholds,
    VerificationPlan,
    check_compactness_proxy,
    check_continuity,
    check_h_to_zero,
    check_lambda_decay,
    check_mu_decay,
    default_plan,
    field_at_zero,
    is_in_D0,
    run_verification,
    verify_membership,
)

__version__ = "0.1.0"
