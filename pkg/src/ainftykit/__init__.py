"""Exact computations with gapped filtered A-infinity algebras over a Novikov ring."""

from .ainfty import (
    AInfinityHom, FilteredAInfinity, MissingOperation, NotWeakSolution, RelationError,
    compose_homomorphisms, deform_by_b, from_dga, identity_hom, is_mc_solution, mc_residual,
    potential, verify_ainfty, verify_ank, verify_homomorphism,
)
from .bimodule import (
    BimoduleHom, EnergyLossError, FilteredBimodule, deform_bimodule, from_dg_bimodule,
    n00_identity_residual, regular_bimodule, square_of_deformed_differential, verify_bimodule,
    verify_bimodule_hom,
)
from .complex import BarElement, Chain, GradedBasis, OpFamily
from .homotopy import (
    IntervalModel, build_interval_model, check_gauge_equivalence, check_homotopy,
    is_weak_homotopy_equivalence, verify_model_axioms,
)
from .morse import (
    GradientMatching, MatchingError, SimplicialComplex, build_matching, morse_flow_data,
    morse_transfer, trace_configuration,
)
from .novikov import QQ, Field, Gap, GapMonoid, ModP, NovElement, gap, monoid_closure
from .report import Report, Residual
from .transfer import (
    CanonicalModelResult, TransferData, TransferDataError, hodge_transfer_data, normalize_homotopy,
    oracle_transfer_low_arity, transfer,
)
from .trees import Tree, enumerate_trees

__all__ = [
    "AInfinityHom",
    "FilteredAInfinity",
    "MissingOperation",
    "NotWeakSolution",
    "RelationError",
    "compose_homomorphisms",
    "deform_by_b",
    "from_dga",
    "identity_hom",
    "is_mc_solution",
    "mc_residual",
    "potential",
    "verify_ainfty",
    "verify_ank",
    "verify_homomorphism",
    "BimoduleHom",
    "EnergyLossError",
    "FilteredBimodule",
    "deform_bimodule",
    "from_dg_bimodule",
    "n00_identity_residual",
    "regular_bimodule",
    "square_of_deformed_differential",
    "verify_bimodule",
    "verify_bimodule_hom",
    "BarElement",
    "Chain",
    "GradedBasis",
    "OpFamily",
    "IntervalModel",
    "build_interval_model",
    "check_gauge_equivalence",
    "check_homotopy",
    "is_weak_homotopy_equivalence",
    "verify_model_axioms",
    "GradientMatching",
    "MatchingError",
    "SimplicialComplex",
    "build_matching",
    "morse_flow_data",
    "morse_transfer",
    "trace_configuration",
    "QQ",
    "Field",
    "Gap",
    "GapMonoid",
    "ModP",
    "NovElement",
    "gap",
    "monoid_closure",
    "Report",
    "Residual",
    "CanonicalModelResult",
    "TransferData",
    "TransferDataError",
    "hodge_transfer_data",
    "normalize_homotopy",
    "oracle_transfer_low_arity",
    "transfer",
    "Tree",
    "enumerate_trees",
]

__version__ = "0.1.0"
