"""Group entropies, (h, f)-divergences, and the geometry they induce.

The package is organized in layers: probability vectors and their
constructions, binary composition laws, (h, f)-entropies, the composition
engine that builds new entropies out of old ones, divergences, the
finite-difference information geometry, maximum entropy under linear
constraints, and a CLI (`entrogeo`) that exposes evaluation plus built-in
verification of the structural identities at desk scale.
"""

from .composition import (
    Composer,
    ConcavityReport,
    concavity_probe,
    group_compose,
    identity_composer,
    linear_composer,
    polynomial_composer,
    sm_pair_entropy,
    sm_pair_value,
    sm_tsallis_entropy,
    sm_tsallis_value,
    zeta_compose,
)
from .divergence import (
    DivergenceFunctional,
    hf_div_functional,
    hf_divergence,
    kl,
    kl_functional,
    kl_pair,
    power_pair,
    sm_div_functional,
    sm_divergence,
    sm_divergence_pair,
    tsallis_relative_pair,
    zeta_compose_div,
)
from .errors import EntrogeoError
from .formal_group import (
    BinaryLaw,
    Conjugator,
    Interval,
    LawReport,
    additive_law,
    check_group_axioms,
    check_phi4_symmetry,
    conjugate,
    expm1_conjugator,
    identity_conjugator,
    iterate_pow2,
    q_sum,
    scale_conjugator,
)
from .geometry import (
    ConnCoeffs,
    MetricTensor,
    StatModel,
    alpha_connection,
    combine_geometry,
    div_connections,
    div_metric,
    duality_residual,
    fisher_metric,
    hf_alpha_of,
    hf_closed_metric,
    raised_connection,
    simplex_model,
)
from .hf_entropy import (
    ChiLaw,
    EntropyFunctional,
    HFPair,
    SKReport,
    builtin_functional,
    composability_residual,
    custom_pair,
    entropy_functional,
    eval_entropy,
    hf_sum,
    kaniadakis,
    make_builtin,
    phi_from_chi,
    product_chi,
    q_sum_chi,
    renyi,
    shannon,
    sharma_mittal,
    sk_suite,
    tsallis,
)
from .maxent import ConstraintSet, MaxentResult, maximize
from .probability import (
    PositiveProbDist,
    ProbDist,
    certainty,
    expand,
    load_distribution,
    mix,
    product,
    uniform,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "BinaryLaw",
    "ChiLaw",
    "Composer",
    "ConcavityReport",
    "ConnCoeffs",
    "Conjugator",
    "ConstraintSet",
    "DivergenceFunctional",
    "EntrogeoError",
    "EntropyFunctional",
    "HFPair",
    "Interval",
    "LawReport",
    "MaxentResult",
    "MetricTensor",
    "PositiveProbDist",
    "ProbDist",
    "SKReport",
    "StatModel",
    "additive_law",
    "alpha_connection",
    "builtin_functional",
    "certainty",
    "check_group_axioms",
    "check_phi4_symmetry",
    "combine_geometry",
    "composability_residual",
    "concavity_probe",
    "conjugate",
    "custom_pair",
    "div_connections",
    "div_metric",
    "duality_residual",
    "entropy_functional",
    "eval_entropy",
    "expand",
    "expm1_conjugator",
    "fisher_metric",
    "group_compose",
    "hf_alpha_of",
    "hf_closed_metric",
    "hf_div_functional",
    "hf_divergence",
    "hf_sum",
    "identity_composer",
    "identity_conjugator",
    "iterate_pow2",
    "kaniadakis",
    "kl",
    "kl_functional",
    "kl_pair",
    "linear_composer",
    "load_distribution",
    "make_builtin",
    "maximize",
    "mix",
    "phi_from_chi",
    "polynomial_composer",
    "power_pair",
    "product",
    "product_chi",
    "q_sum",
    "q_sum_chi",
    "raised_connection",
    "renyi",
    "scale_conjugator",
    "shannon",
    "sharma_mittal",
    "simplex_model",
    "sk_suite",
    "sm_div_functional",
    "sm_divergence",
    "sm_divergence_pair",
    "sm_pair_entropy",
    "sm_pair_value",
    "sm_tsallis_entropy",
    "sm_tsallis_value",
    "tsallis",
    "tsallis_relative_pair",
    "uniform",
    "validate",
    "zeta_compose",
    "zeta_compose_div",
]
