"""Sigma-free substitudes, convolution, classifiers and the combinatorial checks built on them."""
from .base import Substitude, check_substitude, operation_bimodule
from .instances import (
    CategorySubstitude,
    MonoidalSubstitude,
    NOSubstitude,
    capped_addition,
    monoid_substitude,
    monoidal_substitude,
    poset_category,
    qop_category,
)
from .convolution import (
    AlgebraInSet,
    algebra_hom_count,
    capped_sum_algebra,
    check_algebra,
    collection_presheaf,
    convolution,
    convolution_associator,
    cyclic_monoid_algebra,
    free_algebra,
    generator_element,
    monoid_algebra,
    presheaf_algebra,
    presheaf_maps,
    tensor_presheaf,
    unit_presheaf,
)
from .classifiers import (
    ClassifierCat,
    TamenessCertificate,
    action_pullback,
    build_classifier,
    check_unary_tame,
    classifier_nop,
    classifier_pc,
    classifier_pfg,
    is_alternating,
    is_noncontractible_tree,
    is_nr_tree,
    marked_finality,
    noncontractible_retracts,
    tau_factorization,
)
from .fibers import (
    FiberReport,
    comma_cross_check,
    component_map,
    constant_disconnection_report,
    fibers_of_p_prime,
    profiles_up_to,
    strict_fiber,
)
from .coproducts import ShuffleCoproduct, presheaf_act, retract_word, shuffle_coproduct, tilde_functor
from .filtration import FiltrationResult, Stage, check_presheaf_map, filtration_colimit, micro_instances
