"""Thick-cluster VC dimension toolkit.

Computes the classical VC dimension of finite concept classes, the VC
dimension after discarding a negligible set of points (directly, and through
the quotient of the generated finite Boolean algebra, as a cross-check), and
a thick-cluster variant that only counts shattering by pairwise-disjoint
clusters of a minimum size. A Monte Carlo harness estimates PAC learning
error and uniform deviations of empirical measures over a class, and packing
routines quantify the metric-entropy obstruction to uniform convergence.
"""

__version__ = "0.1.0"

from .classgen import (
    gen_cluster_decorated,
    gen_finite_cofinite,
    gen_intervals,
    gen_power_set,
    gen_random,
    gen_thresholds,
)
from .domain import (
    ClusterFamily,
    Concept,
    ConceptClass,
    Domain,
    PrincipalIdeal,
    ValidationReport,
    restrict,
    validate_class,
)
from .empirics import (
    DeviationReport,
    PackingBounds,
    PackingResult,
    PatternPackingResult,
    UgcPoint,
    assemble_ugc_point,
    empirical_sup_deviation,
    packing_lower_bounds,
    packing_number,
    pattern_packing,
    ugc_cell,
    ugc_curve,
)
from .errors import (
    DomainMismatch,
    EmptyClassError,
    EmptyWitness,
    FormatError,
    NoConsistentHypothesis,
    ThickVCError,
    WorkLimitExceeded,
)
from .fincofin import FCSet, FiniteCofiniteClass, fc_distance, fc_measure
from .formats import (
    dump_class,
    dump_point_set,
    load_class,
    load_point_set,
    read_class,
    read_point_set,
    save_class,
    save_point_set,
)
from .learning import (
    ImageResult,
    LabeledSample,
    LearnerSpec,
    PacReport,
    adversarial_consistent_learner,
    enumeration_learner,
    label_sample,
    learner_image,
    pac_error_estimate,
    sample_complexity_bound,
)
from .measures import (
    DiscreteMeasure,
    SampleSeq,
    mixture,
    point_mass,
    sample_iid,
    symdiff_distance,
    uniform,
    uniform_on,
)
from .rng import RNG_ALGORITHM, derive_rng
from .shattering import (
    DEFAULT_WORK_LIMIT,
    RemovalResult,
    ShatterCertificate,
    canonical_witness,
    is_strongly_shattered,
    sauer_bound,
    sauer_shelah_ok,
    trace_count,
    vc_after_removal,
    vc_dimension,
    vc_mod_ideal,
    vc_thick,
)
from .stone import (
    AtomPartition,
    QuotientSpace,
    StoneCheck,
    generated_partition,
    induced_on_quotient,
    lift_witness,
    quotient_space,
    stone_check,
    vc_on_stone,
)

__all__ = [
    "__version__",
    "AtomPartition",
    "ClusterFamily",
    "Concept",
    "ConceptClass",
    "DEFAULT_WORK_LIMIT",
    "DeviationReport",
    "DiscreteMeasure",
    "Domain",
    "DomainMismatch",
    "EmptyClassError",
    "EmptyWitness",
    "FCSet",
    "FiniteCofiniteClass",
    "FormatError",
    "ImageResult",
    "LabeledSample",
    "LearnerSpec",
    "NoConsistentHypothesis",
    "PacReport",
    "PackingBounds",
    "PackingResult",
    "PatternPackingResult",
    "PrincipalIdeal",
    "QuotientSpace",
    "RNG_ALGORITHM",
    "RemovalResult",
    "SampleSeq",
    "ShatterCertificate",
    "StoneCheck",
    "ThickVCError",
    "UgcPoint",
    "ValidationReport",
    "WorkLimitExceeded",
    "adversarial_consistent_learner",
    "canonical_witness",
    "derive_rng",
    "dump_class",
    "dump_point_set",
    "empirical_sup_deviation",
    "enumeration_learner",
    "fc_distance",
    "fc_measure",
    "gen_cluster_decorated",
    "gen_finite_cofinite",
    "gen_intervals",
    "gen_power_set",
    "gen_random",
    "gen_thresholds",
    "generated_partition",
    "induced_on_quotient",
    "is_strongly_shattered",
    "label_sample",
    "learner_image",
    "lift_witness",
    "load_class",
    "load_point_set",
    "mixture",
    "pac_error_estimate",
    "packing_lower_bounds",
    "packing_number",
    "pattern_packing",
    "point_mass",
    "quotient_space",
    "read_class",
    "read_point_set",
    "restrict",
    "sample_complexity_bound",
    "sample_iid",
    "sauer_bound",
    "sauer_shelah_ok",
    "save_class",
    "save_point_set",
    "stone_check",
    "symdiff_distance",
    "trace_count",
    "assemble_ugc_point",
    "ugc_cell",
    "ugc_curve",
    "uniform",
    "uniform_on",
    "validate_class",
    "vc_after_removal",
    "vc_dimension",
    "vc_mod_ideal",
    "vc_on_stone",
    "vc_thick",
]
