"""autorbit: automorphism-orbit invariants for finite permutation groups."""

from .errors import (
    AutorbitError,
    CapacityError,
    DegreeMismatchError,
    DivisibilityError,
    GroupFileError,
    MalformedCycleError,
    NormalityError,
    NormalizationError,
    NotBijectionError,
    PointRangeError,
    UnknownGroupNameError,
)
from .perm import (
    BSGS,
    ElementTable,
    PermGroup,
    Permutation,
    build_bsgs,
    compose,
    contains,
    enumerate_elements,
    order,
    perm_from_cycles,
    perm_order,
)
from .structure import (
    ConjClass,
    HomWitness,
    SubgroupRecord,
    center,
    centralizer,
    conjugacy_classes,
    derived_series,
    derived_subgroup,
    direct_power,
    direct_product,
    find_isomorphism,
    is_elementary_abelian,
    is_simple,
    is_solvable,
    isomorphic,
    normal_subgroups,
    prime_set,
    quotient,
    spectrum,
    sylow_subgroup,
)
from .autorbits import (
    Automorphism,
    Fingerprint,
    OrbitPartition,
    automorphism_generators,
    automorphism_group_order,
    characteristic_subgroups,
    class_fingerprints,
    conjugation_automorphism,
    is_at_group,
    is_characteristically_simple,
    normalizer_induced_automorphism,
    omega,
    orbit_partition,
    orbit_partition_of,
    verify_automorphism,
)
from .catalog import GroupDescriptor, build, extension_family, frobenius_point_permutation
from .groupfile import load_group_file, parse_group_file, serialize_group_file
from .report import VerdictReport
from .verify import DEFAULT_CORPUS, VERIFY_TARGETS, run_verify

__version__ = "0.1.0"

__all__ = [
    "AutorbitError", "CapacityError", "DegreeMismatchError", "DivisibilityError",
    "GroupFileError", "MalformedCycleError", "NormalityError", "NormalizationError",
    "NotBijectionError", "PointRangeError", "UnknownGroupNameError",
    "BSGS", "ElementTable", "PermGroup", "Permutation",
    "build_bsgs", "compose", "contains", "enumerate_elements", "order",
    "perm_from_cycles", "perm_order",
    "ConjClass", "HomWitness", "SubgroupRecord",
    "center", "centralizer", "conjugacy_classes", "derived_series", "derived_subgroup",
    "direct_power", "direct_product", "find_isomorphism", "is_elementary_abelian",
    "is_simple", "is_solvable", "isomorphic", "normal_subgroups", "prime_set",
    "quotient", "spectrum", "sylow_subgroup",
    "Automorphism", "Fingerprint", "OrbitPartition",
    "automorphism_generators", "automorphism_group_order", "characteristic_subgroups",
    "class_fingerprints", "conjugation_automorphism", "is_at_group",
    "is_characteristically_simple", "normalizer_induced_automorphism", "omega",
    "orbit_partition", "orbit_partition_of", "verify_automorphism",
    "GroupDescriptor", "build", "extension_family", "frobenius_point_permutation",
    "load_group_file", "parse_group_file", "serialize_group_file",
    "VerdictReport", "DEFAULT_CORPUS", "VERIFY_TARGETS", "run_verify",
]
