from .field import (
    FIELD_MODULUS,
    SUBGROUP_ORDER,
    EncodingError,
    batch_inverse,
    hash_to_field,
    inv,
    random_scalar,
    scalar_from_bytes,
    scalar_to_bytes,
)
from .jubjub import (
    BASE,
    EdwardsPoint,
    GroupElement,
    decode,
    derive_generators,
    edwards_mul,
    is_on_curve,
    msm,
)
from .pairing import BLS12_381, PairingGroups

__all__ = [
    "FIELD_MODULUS",
    "SUBGROUP_ORDER",
    "EncodingError",
    "batch_inverse",
    "hash_to_field",
    "inv",
    "random_scalar",
    "scalar_from_bytes",
    "scalar_to_bytes",
    "BASE",
    "EdwardsPoint",
    "GroupElement",
    "decode",
    "derive_generators",
    "edwards_mul",
    "is_on_curve",
    "msm",
    "BLS12_381",
    "PairingGroups",
]
