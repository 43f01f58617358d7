from .certificate import (
    CATEGORIES,
    REFERENCE_BASELINE,
    REFERENCE_BASELINE_TOTAL,
    CertificateStatement,
    CertificateWitness,
    WitnessError,
    attribute_digest,
    build_certificate_circuit,
    constraint_report,
    generate_witness,
    signed_message,
)
from .r1cs import LC, ConstraintSystem, MissingWitnessError, UnsatisfiedError

__all__ = [
    "CATEGORIES",
    "REFERENCE_BASELINE",
    "REFERENCE_BASELINE_TOTAL",
    "CertificateStatement",
    "CertificateWitness",
    "WitnessError",
    "attribute_digest",
    "build_certificate_circuit",
    "constraint_report",
    "generate_witness",
    "signed_message",
    "LC",
    "ConstraintSystem",
    "MissingWitnessError",
    "UnsatisfiedError",
]
