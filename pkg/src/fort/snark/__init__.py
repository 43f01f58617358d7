from .groth16 import (
    ProvingError,
    ProvingKey,
    SnarkProof,
    VerificationKey,
    prove,
    prove_cs,
    setup,
    verify,
)

__all__ = [
    "ProvingError",
    "ProvingKey",
    "SnarkProof",
    "VerificationKey",
    "prove",
    "prove_cs",
    "setup",
    "verify",
]
