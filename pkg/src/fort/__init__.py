"""Privacy-preserving rights on a simulated ledger: NFT-backed certificates
proved with a pairing SNARK, attribute disclosure with Bulletproofs."""

from . import algebra, bulletproofs, circuit, commit, hashmerkle, protocol, registry, sig, snark, transcript

__version__ = "0.1.0"

__all__ = [
    "algebra",
    "bulletproofs",
    "circuit",
    "commit",
    "hashmerkle",
    "protocol",
    "registry",
    "sig",
    "snark",
    "transcript",
]
