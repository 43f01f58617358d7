import json
import random
from pathlib import Path

import pytest

from fort.protocol import Challenge, sp_setup, user_create_certificate
from fort.registry import Registry
from fort.sig import keygen

FIXTURES = Path(__file__).parent / "fixtures"

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def golden():
    return json.loads((FIXTURES / "golden.json").read_text())


@pytest.fixture(scope="session")
def parties():
    rng = random.Random(2024)
    sp, sp_vk = keygen(rng)
    user, user_vk = keygen(rng)
    other, other_vk = keygen(rng)
    return {"sp": sp, "sp_vk": sp_vk, "user": user, "user_vk": user_vk,
            "other": other, "other_vk": other_vk}


@pytest.fixture(scope="session")
def crs8():
    """Issuer keys for the depth-8, one-attribute certificate circuit."""
    return sp_setup(8, 1, b"tests/crs8")


@pytest.fixture(scope="session")
def world8(parties):
    """Two closed depth-8 batches; the user owns nft (attr 250) in batch 0
    and nft_b1 in batch 1, another user owns nft_other in batch 0."""
    rng = random.Random(7)
    reg = Registry(depth=8)
    sp = parties["sp"]
    nft = reg.mint(sp, [250], parties["user_vk"], True, rng)
    nft_other = reg.mint(sp, [17], parties["other_vk"], True, rng)
    for _ in range(5):
        reg.mint(sp, [rng.randrange(256)], keygen(rng)[1], True, rng)
    reg.close_batch(0)
    nft_b1 = reg.mint(sp, [99], parties["user_vk"], True, rng)
    reg.mint(sp, [3], parties["other_vk"], True, rng)
    reg.close_batch(1)
    return {"registry": reg, "nft": nft, "nft_other": nft_other, "nft_b1": nft_b1}


@pytest.fixture(scope="session")
def challenge():
    return Challenge.from_context("2026-10-16")


@pytest.fixture(scope="session")
def honest_cert(parties, crs8, world8, challenge):
    """Certificate for attr 250 with blinding 1234."""
    pk, _ = crs8
    cert, blindings = user_create_certificate(world8["nft"], parties["user"], challenge,
                                              world8["registry"], pk, random.Random(11),
                                              blindings=[1234])
    return cert, blindings
