import contextlib
import csv
import io
import json

import pytest

from conftest import FIXTURES
from fort.cli import EXIT_DENY, main
from fort.protocol import DenyReason


@pytest.fixture(scope="module")
def flow(tmp_path_factory):
    """Keys, a depth-2 CRS and a closed batch holding the user's NFT (attr 250)."""
    d = tmp_path_factory.mktemp("cli")
    reg = str(d / "reg.jsonl")
    common = ["--registry", reg, "--depth", "2", "--seed", "7"]
    assert main(["keygen", "--out", str(d / "sp.json"), "--public-out", str(d / "sp.pub"), "--seed", "1"]) == 0
    assert main(["keygen", "--out", str(d / "user.json"), "--seed", "2"]) == 0
    assert main(["setup", *common, "--pk", str(d / "pk.bin"), "--vk", str(d / "vk.bin"),
                 "--crs-seed", "00ff"]) == 0
    assert main(["sp-issue", *common, "--sp-key", str(d / "sp.json"), "--owner", str(d / "user.json"),
                 "--attr", "250", "--json"]) == 0
    return d, common


def _mint(d, common, attr):
    out = io.StringIO()
    with contextlib.redirect_stdout(out):
        code = main(["sp-issue", *common, "--sp-key", str(d / "sp.json"), "--owner", str(d / "user.json"),
                     "--attr", attr, "--json"])
    assert code == 0
    return json.loads(out.getvalue())["id"]


def _certify(d, common, attr, name):
    """Mint attr for the user, close the batch, write <name>.cert / <name>.secrets."""
    nft = _mint(d, common, attr)
    assert main(["batch-close", *common]) == 0
    cert, secrets = d / f"{name}.cert", d / f"{name}.secrets"
    assert main(["cert-prove", *common, "--nft", nft, "--user-key", str(d / "user.json"),
                 "--challenge", "2026-10-16", "--pk", str(d / "pk.bin"), "--out", str(cert),
                 "--secrets-out", str(secrets)]) == 0
    return cert, secrets


@pytest.fixture(scope="module")
def certified(flow):
    d, common = flow
    cert, secrets = _certify(d, common, "250", "c250")
    bundle = d / "c250.bundle"
    assert main(["attr-prove", *common, "--bits", "8", "--cert", str(cert), "--secrets", str(secrets),
                 "--out", str(bundle)]) == 0
    return cert, secrets, bundle


def _verify_args(d, common, cert, challenge="2026-10-16", nullifiers=None):
    args = ["cert-verify", *common, "--cert", str(cert), "--challenge", challenge,
            "--vk", str(d / "vk.bin"), "--sp-key", str(d / "sp.pub")]
    return args + (["--nullifiers", str(nullifiers)] if nullifiers else [])


def test_verify_then_replay_exit_code(flow, certified):
    d, common = flow
    cert, _, _ = certified
    nulls = d / "replay.jsonl"
    assert main(_verify_args(d, common, cert, nullifiers=nulls)) == 0
    assert main(_verify_args(d, common, cert, nullifiers=nulls)) == EXIT_DENY[DenyReason.REPLAY] == 13


def test_wrong_challenge_root_and_flag_exit_codes(flow, certified, tmp_path):
    d, common = flow
    cert, _, _ = certified
    assert main(_verify_args(d, common, cert, "2026-10-17", tmp_path / "n1")) == 10
    doc = json.loads(cert.read_text())
    rooted = dict(doc, statement=dict(doc["statement"], out1="0x5"))
    (tmp_path / "root.json").write_text(json.dumps(rooted))
    assert main(_verify_args(d, common, tmp_path / "root.json", nullifiers=tmp_path / "n2")) == 11
    flagged = dict(doc, statement=dict(doc["statement"], out2="0x0"))
    (tmp_path / "flag.json").write_text(json.dumps(flagged))
    assert main(_verify_args(d, common, tmp_path / "flag.json", nullifiers=tmp_path / "n3")) == 12


def test_attribute_bundle_verifies_and_stays_private(flow, certified, capsys):
    d, common = flow
    cert, _, bundle = certified
    capsys.readouterr()
    assert main(["attr-verify", *common, "--cert", str(cert), "--bundle", str(bundle), "--json"]) == 0
    assert json.loads(capsys.readouterr().out) == {"results": [True], "ranges": [8]}
    text = cert.read_text()
    assert "blinding" not in text and "attributes" not in text


def test_out_of_range_attribute_refused(flow, certified):
    d, common = flow
    cert300, secrets300 = _certify(d, common, "300", "c300")
    assert main(["attr-prove", *common, "--bits", "8", "--cert", str(cert300), "--secrets", str(secrets300),
                 "--out", str(d / "c300.bundle")]) == 4
    # a bundle proven for a different certificate is rejected per index
    assert main(["attr-verify", *common, "--cert", str(cert300), "--bundle", str(certified[2])]) == 14


def test_refusals_and_input_errors(flow, tmp_path):
    d, common = flow
    assert main(["sp-issue", *common, "--sp-key", str(d / "sp.json"), "--owner", str(d / "user.json"),
                 "--attr", "1", "--conditions-failed"]) == 4
    missing = ["--registry", str(tmp_path / "none.jsonl")]
    assert main(["registry-inspect", *missing]) == 3
    assert main(["batch-close", *missing]) == 3
    assert main(["keygen", "--out", str(tmp_path / "k"), "--bits", "12"]) == 2
    (tmp_path / "junk.json").write_text("{not json")
    assert main(["cert-verify", *common, "--cert", str(tmp_path / "junk.json"), "--challenge", "x",
                 "--vk", str(d / "vk.bin"), "--sp-key", str(d / "sp.pub")]) == 3
    assert main(["cert-prove", *common, "--nft", "0x1", "--user-key", str(d / "user.json"),
                 "--challenge", "x", "--pk", str(d / "pk.bin"), "--out", str(tmp_path / "c"),
                 "--secrets-out", str(tmp_path / "s")]) == 3
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_registry_inspect_json(flow, capsys):
    d, common = flow
    capsys.readouterr()
    assert main(["registry-inspect", *common, "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["depth"] == 2 and doc["batches"]


def test_bench_csv_header_matches_golden(capsys):
    assert main(["bench", "--bulletproof", "-n", "8", "-m", "1", "--seed", "0", "--quiet"]) == 0
    out = capsys.readouterr().out
    header = (FIXTURES / "bench_header.csv").read_text()
    assert out.startswith(header)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["operation"] for r in rows] == ["bulletproof_prove", "bulletproof_verify"]
    assert all(r["n"] == "8" and r["m"] == "1" and r["threads"] == "1" for r in rows)
    assert all(float(r["seconds"]) > 0 for r in rows)
    assert main(["bench"]) == 2
    assert main(["bench", "--bulletproof", "-n", "12"]) == 2


def test_circuit_report_mentions_baseline(capsys):
    assert main(["circuit-report", "--depth", "2", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["reference_baseline"] == 6894 and doc["constraints"] > 0


def test_config_from_environment(tmp_path, monkeypatch, capsys):
    cfg = tmp_path / "fort.json"
    cfg.write_text(json.dumps({"registry": str(tmp_path / "env-reg.jsonl"), "depth": 3, "seed": 4}))
    monkeypatch.setenv("FORT_CONFIG", str(cfg))
    assert main(["keygen", "--out", str(tmp_path / "a.json")]) == 0
    assert main(["keygen", "--out", str(tmp_path / "b.json")]) == 0
    assert (tmp_path / "a.json").read_text() == (tmp_path / "b.json").read_text()  # seeded
    assert main(["sp-issue", "--sp-key", str(tmp_path / "a.json"), "--owner", str(tmp_path / "b.json"),
                 "--attr", "1"]) == 0
    capsys.readouterr()
    assert main(["registry-inspect", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["depth"] == 3
    cfg.write_text(json.dumps({"colour": "blue"}))
    assert main(["registry-inspect"]) == 3
