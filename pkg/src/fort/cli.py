"""``fort`` command line: every protocol role plus the benchmark harness.

Settings come from, in increasing priority: built-in defaults, a JSON config
file (``--config`` or the ``FORT_CONFIG`` environment variable), and flags.
Config keys: registry, depth, attr_count, bits, threads, seed.

Exit codes::

    0   success / access granted / all range proofs accepted
    2   usage error
    3   bad input (missing or malformed file, unknown NFT, ...)
    4   operation refused (conditions not met, open batch, not the owner, ...)
    10  deny: proof      11  deny: root      12  deny: flag      13  deny: replay
    14  at least one range proof rejected
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass
from pathlib import Path

from . import bench as fbench
from .algebra.field import EncodingError
from .bulletproofs import ALLOWED_BITS, RangeProofError
from .circuit.certificate import (
    REFERENCE_BASELINE,
    REFERENCE_BASELINE_TOTAL,
    WitnessError,
    build_certificate_circuit,
    constraint_report,
)
from .protocol import (
    BlindingMismatch,
    Certificate,
    Challenge,
    DenyReason,
    NullifierSet,
    OwnershipError,
    range_bundle_from_json,
    range_bundle_to_json,
    sp_issue,
    sp_setup,
    sp_verify_attributes,
    sp_verify_certificate,
    user_create_certificate,
    user_prove_attributes,
)
from .registry import ConditionsNotMet, Registry, RegistryError
from .sig import SigningKey, VerifyingKey, keygen
from .snark import ProvingKey, VerificationKey

CONFIG_ENV = "FORT_CONFIG"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_REFUSED = 4
EXIT_DENY = {DenyReason.PROOF: 10, DenyReason.ROOT: 11, DenyReason.FLAG: 12, DenyReason.REPLAY: 13}
EXIT_RANGE_REJECTED = 14


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


@dataclass
class Config:
    registry: str = "fort-registry.jsonl"
    depth: int = 8
    attr_count: int = 1
    bits: int = 8
    threads: int = 1
    seed: int | None = None

    def validate(self) -> "Config":
        if self.depth < 1:
            raise CliError("depth must be at least 1", EXIT_USAGE)
        if self.bits not in ALLOWED_BITS:
            raise CliError(f"bits must be one of {ALLOWED_BITS}", EXIT_USAGE)
        if self.threads < 1:
            raise CliError("threads must be positive", EXIT_USAGE)
        return self


def load_config(args: argparse.Namespace) -> Config:
    cfg = Config()
    path = args.config or os.environ.get(CONFIG_ENV)
    if path:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, ValueError) as e:
            raise CliError(f"cannot read config {path}: {e}", EXIT_INPUT) from None
        for k, v in data.items():
            if not hasattr(cfg, k):
                raise CliError(f"unknown config key {k!r}", EXIT_INPUT)
            setattr(cfg, k, v)
    for k in ("registry", "depth", "bits", "threads", "seed"):
        v = getattr(args, k, None)
        if v is not None:
            setattr(cfg, k, v)
    return cfg.validate()


def make_rng(cfg: Config):
    return random.Random(cfg.seed) if cfg.seed is not None else random.SystemRandom()


# --- file helpers ------------------------------------------------------------

def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}", EXIT_INPUT) from None


def _read_bytes(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}", EXIT_INPUT) from None


def load_signing_key(path: str) -> SigningKey:
    doc = json.loads(_read(path))
    if "sk" not in doc:
        raise CliError(f"{path} holds no secret key", EXIT_INPUT)
    return SigningKey.decode(bytes.fromhex(doc["sk"]))


def load_verifying_key(spec: str) -> VerifyingKey:
    """A key file (secret or public) or a 64-character hex encoding."""
    if len(spec) == 64 and not Path(spec).exists():
        return VerifyingKey.decode(bytes.fromhex(spec))
    doc = json.loads(_read(spec))
    return VerifyingKey.decode(bytes.fromhex(doc["vk"]))


def _parse_int(s: str) -> int:
    return int(s, 0)


def _emit(args, payload: dict, text: str) -> None:
    print(json.dumps(payload, indent=2) if args.json else text)


def _open_registry(cfg: Config, must_exist: bool = True) -> Registry:
    if must_exist and not Path(cfg.registry).exists():
        raise CliError(f"registry {cfg.registry} does not exist", EXIT_INPUT)
    return Registry(depth=cfg.depth, path=cfg.registry)


def _nullifier_path(cfg: Config, override: str | None) -> str:
    return override or cfg.registry + ".nullifiers.jsonl"


# --- commands ---------------------------------------------------------------

def cmd_keygen(args, cfg: Config) -> int:
    sk, vk = keygen(make_rng(cfg))
    Path(args.out).write_text(json.dumps({"sk": sk.encode().hex(), "vk": vk.encode().hex()}, indent=2))
    if args.public_out:
        Path(args.public_out).write_text(json.dumps({"vk": vk.encode().hex()}, indent=2))
    _emit(args, {"vk": vk.encode().hex(), "out": args.out}, vk.encode().hex())
    return EXIT_OK


def cmd_setup(args, cfg: Config) -> int:
    seed = bytes.fromhex(args.crs_seed) if args.crs_seed else os.urandom(32)
    pk, vk = sp_setup(cfg.depth, args.attrs, seed)
    Path(args.pk).write_bytes(pk.encode())
    Path(args.vk).write_bytes(vk.encode())
    _emit(args, {"pk": args.pk, "vk": args.vk, "constraints": pk.cs.num_constraints},
          f"wrote {args.pk} and {args.vk} ({pk.cs.num_constraints} constraints)")
    return EXIT_OK


def cmd_sp_issue(args, cfg: Config) -> int:
    reg = _open_registry(cfg, must_exist=False)
    sp = load_signing_key(args.sp_key)
    owner = load_verifying_key(args.owner)
    try:
        rec = sp_issue(reg, sp, args.attr, owner, not args.conditions_failed, make_rng(cfg))
    except ConditionsNotMet as e:
        raise CliError(str(e), EXIT_REFUSED) from None
    _emit(args, {"id": hex(rec.id), "batch": rec.batch_index},
          f"minted {hex(rec.id)} in batch {rec.batch_index}")
    return EXIT_OK


def cmd_batch_close(args, cfg: Config) -> int:
    reg = _open_registry(cfg)
    index = args.batch if args.batch is not None else reg.open_batch.index
    try:
        snap = reg.close_batch(index)
    except RegistryError as e:
        raise CliError(str(e), EXIT_REFUSED) from None
    _emit(args, {"batch": snap.batch_index, "root": hex(snap.root), "size": len(snap.ids)},
          f"closed batch {snap.batch_index} ({len(snap.ids)} ids), root {hex(snap.root)}")
    return EXIT_OK


def cmd_cert_prove(args, cfg: Config) -> int:
    reg = _open_registry(cfg)
    user = load_signing_key(args.user_key)
    try:
        nft = reg.record(args.nft)
    except KeyError:
        raise CliError(f"unknown NFT {hex(args.nft)}", EXIT_INPUT) from None
    pk = ProvingKey.decode(_read_bytes(args.pk))
    try:
        cert, blindings = user_create_certificate(nft, user, Challenge.from_context(args.challenge),
                                                  reg, pk, make_rng(cfg))
    except (OwnershipError, RegistryError, WitnessError, ValueError) as e:
        raise CliError(str(e), EXIT_REFUSED) from None
    Path(args.out).write_text(cert.to_json())
    # The openings stay with the user; only the certificate goes to the SP.
    Path(args.secrets_out).write_text(json.dumps({
        "attributes": [hex(a) for a in nft.attributes],
        "blindings": [hex(b) for b in blindings],
    }, indent=2))
    _emit(args, {"certificate": args.out, "nullifier": hex(cert.statement.out3)},
          f"wrote {args.out}; nullifier {hex(cert.statement.out3)}")
    return EXIT_OK


def cmd_cert_verify(args, cfg: Config) -> int:
    reg = _open_registry(cfg)
    try:
        cert = Certificate.from_json(_read(args.cert))
        vk = VerificationKey.decode(_read_bytes(args.vk))
    except (EncodingError, ValueError, KeyError) as e:
        raise CliError(f"malformed input: {e}", EXIT_INPUT) from None
    sp_vk = load_verifying_key(args.sp_key)
    nulls = NullifierSet(_nullifier_path(cfg, args.nullifiers))
    decision = sp_verify_certificate(cert, Challenge.from_context(args.challenge), reg, vk, nulls, sp_vk)
    if decision.granted:
        _emit(args, {"granted": True}, "granted")
        return EXIT_OK
    _emit(args, {"granted": False, "reason": decision.reason.value}, f"denied: {decision.reason.value}")
    return EXIT_DENY[decision.reason]


def cmd_attr_prove(args, cfg: Config) -> int:
    cert = Certificate.from_json(_read(args.cert))
    secrets = json.loads(_read(args.secrets))
    attrs = [int(a, 16) for a in secrets["attributes"]]
    blindings = [int(b, 16) for b in secrets["blindings"]]
    ranges = [cfg.bits] * len(attrs)
    try:
        proofs = user_prove_attributes(cert, attrs, blindings, ranges, make_rng(cfg))
    except (BlindingMismatch, RangeProofError, ValueError) as e:
        raise CliError(str(e), EXIT_REFUSED) from None
    Path(args.out).write_text(range_bundle_to_json(proofs, ranges))
    _emit(args, {"bundle": args.out, "proofs": len(proofs)}, f"wrote {len(proofs)} range proofs to {args.out}")
    return EXIT_OK


def cmd_attr_verify(args, cfg: Config) -> int:
    try:
        cert = Certificate.from_json(_read(args.cert))
        proofs, ranges = range_bundle_from_json(_read(args.bundle))
        results = sp_verify_attributes(cert.statement.out4, proofs, ranges)
    except (EncodingError, ValueError, KeyError) as e:
        raise CliError(f"malformed input: {e}", EXIT_INPUT) from None
    lines = [f"attribute {i}: {'accept' if ok else 'reject'} (< 2^{n})"
             for i, (ok, n) in enumerate(zip(results, ranges))]
    _emit(args, {"results": results, "ranges": ranges}, "\n".join(lines))
    return EXIT_OK if all(results) else EXIT_RANGE_REJECTED


def cmd_registry_inspect(args, cfg: Config) -> int:
    reg = _open_registry(cfg)
    batches = [{"batch": b.batch_index, "closed": b.closed, "size": len(b.ids),
                "root": hex(b.root) if b.root is not None else None,
                "ids": [hex(i) for i in b.ids]} for b in reg.iter_batches()]
    if args.json:
        print(json.dumps({"depth": reg.depth, "batches": batches}, indent=2))
    else:
        print(f"depth {reg.depth}, capacity {reg.capacity}")
        for b in batches:
            state = f"closed root {b['root']}" if b["closed"] else "open"
            print(f"batch {b['batch']}: {b['size']} ids, {state}")
            if args.ids:
                for i in b["ids"]:
                    print(f"  {i}")
    return EXIT_OK


def cmd_bench(args, cfg: Config) -> int:
    if not (args.bulletproof or args.certificate or args.range_compare):
        raise CliError("choose at least one of --bulletproof, --certificate, --range-compare", EXIT_USAGE)
    seed = cfg.seed if cfg.seed is not None else 0
    rows, summary = [], []
    if args.bulletproof:
        if args.n not in ALLOWED_BITS:
            raise CliError(f"-n must be one of {ALLOWED_BITS}", EXIT_USAGE)
        values = args.values if args.values else None
        if values is not None and len(values) != args.m:
            raise CliError("--values needs exactly m entries", EXIT_USAGE)
        try:
            bp_rows = fbench.bench_bulletproof(args.n, args.m, cfg.threads, seed, args.repeat, values)
        except RangeProofError as e:
            raise CliError(str(e), EXIT_REFUSED) from None
        rows += bp_rows
        summary.append(f"Bulletproof n={args.n} m={args.m}: verified; prove {bp_rows[0].seconds:.3f} s, "
                       f"verify {bp_rows[1].seconds:.3f} s")
    if args.certificate:
        cert_rows, counts = fbench.bench_certificate(cfg.depth, args.attrs, seed, args.repeat)
        rows += cert_rows
        total = sum(counts.values())
        summary.append(f"certificate depth={cfg.depth} attrs={args.attrs}: {total} constraints "
                       f"(reference build: {REFERENCE_BASELINE_TOTAL})")
        summary += [f"  {k}: {v}" for k, v in counts.items()]
        summary.append("  reference: " + ", ".join(f"{k} {v}" for k, v in REFERENCE_BASELINE.items()))
        summary += [f"  {r.operation}: {r.seconds:.4f} s" for r in cert_rows]
    if args.range_compare:
        res = fbench.compare_range_approaches(cfg.bits, seed=seed, repeat=args.repeat)
        rows += [fbench.BenchRow("range_bulletproof_prove", cfg.bits, 1, 1, res["bulletproof_seconds"]),
                 fbench.BenchRow("range_snark_prove", cfg.bits, 1, 1, res["snark_seconds"])]
        summary.append(f"{cfg.bits}-bit range: Bulletproof {res['bulletproof_seconds']:.4f} s, "
                       f"SNARK ({res['snark_constraints']} constraints) {res['snark_seconds']:.4f} s, "
                       f"ratio {res['ratio']:.1f}x")
    text = fbench.to_csv(rows)
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text)
    if not args.quiet:
        print("\n".join(summary), file=sys.stderr)
    return EXIT_OK


def cmd_circuit_report(args, cfg: Config) -> int:
    report = constraint_report(build_certificate_circuit(cfg.depth, args.attrs))
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print(f"constraints {report['constraints']} (reference build {REFERENCE_BASELINE_TOTAL})")
        for k, v in report["by_category"].items():
            print(f"  {k}: {v}")
    return EXIT_OK


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")
    common.add_argument("--registry", help="registry event log (JSONL)")
    common.add_argument("--depth", type=int, help="batch Merkle depth (default 8)")
    common.add_argument("--bits", type=int, help="range bit-width: 8, 16, 32 or 64")
    common.add_argument("--threads", type=int, help="worker processes for provers")
    common.add_argument("--seed", type=int, help="seed the RNG for reproducible runs")
    common.add_argument("--json", action="store_true", help="structured output")

    p = argparse.ArgumentParser(prog="fort", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("keygen", parents=[common], help="new signing key")
    s.add_argument("--out", required=True)
    s.add_argument("--public-out")
    s.set_defaults(func=cmd_keygen)

    s = sub.add_parser("setup", parents=[common], help="issuer CRS for the certificate circuit")
    s.add_argument("--attrs", type=int, default=1)
    s.add_argument("--pk", required=True)
    s.add_argument("--vk", required=True)
    s.add_argument("--crs-seed", help="hex seed (anyone holding it can forge proofs)")
    s.set_defaults(func=cmd_setup)

    s = sub.add_parser("sp-issue", parents=[common], help="mint a signed NFT")
    s.add_argument("--sp-key", required=True)
    s.add_argument("--owner", required=True, help="owner key file or hex public key")
    s.add_argument("--attr", type=_parse_int, action="append", required=True)
    s.add_argument("--conditions-failed", action="store_true",
                   help="the issuer's conditions were not met; minting is refused")
    s.set_defaults(func=cmd_sp_issue)

    s = sub.add_parser("batch-close", parents=[common], help="close a batch and publish its root")
    s.add_argument("--batch", type=int)
    s.set_defaults(func=cmd_batch_close)

    s = sub.add_parser("cert-prove", parents=[common], help="build a certificate")
    s.add_argument("--nft", type=_parse_int, required=True)
    s.add_argument("--user-key", required=True)
    s.add_argument("--challenge", required=True, help="challenge context, e.g. an event date")
    s.add_argument("--pk", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--secrets-out", required=True, help="where to keep attribute openings")
    s.set_defaults(func=cmd_cert_prove)

    s = sub.add_parser("cert-verify", parents=[common], help="verify a certificate")
    s.add_argument("--cert", required=True)
    s.add_argument("--challenge", required=True)
    s.add_argument("--vk", required=True)
    s.add_argument("--sp-key", required=True, help="issuer key file or hex public key")
    s.add_argument("--nullifiers", help="nullifier log (default: next to the registry)")
    s.set_defaults(func=cmd_cert_verify)

    s = sub.add_parser("attr-prove", parents=[common], help="range-prove certificate attributes")
    s.add_argument("--cert", required=True)
    s.add_argument("--secrets", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_attr_prove)

    s = sub.add_parser("attr-verify", parents=[common], help="check attribute range proofs")
    s.add_argument("--cert", required=True)
    s.add_argument("--bundle", required=True)
    s.set_defaults(func=cmd_attr_verify)

    s = sub.add_parser("registry-inspect", parents=[common], help="list batches and roots")
    s.add_argument("--ids", action="store_true")
    s.set_defaults(func=cmd_registry_inspect)

    s = sub.add_parser("circuit-report", parents=[common], help="certificate constraint counts")
    s.add_argument("--attrs", type=int, default=1)
    s.set_defaults(func=cmd_circuit_report)

    s = sub.add_parser("bench", parents=[common], help="timings as CSV")
    s.add_argument("--bulletproof", action="store_true")
    s.add_argument("-n", type=int, default=64, help="bits per value")
    s.add_argument("-m", type=int, default=1, help="number of aggregated values")
    s.add_argument("--values", type=_parse_int, nargs="+")
    s.add_argument("--certificate", action="store_true")
    s.add_argument("--attrs", type=int, default=1)
    s.add_argument("--range-compare", action="store_true",
                   help="Bulletproof against an auxiliary SNARK for the same range")
    s.add_argument("--repeat", type=int, default=1)
    s.add_argument("--out", help="also write the CSV here")
    s.add_argument("--quiet", action="store_true", help="no human summary on stderr")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        return args.func(args, cfg)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except (EncodingError, UnicodeDecodeError, json.JSONDecodeError) as e:
        print(f"error: malformed input: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
