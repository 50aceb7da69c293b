"""``capq`` command-line entry point.

Every invocation prints one JSON report on stdout::

    {"command": ..., "inputs": {path: sha256}, "seed": ..., "results": ...}

Exit codes: 0 success, 2 validation failure (bad input or a failed check),
1 internal error, 64 usage error. ``wall_time`` is added only with
``--timing`` so that reports stay byte-identical across runs.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from . import io
from .capacity import one_shot_capacity
from .channels import choi, complement, tensor_power, validate
from .circuits import build_reduction, evaluate_reduction, evaluate_reduction_joint, parse_circuit
from .directsum import (
    ProjectiveDirectSum,
    additivity_formula_check,
    capacity_bound_check,
    complement_identity_check,
)
from .errors import CapqError, DimensionCap
from .selftest import run_selftest
from .zeroerr import (
    capacity_bounds,
    check_pvm_strategy,
    cq_channel,
    distinguishability_certificate,
    gram_system,
    parse_graph,
)

EXIT_OK, EXIT_INTERNAL, EXIT_INVALID, EXIT_USAGE = 0, 1, 2, 64
PROBE_MAX_DIM = 16


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


class _Run:
    """Collects input digests while a subcommand reads its files."""

    def __init__(self, args):
        self.args = args
        self.inputs = {}
        self.workers = args.threads

    def text(self, path) -> str:
        self.inputs[str(path)] = io.file_digest(path)
        return Path(path).read_text(encoding="utf-8")

    def json(self, path):
        self.inputs[str(path)] = io.file_digest(path)
        return io.read_json(path)


# subcommand handlers return (results, ok)

def cmd_channel(run: _Run):
    a = run.args
    if a.action == "validate":
        ch = io.channel_from_json(run.json(a.file), check=False)
        report = validate(ch)
        return report, report["valid"]
    ch = io.channel_from_json(run.json(a.file))
    if a.action == "choi":
        return {"choi": io.matrix_to_json(choi(ch))}, True
    return {"complement": io.channel_to_json(complement(ch))}, True


def cmd_capacity(run: _Run):
    a = run.args
    ch = io.channel_from_json(run.json(a.channel))
    if ch.dim_in ** a.copies > PROBE_MAX_DIM:
        raise DimensionCap(f"input dimension {ch.dim_in ** a.copies} exceeds {PROBE_MAX_DIM}")
    est = one_shot_capacity(tensor_power(ch, a.copies), restarts=a.restarts, seed=a.seed, workers=run.workers)
    return {
        "value": est.value / a.copies,
        "argmax_state": io.matrix_to_json(est.argmax_state),
        "converged": est.converged,
        "copies": a.copies,
        "restarts": est.restarts_used,
    }, True


def cmd_directsum(run: _Run):
    a = run.args
    phi0 = io.channel_from_json(run.json(a.phi0))
    phi1 = io.channel_from_json(run.json(a.phi1))
    povm = io.povm_from_json(run.json(a.povm))
    sigma = io.matrix_from_json(run.json(a.sigma))
    ds = ProjectiveDirectSum.create(phi0, phi1, povm, sigma)
    results = {"weights": list(ds.weights), "channel": io.channel_to_json(ds.channel)}
    ok = True
    if a.check == "complement":
        dist, ok = complement_identity_check(ds)
        results["check"] = {"kind": "complement", "choi_distance": dist, "passed": ok}
    elif a.check == "additivity":
        lhs, rhs, ok = additivity_formula_check(ds, restarts=a.restarts, seed=a.seed, workers=run.workers)
        results["check"] = {"kind": "additivity", "lhs": lhs, "rhs": rhs, "passed": ok}
    elif a.check == "bound":
        ok = capacity_bound_check(ds, restarts=a.restarts, seed=a.seed)
        results["check"] = {"kind": "bound", "passed": ok}
    return results, ok


def cmd_reduce(run: _Run):
    a = run.args
    r = build_reduction(parse_circuit(run.text(a.verifier)))
    est = evaluate_reduction(r, sigma_restarts=a.sigma_restarts, rho_restarts=a.rho_restarts,
                             seed=a.seed, workers=run.workers)
    results = {
        "capacity_estimate": est.value,
        "weight_accept_max": est.weight_accept_max,
        "weight_accept": est.weight_accept,
        "converged": est.converged,
        "instance_summary": r.summary(),
    }
    if a.joint:
        joint = evaluate_reduction_joint(r, seed=a.seed)
        results["joint_experimental"] = {"value": joint.value, "converged": joint.converged}
    return results, True


def cmd_graph(run: _Run):
    a = run.args
    g = parse_graph(run.text(a.input))
    results = {"vertices": g.n, "edges": len(g.edges)}
    ok = True
    if a.bounds:
        b = capacity_bounds(g)
        results.update(lower_bits=b.lower_bits, upper_bits=b.upper_bits,
                       independence_number=b.independence_number, witness=list(b.witness),
                       max_overlap=b.certificate.max_overlap)
    if a.gram:
        gs = gram_system(g)
        results["gram"] = {"alpha": gs.alpha, "vectors": io.matrix_to_json(gs.vectors)}
    if a.channel:
        io.write_json(a.channel, io.channel_to_json(cq_channel(gram_system(g))))
        results["channel_written"] = str(a.channel)
    if a.certify:
        s = io.strategy_from_json(run.json(a.certify))
        valid, violations = check_pvm_strategy(s, g)
        cert = {"valid": valid, "violations": [
            {"kind": x.kind, "i": x.i, "j": x.j, "v": x.v, "w": x.w, "norm": x.norm} for x in violations
        ]}
        if valid:
            c = distinguishability_certificate(g, s)
            cert.update(max_overlap=c.max_overlap, certified_t=c.certified_t, lower_bits=c.lower_bound_bits)
        results["certify"] = cert
        ok = valid
    return results, ok


def cmd_selftest(run: _Run):
    checks = run_selftest(seed=run.args.seed, workers=run.workers)
    return {"checks": checks, "all_passed": all(c["passed"] for c in checks)}, all(c["passed"] for c in checks)


def _threads_default() -> int:
    raw = os.environ.get("CAPQ_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"CAPQ_THREADS must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument("--threads", type=int, default=None, help="worker cap (default $CAPQ_THREADS or 1)")
    common.add_argument("--timing", action="store_true", help="include wall_time in the report")

    p = _Parser(prog="capq", description="Capacity estimation and certificate checking for quantum channels.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("channel", parents=[common], help="validate a channel or print its Choi matrix or complement")
    c.add_argument("action", choices=["validate", "choi", "complement"])
    c.add_argument("file")
    c.set_defaults(handler=cmd_channel)

    c = sub.add_parser("capacity", parents=[common], help="one-shot quantum capacity lower bound")
    c.add_argument("--channel", required=True)
    c.add_argument("--restarts", type=int, default=16)
    c.add_argument("--copies", type=int, choices=[1, 2], default=1)
    c.set_defaults(handler=cmd_capacity)

    c = sub.add_parser("directsum", parents=[common], help="build a projective direct sum and check it")
    for name in ("--phi0", "--phi1", "--povm", "--sigma"):
        c.add_argument(name, required=True)
    c.add_argument("--check", choices=["complement", "additivity", "bound"])
    c.add_argument("--restarts", type=int, default=32)
    c.set_defaults(handler=cmd_directsum)

    c = sub.add_parser("reduce", parents=[common], help="evaluate the verifier-to-channel reduction")
    c.add_argument("--verifier", required=True)
    c.add_argument("--sigma-restarts", type=int, default=4)
    c.add_argument("--rho-restarts", type=int, default=8)
    c.add_argument("--joint", action="store_true", help="also run the experimental joint-input optimizer")
    c.set_defaults(handler=cmd_reduce)

    c = sub.add_parser("graph", parents=[common], help="zero-error pipeline for a confusability graph")
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--bounds", action="store_true")
    c.add_argument("--gram", action="store_true")
    c.add_argument("--channel", metavar="OUT_JSON")
    c.add_argument("--certify", metavar="STRATEGY_JSON")
    c.set_defaults(handler=cmd_graph)

    c = sub.add_parser("selftest", parents=[common], help="run the reproducible acceptance suite")
    c.set_defaults(handler=cmd_selftest)
    return p


def dispatch(argv=None) -> tuple[int, dict | None]:
    """Run one command; return (exit code, report). Usage errors raise UsageError."""
    args = build_parser().parse_args(argv)
    if args.threads is None:
        args.threads = _threads_default()
    if args.threads < 1:
        raise UsageError("--threads must be at least 1")
    for name in ("restarts", "sigma_restarts", "rho_restarts"):
        if getattr(args, name, 1) < (0 if name == "sigma_restarts" else 1):
            raise UsageError(f"--{name.replace('_', '-')} is out of range")
    run = _Run(args)
    report = {"command": args.command, "inputs": run.inputs, "seed": args.seed}
    start = time.perf_counter()
    try:
        results, ok = args.handler(run)
        report["results"] = results
        code = EXIT_OK if ok else EXIT_INVALID
    except (CapqError, OSError) as exc:
        # validation failures carry no partial numeric output
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code = EXIT_INVALID
    except Exception as exc:  # noqa: BLE001 - the report must stay valid JSON
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code = EXIT_INTERNAL
    if args.timing:
        report["wall_time"] = time.perf_counter() - start
    return code, report


def main(argv=None) -> int:
    try:
        code, report = dispatch(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(io.dumps(report) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
