"""Command-line entry point.

Exit codes: 0 success, 1 not faithful / not exactly recovered, 2 unreadable
input, 3 invalid state or dimension mismatch, 4 state that no set of local
unitaries can make faithful, 5 qubit state without discord.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import List, Optional

import numpy as np

from . import serialization as ser
from .channels import random_channel
from .constructions import (
    ForbiddenInputError,
    NotDiscordantError,
    fourier_matrix,
    qubit_discord_unitary,
    sigma_family,
    theorem1_channel_set,
    theorem2_unitary_set,
    theorem3_state_unitaries,
)
from .faithfulness import local_span_dim
from .operator_algebra import DEFAULT_TOL
from .schmidt import operator_schmidt_decompose
from .states import (
    InvalidStateError,
    pure_state,
    random_bipartite_state,
    random_pure_vector,
    random_state_with_osr,
)
from .tomography import ExperimentPlan, prepared_inputs, run_batch, run_experiment, write_results

log = logging.getLogger("capt")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_FORBIDDEN = 4
EXIT_NOT_DISCORDANT = 5

CONSTRUCTIONS = ("theorem1", "theorem2", "theorem3", "discord", "sigma")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_PARSE)


def _positive(kind):
    def conv(text):
        value = kind(text)
        if value <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value
    return conv


def _dimension(text):
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError(f"d must be >= 2, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="capt", description="Correlation-assisted process tomography toolkit.")
    p.add_argument("-v", "--verbose", action="store_true", help="diagnostics on stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--tol", type=_positive(float), default=DEFAULT_TOL)
        sp.add_argument("--out", help="write the result here instead of stdout")

    sp = sub.add_parser("osd", help="operator Schmidt decomposition of a state file")
    sp.add_argument("state")
    common(sp)

    sp = sub.add_parser("faithful-check", help="span check of a list of states or a plan")
    sp.add_argument("file")
    common(sp)

    sp = sub.add_parser("construct", help="build a faithful input set; output is a run plan")
    sp.add_argument("scheme", choices=CONSTRUCTIONS)
    sp.add_argument("--d", type=_dimension)
    sp.add_argument("--k", type=_positive(int))
    sp.add_argument("--state", help="input state file (random state from --seed otherwise)")
    common(sp)

    sp = sub.add_parser("run", help="simulate and reconstruct a hidden channel")
    sp.add_argument("plan")
    src = sp.add_mutually_exclusive_group()
    src.add_argument("--channel", help="channel file")
    src.add_argument("--random-channel", type=int, metavar="SEED", help="seed of a random channel")
    sp.add_argument("--kraus-rank", type=_positive(int), default=2)
    sp.add_argument("--shots", type=_positive(int))
    common(sp)

    sp = sub.add_parser("batch", help="run a config of experiments, one JSON line per result")
    sp.add_argument("config")
    sp.add_argument("--workers", type=_positive(int), default=1)
    common(sp)
    return p


def _emit(obj: dict, out: Optional[str]) -> None:
    text = json.dumps(obj)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_osd(args) -> int:
    rho = ser.state_from_dict(ser.load(args.state))
    osd = operator_schmidt_decompose(rho, args.tol)
    _emit({"seed": args.seed, **ser.osd_to_dict(osd)}, args.out)
    return EXIT_OK


def cmd_faithful_check(args) -> int:
    doc = ser.load(args.file)
    if isinstance(doc, dict) and "scheme" in doc:
        states = prepared_inputs(ser.plan_from_dict(doc))
    elif isinstance(doc, dict) and "states" in doc:
        states = [ser.state_from_dict(s) for s in doc["states"]]
    elif isinstance(doc, list):
        states = [ser.state_from_dict(s) for s in doc]
    else:
        raise ser.FormatError("expected a plan, a list of states, or {'states': [...]}")
    dims_a = {s.dim_a for s in states}
    if len(dims_a) != 1:
        raise ValueError(f"states disagree on the probe dimension: {sorted(dims_a)}")
    report = local_span_dim(states, args.tol, frame=True)
    _emit({"seed": args.seed, **report.to_dict()}, args.out)
    return EXIT_OK if report.faithful else EXIT_FAIL


def construct_bundle(scheme: str, d=None, k=None, state=None, seed: int = 0,
                     tol: float = DEFAULT_TOL) -> dict:
    """Run one construction and package it as a CAPT plan plus its report."""
    plan_kwargs = {}
    if scheme == "theorem1":
        if state is None:
            if d is None or k is None:
                raise ser.FormatError("theorem1 needs --state or both --d and --k")
            state = random_state_with_osr((d, d), k, seed)
        plan_kwargs["channels"] = theorem1_channel_set(state, tol, seed=seed)
    elif scheme == "theorem2":
        if state is None:
            if d is None:
                raise ser.FormatError("theorem2 needs --state or --d")
            state = random_bipartite_state((d, d), seed)
        plan_kwargs["unitaries"] = theorem2_unitary_set(state, seed, tol)
    elif scheme == "theorem3":
        if state is None:
            if d is None or k is None:
                raise ser.FormatError("theorem3 needs --state or both --d and --k")
            if k > d:
                raise ValueError(f"need k <= d, got k={k}, d={d}")
            psi = random_pure_vector((d, d), seed, k)
            state = pure_state(psi, (d, d))
        else:
            w, V = np.linalg.eigh(np.asarray(state.matrix))
            if w[-1] < 1 - 1e-8:
                raise InvalidStateError("theorem3 needs a pure state")
            psi = V[:, -1]
        plan_kwargs["unitaries"] = theorem3_state_unitaries(psi, state.dims, tol)
    elif scheme == "discord":
        if state is None:
            state = random_bipartite_state((2, 2), seed)
        U = qubit_discord_unitary(state, tol, seed)
        plan_kwargs["unitaries"] = [np.eye(2, dtype=complex), U]
    elif scheme == "sigma":
        if d is None:
            raise ser.FormatError("sigma needs --d")
        state = sigma_family(d)
        plan_kwargs["unitaries"] = [np.eye(d, dtype=complex), fourier_matrix(d)]
    else:
        raise ser.FormatError(f"unknown construction {scheme!r}")
    plan = ExperimentPlan("CAPT", state=state, seed=seed, tol=tol, **plan_kwargs)
    report = local_span_dim(prepared_inputs(plan), tol, frame=True)
    bundle = ser.plan_to_dict(plan)
    bundle["construction"] = scheme
    bundle["report"] = report.to_dict()
    return bundle


def cmd_construct(args) -> int:
    state = ser.state_from_dict(ser.load(args.state)) if args.state else None
    bundle = construct_bundle(args.scheme, args.d, args.k, state, args.seed, args.tol)
    _emit(bundle, args.out)
    return EXIT_OK if bundle["report"]["faithful"] else EXIT_FAIL


def cmd_run(args) -> int:
    plan = ser.plan_from_dict(ser.load(args.plan))
    if args.channel:
        channel = ser.channel_from_dict(ser.load(args.channel))
    else:
        ch_seed = args.seed if args.random_channel is None else args.random_channel
        channel = random_channel(plan.dim_in, ch_seed, args.kraus_rank)
    if args.shots is not None:
        plan = ExperimentPlan(plan.scheme, plan.state, plan.channels, plan.unitaries,
                              plan.probes, seed=args.seed, tol=plan.tol)
    result = run_experiment(plan, channel, shots=args.shots)
    out = {"seed": args.seed, "shots": args.shots, **ser.result_to_dict(result)}
    _emit(out, args.out)
    if args.shots is None:
        return EXIT_OK if result.exact else EXIT_FAIL
    ok = result.determined_dim == result.target_dim and result.choi_error <= args.tol
    return EXIT_OK if ok else EXIT_FAIL


def cmd_batch(args) -> int:
    results = run_batch(ser.load(args.config), workers=args.workers)
    if args.out:
        write_results(results, args.out)
    else:
        for r in results:
            print(json.dumps(r))
    return EXIT_OK if all(r["exact"] for r in results) else EXIT_FAIL


COMMANDS = {
    "osd": cmd_osd,
    "faithful-check": cmd_faithful_check,
    "construct": cmd_construct,
    "run": cmd_run,
    "batch": cmd_batch,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    log.info("seed=%d tol=%g", args.seed, args.tol)
    try:
        return COMMANDS[args.command](args)
    except (ser.FormatError, OSError, KeyError, TypeError) as exc:
        print(f"capt: cannot read input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ForbiddenInputError as exc:
        print(f"capt: {exc}", file=sys.stderr)
        return EXIT_FORBIDDEN
    except NotDiscordantError as exc:
        print(f"capt: {exc}", file=sys.stderr)
        return EXIT_NOT_DISCORDANT
    except ValueError as exc:
        # InvalidStateError and dimension mismatches
        print(f"capt: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
