#!/usr/bin/env python3
"""fdqc Command Line Interface.

Runs delegated circuit programs through the simulated client/server
protocol, checks them against direct evaluation and demonstrates the
key-recovery attack on the half-blind variant.

The CLI provides three commands:
    - run: delegate a program and print the decrypted output
    - verify: compare a delegated run with direct evaluation, or run the
      exhaustive key sweeps (``--sweep toffoli|all``)
    - attack: try to recover Toffoli key bits from the server's transcript

Every command prints one JSON document (sorted keys) on standard output;
progress lines and errors go to standard error.

Exit codes:
    0 success, 1 parse error / missing file / bad usage, 2 protocol or
    other error, 3 verification mismatch.

Example:
    Delegate ``P H`` on ``|0>``::

        $ fdqc run --program programs/ph.qc --input 0 --seed 1

    Exhaustive Toffoli sweep::

        $ fdqc verify --sweep toffoli

    Leak demonstration::

        $ fdqc attack --mode hdqc --program programs/toffoli.qc --seed 5
"""

import argparse
from dataclasses import dataclass
import json
from pathlib import Path
import sys
from typing import Any

import numpy as np

from . import __version__
from .config import load_config, setup_logging
from .delegation.blindness import hdqc_attack
from .delegation.error_handler import (
    EXIT_MISMATCH,
    EXIT_OK,
    EXIT_USAGE,
    handle_error,
)
from .delegation.protocol import Mode, run_protocol
from .delegation.verification import SWEEP_CHOICES, VerificationRunner
from .exceptions import FDQCError, UsageError
from .observability import trace_operation
from .quantum import qsim
from .quantum.gateset import CircuitProgram, direct_eval, load_program

MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class RunConfig:
    """Resolved options shared by every subcommand."""

    program_path: str | None
    input_spec: str
    seed: int
    mode: Mode
    snapshots: bool
    output_path: str | None
    tolerance: float
    indent: int
    refresh_keys: bool = False

    def __post_init__(self):
        if not 0 <= self.seed <= MAX_SEED:
            raise UsageError(f"seed {self.seed} does not fit in 64 bits")


class _Parser(argparse.ArgumentParser):
    """Argument errors exit with the usage code instead of argparse's 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _status(message: str) -> None:
    print(message, file=sys.stderr)


def _resolve_input(spec: str, n_qubits: int, seed: int) -> qsim.Statevector:
    """Basis index, or a Haar-random state drawn from ``seed`` for ``random``."""
    if spec == "random":
        return qsim.haar_random_state(n_qubits, np.random.default_rng(seed))
    try:
        index = int(spec)
    except ValueError:
        raise UsageError(f"--input must be a basis index or 'random', got {spec!r}") from None
    if not 0 <= index < 2**n_qubits:
        raise UsageError(f"--input {index} outside 0..{2**n_qubits - 1} for {n_qubits} qubit(s)")
    return qsim.basis_state(n_qubits, index)


def _load(run_config: RunConfig) -> tuple[CircuitProgram, qsim.Statevector]:
    if not run_config.program_path:
        raise UsageError("--program is required")
    _status(f"🔍 Loading {run_config.program_path}...")
    program = load_program(run_config.program_path)
    state = _resolve_input(run_config.input_spec, program.n_qubits, run_config.seed)
    return program, state


def _emit(document: dict[str, Any], run_config: RunConfig, out_document: dict | None = None):
    text = json.dumps(document, indent=run_config.indent, sort_keys=True)
    print(text)
    if run_config.output_path:
        payload = text if out_document is None else json.dumps(
            out_document, indent=run_config.indent, sort_keys=True
        )
        Path(run_config.output_path).write_text(payload + "\n", encoding="utf-8")
        _status(f"📁 Written to: {run_config.output_path}")


def cmd_run(run_config: RunConfig) -> int:
    """Delegate the program and print the decrypted output amplitudes."""
    program, state = _load(run_config)
    _status(f"🚀 Delegating {len(program)} gate(s) in {run_config.mode.value} mode...")
    result = run_protocol(
        run_config.mode,
        program,
        state,
        run_config.seed,
        snapshots=run_config.snapshots,
        refresh_keys=run_config.refresh_keys,
    )
    document = {
        "command": "run",
        "mode": run_config.mode.value,
        "program": run_config.program_path,
        "input": run_config.input_spec,
        "seed": run_config.seed,
        "n_qubits": program.n_qubits,
        "rounds": result.rounds,
        "corrections": result.corrections,
        "output": qsim.canonical_phase(result.output).to_list(),
    }
    _emit(document, run_config, out_document=result.transcript.to_document())
    _status(f"✓ {result.rounds} round(s), {result.corrections} correction(s)")
    return EXIT_OK


def cmd_verify(run_config: RunConfig, sweep: str | None, config: dict[str, Any]) -> int:
    """Compare a delegated run with direct evaluation, or run a sweep group."""
    if sweep:
        _status(f"🧪 Running sweep: {sweep}")
        outcome = VerificationRunner(config).run(sweep)
        document = {"command": "verify", **outcome}
        _emit(document, run_config)
        if "error" in outcome:
            return outcome["error"]["exit_code"]
        if not outcome["success"]:
            _status(f"❌ {outcome['total_failures']} failing case(s)")
            return EXIT_MISMATCH
        _status(f"✓ {outcome['total_cases']} case(s) passed")
        return EXIT_OK

    program, state = _load(run_config)
    result = run_protocol(
        run_config.mode,
        program,
        state,
        run_config.seed,
        refresh_keys=run_config.refresh_keys,
    )
    expected = direct_eval(program, state)
    fidelity = qsim.fidelity(result.output, expected)
    equal = fidelity >= 1.0 - run_config.tolerance
    document = {
        "command": "verify",
        "mode": run_config.mode.value,
        "program": run_config.program_path,
        "input": run_config.input_spec,
        "seed": run_config.seed,
        "rounds": result.rounds,
        "fidelity": round(fidelity, 12),
        "equal": equal,
    }
    if not equal:
        document["expected"] = qsim.canonical_phase(expected).to_list()
        document["actual"] = qsim.canonical_phase(result.output).to_list()
    _emit(document, run_config)

    if not equal:
        _status(f"❌ Mismatch: fidelity {fidelity:.12f}")
        return EXIT_MISMATCH
    _status(f"✓ Delegated output matches direct evaluation (fidelity {fidelity:.12f})")
    return EXIT_OK


def cmd_attack(run_config: RunConfig, guess_seed: int | None) -> int:
    """Attack the server's transcript and check the outcome against the mode."""
    program, state = _load(run_config)
    result = run_protocol(run_config.mode, program, state, run_config.seed)
    report = hdqc_attack(result.transcript, result.ground_truth, guess_seed=guess_seed)
    document = {
        "command": "attack",
        "program": run_config.program_path,
        "seed": run_config.seed,
        "rounds": result.rounds,
        **report.to_document(),
    }
    _emit(document, run_config)

    if run_config.mode is Mode.HDQC:
        expected_outcome = report.fully_recovered
    else:
        expected_outcome = guess_seed is not None or report.all_unknown
    if not expected_outcome:
        _status("❌ Attack outcome does not match the protocol's guarantees")
        return EXIT_MISMATCH
    _status(f"✓ Attack success rate: {report.success_rate:.3f}")
    return EXIT_OK


def _add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--program", help="Path to a circuit program file")
    parser.add_argument(
        "--input",
        default="0",
        help="Basis index of the input state, or 'random' (Haar state drawn from --seed)",
    )
    parser.add_argument("--seed", type=int, default=None, help="Seed for keys and ancillas")
    parser.add_argument(
        "--mode", choices=[m.value for m in Mode], default=None, help="fdqc or hdqc"
    )
    parser.add_argument(
        "--snapshots", action="store_true", help="Keep payload snapshots in the transcript"
    )
    parser.add_argument("--out", help="Write the transcript (run) or report to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="fdqc",
        description="fdqc - Full-blind delegated quantum computation simulator",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  fdqc run --program programs/ph.qc --input 0 --seed 1
  fdqc verify --program programs/toffoli.qc --input random --seed 3
  fdqc verify --sweep all
  fdqc attack --mode hdqc --program programs/toffoli.qc --seed 5
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="Custom YAML configuration file")
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Override core.log_level",
    )

    subparsers = parser.add_subparsers(dest="command", help="Commands", parser_class=_Parser)

    run_parser = subparsers.add_parser("run", help="Delegate a program and print the output")
    _add_common_arguments(run_parser)

    verify_parser = subparsers.add_parser(
        "verify", help="Check a delegated run against direct evaluation, or run sweeps"
    )
    _add_common_arguments(verify_parser)
    verify_parser.add_argument(
        "--sweep", choices=SWEEP_CHOICES, help="Run exhaustive sweeps instead of one program"
    )

    attack_parser = subparsers.add_parser(
        "attack", help="Recover Toffoli key bits from the server's transcript"
    )
    _add_common_arguments(attack_parser)
    attack_parser.add_argument(
        "--guess-seed",
        type=int,
        default=None,
        help="Let the attacker guess coin flips when nothing is announced",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    """Main CLI entry point for fdqc.

    Returns:
        int: Exit code (0 success, 1 usage, 2 protocol/other, 3 mismatch)
    """
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help(sys.stderr)
        return EXIT_USAGE

    try:
        overrides = {"core": {"log_level": args.log_level}} if args.log_level else None
        config = load_config(config_file=args.config, config_dict=overrides)
        setup_logging(config)

        protocol = config.get("protocol", {})
        run_config = RunConfig(
            program_path=args.program,
            input_spec=args.input,
            seed=protocol.get("default_seed", 0) if args.seed is None else args.seed,
            mode=Mode(args.mode or protocol.get("default_mode", "fdqc")),
            snapshots=args.snapshots or protocol.get("snapshots", False),
            output_path=args.out,
            tolerance=protocol.get("tolerance", qsim.DEFAULT_TOLERANCE),
            indent=config.get("report", {}).get("indent", 2),
            refresh_keys=protocol.get("refresh_keys", False),
        )

        with trace_operation(f"cli_{args.command}"):
            if args.command == "run":
                return cmd_run(run_config)
            if args.command == "verify":
                return cmd_verify(run_config, args.sweep, config)
            return cmd_attack(run_config, args.guess_seed)

    except (FDQCError, OSError) as e:
        result = handle_error(e)
        _status(f"❌ {result['message']}")
        if result.get("solution") and result["solution"].get("suggestion"):
            _status(f"   {result['solution']['suggestion']}")
        return result["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
