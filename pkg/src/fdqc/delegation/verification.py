"""
Verification Module - exhaustive sweeps and fuzzing against the plaintext oracle.

Sweeps:
    gate_<kind>       every key assignment x every basis input of one gate
    closed_form       oracle table vs textbook Clifford rules
    swap_equivalence  swap-form vs correction-form Toffoli decryption
    fuzz              random programs run through the full protocol

``toffoli`` runs the Toffoli gate sweep alone; ``all`` runs everything.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import logging
from typing import Any

import numpy as np

from ..observability import trace_operation
from ..quantum import pauli_otp, qsim
from ..quantum.gateset import DELEGATABLE_KINDS, direct_eval, random_program
from ..quantum.qsim import GateKind, GateOp
from .error_handler import handle_error
from .protocol import run_fdqc

logger = logging.getLogger(__name__)

MAX_RECORDED_FAILURES = 20
SWEEP_CHOICES = ("toffoli", "all")


@dataclass
class SweepReport:
    """Tally of one sweep; only the first failures are kept verbatim."""

    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)
    failure_count: int = 0

    @property
    def passed(self) -> bool:
        return self.cases > 0 and self.failure_count == 0

    def record(self, ok: bool, description: str) -> None:
        self.cases += 1
        if not ok:
            self.failure_count += 1
            if len(self.failures) < MAX_RECORDED_FAILURES:
                self.failures.append(description)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "cases": self.cases,
            "failure_count": self.failure_count,
            "failures": list(self.failures),
            "passed": self.passed,
        }


def _keys_text(keys) -> str:
    return " ".join(str(k) for k in keys)


def gate_sweep(kind: GateKind | str, tol: float = qsim.DEFAULT_TOLERANCE) -> SweepReport:
    """Master identity over all keys and basis inputs of ``kind``."""
    kind = GateKind(kind)
    report = SweepReport(f"gate_{kind.value.lower()}")
    for keys in pauli_otp.all_keys(kind.arity):
        for index in range(2**kind.arity):
            state = qsim.basis_state(kind.arity, index)
            ok = pauli_otp.master_identity_holds(kind, keys, state, tol)
            report.record(ok, f"{kind.value} keys [{_keys_text(keys)}] input |{index}>")
    return report


def toffoli_sweep(tol: float = qsim.DEFAULT_TOLERANCE) -> SweepReport:
    return gate_sweep(GateKind.TOFFOLI, tol)


def closed_form_sweep() -> SweepReport:
    """Oracle table against the textbook rules for H, P, CZ and CNOT."""
    report = SweepReport("closed_form")
    for kind in (GateKind.H, GateKind.P, GateKind.CZ, GateKind.CNOT):
        for keys in pauli_otp.all_keys(kind.arity):
            oracle = pauli_otp.key_update(kind, keys).new_keys
            ok = oracle == pauli_otp.closed_form_update(kind, keys)
            report.record(ok, f"{kind.value} keys [{_keys_text(keys)}]")
    return report


def swap_equivalence_sweep(tol: float = qsim.DEFAULT_TOLERANCE) -> SweepReport:
    """Swap-form and correction-form Toffoli decryption agree with each other and with T."""
    report = SweepReport("swap_equivalence")
    toffoli = GateOp(GateKind.TOFFOLI, (0, 1, 2))
    for keys in pauli_otp.all_keys(3):
        for index in range(8):
            plain = qsim.basis_state(3, index)
            blind = qsim.apply(pauli_otp.encrypt(plain, keys), toffoli)
            optimized = pauli_otp.toffoli_decrypt_optimized(blind, keys)
            swapped = pauli_otp.toffoli_decrypt_unoptimized(blind, keys)
            ok = qsim.equal_up_to_global_phase(
                optimized, swapped, tol
            ) and qsim.equal_up_to_global_phase(optimized, qsim.apply(plain, toffoli), tol)
            report.record(ok, f"keys [{_keys_text(keys)}] input |{index}>")
    return report


def fuzz_case(
    seed: int, max_qubits: int = 3, max_length: int = 10, tol: float = qsim.DEFAULT_TOLERANCE
) -> tuple[bool, str]:
    """Run one seeded random program through FDQC and compare with direct evaluation."""
    rng = np.random.default_rng(seed)
    n_qubits = int(rng.integers(1, max_qubits + 1))
    length = int(rng.integers(0, max_length + 1))
    program = random_program(n_qubits, length, seed)
    state = qsim.haar_random_state(n_qubits, rng)

    result = run_fdqc(program, state, seed)
    expected = direct_eval(program, state)
    ok = qsim.equal_up_to_global_phase(result.output, expected, tol)
    ops = "; ".join(op.render() for op in program.ops) or "(empty)"
    return ok, f"seed {seed}: {n_qubits} qubit(s) [{ops}]"


def fuzz_sweep(
    n_programs: int = 200,
    max_qubits: int = 3,
    max_length: int = 10,
    seed: int = 0,
    workers: int = 0,
    tol: float = qsim.DEFAULT_TOLERANCE,
) -> SweepReport:
    """Fuzz ``n_programs`` consecutive seeds, optionally on a thread pool."""
    report = SweepReport("fuzz")
    seeds = range(seed, seed + n_programs)
    with ThreadPoolExecutor(max_workers=workers or None) as pool:
        outcomes = pool.map(lambda s: fuzz_case(s, max_qubits, max_length, tol), seeds)
        for ok, description in outcomes:
            report.record(ok, description)
    return report


class VerificationRunner:
    """
    Runs named sweep groups and collects their reports.
    """

    def __init__(self, config: dict[str, Any] | None = None):
        """
        Parameters:
        - config: Full configuration dictionary (``protocol`` and
          ``verification`` sections are read)
        """
        self.config = config or {}
        protocol = self.config.get("protocol", {})
        verification = self.config.get("verification", {})

        self.tolerance = protocol.get("tolerance", qsim.DEFAULT_TOLERANCE)
        self.workers = verification.get("worker_threads", 0)
        self.fuzz_programs = verification.get("fuzz_programs", 200)
        self.fuzz_max_length = verification.get("fuzz_max_length", 10)
        self.fuzz_max_qubits = verification.get("fuzz_max_qubits", 3)
        self.fuzz_seed = verification.get("fuzz_seed", 0)

    def _sweeps(self, sweep: str) -> list:
        if sweep == "toffoli":
            return [lambda: toffoli_sweep(self.tolerance)]
        if sweep == "all":
            kinds = sorted(DELEGATABLE_KINDS, key=lambda k: k.value)
            return [
                *(lambda k=k: gate_sweep(k, self.tolerance) for k in kinds),
                closed_form_sweep,
                lambda: swap_equivalence_sweep(self.tolerance),
                lambda: fuzz_sweep(
                    self.fuzz_programs,
                    self.fuzz_max_qubits,
                    self.fuzz_max_length,
                    self.fuzz_seed,
                    self.workers,
                    self.tolerance,
                ),
            ]
        raise ValueError(f"Unknown sweep {sweep!r}; choose from {', '.join(SWEEP_CHOICES)}")

    def run(self, sweep: str = "toffoli") -> dict[str, Any]:
        """
        Run a sweep group.

        Returns:
        - {success, sweep, reports, total_cases, total_failures} or, when a
          sweep raises, {success: False, sweep, error}
        """
        logger.info(f"Starting verification sweep: {sweep}")
        reports: list[SweepReport] = []
        try:
            with trace_operation(f"sweep_{sweep}"):
                for build in self._sweeps(sweep):
                    report = build()
                    logger.info(
                        f"Sweep {report.name}: {report.cases} case(s), "
                        f"{report.failure_count} failure(s)"
                    )
                    reports.append(report)
        except Exception as e:
            logger.exception(f"Error in verification sweep: {e}")
            return {
                "success": False,
                "sweep": sweep,
                "error": handle_error(e),
                "reports": [r.to_dict() for r in reports],
            }

        return {
            "success": all(r.passed for r in reports),
            "sweep": sweep,
            "reports": [r.to_dict() for r in reports],
            "total_cases": sum(r.cases for r in reports),
            "total_failures": sum(r.failure_count for r in reports),
        }
