"""
Blindness checks and the key-recovery attack.

Two facts make FDQC blind to an honest-but-curious server:

- every wire it receives is maximally mixed once the client's key is
  averaged out, and
- every round shows the same five gates, so transcripts of equally long
  sessions are identical.

HDQC breaks the second fact: the client announces each gate, so the
correction rounds that follow a Toffoli spell out the key bits that
triggered them.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

from ..exceptions import ProtocolError, StateError
from ..quantum import pauli_otp, qsim
from ..quantum.gateset import CircuitProgram
from ..quantum.pauli_otp import PauliKey
from ..quantum.qsim import DensityMatrix, GateKind, Statevector
from .protocol import CHANNEL_WIRES, SLOT_FOR_KIND, SLOT_WIRES, Mode, Role, run_fdqc
from .transcript import UNKNOWN, AttackReport, Transcript

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ServerView:
    """What the server holds per round: the 9-wire reduced state and the ops."""

    round_views: tuple[DensityMatrix, ...]
    visible_ops: tuple[tuple[str, ...], ...]


def server_view(transcript: Transcript) -> ServerView:
    """Reduced density matrices of the channel wires as received.

    Raises:
        ProtocolError: The transcript was recorded without payload snapshots.
    """
    if transcript.rounds and not transcript.has_snapshots:
        raise ProtocolError("transcript has no payload snapshots")
    views = tuple(
        qsim.reduced_density(r.payload_before, range(CHANNEL_WIRES)) for r in transcript.rounds
    )
    return ServerView(views, tuple(r.server_ops for r in transcript.rounds))


def encrypted_view(plaintext: Statevector, tol: float = qsim.DEFAULT_TOLERANCE) -> DensityMatrix:
    """Mix ``plaintext`` over the four equiprobable one-qubit keys.

    Raises:
        StateError: ``plaintext`` is not a single qubit, or the mixture is not
            ``I/2`` within ``tol``.
    """
    if plaintext.n_qubits != 1:
        raise StateError(f"encrypted_view takes one qubit, got {plaintext.n_qubits}")
    keys = [PauliKey(a, b) for a in (0, 1) for b in (0, 1)]
    rho = qsim.mix([pauli_otp.encrypt(plaintext, [k]) for k in keys], [0.25] * 4)
    if not rho.allclose(qsim.maximally_mixed(1), tol):
        raise StateError("one-time-padded qubit is not maximally mixed")
    return rho


def round_wire_view(
    program: CircuitProgram,
    input_state: Statevector,
    logical_qubit: int = 0,
    seed: int = 0,
) -> DensityMatrix:
    """Server's view of one message wire in the first round, averaged over its key.

    The session is run once per key of ``logical_qubit`` (other keys zero, same
    ancilla seed), and the reduced state of the wire carrying that qubit is
    averaged across the four runs.

    Raises:
        ProtocolError: The first gate does not act on ``logical_qubit``.
    """
    if not program.ops or logical_qubit not in program.ops[0].targets:
        raise ProtocolError(f"first gate does not touch logical qubit {logical_qubit}")
    first = program.ops[0]
    wire = SLOT_WIRES[SLOT_FOR_KIND[first.kind]][first.targets.index(logical_qubit)]

    views = []
    for a in (0, 1):
        for b in (0, 1):
            keys = [PauliKey(0, 0)] * program.n_qubits
            keys[logical_qubit] = PauliKey(a, b)
            result = run_fdqc(program, input_state, seed, initial_keys=keys, snapshots=True)
            payload = result.transcript.rounds[0].payload_before
            views.append(qsim.reduced_density(payload, [wire]))
    return qsim.average(views)


def transcripts_indistinguishable(t1: Transcript, t2: Transcript) -> bool:
    """True iff both FDQC transcripts show the server identical records.

    Raises:
        ProtocolError: Either transcript is not from an FDQC session.
    """
    modes = {t1.mode, t2.mode}
    if modes != {Mode.FDQC.value}:
        raise ProtocolError(f"cannot compare transcripts of modes {sorted(modes)}")
    return t1.round_count == t2.round_count and t1.server_view() == t2.server_view()


def _parse_announcement(text: str) -> tuple[str, tuple[int, ...]]:
    head, *operands = text.split()
    return head, tuple(int(x) for x in operands)


def _scan_hdqc(transcript: Transcript) -> tuple[dict[str, int], list[str]]:
    recovered: dict[str, int] = {}
    announced: list[str] = []
    rounds = transcript.rounds
    instance = 0
    i = 0
    while i < len(rounds):
        gate = rounds[i].announced_gate
        if gate is None:
            i += 1
            continue
        announced.append(gate)
        head, operands = _parse_announcement(gate)
        i += 1
        if head != GateKind.TOFFOLI.mnemonic or rounds[i - 1].announced_role != Role.PROGRAM.value:
            continue

        c1, c2, t = operands
        bits = {"a": 0, "c": 0, "f": 0}
        while i < len(rounds) and rounds[i].announced_role == Role.CORRECTION.value:
            corr, wires = _parse_announcement(rounds[i].announced_gate)
            announced.append(rounds[i].announced_gate)
            if corr == GateKind.CZ.mnemonic and set(wires) == {c1, c2}:
                bits["f"] = 1
            elif corr == GateKind.CNOT.mnemonic and wires == (c2, t):
                bits["a"] = 1
            elif corr == GateKind.CNOT.mnemonic and wires == (c1, t):
                bits["c"] = 1
            i += 1
        for name, value in bits.items():
            recovered[f"{name}{instance}"] = value
        instance += 1
    return recovered, announced


def hdqc_attack(
    transcript: Transcript,
    ground_truth: Mapping[str, int],
    guess_seed: int | None = None,
) -> AttackReport:
    """Recover Toffoli key bits from announced correction rounds.

    ``ground_truth`` is the client's record (``DelegationResult.ground_truth``)
    and is used only to score the attempt. On FDQC transcripts nothing is
    announced, so every bit is ``"unknown"`` unless ``guess_seed`` asks for
    coin-flip guesses.
    """
    truth = dict(ground_truth)
    notes: list[str] = []

    if transcript.mode == Mode.HDQC.value:
        found, announced = _scan_hdqc(transcript)
        recovered: dict[str, Any] = {k: found.get(k, UNKNOWN) for k in truth}
        if not truth:
            shown = ", ".join(announced) if announced else "none"
            notes.append(f"gates were announced ({shown}); no Toffoli key bits to recover")
    else:
        notes.append("server view carries no gate announcements")
        if guess_seed is None:
            recovered = {k: UNKNOWN for k in truth}
        else:
            rng = np.random.default_rng(guess_seed)
            recovered = {k: int(rng.integers(0, 2)) for k in truth}
            notes.append("bits are coin-flip guesses")

    correct = sum(1 for k, v in truth.items() if recovered.get(k) == v)
    success_rate = correct / len(truth) if truth else 1.0
    logger.debug(f"Attack on {transcript.mode} transcript: {correct}/{len(truth)} bits")
    return AttackReport(
        mode=transcript.mode,
        recovered_bits=recovered,
        ground_truth=truth,
        success_rate=success_rate,
        notes=tuple(notes),
    )
