"""
Client and server engines of the delegation protocol.

Each round the client builds a 9-wire payload split into five slots::

    S_H -> (0,)   S_P -> (1,)   S_CZ -> (2, 3)   S_CNOT -> (4, 5)   S_T -> (6, 7, 8)

The slot matching the delegated gate carries the encrypted message qubits;
every other wire is a fresh Haar-random ancilla. In FDQC mode the server
applies the same five gates to every payload, so it cannot tell which slot
matters. In HDQC mode the client announces the gate instead and the server
applies only that gate, which is what the key-recovery attack exploits.

Logical qubits the round does not touch stay with the client. When they
are entangled with the message qubits the simulated payload appends them
after wire 8 as a purification; the server never addresses those wires.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Iterator, Mapping, Sequence

import numpy as np

from ..exceptions import ProtocolError, StateError
from ..observability import record_session, trace_operation
from ..quantum import pauli_otp, qsim
from ..quantum.gateset import CircuitProgram
from ..quantum.pauli_otp import Keys, PauliKey
from ..quantum.qsim import GateKind, GateOp, Statevector
from .session import RoundPhaseManager
from .transcript import Transcript, TranscriptRound

logger = logging.getLogger(__name__)

CHANNEL_WIRES = 9

SLOT_WIRES: Mapping[str, tuple[int, ...]] = {
    "S_H": (0,),
    "S_P": (1,),
    "S_CZ": (2, 3),
    "S_CNOT": (4, 5),
    "S_T": (6, 7, 8),
}

SLOT_FOR_KIND: Mapping[GateKind, str] = {
    GateKind.H: "S_H",
    GateKind.P: "S_P",
    GateKind.CZ: "S_CZ",
    GateKind.CNOT: "S_CNOT",
    GateKind.TOFFOLI: "S_T",
}

FDQC_SERVER_OPS: tuple[GateOp, ...] = tuple(
    GateOp(kind, SLOT_WIRES[slot]) for kind, slot in SLOT_FOR_KIND.items()
)


class Mode(str, Enum):
    FDQC = "fdqc"
    HDQC = "hdqc"


class Direction(str, Enum):
    CLIENT_TO_SERVER = "client_to_server"
    SERVER_TO_CLIENT = "server_to_client"


class Role(str, Enum):
    PROGRAM = "program"
    CORRECTION = "correction"


@dataclass(frozen=True)
class DelegatedOp:
    """A gate on logical qubits, tagged with why it is delegated."""

    op: GateOp
    role: Role


@dataclass(frozen=True)
class RoundLayout:
    """Where the message qubits sit in one round's payload."""

    message_slot: str
    message_map: tuple[tuple[int, int], ...]
    held: tuple[int, ...] = ()

    def __post_init__(self):
        if self.message_slot not in SLOT_WIRES:
            raise ProtocolError(f"unknown slot {self.message_slot!r}")
        wires = [w for _, w in self.message_map]
        if not set(wires) <= set(SLOT_WIRES[self.message_slot]):
            raise ProtocolError(f"message wires {wires} outside {self.message_slot}")

    @property
    def slot_of(self) -> Mapping[str, tuple[int, ...]]:
        return SLOT_WIRES

    @property
    def message_wires(self) -> tuple[int, ...]:
        return tuple(w for _, w in self.message_map)

    @property
    def ancilla_wires(self) -> tuple[int, ...]:
        used = set(self.message_wires)
        return tuple(w for w in range(CHANNEL_WIRES) if w not in used)

    @property
    def payload_width(self) -> int:
        return CHANNEL_WIRES + len(self.held)

    def wire_of(self, logical: int) -> int:
        """Payload wire that carries logical qubit ``logical`` this round."""
        for q, w in self.message_map:
            if q == logical:
                return w
        if logical in self.held:
            return CHANNEL_WIRES + self.held.index(logical)
        raise ProtocolError(f"logical qubit {logical} not in this round's layout")


@dataclass(frozen=True)
class RoundMessage:
    """One hop of the simulated quantum channel."""

    direction: Direction
    payload: Statevector
    round_index: int
    held_wires: int = 0
    requested_ops: tuple[GateOp, ...] | None = None
    announced_gate: str | None = None
    announced_role: str | None = None

    @property
    def wires(self) -> int:
        return CHANNEL_WIRES


@dataclass(frozen=True)
class ClientState:
    """Everything the client keeps between rounds."""

    program: CircuitProgram
    keys: Keys
    logical_state: Statevector
    rng_seed: int
    pc: int = 0
    pending_corrections: tuple[GateOp, ...] = ()
    round_index: int = 0
    in_flight: DelegatedOp | None = None
    toffoli_keys: tuple[dict[str, int], ...] = ()
    corrections_delegated: int = 0

    def __post_init__(self):
        if len(self.keys) != self.program.n_qubits:
            raise ProtocolError(
                f"{len(self.keys)} key(s) for a {self.program.n_qubits}-qubit program"
            )
        for op in self.pending_corrections:
            if op.kind not in (GateKind.CZ, GateKind.CNOT):
                raise ProtocolError(f"{op.render()} is not a correction gate")

    @property
    def has_next(self) -> bool:
        return bool(self.pending_corrections) or self.pc < len(self.program.ops)

    def next_op(self) -> DelegatedOp:
        """Pending corrections drain before the next program gate."""
        if self.pending_corrections:
            return DelegatedOp(self.pending_corrections[0], Role.CORRECTION)
        if self.pc < len(self.program.ops):
            return DelegatedOp(self.program.ops[self.pc], Role.PROGRAM)
        raise ProtocolError("program exhausted and no corrections pending")


@dataclass(frozen=True)
class DelegationResult:
    """Outcome of a full session: plaintext output plus client-side records.

    Unpacks as ``output, transcript``.
    """

    output: Statevector
    transcript: Transcript
    terminal_keys: Keys
    toffoli_keys: tuple[dict[str, int], ...] = ()
    corrections: int = 0
    phase_history: tuple[dict[str, Any], ...] = field(default=(), compare=False)

    def __iter__(self) -> Iterator[Any]:
        yield self.output
        yield self.transcript

    @property
    def rounds(self) -> int:
        return self.transcript.round_count

    @property
    def ground_truth(self) -> dict[str, int]:
        """Toffoli key bits as ``{"a0": .., "c0": .., "f0": .., "a1": ..}``."""
        truth: dict[str, int] = {}
        for i, bits in enumerate(self.toffoli_keys):
            for name in ("a", "c", "f"):
                truth[f"{name}{i}"] = bits[name]
        return truth


def _ancilla_states(count: int, rng: np.random.Generator) -> list[Statevector]:
    return [qsim.haar_random_state(1, rng) for _ in range(count)]


def client_prepare_round(
    cs: ClientState, rng: np.random.Generator, mode: Mode | str = Mode.FDQC
) -> tuple[RoundMessage, RoundLayout, ClientState]:
    """Embed the next delegated gate's qubits into a fresh 9-wire payload.

    Raises:
        ProtocolError: The program is exhausted and no corrections are pending.
    """
    mode = Mode(mode)
    delegated = cs.next_op()
    op = delegated.op
    slot = SLOT_FOR_KIND[op.kind]
    n = cs.program.n_qubits

    layout = RoundLayout(
        message_slot=slot,
        message_map=tuple(zip(op.targets, SLOT_WIRES[slot])),
        held=tuple(q for q in range(n) if q not in op.targets),
    )
    ancillas = layout.ancilla_wires
    joint = qsim.tensor(*_ancilla_states(len(ancillas), rng), cs.logical_state)

    # joint wires: ancillas (ascending), then logical 0..n-1
    source = {w: i for i, w in enumerate(ancillas)}
    for q, w in layout.message_map:
        source[w] = len(ancillas) + q
    order = [source[w] for w in range(CHANNEL_WIRES)]
    order += [len(ancillas) + q for q in layout.held]
    payload = qsim.permute(joint, order)

    requested = announced = role = None
    if mode is Mode.HDQC:
        requested = (GateOp(op.kind, layout.message_wires),)
        announced = op.render()
        role = delegated.role.value

    msg = RoundMessage(
        direction=Direction.CLIENT_TO_SERVER,
        payload=payload,
        round_index=cs.round_index,
        held_wires=len(layout.held),
        requested_ops=requested,
        announced_gate=announced,
        announced_role=role,
    )
    queue = cs.pending_corrections
    if delegated.role is Role.CORRECTION:
        queue = queue[1:]
    logger.debug(
        f"Round {cs.round_index} prepared: {op.render()} ({delegated.role.value}) in {slot}"
    )
    return msg, layout, replace(cs, pending_corrections=queue, in_flight=delegated)


def server_execute_round(msg: RoundMessage) -> RoundMessage:
    """Apply the server's operations to the channel wires and send the payload back.

    Raises:
        ProtocolError: Wrong direction, wrong width or a requested gate off the
            channel wires.
    """
    if msg.direction is not Direction.CLIENT_TO_SERVER:
        raise ProtocolError(f"server received a {msg.direction.value} message")
    if msg.payload.n_qubits != CHANNEL_WIRES + msg.held_wires:
        raise ProtocolError(
            f"payload has {msg.payload.n_qubits} wire(s), expected {CHANNEL_WIRES + msg.held_wires}"
        )
    ops = FDQC_SERVER_OPS if msg.requested_ops is None else msg.requested_ops
    for op in ops:
        if max(op.targets) >= CHANNEL_WIRES:
            raise ProtocolError(f"{op.render()} addresses a wire outside the channel")

    payload = qsim.apply_all(msg.payload, ops)
    return replace(msg, direction=Direction.SERVER_TO_CLIENT, payload=payload)


def _rewind_corrections(keys: list[PauliKey], corrections: Sequence[GateOp]) -> None:
    """Undo the key effect of corrections that are yet to be delegated.

    The corrections are self-inverse and commute, so pushing the post-correction
    keys back through them gives the keys that hold right after the Toffoli.
    """
    for corr in reversed(corrections):
        sub = pauli_otp.key_update(corr.kind, [keys[t] for t in corr.targets])
        for t, key in zip(corr.targets, sub.new_keys):
            keys[t] = key


def client_absorb_round(
    cs: ClientState, reply: RoundMessage, layout: RoundLayout
) -> ClientState:
    """Extract the message qubits, update keys and queue Toffoli corrections.

    Raises:
        ProtocolError: The reply does not belong to the round prepared from ``cs``.
    """
    if cs.in_flight is None:
        raise ProtocolError("no round in flight")
    if reply.direction is not Direction.SERVER_TO_CLIENT:
        raise ProtocolError(f"client received a {reply.direction.value} message")
    if reply.round_index != cs.round_index:
        raise ProtocolError(f"reply for round {reply.round_index}, expected {cs.round_index}")
    if reply.payload.n_qubits != layout.payload_width:
        raise ProtocolError(
            f"reply has {reply.payload.n_qubits} wire(s), layout expects {layout.payload_width}"
        )

    op = cs.in_flight.op
    if layout.message_slot != SLOT_FOR_KIND[op.kind]:
        raise ProtocolError(f"layout slot {layout.message_slot} does not carry {op.render()}")

    ancillas = layout.ancilla_wires
    try:
        _, remainder = qsim.factor_out(reply.payload, ancillas)
    except StateError as exc:
        raise ProtocolError(f"round {cs.round_index}: ancillas entangled with message") from exc

    # remainder wires follow ascending payload order: message wires, then held
    logical_at = [q for q, _ in sorted(layout.message_map, key=lambda m: m[1])]
    logical_at += list(layout.held)
    logical_state = qsim.permute(remainder, [logical_at.index(q) for q in range(len(logical_at))])

    keys = list(cs.keys)
    before = [keys[t] for t in op.targets]
    update = pauli_otp.key_update(op.kind, before, op.targets)
    for t, key in zip(op.targets, update.new_keys):
        keys[t] = key
    _rewind_corrections(keys, update.corrections)

    toffoli_keys = cs.toffoli_keys
    pc = cs.pc
    if cs.in_flight.role is Role.PROGRAM:
        pc += 1
        if op.kind is GateKind.TOFFOLI:
            toffoli_keys += ({"a": before[0].a, "c": before[1].a, "f": before[2].b},)

    logger.debug(
        f"Round {cs.round_index} absorbed: {op.render()}, "
        f"{len(update.corrections)} correction(s) queued"
    )
    return replace(
        cs,
        keys=tuple(keys),
        logical_state=logical_state,
        pc=pc,
        pending_corrections=cs.pending_corrections + update.corrections,
        round_index=cs.round_index + 1,
        in_flight=None,
        toffoli_keys=toffoli_keys,
        corrections_delegated=cs.corrections_delegated
        + int(cs.in_flight.role is Role.CORRECTION),
    )


def client_refresh_keys(cs: ClientState, rng: np.random.Generator) -> ClientState:
    """Re-encrypt the held register under fresh random keys."""
    plain = pauli_otp.decrypt(cs.logical_state, cs.keys)
    fresh = pauli_otp.random_keys(cs.program.n_qubits, rng)
    return replace(cs, keys=fresh, logical_state=pauli_otp.encrypt(plain, fresh))


class ServerEngine:
    """Honest-but-curious server: executes rounds and writes down what it saw."""

    def __init__(self, snapshots: bool = False):
        self.snapshots = snapshots
        self.rounds: list[TranscriptRound] = []

    def handle(self, msg: RoundMessage) -> RoundMessage:
        reply = server_execute_round(msg)
        ops = FDQC_SERVER_OPS if msg.requested_ops is None else msg.requested_ops
        self.rounds.append(
            TranscriptRound(
                round_index=msg.round_index,
                server_ops=tuple(op.render() for op in ops),
                announced_gate=msg.announced_gate,
                announced_role=msg.announced_role,
                payload_before=msg.payload if self.snapshots else None,
                payload_after=reply.payload if self.snapshots else None,
            )
        )
        logger.debug(f"Round {msg.round_index} executed by server")
        return reply


def _run(
    mode: Mode,
    program: CircuitProgram,
    input_state: Statevector,
    seed: int,
    initial_keys: Sequence[PauliKey | Sequence[int]] | None,
    snapshots: bool,
    refresh_keys: bool,
) -> DelegationResult:
    if input_state.n_qubits != program.n_qubits:
        raise StateError(
            f"input has {input_state.n_qubits} qubit(s), program needs {program.n_qubits}"
        )
    key_rng, ancilla_rng = (
        np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(2)
    )
    if initial_keys is None:
        keys = pauli_otp.random_keys(program.n_qubits, key_rng)
    else:
        keys = pauli_otp.coerce_keys(initial_keys)

    cs = ClientState(
        program=program,
        keys=keys,
        logical_state=pauli_otp.encrypt(input_state, keys),
        rng_seed=seed,
    )
    server = ServerEngine(snapshots=snapshots)
    session = RoundPhaseManager()

    while cs.has_next:
        if refresh_keys:
            cs = client_refresh_keys(cs, key_rng)
        msg, layout, cs = client_prepare_round(cs, ancilla_rng, mode)
        session.transition_to_phase("prepared")
        session.update_round_data({"slot": layout.message_slot, "role": cs.in_flight.role.value})
        reply = server.handle(msg)
        session.transition_to_phase("executed")
        cs = client_absorb_round(cs, reply, layout)
        session.transition_to_phase("absorbed")

    output = pauli_otp.decrypt(cs.logical_state, cs.keys)
    session.transition_to_phase("finalized")

    transcript = Transcript(
        mode=mode.value,
        seed=seed,
        rounds=tuple(server.rounds),
        terminal_keys_digest=pauli_otp.key_digest(cs.keys),
    )
    record_session(mode.value, transcript.round_count, cs.corrections_delegated)
    logger.info(
        f"{mode.value} session finished: {transcript.round_count} round(s), "
        f"{cs.corrections_delegated} correction(s)"
    )
    return DelegationResult(
        output=output,
        transcript=transcript,
        terminal_keys=cs.keys,
        toffoli_keys=cs.toffoli_keys,
        corrections=cs.corrections_delegated,
        phase_history=tuple(session.get_phase_history()),
    )


def run_fdqc(
    program: CircuitProgram,
    input_state: Statevector,
    seed: int,
    *,
    initial_keys: Sequence[PauliKey | Sequence[int]] | None = None,
    snapshots: bool = False,
    refresh_keys: bool = False,
) -> DelegationResult:
    """Delegate ``program`` blindly; the server sees only the fixed operation tuple."""
    with trace_operation("run_fdqc", gates=len(program)):
        return _run(Mode.FDQC, program, input_state, seed, initial_keys, snapshots, refresh_keys)


def run_hdqc(
    program: CircuitProgram,
    input_state: Statevector,
    seed: int,
    *,
    initial_keys: Sequence[PauliKey | Sequence[int]] | None = None,
    snapshots: bool = False,
    refresh_keys: bool = False,
) -> DelegationResult:
    """Delegate ``program`` announcing every gate, corrections included."""
    with trace_operation("run_hdqc", gates=len(program)):
        return _run(Mode.HDQC, program, input_state, seed, initial_keys, snapshots, refresh_keys)


def run_protocol(
    mode: Mode | str,
    program: CircuitProgram,
    input_state: Statevector,
    seed: int,
    **kwargs: Any,
) -> DelegationResult:
    """Dispatch to :func:`run_fdqc` or :func:`run_hdqc`."""
    runner = run_fdqc if Mode(mode) is Mode.FDQC else run_hdqc
    return runner(program, input_state, seed, **kwargs)
