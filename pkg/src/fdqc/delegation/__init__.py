"""
Delegation - Client/Server Protocol

The delegation package runs a circuit program on a simulated remote server
without showing it the data (Pauli one-time pad) or, in FDQC mode, the
gates (every round the server applies the same five gates to a 9-wire
payload whose decoy wires are random ancillas).

Core Components:
    - protocol: client_prepare_round, server_execute_round,
      client_absorb_round, run_fdqc, run_hdqc
    - session: RoundPhaseManager (idle → prepared → executed → absorbed)
    - transcript: Transcript, TranscriptRound, AttackReport documents
    - blindness: encrypted_view, round_wire_view,
      transcripts_indistinguishable, hdqc_attack
    - verification: exhaustive key sweeps and seeded fuzzing
    - error_handler: exception classification and exit codes

Example Usage:
    >>> from fdqc.delegation import run_fdqc, run_hdqc, hdqc_attack
    >>> from fdqc.quantum import basis_state, parse_program
    >>> program = parse_program("qubits 3\\nT 0 1 2\\n")
    >>> output, transcript = run_fdqc(program, basis_state(3, 6), seed=5)
    >>> transcript.server_view()[0]["server_ops"]
    ['H 0', 'P 1', 'CZ 2 3', 'CNOT 4 5', 'T 6 7 8']
    >>> leaky = run_hdqc(program, basis_state(3, 6), seed=5)
    >>> hdqc_attack(leaky.transcript, leaky.ground_truth).success_rate
    1.0
"""

from .blindness import (
    ServerView,
    encrypted_view,
    hdqc_attack,
    round_wire_view,
    server_view,
    transcripts_indistinguishable,
)
from .error_handler import ErrorHandler, handle_error
from .protocol import (
    FDQC_SERVER_OPS,
    SLOT_WIRES,
    ClientState,
    DelegationResult,
    Mode,
    RoundLayout,
    RoundMessage,
    client_absorb_round,
    client_prepare_round,
    run_fdqc,
    run_hdqc,
    run_protocol,
    server_execute_round,
)
from .session import RoundPhaseManager
from .transcript import AttackReport, Transcript, TranscriptRound
from .verification import SweepReport, VerificationRunner

__all__ = [
    "AttackReport",
    "ClientState",
    "DelegationResult",
    "ErrorHandler",
    "FDQC_SERVER_OPS",
    "Mode",
    "RoundLayout",
    "RoundMessage",
    "RoundPhaseManager",
    "SLOT_WIRES",
    "ServerView",
    "SweepReport",
    "Transcript",
    "TranscriptRound",
    "VerificationRunner",
    "client_absorb_round",
    "client_prepare_round",
    "encrypted_view",
    "handle_error",
    "hdqc_attack",
    "round_wire_view",
    "run_fdqc",
    "run_hdqc",
    "run_protocol",
    "server_execute_round",
    "server_view",
    "transcripts_indistinguishable",
]
