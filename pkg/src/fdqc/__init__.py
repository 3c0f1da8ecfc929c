"""fdqc - Full-Blind Delegated Quantum Computation Simulator.

Overview
--------
fdqc simulates a client with a weak quantum device delegating a circuit to
a powerful but curious server. The client hides its data with a Pauli
one-time pad and, in full-blind (FDQC) mode, hides its gates as well: every
round the server applies the same five gates to a 9-qubit payload, and only
the client knows which slot of that payload holds the real message.

The half-blind (HDQC) variant announces each gate instead. Its Toffoli
correction rounds then reveal the key bits that triggered them, and the
bundled attack recovers those bits from the transcript alone.

Round Layout
------------
Every payload is split into five fixed slots::

    S_H -> wire 0      S_P -> wire 1      S_CZ -> wires 2, 3
    S_CNOT -> wires 4, 5                  S_T -> wires 6, 7, 8

and the server always applies ``H 0, P 1, CZ 2 3, CNOT 4 5, T 6 7 8``.
Wires outside the message slot carry fresh Haar-random decoy qubits.

Key Updates
-----------
A key ``(a, b)`` stands for ``X^a Z^b``. The update rule of each gate is
derived numerically by matching ``C G P G^dagger`` against all Pauli
strings; a Toffoli additionally needs the corrections

    - ``CZ(c1, c2)`` when ``f = 1``
    - ``CNOT(c2 -> t)`` when ``a = 1``
    - ``CNOT(c1 -> t)`` when ``c = 1``

for keys ``(a,b), (c,d), (e,f)`` on (control1, control2, target). The
corrections are delegated as ordinary CZ/CNOT rounds.

Quick Start
-----------
Delegate ``P H`` on ``|0>``:

    >>> from fdqc import basis_state, parse_program, run_fdqc
    >>> program = parse_program("qubits 1\\nH 0\\nP 0\\n")
    >>> output, transcript = run_fdqc(program, basis_state(1, 0), seed=1)
    >>> transcript.round_count
    2

Check every Toffoli key assignment:

    >>> from fdqc.delegation.verification import toffoli_sweep
    >>> toffoli_sweep().cases
    512

Recover keys from a half-blind session:

    >>> from fdqc import hdqc_attack, run_hdqc
    >>> toffoli = parse_program("qubits 3\\nT 0 1 2\\n")
    >>> result = run_hdqc(toffoli, basis_state(3, 0), seed=5)
    >>> hdqc_attack(result.transcript, result.ground_truth).success_rate
    1.0

Project Structure
-----------------
fdqc/
├── quantum/        # Numeric core
│   ├── qsim.py          # Statevector / density-matrix simulator
│   ├── pauli_otp.py     # One-time pad, key updates, Toffoli decryption
│   └── gateset.py       # Circuit programs, parser, direct evaluation
├── delegation/     # Two-party protocol
│   ├── protocol.py      # Client and server engines, run_fdqc / run_hdqc
│   ├── session.py       # Round phase state machine
│   ├── transcript.py    # Transcript and attack-report documents
│   ├── blindness.py     # Server views and the key-recovery attack
│   ├── verification.py  # Exhaustive sweeps and fuzzing
│   └── error_handler.py # Exception classification and exit codes
├── config.py       # Layered configuration
├── observability.py  # Structured logging and optional metrics
└── cli.py          # fdqc run / verify / attack

Version: 1.0.0
"""

__version__ = "1.0.0"

from .delegation import (
    AttackReport,
    DelegationResult,
    Mode,
    Transcript,
    encrypted_view,
    hdqc_attack,
    run_fdqc,
    run_hdqc,
    run_protocol,
    transcripts_indistinguishable,
)
from .exceptions import (
    FDQCError,
    GateError,
    PauliKeyError,
    ProgramParseError,
    ProtocolError,
    StateError,
    VerificationMismatch,
)
from .quantum import (
    CircuitProgram,
    GateKind,
    GateOp,
    PauliKey,
    Statevector,
    basis_state,
    direct_eval,
    equal_up_to_global_phase,
    key_update,
    parse_program,
)

__all__ = [
    # Protocol
    "run_fdqc",
    "run_hdqc",
    "run_protocol",
    "Mode",
    "DelegationResult",
    "Transcript",
    # Blindness
    "encrypted_view",
    "transcripts_indistinguishable",
    "hdqc_attack",
    "AttackReport",
    # Numeric core
    "Statevector",
    "GateKind",
    "GateOp",
    "PauliKey",
    "CircuitProgram",
    "basis_state",
    "direct_eval",
    "equal_up_to_global_phase",
    "key_update",
    "parse_program",
    # Errors
    "FDQCError",
    "StateError",
    "GateError",
    "PauliKeyError",
    "ProgramParseError",
    "ProtocolError",
    "VerificationMismatch",
]
