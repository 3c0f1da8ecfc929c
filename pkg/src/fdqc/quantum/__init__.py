"""
Quantum - Numeric Core

The quantum package holds everything that touches amplitudes: a dense
statevector and density-matrix simulator, the Pauli one-time pad with its
key-update tables, and the circuit-program format the client delegates.

What It Does:
    Gates are applied by tensor contraction on a register whose wire 0 is
    the most significant bit. Encryption keys ``(a, b)`` stand for
    ``X^a Z^b``; the update rule of every delegatable gate is derived by
    matching ``C G P G^dagger`` against all Pauli strings, so the table and
    the Toffoli corrections are checked rather than transcribed.

Core Components:
    - qsim: Statevector, DensityMatrix, GateOp, apply, mix, partial_trace
    - pauli_otp: PauliKey, encrypt/decrypt, key_update, Toffoli decryption
      circuits (correction form and swap form)
    - gateset: CircuitProgram, parse_program, direct_eval, random_program

Example Usage:
    >>> from fdqc.quantum import basis_state, key_update, parse_program, direct_eval
    >>> program = parse_program("qubits 1\\nH 0\\nP 0\\n")
    >>> direct_eval(program, basis_state(1, 0)).amplitudes
    array([0.70710678+0.j        , 0.        +0.70710678j])
    >>> key_update("H", [(1, 0)]).new_keys
    (PauliKey(a=0, b=1),)
"""

from .gateset import (
    DELEGATABLE_KINDS,
    MINIMAL_KINDS,
    CircuitProgram,
    direct_eval,
    inverse_program,
    load_program,
    parse_program,
    random_program,
    render_program,
)
from .pauli_otp import (
    KeyUpdate,
    PauliKey,
    decrypt,
    encrypt,
    key_update,
    toffoli_decrypt_optimized,
    toffoli_decrypt_unoptimized,
)
from .qsim import (
    DensityMatrix,
    GateKind,
    GateOp,
    Statevector,
    apply,
    basis_state,
    equal_up_to_global_phase,
    mix,
    partial_trace,
)

__all__ = [
    "CircuitProgram",
    "DELEGATABLE_KINDS",
    "DensityMatrix",
    "GateKind",
    "GateOp",
    "KeyUpdate",
    "MINIMAL_KINDS",
    "PauliKey",
    "Statevector",
    "apply",
    "basis_state",
    "decrypt",
    "direct_eval",
    "encrypt",
    "equal_up_to_global_phase",
    "inverse_program",
    "key_update",
    "load_program",
    "mix",
    "parse_program",
    "partial_trace",
    "random_program",
    "render_program",
    "toffoli_decrypt_optimized",
    "toffoli_decrypt_unoptimized",
]
