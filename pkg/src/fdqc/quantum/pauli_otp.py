"""
Pauli one-time pad and key-update rules.

A key ``(a, b)`` on a wire encrypts with ``X^a Z^b`` (Z applied first) and
decrypts with ``X^a`` then ``Z^b``. Applying gate ``G`` to an encrypted
register leaves, after the correction gates ``C`` returned by
:func:`key_update`, a state encrypted under fresh keys::

    decrypt(C . G . encrypt(psi, keys), new_keys) == G . psi   (global phase)

The update table is derived numerically: ``C G P G^dagger`` is matched
against all Pauli strings of the gate's arity.
"""

from __future__ import annotations

import hashlib
import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from ..exceptions import GateError, PauliKeyError, VerificationMismatch
from . import qsim
from .qsim import GateKind, GateOp, Statevector

logger = logging.getLogger(__name__)

_IDENTITY = np.eye(2, dtype=complex)


@dataclass(frozen=True, order=True)
class PauliKey:
    """Encryption key of one wire: X exponent ``a`` and Z exponent ``b``."""

    a: int
    b: int

    def __post_init__(self):
        for name in ("a", "b"):
            bit = getattr(self, name)
            if isinstance(bit, bool) or bit not in (0, 1):
                raise PauliKeyError(f"key bit {name}={bit!r} is not 0 or 1")

    @classmethod
    def random(cls, rng: np.random.Generator) -> "PauliKey":
        a, b = rng.integers(0, 2, size=2)
        return cls(int(a), int(b))

    @classmethod
    def coerce(cls, value: "PauliKey | Sequence[int]") -> "PauliKey":
        if isinstance(value, PauliKey):
            return value
        try:
            a, b = value
        except (TypeError, ValueError) as exc:
            raise PauliKeyError(f"cannot read a key from {value!r}") from exc
        return cls(a, b)

    def as_tuple(self) -> tuple[int, int]:
        return (self.a, self.b)

    def __str__(self) -> str:
        return f"({self.a},{self.b})"


Keys = tuple[PauliKey, ...]


@dataclass(frozen=True)
class KeyUpdate:
    """Outcome of delegating one gate under encryption."""

    new_keys: Keys
    corrections: tuple[GateOp, ...] = ()


def coerce_keys(keys: Iterable["PauliKey | Sequence[int]"]) -> Keys:
    return tuple(PauliKey.coerce(k) for k in keys)


def random_keys(n_qubits: int, rng: np.random.Generator) -> Keys:
    return tuple(PauliKey.random(rng) for _ in range(n_qubits))


def all_keys(n_qubits: int) -> Iterable[Keys]:
    """Every key assignment of ``n_qubits`` wires, lexicographic in (a, b) bits."""
    single = [PauliKey(a, b) for a in (0, 1) for b in (0, 1)]
    return itertools.product(single, repeat=n_qubits)


def key_digest(keys: Sequence[PauliKey]) -> str:
    """Short SHA-256 fingerprint of a key assignment."""
    text = ";".join(f"{k.a}{k.b}" for k in keys)
    return hashlib.sha256(text.encode("ascii")).hexdigest()[:16]


def _check_wires_for(keys: Sequence[PauliKey], wires: Sequence[int], n_qubits: int) -> None:
    if len(keys) != len(wires):
        raise PauliKeyError(f"{len(keys)} key(s) for {len(wires)} wire(s)")
    if len(set(wires)) != len(wires) or any(not 0 <= w < n_qubits for w in wires):
        raise GateError(f"wires {tuple(wires)} invalid for {n_qubits}-qubit register")


def encrypt(
    state: Statevector, keys: Sequence[PauliKey], wires: Sequence[int] | None = None
) -> Statevector:
    """Apply ``X^a Z^b`` to each listed wire (all wires by default)."""
    wires = tuple(range(state.n_qubits)) if wires is None else tuple(wires)
    keys = coerce_keys(keys)
    _check_wires_for(keys, wires, state.n_qubits)
    for key, wire in zip(keys, wires):
        if key.b:
            state = qsim.apply(state, GateOp(GateKind.Z, (wire,)))
        if key.a:
            state = qsim.apply(state, GateOp(GateKind.X, (wire,)))
    return state


def decrypt(
    state: Statevector, keys: Sequence[PauliKey], wires: Sequence[int] | None = None
) -> Statevector:
    """Undo :func:`encrypt`: ``X^a`` then ``Z^b`` on each listed wire."""
    wires = tuple(range(state.n_qubits)) if wires is None else tuple(wires)
    keys = coerce_keys(keys)
    _check_wires_for(keys, wires, state.n_qubits)
    for key, wire in zip(keys, wires):
        if key.a:
            state = qsim.apply(state, GateOp(GateKind.X, (wire,)))
        if key.b:
            state = qsim.apply(state, GateOp(GateKind.Z, (wire,)))
    return state


def pauli_operator(keys: Sequence[PauliKey]) -> np.ndarray:
    """Dense ``X^a1 Z^b1 (x) X^a2 Z^b2 (x) ...`` with the first key on wire 0."""
    matrix = np.ones((1, 1), dtype=complex)
    for key in coerce_keys(keys):
        x = qsim.gate_matrix(GateKind.X) if key.a else _IDENTITY
        z = qsim.gate_matrix(GateKind.Z) if key.b else _IDENTITY
        matrix = np.kron(matrix, x @ z)
    return matrix


def identify_pauli(unitary: np.ndarray, tol: float = 1e-9) -> Keys | None:
    """Keys whose Pauli string equals ``unitary`` up to phase, or None."""
    dim = unitary.shape[0]
    n_qubits = dim.bit_length() - 1
    for keys in all_keys(n_qubits):
        overlap = abs(np.trace(pauli_operator(keys).conj().T @ unitary)) / dim
        if overlap >= 1.0 - tol:
            return keys
    return None


def correction_ops(kind: GateKind | str, keys: Sequence[PauliKey]) -> tuple[GateOp, ...]:
    """Correction gates on local wires ``(0, .., arity-1)``.

    Only Toffoli needs corrections. With keys ``(a,b), (c,d), (e,f)`` on
    (control1, control2, target) they are, in this fixed order,
    ``CZ(c1, c2)`` iff ``f``, ``CNOT(c2 -> t)`` iff ``a`` and
    ``CNOT(c1 -> t)`` iff ``c``. The three commute and are self-inverse.
    """
    kind = GateKind(kind)
    if kind is not GateKind.TOFFOLI:
        return ()
    (a, _), (c, _), (_, f) = (k.as_tuple() for k in keys)
    ops = []
    if f:
        ops.append(GateOp(GateKind.CZ, (0, 1)))
    if a:
        ops.append(GateOp(GateKind.CNOT, (1, 2)))
    if c:
        ops.append(GateOp(GateKind.CNOT, (0, 2)))
    return tuple(ops)


def residual_keys(
    kind: GateKind | str, keys: Sequence[PauliKey], corrections: Sequence[GateOp]
) -> Keys:
    """Keys left after ``corrections`` follow ``kind`` on an encrypted input.

    Raises VerificationMismatch when the residual operator is not a Pauli
    string, i.e. the corrections are wrong for these keys.
    """
    kind = GateKind(kind)
    keys = coerce_keys(keys)
    gate = qsim.gate_matrix(kind)
    after = qsim.unitary_of(corrections, kind.arity) @ gate
    residual = after @ pauli_operator(keys) @ gate.conj().T
    found = identify_pauli(residual)
    if found is None:
        raise VerificationMismatch(
            f"{kind.value} with keys {[str(k) for k in keys]} leaves a non-Pauli residual"
        )
    return found


@lru_cache(maxsize=None)
def key_update_table(kind: GateKind) -> Mapping[Keys, KeyUpdate]:
    """Full update table of ``kind``: one entry per key assignment."""
    kind = GateKind(kind)
    table = {}
    for keys in all_keys(kind.arity):
        corrections = correction_ops(kind, keys)
        table[keys] = KeyUpdate(residual_keys(kind, keys, corrections), corrections)
    logger.debug(f"Built key-update table for {kind.value}: {len(table)} entries")
    return table


def key_update(
    kind: GateKind | str,
    keys: Sequence["PauliKey | Sequence[int]"],
    wires: Sequence[int] | None = None,
) -> KeyUpdate:
    """New keys and corrections for applying ``kind`` under ``keys``.

    Corrections are on local wires unless ``wires`` maps them onto the
    gate's actual operands.
    """
    kind = GateKind(kind)
    keys = coerce_keys(keys)
    if len(keys) != kind.arity:
        raise PauliKeyError(f"{kind.value} needs {kind.arity} key(s), got {len(keys)}")
    update = key_update_table(kind)[keys]
    if wires is None or not update.corrections:
        return update
    if len(wires) != kind.arity:
        raise GateError(f"{kind.value} needs {kind.arity} wire(s), got {len(wires)}")
    return KeyUpdate(update.new_keys, tuple(op.remap(wires) for op in update.corrections))


def closed_form_update(kind: GateKind | str, keys: Sequence[PauliKey]) -> Keys:
    """Textbook conjugation rules for the Pauli and Clifford gates."""
    kind = GateKind(kind)
    keys = coerce_keys(keys)
    if len(keys) != kind.arity:
        raise PauliKeyError(f"{kind.value} needs {kind.arity} key(s), got {len(keys)}")
    if kind in (GateKind.X, GateKind.Z):
        return keys
    if kind is GateKind.H:
        (a, b), = (k.as_tuple() for k in keys)
        return (PauliKey(b, a),)
    if kind is GateKind.P:
        (a, b), = (k.as_tuple() for k in keys)
        return (PauliKey(a, a ^ b),)
    (a, b), (c, d) = (k.as_tuple() for k in keys)
    if kind is GateKind.CNOT:
        return (PauliKey(a, b ^ d), PauliKey(a ^ c, d))
    if kind is GateKind.CZ:
        return (PauliKey(a, b ^ c), PauliKey(c, d ^ a))
    raise GateError(f"{kind.value} has no Clifford closed form")


def printed_cz_update(keys: Sequence[PauliKey]) -> Keys:
    """CZ rule in the commonly circulated form ``X^{a+c} Z^{b+d}`` on the target.

    Kept only so tests can show where it disagrees with the derived table.
    """
    (a, b), (c, d) = (k.as_tuple() for k in coerce_keys(keys))
    return (PauliKey(a, b ^ c), PauliKey(a ^ c, b ^ d))


def unoptimized_toffoli_ops(keys: Sequence[PauliKey]) -> tuple[GateOp, ...]:
    """Toffoli corrections in the swap form, on local wires ``(0, 1, 2)``.

    ``CNOT(c1 -> t)`` is realised as ``SWAP(c1, c2) CNOT(c2 -> t) SWAP(c1, c2)``
    with each SWAP built from three CNOTs.
    """
    (a, _), (c, _), (_, f) = (k.as_tuple() for k in coerce_keys(keys))
    swap = (
        GateOp(GateKind.CNOT, (0, 1)),
        GateOp(GateKind.CNOT, (1, 0)),
        GateOp(GateKind.CNOT, (0, 1)),
    )
    ops: list[GateOp] = []
    if f:
        ops.append(GateOp(GateKind.CZ, (0, 1)))
    if a:
        ops.append(GateOp(GateKind.CNOT, (1, 2)))
    if c:
        ops.extend(swap)
        ops.append(GateOp(GateKind.CNOT, (1, 2)))
        ops.extend(swap)
    return tuple(ops)


def toffoli_decrypt_optimized(
    state: Statevector, keys: Sequence[PauliKey], wires: Sequence[int] = (0, 1, 2)
) -> Statevector:
    """Correct and decrypt a Toffoli output held on ``wires``."""
    update = key_update(GateKind.TOFFOLI, keys, wires)
    state = qsim.apply_all(state, update.corrections)
    return decrypt(state, update.new_keys, wires)


def toffoli_decrypt_unoptimized(
    state: Statevector, keys: Sequence[PauliKey], wires: Sequence[int] = (0, 1, 2)
) -> Statevector:
    """Swap-form counterpart of :func:`toffoli_decrypt_optimized`."""
    local = unoptimized_toffoli_ops(keys)
    new_keys = residual_keys(GateKind.TOFFOLI, keys, local)
    state = qsim.apply_all(state, (op.remap(wires) for op in local))
    return decrypt(state, new_keys, wires)


def master_identity_holds(
    kind: GateKind | str,
    keys: Sequence[PauliKey],
    state: Statevector,
    tol: float = qsim.DEFAULT_TOLERANCE,
) -> bool:
    """Check ``decrypt(C G encrypt(psi)) == G psi`` on a ``kind.arity``-qubit state."""
    kind = GateKind(kind)
    wires = tuple(range(kind.arity))
    op = GateOp(kind, wires)
    update = key_update(kind, keys)
    blind = qsim.apply(encrypt(state, keys), op)
    blind = qsim.apply_all(blind, update.corrections)
    recovered = decrypt(blind, update.new_keys)
    return qsim.equal_up_to_global_phase(recovered, qsim.apply(state, op), tol)
