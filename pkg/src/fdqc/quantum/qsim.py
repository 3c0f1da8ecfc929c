"""
Dense statevector simulator for small registers.

Wire ``0`` is the most significant bit of a basis index, so basis index
``i`` of an ``n``-qubit register is ``|b_0 b_1 ... b_{n-1}>`` with
``i = sum(b_k * 2**(n-1-k))``. Amplitude arrays are reshaped to ``[2] * n``
and axis ``k`` is wire ``k``; every gate is applied by ``np.tensordot`` on
the target axes.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

from ..exceptions import GateError, StateError

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-10
SQRT1_2 = 1.0 / np.sqrt(2.0)


class GateKind(str, Enum):
    """Gate vocabulary of the simulator."""

    X = "X"
    Z = "Z"
    H = "H"
    P = "P"
    CZ = "CZ"
    CNOT = "CNOT"
    TOFFOLI = "TOFFOLI"

    @property
    def arity(self) -> int:
        return GATE_ARITY[self]

    @property
    def mnemonic(self) -> str:
        """Program-text spelling (``T`` for Toffoli)."""
        return "T" if self is GateKind.TOFFOLI else self.value


GATE_ARITY: Mapping[GateKind, int] = {
    GateKind.X: 1,
    GateKind.Z: 1,
    GateKind.H: 1,
    GateKind.P: 1,
    GateKind.CZ: 2,
    GateKind.CNOT: 2,
    GateKind.TOFFOLI: 3,
}


def _controlled_matrix(n_controls: int, base: np.ndarray) -> np.ndarray:
    dim = 2 ** (n_controls + 1)
    matrix = np.eye(dim, dtype=complex)
    matrix[dim - 2 :, dim - 2 :] = base
    return matrix


_PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
_PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

GATE_MATRICES: Mapping[GateKind, np.ndarray] = {
    GateKind.X: _PAULI_X,
    GateKind.Z: _PAULI_Z,
    GateKind.H: SQRT1_2 * np.array([[1, 1], [1, -1]], dtype=complex),
    GateKind.P: np.array([[1, 0], [0, 1j]], dtype=complex),
    GateKind.CZ: _controlled_matrix(1, _PAULI_Z),
    GateKind.CNOT: _controlled_matrix(1, _PAULI_X),
    GateKind.TOFFOLI: _controlled_matrix(2, _PAULI_X),
}

for _matrix in GATE_MATRICES.values():
    _matrix.setflags(write=False)


def gate_matrix(kind: GateKind | str) -> np.ndarray:
    """Unitary of ``kind`` on its own wires, first target most significant."""
    return GATE_MATRICES[GateKind(kind)]


@dataclass(frozen=True)
class GateOp:
    """One gate on specific wires.

    For CNOT the targets are ``(control, target)``; for Toffoli they are
    ``(control1, control2, target)``.
    """

    kind: GateKind
    targets: tuple[int, ...]

    def __post_init__(self):
        try:
            kind = GateKind(self.kind)
        except ValueError as exc:
            raise GateError(f"unknown gate kind {self.kind!r}") from exc
        targets = tuple(int(t) for t in self.targets)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "targets", targets)

        if len(targets) != kind.arity:
            raise GateError(
                f"{kind.value} takes {kind.arity} operand(s), got {len(targets)}"
            )
        if len(set(targets)) != len(targets):
            raise GateError(f"{kind.value} has repeated operands {targets}")
        if any(t < 0 for t in targets):
            raise GateError(f"{kind.value} has negative operand in {targets}")

    def remap(self, wires: Sequence[int]) -> "GateOp":
        """Return the same gate with operand ``k`` replaced by ``wires[k]``."""
        return GateOp(self.kind, tuple(wires[t] for t in self.targets))

    def render(self) -> str:
        return " ".join([self.kind.mnemonic, *(str(t) for t in self.targets)])

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True, eq=False)
class Statevector:
    """Normalized amplitudes of an ``n``-qubit register (read-only)."""

    amplitudes: np.ndarray
    n_qubits: int = field(init=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        size = amps.shape[0]
        if size < 2 or size & (size - 1):
            raise StateError(f"statevector length {size} is not a power of two")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > DEFAULT_TOLERANCE:
            raise StateError(f"statevector is not normalized (norm={norm:.12g})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "n_qubits", size.bit_length() - 1)

    @classmethod
    def from_amplitudes(cls, values: Iterable[complex], normalize: bool = False) -> "Statevector":
        amps = np.asarray(list(values), dtype=complex)
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise StateError("cannot normalize the zero vector")
            amps = amps / norm
        return cls(amps)

    @property
    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape([2] * self.n_qubits)

    def __len__(self) -> int:
        return self.amplitudes.shape[0]

    def to_list(self, decimals: int = 12) -> list[list[float]]:
        """JSON-friendly ``[[re, im], ...]`` with ``-0.0`` folded to ``0.0``."""
        return [
            [round(float(z.real), decimals) + 0.0, round(float(z.imag), decimals) + 0.0]
            for z in self.amplitudes
        ]


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite operator (read-only)."""

    entries: np.ndarray
    n_qubits: int = field(init=False)

    def __post_init__(self):
        rho = np.array(self.entries, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise StateError(f"density matrix must be square, got shape {rho.shape}")
        size = rho.shape[0]
        if size < 2 or size & (size - 1):
            raise StateError(f"density matrix dimension {size} is not a power of two")
        if not np.allclose(rho, rho.conj().T, atol=1e-8):
            raise StateError("density matrix is not Hermitian")
        trace = complex(np.trace(rho))
        if abs(trace - 1.0) > 1e-8:
            raise StateError(f"density matrix trace is {trace:.12g}, expected 1")
        if float(np.linalg.eigvalsh(rho).min()) < -1e-8:
            raise StateError("density matrix has a negative eigenvalue")
        rho.setflags(write=False)
        object.__setattr__(self, "entries", rho)
        object.__setattr__(self, "n_qubits", size.bit_length() - 1)

    def allclose(self, other: "DensityMatrix", tol: float = DEFAULT_TOLERANCE) -> bool:
        if self.entries.shape != other.entries.shape:
            return False
        return bool(np.max(np.abs(self.entries - other.entries)) <= tol)

    def purity(self) -> float:
        return float(np.real(np.trace(self.entries @ self.entries)))


def basis_state(n_qubits: int, index: int) -> Statevector:
    """Computational basis state ``|index>`` (wire 0 most significant)."""
    if n_qubits < 1:
        raise StateError(f"register needs at least one qubit, got {n_qubits}")
    if not 0 <= index < 2**n_qubits:
        raise StateError(f"basis index {index} outside 0..{2**n_qubits - 1}")
    amps = np.zeros(2**n_qubits, dtype=complex)
    amps[index] = 1.0
    return Statevector(amps)


def maximally_mixed(n_qubits: int) -> DensityMatrix:
    dim = 2**n_qubits
    return DensityMatrix(np.eye(dim, dtype=complex) / dim)


def haar_random_state(n_qubits: int, rng: np.random.Generator) -> Statevector:
    """Haar-distributed pure state drawn from ``rng``."""
    dim = 2**n_qubits
    amps = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return Statevector(amps / np.linalg.norm(amps))


def _check_wires(n_qubits: int, wires: Sequence[int]) -> None:
    if len(set(wires)) != len(wires):
        raise GateError(f"repeated wires {tuple(wires)}")
    for wire in wires:
        if not 0 <= wire < n_qubits:
            raise GateError(f"wire {wire} outside register of {n_qubits} qubit(s)")


def apply_matrix(state: Statevector, matrix: np.ndarray, wires: Sequence[int]) -> Statevector:
    """Apply a ``2**k x 2**k`` unitary to ``wires`` (first wire most significant)."""
    wires = tuple(wires)
    _check_wires(state.n_qubits, wires)
    k = len(wires)
    if matrix.shape != (2**k, 2**k):
        raise GateError(f"matrix shape {matrix.shape} does not act on {k} wire(s)")

    gate = matrix.reshape([2] * (2 * k))
    out = np.tensordot(gate, state.tensor, axes=(list(range(k, 2 * k)), list(wires)))
    out = np.moveaxis(out, list(range(k)), list(wires))
    return Statevector(out.reshape(-1))


def apply(state: Statevector, op: GateOp) -> Statevector:
    """Apply one gate; fails with GateError if an operand is outside the register."""
    return apply_matrix(state, gate_matrix(op.kind), op.targets)


def apply_all(state: Statevector, ops: Iterable[GateOp]) -> Statevector:
    for op in ops:
        state = apply(state, op)
    return state


def unitary_of(ops: Iterable[GateOp], n_qubits: int) -> np.ndarray:
    """Dense unitary of a gate sequence, built column by column."""
    dim = 2**n_qubits
    ops = list(ops)
    columns = [apply_all(basis_state(n_qubits, i), ops).amplitudes for i in range(dim)]
    return np.column_stack(columns)


def tensor(*states: Statevector) -> Statevector:
    """Kronecker product; the first argument occupies the leading wires."""
    if not states:
        raise StateError("tensor of zero states")
    amps = states[0].amplitudes
    for s in states[1:]:
        amps = np.kron(amps, s.amplitudes)
    return Statevector(amps)


def permute(state: Statevector, order: Sequence[int]) -> Statevector:
    """Reorder wires: output wire ``p`` is input wire ``order[p]``."""
    order = tuple(order)
    if sorted(order) != list(range(state.n_qubits)):
        raise StateError(f"{order} is not a permutation of {state.n_qubits} wires")
    return Statevector(np.transpose(state.tensor, order).reshape(-1))


def factor_out(
    state: Statevector, wires: Sequence[int], tol: float = 1e-8
) -> tuple[Statevector, Statevector]:
    """Split ``state`` into a product ``(on wires) x (remaining wires)``.

    Returns the factor on ``wires`` (in the given order) and the remainder
    on the other wires (ascending). Raises StateError when the two groups
    are entangled beyond ``tol``.
    """
    wires = tuple(wires)
    _check_wires(state.n_qubits, wires)
    rest = tuple(w for w in range(state.n_qubits) if w not in wires)
    if not wires or not rest:
        raise StateError("factor_out needs a non-empty split of the register")

    grouped = np.transpose(state.tensor, wires + rest).reshape(2 ** len(wires), 2 ** len(rest))
    u, s, vh = np.linalg.svd(grouped)
    if s.shape[0] > 1 and float(np.sum(s[1:] ** 2)) > tol:
        raise StateError(
            f"wires {wires} are entangled with the rest (residual weight {np.sum(s[1:] ** 2):.3g})"
        )
    return Statevector(u[:, 0]), Statevector(vh[0, :])


def equal_up_to_global_phase(
    s1: Statevector, s2: Statevector, tol: float = DEFAULT_TOLERANCE
) -> bool:
    """True iff ``|<s1|s2>| >= 1 - tol``; widths must match."""
    return fidelity(s1, s2) >= 1.0 - tol


def fidelity(s1: Statevector, s2: Statevector) -> float:
    if s1.n_qubits != s2.n_qubits:
        raise StateError(f"width mismatch: {s1.n_qubits} vs {s2.n_qubits}")
    return float(abs(np.vdot(s1.amplitudes, s2.amplitudes)))


def canonical_phase(state: Statevector) -> Statevector:
    """Rotate the global phase so the first significant amplitude is real positive."""
    amps = state.amplitudes
    pivot = int(np.argmax(np.abs(amps) > 1e-9))
    phase = amps[pivot] / abs(amps[pivot])
    return Statevector(amps / phase)


def mix(states: Sequence[Statevector], weights: Sequence[float]) -> DensityMatrix:
    """Ensemble ``sum_i w_i |s_i><s_i|``; weights must be non-negative and sum to 1."""
    if len(states) != len(weights) or not states:
        raise StateError("mix needs one weight per state and at least one state")
    if any(w < 0 for w in weights) or abs(sum(weights) - 1.0) > DEFAULT_TOLERANCE:
        raise StateError(f"weights {tuple(weights)} are not a probability distribution")
    widths = {s.n_qubits for s in states}
    if len(widths) != 1:
        raise StateError(f"mixed widths {sorted(widths)}")
    rho = sum(w * np.outer(s.amplitudes, s.amplitudes.conj()) for s, w in zip(states, weights))
    return DensityMatrix(rho)


def average(rhos: Sequence[DensityMatrix]) -> DensityMatrix:
    """Uniform mixture of density matrices of equal width."""
    if not rhos:
        raise StateError("average of zero density matrices")
    return DensityMatrix(sum(r.entries for r in rhos) / len(rhos))


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Trace out every wire not in ``keep``; kept wires follow ``keep`` order."""
    keep = tuple(keep)
    n = rho.n_qubits
    _check_wires(n, keep)
    if not keep:
        raise StateError("partial_trace must keep at least one wire")
    traced = tuple(w for w in range(n) if w not in keep)
    dk, dt = 2 ** len(keep), 2 ** len(traced)

    t = rho.entries.reshape([2] * (2 * n))
    axes = keep + traced + tuple(n + w for w in keep) + tuple(n + w for w in traced)
    t = np.transpose(t, axes).reshape(dk, dt, dk, dt)
    return DensityMatrix(np.einsum("ijkj->ik", t))


def reduced_density(state: Statevector, keep: Sequence[int]) -> DensityMatrix:
    """Reduced density matrix of a pure state without forming the full operator."""
    keep = tuple(keep)
    _check_wires(state.n_qubits, keep)
    if not keep:
        raise StateError("reduced_density must keep at least one wire")
    traced = tuple(w for w in range(state.n_qubits) if w not in keep)
    m = np.transpose(state.tensor, keep + traced).reshape(2 ** len(keep), -1)
    return DensityMatrix(m @ m.conj().T)


def density(state: Statevector) -> DensityMatrix:
    return mix([state], [1.0])
