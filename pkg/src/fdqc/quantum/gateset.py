"""
Delegatable gate set, circuit programs and their plaintext reference.

Program text starts with a ``qubits N`` header followed by one gate per
line: ``H q``, ``P q``, ``CZ q1 q2``, ``CNOT c t`` or ``T c1 c2 t``.
``#`` starts a comment that runs to the end of the line and blank lines
are ignored.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ..exceptions import GateError, ProgramParseError, StateError
from . import qsim
from .qsim import GateKind, GateOp, Statevector

logger = logging.getLogger(__name__)

DELEGATABLE_KINDS = frozenset(
    {GateKind.H, GateKind.P, GateKind.CZ, GateKind.CNOT, GateKind.TOFFOLI}
)
# CZ can be built from H and CNOT, so the minimal universal set omits it.
MINIMAL_KINDS = frozenset({GateKind.H, GateKind.P, GateKind.CNOT, GateKind.TOFFOLI})

MNEMONICS = {kind.mnemonic: kind for kind in DELEGATABLE_KINDS}


@dataclass(frozen=True)
class CircuitProgram:
    """Ordered gate list over ``n_qubits`` logical qubits."""

    n_qubits: int
    ops: tuple[GateOp, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        if self.n_qubits < 1:
            raise GateError(f"program needs at least one qubit, got {self.n_qubits}")
        for op in self.ops:
            if op.kind not in DELEGATABLE_KINDS:
                raise GateError(f"{op.kind.value} is not a delegatable gate")
            if max(op.targets) >= self.n_qubits:
                raise GateError(f"{op.render()} exceeds a {self.n_qubits}-qubit register")

    def __len__(self) -> int:
        return len(self.ops)

    @property
    def toffoli_count(self) -> int:
        return sum(1 for op in self.ops if op.kind is GateKind.TOFFOLI)

    def render(self) -> str:
        return render_program(self)


def _parse_int(line_no: int, token: str, what: str) -> int:
    """Plain 0-based decimal: ASCII digits only, no sign or underscores."""
    if token.startswith("-") and token[1:].isascii() and token[1:].isdigit():
        raise ProgramParseError(line_no, f"{what} {token!r} is negative")
    if not (token.isascii() and token.isdigit()):
        raise ProgramParseError(line_no, f"{what} {token!r} is not an integer")
    return int(token)


def parse_program(text: str, minimal_only: bool = False) -> CircuitProgram:
    """Parse program text.

    The first statement must be the ``qubits <N>`` header.

    Raises:
        ProgramParseError: missing or malformed header, unknown mnemonic,
            wrong operand count, repeated or out-of-range operand, or ``CZ``
            when ``minimal_only`` is set.
    """
    n_qubits: int | None = None
    ops: list[GateOp] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *operands = line.split()

        if n_qubits is None:
            if head != "qubits" or len(operands) != 1:
                raise ProgramParseError(line_no, f"expected 'qubits <N>' header, got {line!r}")
            n_qubits = _parse_int(line_no, operands[0], "width")
            if n_qubits < 1:
                raise ProgramParseError(line_no, "width must be at least 1")
            continue

        kind = MNEMONICS.get(head)
        if kind is None:
            raise ProgramParseError(line_no, f"unknown gate {head!r}")
        if minimal_only and kind not in MINIMAL_KINDS:
            raise ProgramParseError(line_no, f"{head} is outside the minimal gate set")
        if len(operands) != kind.arity:
            raise ProgramParseError(
                line_no, f"{head} takes {kind.arity} operand(s), got {len(operands)}"
            )
        targets = tuple(_parse_int(line_no, tok, "operand") for tok in operands)
        if len(set(targets)) != len(targets):
            raise ProgramParseError(line_no, f"repeated operand in {line!r}")
        if max(targets) >= n_qubits:
            raise ProgramParseError(
                line_no, f"operand {max(targets)} out of range for {n_qubits} qubit(s)"
            )
        ops.append(GateOp(kind, targets))

    if n_qubits is None:
        raise ProgramParseError(0, "missing 'qubits <N>' header")
    logger.debug(f"Parsed program: {len(ops)} gate(s) on {n_qubits} qubit(s)")
    return CircuitProgram(n_qubits, tuple(ops))


def load_program(path: str | Path, minimal_only: bool = False) -> CircuitProgram:
    """Read and parse a program file (UTF-8)."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ProgramParseError(0, f"cannot read program {path}: {exc.strerror or exc}") from exc
    except UnicodeDecodeError as exc:
        raise ProgramParseError(0, f"program {path} is not valid UTF-8: {exc.reason}") from exc
    return parse_program(text, minimal_only=minimal_only)


def render_program(program: CircuitProgram) -> str:
    """Canonical text form; ``parse_program`` reads it back unchanged."""
    lines = [f"qubits {program.n_qubits}", *(op.render() for op in program.ops)]
    return "\n".join(lines) + "\n"


def direct_eval(program: CircuitProgram, input_state: Statevector) -> Statevector:
    """Plaintext reference: apply every gate in order."""
    if input_state.n_qubits != program.n_qubits:
        raise StateError(
            f"input has {input_state.n_qubits} qubit(s), program needs {program.n_qubits}"
        )
    return qsim.apply_all(input_state, program.ops)


def inverse_program(program: CircuitProgram) -> CircuitProgram:
    """Program undoing ``program``; ``P`` is inverted as ``P P P``."""
    ops: list[GateOp] = []
    for op in reversed(program.ops):
        ops.extend([op] * (3 if op.kind is GateKind.P else 1))
    return CircuitProgram(program.n_qubits, tuple(ops))


def gate_choices(n_qubits: int, pool: Iterable[GateKind]) -> list[GateOp]:
    """Every ``(kind, ordered distinct targets)`` combination of the pool."""
    choices = []
    for kind in sorted(pool, key=lambda k: k.value):
        for targets in itertools.permutations(range(n_qubits), kind.arity):
            choices.append(GateOp(kind, targets))
    return choices


def random_program(
    n_qubits: int,
    length: int,
    seed: int,
    pool: Sequence[GateKind | str] | None = None,
) -> CircuitProgram:
    """Draw ``length`` gates uniformly over valid (kind, targets) combinations.

    The default pool is every delegatable kind that fits the register.
    """
    if n_qubits < 1:
        raise GateError(f"program needs at least one qubit, got {n_qubits}")
    if length < 0:
        raise GateError(f"length must be non-negative, got {length}")
    if pool is None:
        kinds = [k for k in DELEGATABLE_KINDS if k.arity <= n_qubits]
    else:
        kinds = [GateKind(k) for k in pool]
        too_wide = [k.value for k in kinds if k.arity > n_qubits]
        if too_wide:
            raise GateError(f"{too_wide} need more than {n_qubits} qubit(s)")
        outside = [k.value for k in kinds if k not in DELEGATABLE_KINDS]
        if outside:
            raise GateError(f"{outside} are not delegatable")

    if length == 0:
        return CircuitProgram(n_qubits)
    choices = gate_choices(n_qubits, kinds)
    if not choices:
        raise GateError("empty gate pool")
    rng = np.random.default_rng(seed)
    picks = rng.integers(0, len(choices), size=length)
    return CircuitProgram(n_qubits, tuple(choices[int(i)] for i in picks))
