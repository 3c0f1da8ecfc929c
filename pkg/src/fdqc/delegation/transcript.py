"""
Transcript and attack-report documents.

A transcript is the server's record of a session. Its JSON document has
stable field names::

    {"mode": "fdqc", "seed": 7, "terminal_keys_digest": "...",
     "rounds": [{"round_index": 0,
                 "server_ops": ["H 0", "P 1", "CZ 2 3", "CNOT 4 5", "T 6 7 8"]}]}

HDQC rounds add ``announced_gate`` and ``announced_role``. Payload
snapshots are simulation-only and appear only when requested.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping

from ..exceptions import ProtocolError
from ..quantum.qsim import Statevector

UNKNOWN = "unknown"


def _state_from_document(rows: list[list[float]] | None) -> Statevector | None:
    if rows is None:
        return None
    # amplitudes are stored rounded, so renormalize
    return Statevector.from_amplitudes((complex(re, im) for re, im in rows), normalize=True)


@dataclass(frozen=True)
class TranscriptRound:
    """What the server saw and did in one round."""

    round_index: int
    server_ops: tuple[str, ...]
    announced_gate: str | None = None
    announced_role: str | None = None
    payload_before: Statevector | None = field(default=None, compare=False)
    payload_after: Statevector | None = field(default=None, compare=False)

    def visible(self) -> dict[str, Any]:
        """Server-visible fields only (no snapshots)."""
        record: dict[str, Any] = {
            "round_index": self.round_index,
            "server_ops": list(self.server_ops),
        }
        if self.announced_gate is not None:
            record["announced_gate"] = self.announced_gate
            record["announced_role"] = self.announced_role
        return record

    def to_document(self) -> dict[str, Any]:
        record = self.visible()
        if self.payload_before is not None:
            record["payload_snapshots"] = {
                "before": self.payload_before.to_list(),
                "after": self.payload_after.to_list() if self.payload_after else None,
            }
        return record

    @classmethod
    def from_document(cls, doc: Mapping[str, Any]) -> "TranscriptRound":
        snapshots = doc.get("payload_snapshots") or {}
        return cls(
            round_index=int(doc["round_index"]),
            server_ops=tuple(doc["server_ops"]),
            announced_gate=doc.get("announced_gate"),
            announced_role=doc.get("announced_role"),
            payload_before=_state_from_document(snapshots.get("before")),
            payload_after=_state_from_document(snapshots.get("after")),
        )


@dataclass(frozen=True)
class Transcript:
    """Full record of one delegation session."""

    mode: str
    seed: int
    rounds: tuple[TranscriptRound, ...]
    terminal_keys_digest: str

    def __post_init__(self):
        object.__setattr__(self, "rounds", tuple(self.rounds))
        indices = [r.round_index for r in self.rounds]
        if indices != list(range(len(indices))):
            raise ProtocolError(f"round indices {indices} are not 0..{len(indices) - 1}")

    @property
    def round_count(self) -> int:
        return len(self.rounds)

    @property
    def has_snapshots(self) -> bool:
        return any(r.payload_before is not None for r in self.rounds)

    def server_view(self) -> list[dict[str, Any]]:
        """Per-round records the server could have written down itself."""
        return [r.visible() for r in self.rounds]

    def to_document(self) -> dict[str, Any]:
        return {
            "mode": self.mode,
            "seed": self.seed,
            "rounds": [r.to_document() for r in self.rounds],
            "terminal_keys_digest": self.terminal_keys_digest,
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_document(), indent=indent, sort_keys=True)

    @classmethod
    def from_document(cls, doc: Mapping[str, Any]) -> "Transcript":
        try:
            return cls(
                mode=str(doc["mode"]),
                seed=int(doc["seed"]),
                rounds=tuple(TranscriptRound.from_document(r) for r in doc["rounds"]),
                terminal_keys_digest=str(doc["terminal_keys_digest"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ProtocolError(f"malformed transcript document: {exc}") from exc


@dataclass(frozen=True)
class AttackReport:
    """Outcome of the key-recovery attack against one transcript.

    ``recovered_bits`` maps ``a0``, ``c0``, ``f0``, ``a1``... (one triple per
    Toffoli instance) to 0, 1 or ``"unknown"``.
    """

    mode: str
    recovered_bits: dict[str, int | str]
    ground_truth: dict[str, int]
    success_rate: float
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if not 0.0 <= self.success_rate <= 1.0:
            raise ValueError(f"success_rate {self.success_rate} outside [0, 1]")
        extra = set(self.recovered_bits) - set(self.ground_truth)
        if extra:
            raise ValueError(f"recovered bits {sorted(extra)} have no ground truth")

    @property
    def all_unknown(self) -> bool:
        return all(v == UNKNOWN for v in self.recovered_bits.values())

    @property
    def fully_recovered(self) -> bool:
        return all(self.recovered_bits.get(k) == v for k, v in self.ground_truth.items())

    def to_document(self) -> dict[str, Any]:
        return {
            "mode": self.mode,
            "recovered_bits": dict(self.recovered_bits),
            "ground_truth": dict(self.ground_truth),
            "success_rate": self.success_rate,
            "notes": list(self.notes),
        }
