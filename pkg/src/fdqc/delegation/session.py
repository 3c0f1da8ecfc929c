"""Round phase manager - enforces the per-round flow of a delegation session.

Every delegated operation travels through the same four steps:

1. **idle** → **prepared**: the client embeds the encrypted message qubits
   and fresh ancillas into a 9-wire payload
2. **prepared** → **executed**: the server applies its operation tuple
3. **executed** → **absorbed**: the client extracts the message qubits and
   updates its keys
4. **absorbed** → **prepared**: next round (or **finalized** when done)

A session with nothing to delegate goes straight from **idle** to
**finalized**. History entries carry the round index instead of wall-clock
time so two runs of the same session compare equal.

Example:
    >>> from fdqc.delegation.session import RoundPhaseManager
    >>> pm = RoundPhaseManager()
    >>> pm.transition_to_phase("prepared")
    True
    >>> pm.current_round
    0
"""

from typing import Any

from ..exceptions import ProtocolError

VALID_TRANSITIONS: dict[str, list[str]] = {
    "idle": ["prepared", "finalized"],
    "prepared": ["executed"],
    "executed": ["absorbed"],
    "absorbed": ["prepared", "finalized"],
    "finalized": [],
}


class RoundPhaseManager:
    """Tracks the phase of one delegation session.

    Attributes:
        current_phase: Active phase, ``idle`` before the first round.
        current_round: Index of the round in flight (or last completed),
            ``-1`` before the first round.
        phase_history: Ordered ``{"phase", "round_index"}`` entries.
        round_data: Per-round dictionaries filled by the protocol driver.
    """

    def __init__(self, config: dict[str, Any] | None = None):
        self.config = config or {}
        self.valid_phases = list(VALID_TRANSITIONS)
        self.reset()

    def transition_to_phase(self, phase: str) -> bool:
        """Move to ``phase``; entering ``prepared`` opens a new round.

        Raises:
            ProtocolError: If ``phase`` is unknown or not reachable from the
                current phase.
        """
        if phase not in self.valid_phases:
            raise ProtocolError(
                f"Invalid phase: {phase}. Valid phases are: {', '.join(self.valid_phases)}"
            )
        if phase not in VALID_TRANSITIONS[self.current_phase]:
            raise ProtocolError(f"Invalid transition from {self.current_phase} to {phase}")

        if phase == "prepared":
            self.current_round += 1
        self.current_phase = phase
        self._add_to_history(phase)
        return True

    @property
    def finalized(self) -> bool:
        return self.current_phase == "finalized"

    @property
    def completed_rounds(self) -> int:
        return sum(1 for entry in self.phase_history if entry["phase"] == "absorbed")

    def _add_to_history(self, phase: str) -> None:
        self.phase_history.append({"phase": phase, "round_index": self.current_round})

    def get_phase_history(self) -> list[dict[str, Any]]:
        return self.phase_history

    def get_round_data(self, round_index: int | None = None) -> dict[str, Any]:
        """Data recorded for ``round_index`` (default: the current round)."""
        target = self.current_round if round_index is None else round_index
        return self.round_data.get(target, {})

    def update_round_data(self, data: dict[str, Any], round_index: int | None = None) -> None:
        """Merge ``data`` into the record of ``round_index`` (default: current)."""
        target = self.current_round if round_index is None else round_index
        if target < 0:
            return
        self.round_data.setdefault(target, {}).update(data)

    def reset(self) -> None:
        self.current_phase = "idle"
        self.current_round = -1
        self.phase_history: list[dict[str, Any]] = []
        self.round_data: dict[int, dict[str, Any]] = {}
        self._add_to_history("idle")
