"""Dialogue context: the ordered user/system turn sequence every stage consumes."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Speaker(str, Enum):
    USER = "USER"
    SYSTEM = "SYSTEM"


@dataclass(frozen=True)
class Turn:
    speaker: Speaker
    text: str


@dataclass(frozen=True)
class DialogueContext:
    turns: tuple[Turn, ...] = ()
    dialogue_id: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "turns", tuple(self.turns))

    @classmethod
    def from_pairs(cls, pairs, dialogue_id: str = "") -> "DialogueContext":
        """Build from (speaker, text) pairs; speaker may be a string."""
        turns = tuple(Turn(Speaker(s), t) for s, t in pairs)
        return cls(turns, dialogue_id)

    def with_turn(self, speaker: Speaker, text: str) -> "DialogueContext":
        return DialogueContext(self.turns + (Turn(Speaker(speaker), text),), self.dialogue_id)

    @property
    def last_speaker(self) -> Speaker | None:
        return self.turns[-1].speaker if self.turns else None

    @property
    def user_turn_count(self) -> int:
        return sum(1 for t in self.turns if t.speaker is Speaker.USER)

    def render(self) -> str:
        """One "SPEAKER: text" line per turn, in order."""
        return "\n".join(f"{t.speaker.value}: {t.text}" for t in self.turns)

    def drop_oldest_pair(self) -> "DialogueContext":
        """Drop the two oldest turns (window-overflow policy); keeps at least one turn."""
        if len(self.turns) <= 2:
            return self
        return DialogueContext(self.turns[2:], self.dialogue_id)
