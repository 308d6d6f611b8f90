"""ECS components for protocol runs."""

from two_photon_cqed.components.definitions import (
    CursorComponent,
    DetectionComponent,
    ErrorComponent,
    ProtocolComponent,
    ScoreComponent,
    StateComponent,
    TerminalComponent,
)

__all__ = [
    "CursorComponent",
    "DetectionComponent",
    "ErrorComponent",
    "ProtocolComponent",
    "ScoreComponent",
    "StateComponent",
    "TerminalComponent",
]
