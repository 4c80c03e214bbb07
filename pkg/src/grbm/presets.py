"""Benchmark objectives with their search domains and known roots."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Preset:
    name: str
    text: str
    domain: tuple[float, float]
    roots: tuple[float, ...]


PRESETS = {
    p.name: p
    for p in (
        Preset("eq5", "(x-0.5)*(x-0.50001)*(x-4)*(x-4.05)*(x-9.3)", (0.0, 10.0), (0.5, 0.50001, 4.0, 4.05, 9.3)),
        Preset("eq7", "(x-3)^2*(x-4)^2", (0.0, 5.0), (3.0, 4.0)),
        Preset("eq8", "(x-0.5)^3*(x-0.50001)*(x-1)", (0.0, 1.5), (0.5, 0.50001, 1.0)),
        Preset(
            "eq10",
            "(x-0.5)^3*(x-0.50001)^3*(x-4.0)*(x-4.0001)*(x-4.2)^2",
            (0.0, 4.5),
            (0.5, 0.50001, 4.0, 4.0001, 4.2),
        ),
    )
}
