"""Scored layout records returned by generation and optimization."""

from __future__ import annotations

from dataclasses import dataclass, field

from .layout import Layout, layout_from_dict, layout_hash, layout_to_dict


@dataclass(frozen=True)
class SolutionRecord:
    solution_id: str
    layout: Layout
    fitness: float
    penalty_breakdown: dict
    provenance: dict = field(default_factory=dict)

    @staticmethod
    def from_layout(layout: Layout, fitness: float, breakdown: dict,
                    provenance: dict = None) -> "SolutionRecord":
        return SolutionRecord(layout_hash(layout), layout, fitness,
                              dict(breakdown), provenance or {})


def solution_to_dict(sol: SolutionRecord) -> dict:
    return {
        "solution_id": sol.solution_id,
        "layout": layout_to_dict(sol.layout),
        "fitness": sol.fitness,
        "penalty_breakdown": dict(sol.penalty_breakdown),
        "provenance": dict(sol.provenance),
    }


def solution_from_dict(d: dict) -> SolutionRecord:
    return SolutionRecord(
        d["solution_id"],
        layout_from_dict(d["layout"]),
        d["fitness"],
        dict(d["penalty_breakdown"]),
        dict(d.get("provenance", {})),
    )
