"""Project files: one JSON document holding program, layouts, systems,
settings.

The in-memory Project keeps the raw document, so unknown future fields
survive a load/save round-trip verbatim. Saving is atomic (temp file +
rename).
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

from .errors import FormatVersionMismatch, IoFailure, SchemaViolation
from .program import SpaceProgram, program_from_dict, program_to_dict
from .solution import SolutionRecord, solution_from_dict, solution_to_dict

FORMAT_VERSION = 1

PROJECT_SCHEMA = {
    "type": "object",
    "required": ["format_version", "program"],
    "properties": {
        "format_version": {"type": "integer"},
        "program": {
            "type": "object",
            "required": ["spaces"],
            "properties": {
                "spaces": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["id", "target_area"],
                        "properties": {
                            "id": {"type": "string"},
                            "target_area": {"type": "number"},
                            "min_side": {"type": "number"},
                            "storey": {"type": "integer"},
                            "preferred_window_orientations": {
                                "type": "array",
                                "items": {"enum": ["N", "E", "S", "W"]},
                            },
                            "gain_profile": {"type": "string"},
                        },
                    },
                },
                "adjacency_requirements": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["a", "b"],
                        "properties": {
                            "a": {"type": "string"},
                            "b": {"type": "string"},
                            "kind": {"type": "string"},
                        },
                    },
                },
                "storey_count": {"type": "integer", "minimum": 1},
                "boundary": {"type": "array"},
                "objective_weights": {"type": "object"},
                "site": {"type": "object"},
            },
        },
        "layouts": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["solution_id", "layout", "fitness"],
                "properties": {
                    "solution_id": {"type": "string"},
                    "fitness": {"type": "number"},
                    "layout": {"type": "object"},
                    "penalty_breakdown": {"type": "object"},
                },
            },
        },
        "systems": {"type": "object"},
        "settings": {"type": "object"},
    },
}


@dataclass
class Project:
    data: dict = field(default_factory=lambda: {
        "format_version": FORMAT_VERSION,
        "program": {"spaces": []},
        "layouts": [],
        "systems": {},
        "settings": {},
    })

    @staticmethod
    def from_program(program: SpaceProgram, systems: dict = None,
                     settings: dict = None) -> "Project":
        return Project({
            "format_version": FORMAT_VERSION,
            "program": program_to_dict(program),
            "layouts": [],
            "systems": systems or {},
            "settings": settings or {},
        })

    @property
    def program(self) -> SpaceProgram:
        return program_from_dict(self.data.get("program", {}))

    @property
    def solutions(self) -> list:
        return [solution_from_dict(d) for d in self.data.get("layouts", [])]

    def set_solutions(self, solutions):
        self.data["layouts"] = [
            solution_to_dict(s) if isinstance(s, SolutionRecord) else s
            for s in solutions]

    @property
    def systems(self) -> dict:
        return self.data.get("systems", {})

    @property
    def settings(self) -> dict:
        return self.data.get("settings", {})

    def __eq__(self, other):
        return isinstance(other, Project) and self.data == other.data


def validate_project_data(data: dict):
    """FormatVersionMismatch / SchemaViolation (with field path) on bad data."""
    if not isinstance(data, dict):
        raise SchemaViolation("project document must be a JSON object")
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise FormatVersionMismatch(
            f"format_version {version!r} is not supported (expected "
            f"{FORMAT_VERSION})")
    try:
        jsonschema.validate(data, PROJECT_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise SchemaViolation(exc.message, path=path) from exc


def load_project(path) -> Project:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IoFailure(f"cannot read project file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolation(f"not valid JSON: {exc}") from exc
    validate_project_data(data)
    return Project(data)


def save_project(project: Project, path):
    validate_project_data(project.data)
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=str(path.parent),
                                   prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(project.data, fh, indent=2, sort_keys=True)
                fh.write("\n")
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise IoFailure(f"cannot write project file {path}: {exc}") from exc
