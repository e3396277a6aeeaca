from .records import IdfDocument, IdfField, IdfRecord, parse_idf, render_idf  # noqa: F401
from .systems import NodeGraph, SystemsSpec, assemble_systems, name_nodes  # noqa: F401
from .zones import build_zones  # noqa: F401
from .emitter import emit_idf  # noqa: F401
