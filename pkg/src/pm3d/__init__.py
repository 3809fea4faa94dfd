"""3D process-model visualization toolkit.

Parse XML process definitions, map node attributes onto position, scale
and cube-face labels, auto-lay-out the control flow in 3D, and emit or
serve portable scene files.  See README.md for a tour.
"""

from .bench import BenchGroup, BenchReport, linear_fit, run_benchmark
from .blocks import (
    LoopBlock,
    NotBlockStructured,
    ParallelBlock,
    TaskBlock,
    XorBlock,
    build_model,
    reconstruct,
)
from .generator import GenSpec, InvalidSpec, generate
from .layout import Connector, EmptyScene, Placement, bounding_volume, layout
from .mapping import (
    ConfigSyntaxError,
    ConfigViolation,
    IncompatibleMapping,
    InvalidConfig,
    Lane,
    MappingConfig,
    MappingKind,
    MappingTuple,
    ResolvedVisual,
    Style,
    parse_config,
    resolve,
    swim_lanes,
    validate_config,
)
from .model import (
    ArgumentValue,
    AttributeKind,
    Node,
    NodeKind,
    NumericValue,
    ProcessModel,
    TextValue,
    Violation,
    attribute_kind,
    validate,
)
from .parser import (
    InvalidDocument,
    MalformedXml,
    ParseDiagnostics,
    ParseError,
    UnbalancedBlock,
    UnknownElement,
    parse,
    serialize,
)
from .scene import (
    DetailCard,
    SceneGraph,
    build_scene,
    node_details,
    read_scene,
    scene_to_json,
    write_scene,
)

__version__ = "0.1.0"

__all__ = [
    "ArgumentValue", "AttributeKind", "BenchGroup", "BenchReport", "Connector",
    "ConfigSyntaxError", "ConfigViolation", "DetailCard", "EmptyScene", "GenSpec",
    "IncompatibleMapping", "InvalidConfig", "InvalidDocument", "InvalidSpec",
    "Lane", "LoopBlock", "MalformedXml", "MappingConfig", "MappingKind",
    "MappingTuple", "Node", "NodeKind", "NotBlockStructured", "NumericValue",
    "ParallelBlock", "ParseDiagnostics", "ParseError", "Placement",
    "ProcessModel", "ResolvedVisual", "SceneGraph", "Style", "TaskBlock",
    "TextValue", "UnbalancedBlock", "UnknownElement", "Violation", "XorBlock",
    "attribute_kind", "bounding_volume", "build_model", "build_scene",
    "generate", "layout", "linear_fit", "node_details", "parse", "parse_config",
    "read_scene", "reconstruct", "resolve", "run_benchmark", "scene_to_json",
    "serialize", "swim_lanes", "validate", "validate_config", "write_scene",
]
