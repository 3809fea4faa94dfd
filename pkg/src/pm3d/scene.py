"""Renderer-agnostic scene emission.

A SceneGraph is a portable description of the laid-out model: one element
per node and per connector, translucent captioned lane planes, an axis
legend whenever scaling is active, and an optional synthetic backdrop.
It serializes to canonical JSON under the versioned schema name
"scene3dviz-1" (field-by-field reference in docs/scene-format.md); the
writer is byte-deterministic so identical scenes produce identical files,
and readers ignore unknown fields so the format can grow.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Sequence

from .layout import Connector, Placement, bounding_volume
from .mapping import Lane, MappingConfig, Style
from .model import NodeKind, NumericValue, ProcessModel
from .parser import format_value

SCHEMA = "scene3dviz-1"

SHAPE_BY_KIND = {
    NodeKind.TASK: "cube",
    NodeKind.START: "sphere",
    NodeKind.END: "sphere",
    NodeKind.PARALLEL_SPLIT: "bar",
    NodeKind.PARALLEL_JOIN: "bar",
    NodeKind.XOR_SPLIT: "diamond",
    NodeKind.XOR_JOIN: "diamond",
    NodeKind.LOOP_HEAD: "diamond",
    NodeKind.LOOP_TAIL: "diamond",
}

_MARGIN = 0.5


class InconsistentInputs(ValueError):
    pass


class UnknownNode(KeyError):
    pass


class IoFailure(OSError):
    pass


@dataclass(frozen=True)
class SceneElement:
    """One drawable item.  Nodes use position/scale/labels and carry a
    pick_id; connectors use path/source/target instead."""

    shape: str
    kind_tag: str
    position: tuple[float, float, float] | None = None
    scale: tuple[float, float, float] | None = None
    labels: Mapping[str, str] = field(default_factory=dict)
    pick_id: str | None = None
    path: tuple[tuple[float, float, float], ...] | None = None
    source: str | None = None
    target: str | None = None


@dataclass(frozen=True)
class LanePlane:
    style: str
    index: int
    label: str
    axis_value: float
    span_x: tuple[float, float]
    span_other: tuple[float, float]


@dataclass(frozen=True)
class Legend:
    axes: Mapping[str, str]
    position: tuple[float, float, float]


@dataclass(frozen=True)
class Backdrop:
    kind: str
    min_corner: tuple[float, float, float]
    max_corner: tuple[float, float, float]


@dataclass(frozen=True)
class CameraHint:
    eye: tuple[float, float, float]
    target: tuple[float, float, float]


@dataclass(frozen=True)
class SceneGraph:
    name: str
    elements: tuple[SceneElement, ...]
    lanes: tuple[LanePlane, ...]
    legend: Legend | None
    backdrop: Backdrop | None
    camera_hint: CameraHint
    bounds: tuple[tuple[float, float, float], tuple[float, float, float]]
    schema: str = SCHEMA


def build_scene(
    model: ProcessModel,
    placements: Sequence[Placement],
    connectors: Sequence[Connector],
    lanes: Sequence[Lane],
    config: MappingConfig,
    backdrop: str = "none",
) -> SceneGraph:
    """Assemble the scene from the layout outputs.

    Exactly one element per node (pick_id set) and per connector (pick_id
    unset); the legend appears iff the config holds a scale tuple.  Raises
    InconsistentInputs when the placements do not match the model's nodes.
    """
    node_ids = {n.id for n in model.nodes}
    placed_ids = {p.node_id for p in placements}
    if placed_ids != node_ids:
        raise InconsistentInputs(
            f"placements cover {len(placed_ids)} node(s), model has {len(node_ids)}"
        )
    for c in connectors:
        if c.source not in node_ids or c.target not in node_ids:
            raise InconsistentInputs(f"connector {c.source!r} -> {c.target!r} references unknown nodes")
    if backdrop not in ("none", "grid", "room"):
        raise ValueError(f"backdrop must be none, grid or room, got {backdrop!r}")

    by_id = {n.id: n for n in model.nodes}
    elements = [
        SceneElement(
            shape=SHAPE_BY_KIND[by_id[p.node_id].kind],
            kind_tag=by_id[p.node_id].kind.value,
            position=p.position,
            scale=p.size,
            labels=dict(p.labels),
            pick_id=p.node_id,
        )
        for p in placements
    ]
    elements.extend(
        SceneElement(
            shape="arrow-bar" if c.kind == "arrow" else "bar",
            kind_tag="edge",
            path=c.waypoints,
            source=c.source,
            target=c.target,
        )
        for c in connectors
    )

    lo, hi = bounding_volume(placements, connectors)
    span_x = (lo[0] - _MARGIN, hi[0] + _MARGIN)
    planes = []
    for lane in lanes:
        if lane.style is Style.POSITION_Y:
            span_other = (lo[2] - _MARGIN, hi[2] + _MARGIN)
        else:
            span_other = (lo[1] - _MARGIN, hi[1] + _MARGIN)
        planes.append(LanePlane(
            style=lane.style.value,
            index=lane.index,
            label=lane.label,
            axis_value=float(lane.index),
            span_x=span_x,
            span_other=span_other,
        ))

    scale_tuples = config.scale_tuples()
    legend = None
    if scale_tuples:
        legend = Legend(
            axes={t.style.axis: t.attribute for t in scale_tuples},
            position=(lo[0] - 1.0, lo[1] - 1.0, lo[2]),
        )

    scenery = None
    if backdrop != "none":
        scenery = Backdrop(
            kind=backdrop,
            min_corner=(lo[0] - 2.0, lo[1] - _MARGIN, lo[2] - 2.0),
            max_corner=(hi[0] + 2.0, hi[1] + 3.0, hi[2] + 2.0),
        )

    center = tuple((a + b) / 2 for a, b in zip(lo, hi))
    extent = max(b - a for a, b in zip(lo, hi))
    camera = CameraHint(
        eye=(center[0], center[1] + 0.4 * extent + 1.5, center[2] + 1.1 * extent + 3.0),
        target=center,
    )

    return SceneGraph(
        name=model.name,
        elements=tuple(elements),
        lanes=tuple(planes),
        legend=legend,
        backdrop=scenery,
        camera_hint=camera,
        bounds=(lo, hi),
    )


@dataclass(frozen=True)
class DetailArgument:
    name: str
    kind: str
    text: str
    value: float | None = None
    unit: str | None = None


@dataclass(frozen=True)
class DetailCard:
    node_id: str
    label: str
    kind: str
    arguments: tuple[DetailArgument, ...]


def node_details(model: ProcessModel, node_id: str) -> DetailCard:
    """The full argument bag of one node, ready for display."""
    node = model.get_node(node_id)
    if node is None:
        raise UnknownNode(node_id)
    arguments = []
    for name, value in node.arguments.items():
        if isinstance(value, NumericValue):
            arguments.append(DetailArgument(
                name=name, kind="numeric", text=format_value(value),
                value=value.value, unit=value.unit,
            ))
        else:
            arguments.append(DetailArgument(name=name, kind="text", text=value.value))
    return DetailCard(
        node_id=node.id, label=node.label, kind=node.kind.value,
        arguments=tuple(arguments),
    )


def card_payload(card: DetailCard) -> dict[str, Any]:
    return {
        "node_id": card.node_id,
        "label": card.label,
        "kind": card.kind,
        "arguments": [
            {"name": a.name, "kind": a.kind, "text": a.text,
             "value": a.value, "unit": a.unit}
            for a in card.arguments
        ],
    }


def scene_payload(scene: SceneGraph) -> dict[str, Any]:
    """The plain-data form of a scene, the unit of serialization."""
    elements = []
    for e in scene.elements:
        item: dict[str, Any] = {"shape": e.shape, "kind_tag": e.kind_tag}
        if e.path is not None:
            item["path"] = [list(p) for p in e.path]
            item["from"] = e.source
            item["to"] = e.target
        else:
            item["position"] = list(e.position)
            item["scale"] = list(e.scale)
            item["labels"] = dict(e.labels)
            item["pick_id"] = e.pick_id
        elements.append(item)
    payload: dict[str, Any] = {
        "schema": scene.schema,
        "name": scene.name,
        "elements": elements,
        "lanes": [
            {"style": p.style, "index": p.index, "label": p.label,
             "axis_value": p.axis_value, "span_x": list(p.span_x),
             "span_other": list(p.span_other)}
            for p in scene.lanes
        ],
        "legend": None if scene.legend is None else {
            "axes": dict(scene.legend.axes),
            "position": list(scene.legend.position),
        },
        "backdrop": None if scene.backdrop is None else {
            "kind": scene.backdrop.kind,
            "min": list(scene.backdrop.min_corner),
            "max": list(scene.backdrop.max_corner),
        },
        "camera_hint": {
            "eye": list(scene.camera_hint.eye),
            "target": list(scene.camera_hint.target),
        },
        "bounds": {"min": list(scene.bounds[0]), "max": list(scene.bounds[1])},
    }
    return payload


def scene_to_json(scene: SceneGraph) -> str:
    return json.dumps(scene_payload(scene), sort_keys=True, indent=2,
                      ensure_ascii=True) + "\n"


def _triple(values: Sequence[float]) -> tuple[float, float, float]:
    x, y, z = values
    return (float(x), float(y), float(z))


def scene_from_payload(payload: Mapping[str, Any]) -> SceneGraph:
    """Rebuild a SceneGraph from payload data, ignoring unknown fields."""
    elements = []
    for item in payload.get("elements", ()):
        if "path" in item:
            elements.append(SceneElement(
                shape=item["shape"], kind_tag=item["kind_tag"],
                path=tuple(_triple(p) for p in item["path"]),
                source=item.get("from"), target=item.get("to"),
            ))
        else:
            elements.append(SceneElement(
                shape=item["shape"], kind_tag=item["kind_tag"],
                position=_triple(item["position"]), scale=_triple(item["scale"]),
                labels=dict(item.get("labels", {})), pick_id=item.get("pick_id"),
            ))
    lanes = tuple(
        LanePlane(
            style=p["style"], index=int(p["index"]), label=p["label"],
            axis_value=float(p["axis_value"]),
            span_x=tuple(float(v) for v in p["span_x"]),
            span_other=tuple(float(v) for v in p["span_other"]),
        )
        for p in payload.get("lanes", ())
    )
    legend = payload.get("legend")
    backdrop = payload.get("backdrop")
    camera = payload["camera_hint"]
    bounds = payload["bounds"]
    return SceneGraph(
        name=payload.get("name", "process"),
        elements=tuple(elements),
        lanes=lanes,
        legend=None if legend is None else Legend(
            axes=dict(legend["axes"]), position=_triple(legend["position"]),
        ),
        backdrop=None if backdrop is None else Backdrop(
            kind=backdrop["kind"],
            min_corner=_triple(backdrop["min"]),
            max_corner=_triple(backdrop["max"]),
        ),
        camera_hint=CameraHint(eye=_triple(camera["eye"]), target=_triple(camera["target"])),
        bounds=(_triple(bounds["min"]), _triple(bounds["max"])),
        schema=payload.get("schema", SCHEMA),
    )


def read_scene(text: str) -> SceneGraph:
    return scene_from_payload(json.loads(text))


def write_scene(scene: SceneGraph, path: str | Path) -> None:
    try:
        Path(path).write_text(scene_to_json(scene), encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot write scene to {path}: {exc}") from exc
