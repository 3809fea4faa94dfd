"""Attribute-to-visual mapping.

A MappingConfig is a list of (style, attribute, mapping) tuples.  Styles
are the render channels a single attribute can occupy: position on Y or Z,
scale on X/Y/Z, or one of six cube-face labels.  X position carries the
control flow and is owned by the layout module, never by a mapping.

Three mappings exist:

* Direct uses raw values as-is (offset in lane units, scale factor, or
  verbatim label text).
* Relative min-max normalizes over all carriers to a percentage; positions
  spread over a lane span, scales run 1.0 to 2.0 (up-scaling, so nodes
  never vanish).
* Discrete bins carriers into swim lanes: numeric values by percentage
  bucket, text values one lane per distinct value.

Nodes that do not carry a configured attribute keep defaults: offset 0,
scale 1.0, no extra labels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .model import (
    ArgumentValue,
    AttributeKind,
    NumericValue,
    ProcessModel,
    TextValue,
    attribute_kind,
)
from .parser import format_number, format_value

DEFAULT_LANES = 5

# Node properties selectable as attributes even though they are not
# arguments: the label and the id.  Both behave as text attributes.
VIRTUAL_ATTRIBUTES = ("Name", "Id")


class Style(Enum):
    POSITION_Y = "positionY"
    POSITION_Z = "positionZ"
    SCALE_X = "scaleX"
    SCALE_Y = "scaleY"
    SCALE_Z = "scaleZ"
    LABEL_FRONT = "labelFront"
    LABEL_TOP = "labelTop"
    LABEL_BACK = "labelBack"
    LABEL_BOTTOM = "labelBottom"
    LABEL_LEFT = "labelLeft"
    LABEL_RIGHT = "labelRight"

    @property
    def is_position(self) -> bool:
        return self in (Style.POSITION_Y, Style.POSITION_Z)

    @property
    def is_scale(self) -> bool:
        return self in (Style.SCALE_X, Style.SCALE_Y, Style.SCALE_Z)

    @property
    def is_label(self) -> bool:
        return self.value.startswith("label")

    @property
    def face(self) -> str | None:
        return self.value[5:].lower() if self.is_label else None

    @property
    def axis(self) -> str | None:
        """The coordinate axis a position/scale style occupies."""
        if self.is_position or self.is_scale:
            return self.value[-1].lower()
        return None


class MappingKind(Enum):
    DIRECT = "direct"
    RELATIVE = "relative"
    DISCRETE = "discrete"


@dataclass(frozen=True)
class MappingTuple:
    style: Style
    attribute: str
    mapping: MappingKind
    lane_count: int | None = None

    @property
    def lanes(self) -> int:
        return DEFAULT_LANES if self.lane_count is None else self.lane_count


@dataclass(frozen=True)
class MappingConfig:
    tuples: tuple[MappingTuple, ...] = ()
    text_lane_order: str = "first-appearance"

    def scale_tuples(self) -> list[MappingTuple]:
        return [t for t in self.tuples if t.style.is_scale]


@dataclass(frozen=True)
class ConfigViolation:
    rule: str
    message: str
    style: Style | None = None
    attribute: str | None = None


class InvalidConfig(ValueError):
    def __init__(self, violations: Iterable[ConfigViolation]):
        self.violations = tuple(violations)
        super().__init__("; ".join(v.message for v in self.violations))


class IncompatibleMapping(InvalidConfig):
    """A tuple pairs an attribute kind with a mapping that cannot take it."""


_KIND_RULES = frozenset({"text-needs-discrete", "mixed-kind"})


@dataclass(frozen=True)
class ResolvedVisual:
    node_id: str
    offset_y: float = 0.0
    offset_z: float = 0.0
    scale: tuple[float, float, float] = (1.0, 1.0, 1.0)
    face_labels: Mapping[str, str] = field(default_factory=dict)
    lane_assignments: Mapping[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class Lane:
    style: Style
    index: int
    label: str


def attribute_values(model: ProcessModel, name: str) -> list[tuple[str, ArgumentValue]]:
    """(node_id, value) for every carrier of an attribute, in node order.

    The virtual attributes resolve here: Name carries each node's label
    (nodes with empty labels do not carry it), Id every node's id.
    """
    if name == "Name":
        return [(n.id, TextValue(n.label)) for n in model.nodes if n.label]
    if name == "Id":
        return [(n.id, TextValue(n.id)) for n in model.nodes]
    out: list[tuple[str, ArgumentValue]] = []
    for node in model.nodes:
        value = node.arguments.get(name)
        if value is not None:
            out.append((node.id, value))
    return out


def config_attribute_kind(model: ProcessModel, name: str) -> AttributeKind:
    if name in VIRTUAL_ATTRIBUTES:
        return AttributeKind.TEXT
    return attribute_kind(model, name)


def validate_config(model: ProcessModel, config: MappingConfig) -> list[ConfigViolation]:
    """All reasons a config cannot drive resolve(); empty means usable.

    Attributes carried by no node are not violations: their tuples are
    ignored with a warning (see config_warnings).
    """
    out: list[ConfigViolation] = []
    seen: dict[Style, int] = {}
    for t in config.tuples:
        seen[t.style] = seen.get(t.style, 0) + 1
    for style, count in seen.items():
        if count > 1:
            out.append(ConfigViolation(
                "duplicate-style",
                f"{count} tuples target style {style.value}; at most one is allowed",
                style=style,
            ))
    if config.text_lane_order not in ("first-appearance", "lexicographic"):
        out.append(ConfigViolation(
            "text-lane-order",
            f"unknown text lane order {config.text_lane_order!r}",
        ))
    for t in config.tuples:
        if t.lane_count is not None and t.lane_count < 2:
            out.append(ConfigViolation(
                "lane-count",
                f"lane count for {t.style.value} must be at least 2, got {t.lane_count}",
                style=t.style, attribute=t.attribute,
            ))
        kind = config_attribute_kind(model, t.attribute)
        if kind is AttributeKind.MIXED:
            out.append(ConfigViolation(
                "mixed-kind",
                f"attribute {t.attribute!r} mixes numeric and text values and cannot be mapped",
                style=t.style, attribute=t.attribute,
            ))
        elif t.style.is_label:
            if t.mapping is not MappingKind.DIRECT:
                out.append(ConfigViolation(
                    "label-needs-direct",
                    f"label style {t.style.value} requires the direct mapping",
                    style=t.style, attribute=t.attribute,
                ))
        elif kind is AttributeKind.TEXT and t.mapping is not MappingKind.DISCRETE:
            out.append(ConfigViolation(
                "text-needs-discrete",
                f"text attribute {t.attribute!r} can only use the discrete mapping",
                style=t.style, attribute=t.attribute,
            ))
    return out


def config_warnings(model: ProcessModel, config: MappingConfig) -> list[ConfigViolation]:
    """Advisory findings that do not block resolution."""
    out: list[ConfigViolation] = []
    for t in config.tuples:
        kind = config_attribute_kind(model, t.attribute)
        if kind is AttributeKind.ABSENT:
            out.append(ConfigViolation(
                "empty-attribute",
                f"no node carries attribute {t.attribute!r}; tuple for {t.style.value} is ignored",
                style=t.style, attribute=t.attribute,
            ))
            continue
        if t.style.is_scale and t.mapping is MappingKind.DIRECT and kind is AttributeKind.NUMERIC:
            low = [v.value for _, v in attribute_values(model, t.attribute)
                   if isinstance(v, NumericValue) and v.value < 0.01]
            if low:
                out.append(ConfigViolation(
                    "direct-scale-clamped",
                    f"{len(low)} value(s) of {t.attribute!r} are below 0.01 and clamp "
                    f"to the minimum scale factor",
                    style=t.style, attribute=t.attribute,
                ))
    return out


def _percentages(values: Sequence[float]) -> list[float]:
    """Min-max percentages; a degenerate range maps every carrier to 0."""
    lo = min(values)
    hi = max(values)
    span = hi - lo
    if span == 0:
        return [0.0 for _ in values]
    return [(v - lo) / span for v in values]


def _numeric_lanes(values: Sequence[float], k: int) -> list[int]:
    return [min(math.floor(pct * k), k - 1) for pct in _percentages(values)]


def _text_groups(values: Sequence[str], order: str) -> list[str]:
    groups: list[str] = []
    for v in values:
        if v not in groups:
            groups.append(v)
    if order == "lexicographic":
        groups.sort()
    return groups


def resolve(model: ProcessModel, config: MappingConfig) -> dict[str, ResolvedVisual]:
    """Compute every node's visual quantities under a config.

    Pure and deterministic; raises IncompatibleMapping/InvalidConfig when
    validate_config reports problems.  The result covers every node;
    non-carriers hold the defaults.
    """
    violations = validate_config(model, config)
    if violations:
        if any(v.rule in _KIND_RULES for v in violations):
            raise IncompatibleMapping(violations)
        raise InvalidConfig(violations)

    offset = {n.id: {"y": 0.0, "z": 0.0} for n in model.nodes}
    scale = {n.id: {"x": 1.0, "y": 1.0, "z": 1.0} for n in model.nodes}
    labels: dict[str, dict[str, str]] = {}
    lanes: dict[str, dict[str, int]] = {n.id: {} for n in model.nodes}
    for node in model.nodes:
        labels[node.id] = {"top": node.id}
        if node.label:
            labels[node.id]["front"] = node.label

    for t in config.tuples:
        kind = config_attribute_kind(model, t.attribute)
        if kind is AttributeKind.ABSENT:
            continue
        carriers = attribute_values(model, t.attribute)
        ids = [node_id for node_id, _ in carriers]

        if t.style.is_label:
            for node_id, value in carriers:
                labels[node_id][t.style.face] = format_value(value)
            continue

        if kind is AttributeKind.TEXT:
            texts = [v.value for _, v in carriers]  # type: ignore[union-attr]
            groups = _text_groups(texts, config.text_lane_order)
            g = len(groups)
            group_index = {label: i for i, label in enumerate(groups)}
            for node_id, value in zip(ids, texts):
                lane = group_index[value]
                lanes[node_id][t.style.value] = lane
                quantity = float(lane) if t.style.is_position else (
                    1.0 if g == 1 else 1.0 + lane / (g - 1)
                )
                _apply(t.style, quantity, node_id, offset, scale)
            continue

        numbers = [v.value for _, v in carriers]  # type: ignore[union-attr]
        if t.mapping is MappingKind.DIRECT:
            for node_id, raw in zip(ids, numbers):
                quantity = raw if t.style.is_position else max(raw, 0.01)
                _apply(t.style, quantity, node_id, offset, scale)
        elif t.mapping is MappingKind.RELATIVE:
            pcts = _percentages(numbers)
            span = t.lanes - 1
            for node_id, pct in zip(ids, pcts):
                quantity = pct * span if t.style.is_position else 1.0 + pct
                _apply(t.style, quantity, node_id, offset, scale)
        else:
            k = t.lanes
            for node_id, lane in zip(ids, _numeric_lanes(numbers, k)):
                lanes[node_id][t.style.value] = lane
                quantity = float(lane) if t.style.is_position else 1.0 + lane / (k - 1)
                _apply(t.style, quantity, node_id, offset, scale)

    return {
        n.id: ResolvedVisual(
            node_id=n.id,
            offset_y=offset[n.id]["y"],
            offset_z=offset[n.id]["z"],
            scale=(scale[n.id]["x"], scale[n.id]["y"], scale[n.id]["z"]),
            face_labels=labels[n.id],
            lane_assignments=lanes[n.id],
        )
        for n in model.nodes
    }


def _apply(style: Style, quantity: float, node_id: str,
           offset: dict[str, dict[str, float]], scale: dict[str, dict[str, float]]) -> None:
    if style.is_position:
        offset[node_id][style.axis] = quantity
    else:
        scale[node_id][style.axis] = quantity


def swim_lanes(model: ProcessModel, config: MappingConfig) -> list[Lane]:
    """Lane planes implied by discrete position tuples, unoccupied included.

    Text attributes produce one lane per distinct value; numeric ones one
    lane per bucket, labelled with the bucket's value range.  Relative and
    direct position tuples are continuous and produce no lanes.
    """
    out: list[Lane] = []
    for t in config.tuples:
        if not t.style.is_position or t.mapping is not MappingKind.DISCRETE:
            continue
        kind = config_attribute_kind(model, t.attribute)
        if kind is AttributeKind.ABSENT:
            continue
        carriers = attribute_values(model, t.attribute)
        if kind is AttributeKind.TEXT:
            groups = _text_groups([v.value for _, v in carriers], config.text_lane_order)  # type: ignore[union-attr]
            out.extend(Lane(t.style, i, label) for i, label in enumerate(groups))
        else:
            numbers = [v.value for _, v in carriers]  # type: ignore[union-attr]
            lo, hi = min(numbers), max(numbers)
            if hi == lo:
                out.append(Lane(t.style, 0, format_number(lo)))
                continue
            width = (hi - lo) / t.lanes
            for i in range(t.lanes):
                out.append(Lane(
                    t.style, i,
                    f"{format_number(lo + i * width)}..{format_number(lo + (i + 1) * width)}",
                ))
    return out


class ConfigSyntaxError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


_STYLE_BY_NAME = {s.value: s for s in Style}
_MAPPING_BY_NAME = {m.value: m for m in MappingKind}


def parse_config(text: str) -> MappingConfig:
    """Read the flat text config format.

    One tuple per line, `style = attribute : mapping[:k]`; blank lines and
    lines starting with # are skipped; a `text-lane-order = ...` line
    switches discrete text lane ordering.  Attribute names may contain
    spaces but not colons.
    """
    tuples: list[MappingTuple] = []
    order = "first-appearance"
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigSyntaxError("expected `style = attribute : mapping[:k]`", lineno)
        lhs, rhs = line.split("=", 1)
        lhs = lhs.strip()
        if lhs == "text-lane-order":
            order = rhs.strip()
            if order not in ("first-appearance", "lexicographic"):
                raise ConfigSyntaxError(
                    f"text-lane-order must be first-appearance or lexicographic, got {order!r}",
                    lineno,
                )
            continue
        style = _STYLE_BY_NAME.get(lhs)
        if style is None:
            raise ConfigSyntaxError(f"unknown style {lhs!r}", lineno)
        parts = [p.strip() for p in rhs.split(":")]
        if len(parts) not in (2, 3):
            raise ConfigSyntaxError("expected `attribute : mapping[:k]` after =", lineno)
        attribute = parts[0]
        if not attribute:
            raise ConfigSyntaxError("empty attribute name", lineno)
        mapping = _MAPPING_BY_NAME.get(parts[1].lower())
        if mapping is None:
            raise ConfigSyntaxError(
                f"unknown mapping {parts[1]!r} (expected direct, relative or discrete)",
                lineno,
            )
        lane_count: int | None = None
        if len(parts) == 3:
            try:
                lane_count = int(parts[2])
            except ValueError:
                raise ConfigSyntaxError(f"lane count {parts[2]!r} is not an integer", lineno)
        tuples.append(MappingTuple(style=style, attribute=attribute,
                                   mapping=mapping, lane_count=lane_count))
    return MappingConfig(tuples=tuple(tuples), text_lane_order=order)
