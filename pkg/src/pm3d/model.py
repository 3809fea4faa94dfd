"""Core domain types for parsed process models.

A process is a block-structured control-flow graph: task and gateway nodes
linked by directed forward edges, each node carrying an open-ended bag of
named argument values (durations, costs, roles, locations, services, ...).
Everything downstream (mapping, layout, scene emission) consumes these
types; they are immutable after construction and safe to share between
threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Mapping, Sequence


class NodeKind(Enum):
    """Control-flow role of a node, which also selects its 3D glyph."""

    START = "start"
    END = "end"
    TASK = "task"
    PARALLEL_SPLIT = "parallel-split"
    PARALLEL_JOIN = "parallel-join"
    XOR_SPLIT = "xor-split"
    XOR_JOIN = "xor-join"
    LOOP_HEAD = "loop-head"
    LOOP_TAIL = "loop-tail"

    @property
    def is_split(self) -> bool:
        return self in (NodeKind.PARALLEL_SPLIT, NodeKind.XOR_SPLIT, NodeKind.LOOP_HEAD)

    @property
    def is_join(self) -> bool:
        return self in (NodeKind.PARALLEL_JOIN, NodeKind.XOR_JOIN, NodeKind.LOOP_TAIL)

    @property
    def matching_join(self) -> "NodeKind":
        return _MATCHING_JOIN[self]


_MATCHING_JOIN = {
    NodeKind.PARALLEL_SPLIT: NodeKind.PARALLEL_JOIN,
    NodeKind.XOR_SPLIT: NodeKind.XOR_JOIN,
    NodeKind.LOOP_HEAD: NodeKind.LOOP_TAIL,
}


@dataclass(frozen=True)
class NumericValue:
    """A numeric argument value with an optional opaque unit label.

    Units are never converted or interpreted; "20 min" and "20 s" are just
    two different values whose numbers happen to be equal.
    """

    value: float
    unit: str | None = None


@dataclass(frozen=True)
class TextValue:
    value: str


ArgumentValue = NumericValue | TextValue


class AttributeKind(str, Enum):
    NUMERIC = "numeric"
    TEXT = "text"
    MIXED = "mixed"
    ABSENT = "absent"


@dataclass(frozen=True)
class Node:
    """One control-flow element with its immediate neighbours and arguments.

    ``before``/``after`` hold ids of the nodes immediately preceding and
    following along the *forward* control flow.  Loop back edges are not
    part of the adjacency: they are implied by the head/tail pairing, which
    keeps the graph acyclic and x-monotone for layout.
    """

    id: str
    kind: NodeKind
    label: str = ""
    before: frozenset[str] = frozenset()
    after: frozenset[str] = frozenset()
    arguments: Mapping[str, ArgumentValue] = field(default_factory=dict)


@dataclass(frozen=True)
class AttributeInfo:
    kind: AttributeKind
    carriers: frozenset[str]


@dataclass(frozen=True)
class Violation:
    """One broken model invariant; violations are data, never exceptions."""

    rule: str
    message: str
    node_id: str | None = None


def compute_attribute_index(nodes: Sequence[Node]) -> dict[str, AttributeInfo]:
    """Scan all nodes and index every attribute name by kind and carriers."""
    kinds: dict[str, AttributeKind] = {}
    carriers: dict[str, set[str]] = {}
    for node in nodes:
        for name, value in node.arguments.items():
            this = AttributeKind.NUMERIC if isinstance(value, NumericValue) else AttributeKind.TEXT
            seen = kinds.get(name)
            if seen is None:
                kinds[name] = this
            elif seen is not this:
                kinds[name] = AttributeKind.MIXED
            carriers.setdefault(name, set()).add(node.id)
    return {
        name: AttributeInfo(kind=kinds[name], carriers=frozenset(carriers[name]))
        for name in kinds
    }


@dataclass(frozen=True)
class ProcessModel:
    """An immutable process graph plus a derived per-attribute index."""

    nodes: tuple[Node, ...]
    name: str = "process"
    attribute_index: Mapping[str, AttributeInfo] = field(default_factory=dict)

    @classmethod
    def build(cls, nodes: Sequence[Node], name: str = "process") -> "ProcessModel":
        """Construct a model, computing the attribute index from the nodes."""
        nodes = tuple(nodes)
        return cls(nodes=nodes, name=name, attribute_index=compute_attribute_index(nodes))

    @cached_property
    def _by_id(self) -> dict[str, Node]:
        return {n.id: n for n in self.nodes}

    @cached_property
    def _order(self) -> dict[str, int]:
        return {n.id: i for i, n in enumerate(self.nodes)}

    def node(self, node_id: str) -> Node:
        return self._by_id[node_id]

    def get_node(self, node_id: str) -> Node | None:
        return self._by_id.get(node_id)

    def node_index(self, node_id: str) -> int:
        return self._order[node_id]

    def tasks(self) -> list[Node]:
        return [n for n in self.nodes if n.kind is NodeKind.TASK]

    def start_node(self) -> Node:
        return next(n for n in self.nodes if n.kind is NodeKind.START)

    def end_node(self) -> Node:
        return next(n for n in self.nodes if n.kind is NodeKind.END)


def attribute_kind(model: ProcessModel, name: str) -> AttributeKind:
    """Classify an attribute over all nodes that carry it.

    Numeric/text when every carrier agrees, mixed otherwise, absent when no
    node carries it.  Computed from the nodes, not the stored index, so it
    stays truthful even on hand-built inconsistent models.
    """
    kind: AttributeKind | None = None
    for node in model.nodes:
        value = node.arguments.get(name)
        if value is None:
            continue
        this = AttributeKind.NUMERIC if isinstance(value, NumericValue) else AttributeKind.TEXT
        if kind is None:
            kind = this
        elif kind is not this:
            return AttributeKind.MIXED
    return kind if kind is not None else AttributeKind.ABSENT


def validate(model: ProcessModel) -> list[Violation]:
    """Check every model invariant; empty result means the model is sound.

    Deterministic and side-effect free: violations are reported in a fixed
    order (per rule, then node order).
    """
    out: list[Violation] = []
    seen: set[str] = set()
    for node in model.nodes:
        if node.id in seen:
            out.append(Violation("duplicate-id", f"node id {node.id!r} used more than once", node.id))
        seen.add(node.id)

    by_id = {n.id: n for n in model.nodes}
    dup_free = len(by_id) == len(model.nodes)

    for node in model.nodes:
        for ref in sorted(node.before | node.after):
            if ref not in by_id:
                out.append(Violation("dangling-link", f"{node.id!r} links to unknown node {ref!r}", node.id))
    if dup_free:
        for node in model.nodes:
            for succ in sorted(node.after):
                peer = by_id.get(succ)
                if peer is not None and node.id not in peer.before:
                    out.append(Violation(
                        "asymmetric-link",
                        f"{node.id!r} lists {succ!r} after, but {succ!r} does not list it before",
                        node.id,
                    ))
            for pred in sorted(node.before):
                peer = by_id.get(pred)
                if peer is not None and node.id not in peer.after:
                    out.append(Violation(
                        "asymmetric-link",
                        f"{node.id!r} lists {pred!r} before, but {pred!r} does not list it after",
                        node.id,
                    ))

    starts = [n for n in model.nodes if n.kind is NodeKind.START]
    ends = [n for n in model.nodes if n.kind is NodeKind.END]
    if len(starts) != 1:
        out.append(Violation("start-count", f"expected exactly one start node, found {len(starts)}"))
    if len(ends) != 1:
        out.append(Violation("end-count", f"expected exactly one end node, found {len(ends)}"))
    for node in starts:
        if node.before:
            out.append(Violation("start-has-before", f"start node {node.id!r} has predecessors", node.id))
    for node in ends:
        if node.after:
            out.append(Violation("end-has-after", f"end node {node.id!r} has successors", node.id))

    for node in model.nodes:
        for name in node.arguments:
            value = node.arguments[name]
            if isinstance(value, NumericValue) and not math.isfinite(value.value):
                out.append(Violation(
                    "nonfinite-value",
                    f"argument {name!r} on {node.id!r} is not finite",
                    node.id,
                ))

    counts = {kind: 0 for kind in NodeKind}
    for node in model.nodes:
        counts[node.kind] += 1
    for split, join in _MATCHING_JOIN.items():
        if counts[split] != counts[join]:
            out.append(Violation(
                "unmatched-blocks",
                f"{counts[split]} {split.value} node(s) but {counts[join]} {join.value} node(s)",
            ))

    if model.attribute_index != compute_attribute_index(model.nodes):
        out.append(Violation("index-mismatch", "attribute index disagrees with recomputation from nodes"))

    # Full nesting check only makes sense once the basics hold.
    if not out:
        from .blocks import NotBlockStructured, reconstruct

        try:
            reconstruct(model)
        except NotBlockStructured as exc:
            out.append(Violation("not-block-structured", str(exc)))

    return out
