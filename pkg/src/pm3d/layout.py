"""3D auto-layout of a process graph.

Axis roles are fixed: X carries the control flow, Y carries structural
branch stacking plus any PositionY attribute offset, Z carries PositionZ
offsets only.  All distances are lane units; an unmapped node is a unit
box centered on its position.

Spacing along X places each element half-extents plus a 0.5 gap after its
predecessor, which is the classic 1.5-unit node pitch for unit boxes and
still guarantees clearance for scaled ones.  Branches of a block stack
upward: each branch's lowest box edge clears the highest edge so far by
the same 0.5 gap (for unit boxes: previous extent plus one lane).  Both
rules count attribute offsets and scales, which is what makes the global
no-overlap guarantee hold under every mapping.

Loop back edges are not part of the node adjacency; they are emitted here
as connectors routed over the top of the loop's extent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .blocks import (
    LoopBlock,
    ParallelBlock,
    TaskBlock,
    XorBlock,
    ensure_recursion_headroom,
    reconstruct,
)
from .mapping import Lane, ResolvedVisual
from .model import ProcessModel

GAP = 0.5


@dataclass(frozen=True)
class Placement:
    node_id: str
    position: tuple[float, float, float]
    size: tuple[float, float, float]
    labels: Mapping[str, str] = field(default_factory=dict)

    @property
    def min_corner(self) -> tuple[float, float, float]:
        return tuple(p - s / 2 for p, s in zip(self.position, self.size))

    @property
    def max_corner(self) -> tuple[float, float, float]:
        return tuple(p + s / 2 for p, s in zip(self.position, self.size))


@dataclass(frozen=True)
class Connector:
    source: str
    target: str
    kind: str = "arrow"
    waypoints: tuple[tuple[float, float, float], ...] = ()


class EmptyScene(ValueError):
    pass


def layout(
    model: ProcessModel,
    resolved: Mapping[str, ResolvedVisual],
    lanes: Sequence[Lane] = (),
) -> tuple[list[Placement], list[Connector], list[Lane]]:
    """Place every node and connector of a valid model.

    ``resolved`` normally covers every node; missing entries fall back to
    the default visual.  ``lanes`` is passed through untouched so callers
    can hand the full (placements, connectors, lanes) triple to the scene
    builder.  Deterministic: identical inputs give identical output.
    """
    ensure_recursion_headroom()
    tree = reconstruct(model)

    hx: dict[str, float] = {}
    hy: dict[str, float] = {}
    offy: dict[str, float] = {}
    offz: dict[str, float] = {}
    for node in model.nodes:
        r = resolved.get(node.id) or ResolvedVisual(node_id=node.id)
        hx[node.id] = r.scale[0] / 2
        hy[node.id] = r.scale[1] / 2
        offy[node.id] = r.offset_y
        offz[node.id] = r.offset_z

    pos: dict[str, list[float]] = {}
    placed_log: list[str] = []
    back_edges: list[tuple[str, str, float]] = []

    def place(node_id: str, x: float, y: float) -> None:
        pos[node_id] = [x, y]
        placed_log.append(node_id)

    def box_bottom(node_id: str) -> float:
        return pos[node_id][1] + offy[node_id] - hy[node_id]

    def box_top(node_id: str) -> float:
        return pos[node_id][1] + offy[node_id] + hy[node_id]

    def lay_seq(seq, right_edge: float, y_base: float) -> float:
        for block in seq:
            right_edge = lay_block(block, right_edge, y_base)
        return right_edge

    def lay_block(block, right_edge: float, y_base: float) -> float:
        if isinstance(block, TaskBlock):
            cx = right_edge + GAP + hx[block.id]
            place(block.id, cx, y_base)
            return cx + hx[block.id]
        if isinstance(block, LoopBlock):
            head, tail = block.id, block.tail_id
            cx = right_edge + GAP + hx[head]
            place(head, cx, y_base)
            span_start = len(placed_log) - 1
            body_right = lay_seq(block.body, cx + hx[head], y_base)
            cx_tail = body_right + GAP + hx[tail]
            place(tail, cx_tail, y_base)
            apex = max(box_top(i) for i in placed_log[span_start:]) + GAP
            back_edges.append((tail, head, apex))
            return cx_tail + hx[tail]
        # parallel or xor
        split, join = block.id, block.join_id
        cx = right_edge + GAP + hx[split]
        place(split, cx, y_base)
        split_right = cx + hx[split]
        running_top = box_top(split)
        max_right = split_right
        for index, branch in enumerate(block.branches):
            mark = len(placed_log)
            branch_right = lay_seq(branch, split_right, 0.0)
            ids = placed_log[mark:]
            if not ids:
                continue  # empty branch: the split links straight to the join
            if index == 0:
                delta = y_base
            else:
                delta = running_top + GAP - min(box_bottom(i) for i in ids)
            for node_id in ids:
                pos[node_id][1] += delta
            running_top = max(running_top, max(box_top(i) for i in ids))
            max_right = max(max_right, branch_right)
        cx_join = max_right + GAP + hx[join]
        place(join, cx_join, y_base)
        return cx_join + hx[join]

    start_id = model.start_node().id
    end_id = model.end_node().id
    place(start_id, 0.0, 0.0)
    right = lay_seq(tree, hx[start_id], 0.0)
    place(end_id, right + GAP + hx[end_id], 0.0)

    placements = []
    for node in model.nodes:
        r = resolved.get(node.id) or ResolvedVisual(node_id=node.id)
        x, y_struct = pos[node.id]
        placements.append(Placement(
            node_id=node.id,
            position=(x, y_struct + offy[node.id], offz[node.id]),
            size=r.scale,
            labels=r.face_labels,
        ))

    def final(node_id: str) -> tuple[float, float, float]:
        x, y_struct = pos[node_id]
        return x, y_struct + offy[node_id], offz[node_id]

    connectors = []
    for node in model.nodes:
        sx, sy, sz = final(node.id)
        for succ in sorted(node.after, key=model.node_index):
            tx, ty, tz = final(succ)
            connectors.append(Connector(
                source=node.id,
                target=succ,
                kind="arrow",
                waypoints=((sx + hx[node.id], sy, sz), (tx - hx[succ], ty, tz)),
            ))
    for tail, head, apex in back_edges:
        tail_x, tail_y, tail_z = final(tail)
        head_x, head_y, head_z = final(head)
        connectors.append(Connector(
            source=tail,
            target=head,
            kind="arrow",
            waypoints=(
                (tail_x, tail_y + hy[tail], tail_z),
                (tail_x, apex, tail_z),
                (head_x, apex, head_z),
                (head_x, head_y + hy[head], head_z),
            ),
        ))

    return placements, connectors, list(lanes)


def bounding_volume(
    placements: Sequence[Placement],
    connectors: Iterable[Connector] = (),
) -> tuple[tuple[float, float, float], tuple[float, float, float]]:
    """Tight axis-aligned box over all node boxes and connector waypoints."""
    points = []
    for p in placements:
        points.append(p.min_corner)
        points.append(p.max_corner)
    for c in connectors:
        points.extend(c.waypoints)
    if not points:
        raise EmptyScene("nothing to bound: no placements or waypoints")
    lo = tuple(min(pt[i] for pt in points) for i in range(3))
    hi = tuple(max(pt[i] for pt in points) for i in range(3))
    return lo, hi
