"""Block tree view of a process: nested sequence / parallel / xor / loop.

The flat node graph in :mod:`pm3d.model` and the block tree here are two
views of the same structure.  ``build_model`` lowers a tree to a graph,
assigning ids where the caller left them out; ``reconstruct`` recovers the
tree from a graph by recursive descent and raises ``NotBlockStructured``
when the graph does not nest properly.  Layout and serialization both work
on the tree, everything else on the graph.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence, Union

from .model import ArgumentValue, Node, NodeKind, ProcessModel

# Nested models from the generator can reach a few hundred levels; the
# default interpreter limit is too tight for descent over such trees.
_RECURSION_HEADROOM = 20000


def ensure_recursion_headroom() -> None:
    if sys.getrecursionlimit() < _RECURSION_HEADROOM:
        sys.setrecursionlimit(_RECURSION_HEADROOM)


class NotBlockStructured(ValueError):
    """The node graph cannot be expressed as properly nested blocks."""


@dataclass(frozen=True)
class TaskBlock:
    label: str = ""
    arguments: Mapping[str, ArgumentValue] = field(default_factory=dict)
    id: str | None = None


@dataclass(frozen=True)
class ParallelBlock:
    branches: tuple[tuple["Block", ...], ...]
    id: str | None = None
    join_id: str | None = None
    label: str = ""


@dataclass(frozen=True)
class XorBlock:
    branches: tuple[tuple["Block", ...], ...]
    id: str | None = None
    join_id: str | None = None
    label: str = ""


@dataclass(frozen=True)
class LoopBlock:
    body: tuple["Block", ...]
    id: str | None = None
    tail_id: str | None = None
    label: str = ""


Block = Union[TaskBlock, ParallelBlock, XorBlock, LoopBlock]


def walk(blocks: Sequence[Block]) -> Iterator[Block]:
    """Yield every block of a tree in document order (parents first)."""
    for block in blocks:
        yield block
        if isinstance(block, (ParallelBlock, XorBlock)):
            for branch in block.branches:
                yield from walk(branch)
        elif isinstance(block, LoopBlock):
            yield from walk(block.body)


class _IdAllocator:
    """Hands out ids like t3 or p1.split, skipping ids already claimed."""

    def __init__(self, taken: set[str]):
        self.taken = taken
        self.counters: dict[str, int] = {}

    def claim(self, explicit: str | None, family: str, suffix: str = "") -> str:
        if explicit is not None:
            return explicit
        while True:
            self.counters[family] = self.counters.get(family, 0) + 1
            candidate = f"{family}{self.counters[family]}{suffix}"
            if candidate not in self.taken:
                self.taken.add(candidate)
                return candidate


def build_model(
    blocks: Sequence[Block],
    name: str = "process",
    start_id: str = "start",
    end_id: str = "end",
) -> ProcessModel:
    """Lower a block tree to a ProcessModel.

    Nodes appear in document order: start, then each block's nodes depth
    first (split, branch contents, join), then end.  Blocks without
    explicit ids get deterministic generated ones (t1..., p1.split/p1.join,
    x1.split/x1.join, l1.head/l1.tail); explicit ids are never rewritten.
    Duplicate explicit ids raise ValueError.
    """
    ensure_recursion_headroom()
    explicit = [start_id, end_id]
    for block in walk(blocks):
        if isinstance(block, TaskBlock):
            if block.id is not None:
                explicit.append(block.id)
        elif isinstance(block, LoopBlock):
            for one in (block.id, block.tail_id):
                if one is not None:
                    explicit.append(one)
        else:
            for one in (block.id, block.join_id):
                if one is not None:
                    explicit.append(one)
    seen: set[str] = set()
    for one in explicit:
        if one in seen:
            raise ValueError(f"duplicate node id {one!r}")
        seen.add(one)

    alloc = _IdAllocator(seen)
    order: list[tuple[str, NodeKind, str, Mapping[str, ArgumentValue]]] = []
    after: dict[str, set[str]] = {}
    before: dict[str, set[str]] = {}

    def link(a: str, b: str) -> None:
        after.setdefault(a, set()).add(b)
        before.setdefault(b, set()).add(a)

    def emit(node_id: str, kind: NodeKind, label: str = "",
             arguments: Mapping[str, ArgumentValue] | None = None) -> None:
        order.append((node_id, kind, label, dict(arguments or {})))

    def derive(explicit: str | None, primary: str, old_suffix: str, new_suffix: str) -> str:
        """Closing id for a block: explicit, else the opener's id re-suffixed."""
        if explicit is not None:
            return explicit
        stem = primary[: -len(old_suffix)] if primary.endswith(old_suffix) else primary
        candidate = stem + new_suffix
        if candidate in seen:
            return alloc.claim(None, candidate + "-")
        seen.add(candidate)
        return candidate

    def lay_sequence(seq: Sequence[Block], entry: str) -> str:
        """Emit a sequence's nodes; returns the id its last node exits from."""
        cursor = entry
        for block in seq:
            if isinstance(block, TaskBlock):
                node_id = alloc.claim(block.id, "t")
                emit(node_id, NodeKind.TASK, block.label, block.arguments)
                link(cursor, node_id)
                cursor = node_id
            elif isinstance(block, LoopBlock):
                head = alloc.claim(block.id, "l", ".head")
                tail = derive(block.tail_id, head, ".head", ".tail")
                emit(head, NodeKind.LOOP_HEAD, block.label)
                link(cursor, head)
                exit_id = lay_sequence(block.body, head)
                emit(tail, NodeKind.LOOP_TAIL)
                link(exit_id, tail)
                cursor = tail
            else:
                parallel = isinstance(block, ParallelBlock)
                split = alloc.claim(block.id, "p" if parallel else "x", ".split")
                join = derive(block.join_id, split, ".split", ".join")
                split_kind = NodeKind.PARALLEL_SPLIT if parallel else NodeKind.XOR_SPLIT
                join_kind = NodeKind.PARALLEL_JOIN if parallel else NodeKind.XOR_JOIN
                emit(split, split_kind, block.label)
                link(cursor, split)
                exits = [lay_sequence(branch, split) for branch in block.branches]
                emit(join, join_kind)
                for exit_id in exits:
                    link(exit_id, join)
                cursor = join
        return cursor

    emit(start_id, NodeKind.START)
    last = lay_sequence(blocks, start_id)
    emit(end_id, NodeKind.END)
    link(last, end_id)

    nodes = tuple(
        Node(
            id=node_id,
            kind=kind,
            label=label,
            before=frozenset(before.get(node_id, ())),
            after=frozenset(after.get(node_id, ())),
            arguments=arguments,
        )
        for node_id, kind, label, arguments in order
    )
    return ProcessModel.build(nodes, name=name)


_SPLIT_OF = {
    NodeKind.PARALLEL_JOIN: NodeKind.PARALLEL_SPLIT,
    NodeKind.XOR_JOIN: NodeKind.XOR_SPLIT,
    NodeKind.LOOP_TAIL: NodeKind.LOOP_HEAD,
}


def reconstruct(model: ProcessModel) -> tuple[Block, ...]:
    """Recover the block tree of a valid model.

    Branches of a split are ordered by the node-list index of their first
    node; an empty branch (split linked straight to the join) orders last.
    Raises NotBlockStructured when descent cannot consume the graph as
    nested blocks or leaves nodes unvisited.
    """
    ensure_recursion_headroom()
    visited: set[str] = set()

    def successors(node: Node) -> list[str]:
        return sorted(node.after, key=model.node_index)

    def descend(cursor: str) -> tuple[list[Block], str]:
        """Consume blocks until a join-kind or End node; returns (blocks, stopper)."""
        out: list[Block] = []
        while True:
            node = model.get_node(cursor)
            if node is None:
                raise NotBlockStructured(f"edge to unknown node {cursor!r}")
            if node.kind is NodeKind.END or node.kind.is_join:
                return out, cursor
            visited.add(cursor)
            succ = successors(node)
            if node.kind is NodeKind.TASK or node.kind is NodeKind.START:
                if len(succ) != 1:
                    raise NotBlockStructured(
                        f"{node.kind.value} node {node.id!r} must have exactly one successor, has {len(succ)}"
                    )
                if node.kind is NodeKind.TASK:
                    out.append(TaskBlock(label=node.label, arguments=dict(node.arguments), id=node.id))
                cursor = succ[0]
            elif node.kind is NodeKind.LOOP_HEAD:
                if len(succ) != 1:
                    raise NotBlockStructured(
                        f"loop head {node.id!r} must have exactly one successor, has {len(succ)}"
                    )
                body, stopper = descend(succ[0])
                tail = model.get_node(stopper)
                if tail is None or tail.kind is not NodeKind.LOOP_TAIL:
                    raise NotBlockStructured(f"loop head {node.id!r} is not closed by a loop tail")
                visited.add(tail.id)
                out.append(LoopBlock(body=tuple(body), id=node.id, tail_id=tail.id,
                                     label=node.label))
                tail_succ = successors(tail)
                if len(tail_succ) != 1:
                    raise NotBlockStructured(
                        f"loop tail {tail.id!r} must have exactly one successor, has {len(tail_succ)}"
                    )
                cursor = tail_succ[0]
            elif node.kind.is_split:
                if not succ:
                    raise NotBlockStructured(f"split {node.id!r} has no outgoing branches")
                branches: list[tuple[Block, ...]] = []
                join_id: str | None = None
                for first in succ:
                    body, stopper = descend(first)
                    if join_id is None:
                        join_id = stopper
                    elif stopper != join_id:
                        raise NotBlockStructured(
                            f"branches of {node.id!r} converge on different nodes "
                            f"({join_id!r} vs {stopper!r})"
                        )
                    branches.append(tuple(body))
                join = model.get_node(join_id)
                if join is None or join.kind is not node.kind.matching_join:
                    raise NotBlockStructured(
                        f"split {node.id!r} is closed by {join_id!r}, not a matching join"
                    )
                visited.add(join.id)
                cls = ParallelBlock if node.kind is NodeKind.PARALLEL_SPLIT else XorBlock
                out.append(cls(branches=tuple(branches), id=node.id, join_id=join.id,
                               label=node.label))
                join_succ = successors(join)
                if len(join_succ) != 1:
                    raise NotBlockStructured(
                        f"join {join.id!r} must have exactly one successor, has {len(join_succ)}"
                    )
                cursor = join_succ[0]
            else:  # pragma: no cover - kinds are exhaustive above
                raise NotBlockStructured(f"unexpected node kind {node.kind.value}")

    start = None
    for node in model.nodes:
        if node.kind is NodeKind.START:
            start = node
            break
    if start is None:
        raise NotBlockStructured("model has no start node")
    blocks, stopper = descend(start.id)
    stop_node = model.get_node(stopper)
    if stop_node is None or stop_node.kind is not NodeKind.END:
        raise NotBlockStructured(f"main sequence ends at {stopper!r}, not the end node")
    visited.add(stopper)
    if len(visited) != len(model.nodes):
        missing = sorted(n.id for n in model.nodes if n.id not in visited)
        raise NotBlockStructured(f"unreachable nodes: {', '.join(missing)}")
    return tuple(blocks)
