"""Seeded random process-model generator.

Given a node count, a control-flow element count and an argument count,
produce a valid block-structured model: the requested number of tasks,
exactly that many parallel/xor/loop blocks nested by uniform insertion,
and per-task argument bags with 80% presence per attribute.  The same
seed always yields the same model; the construction and its exact PRNG
call order are documented in docs/generator.md so other implementations
can reproduce it.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import blocks
from .model import ArgumentValue, NumericValue, ProcessModel, TextValue
from .prng import XorShift64Star

TEXT_POOL = ("alpha", "beta", "gamma", "delta")
PRESENCE_PCT = 80

_PARALLEL, _XOR, _LOOP = 0, 1, 2


class InvalidSpec(ValueError):
    pass


@dataclass(frozen=True)
class GenSpec:
    nodes: int
    control_flow_elements: int = 0
    arguments: int = 0
    seed: int = 0


@dataclass
class _GenBlock:
    kind: int
    parts: list  # 2 branch lists for parallel/xor, 1 body list for loop


def _validate(spec: GenSpec) -> None:
    if spec.nodes < 1:
        raise InvalidSpec(f"nodes must be at least 1, got {spec.nodes}")
    if spec.control_flow_elements < 0:
        raise InvalidSpec("control_flow_elements must not be negative")
    if spec.arguments < 0:
        raise InvalidSpec("arguments must not be negative")
    if spec.control_flow_elements > spec.nodes:
        raise InvalidSpec(
            f"control_flow_elements ({spec.control_flow_elements}) must not exceed "
            f"nodes ({spec.nodes}): every block needs a body node"
        )
    if not 0 <= spec.seed < (1 << 64):
        raise InvalidSpec("seed must be an unsigned 64-bit integer")


def _walk_slots(seq: list) -> list[int]:
    out: list[int] = []
    stack = [iter(seq)]
    while stack:
        try:
            item = next(stack[-1])
        except StopIteration:
            stack.pop()
            continue
        if isinstance(item, int):
            out.append(item)
        else:
            for part in reversed(item.parts):
                stack.append(iter(part))
    return out


def generate(spec: GenSpec) -> ProcessModel:
    """Produce the model a spec describes; raises InvalidSpec otherwise."""
    _validate(spec)
    rng = XorShift64Star(spec.seed)

    # Tree construction: task slots 0..N-1 in a root sequence; each block
    # insertion wraps a random run of items in a random nonempty sequence.
    root: list = list(range(spec.nodes))
    seqs: list[list] = [root]
    for _ in range(spec.control_flow_elements):
        kind = rng.below(3)
        candidates = [s for s in seqs if s]
        seq = candidates[rng.below(len(candidates))]
        start = rng.below(len(seq))
        length = 1 + rng.below(len(seq) - start)
        run = seq[start:start + length]
        if kind == _LOOP:
            block = _GenBlock(kind, [run])
            seqs.append(run)
        else:
            if length >= 2:
                cut = 1 + rng.below(length - 1)
                first, second = run[:cut], run[cut:]
            else:
                first, second = run, []
            block = _GenBlock(kind, [first, second])
            seqs.append(first)
            seqs.append(second)
        seq[start:start + length] = [block]

    # Argument assignment over tasks in tree order, attribute-major.
    order = _walk_slots(root)
    position_of = {slot: k for k, slot in enumerate(order)}
    bags: list[dict[str, ArgumentValue]] = [{} for _ in order]

    def draw_value(index: int) -> ArgumentValue:
        if index % 2 == 0:
            return NumericValue(float(1 + rng.below(100)))
        return TextValue(TEXT_POOL[rng.below(len(TEXT_POOL))])

    for a in range(spec.arguments):
        name = f"attr{a}"
        hit = False
        for k in range(spec.nodes):
            if rng.below(100) < PRESENCE_PCT:
                bags[k][name] = draw_value(a)
                hit = True
        if not hit:
            # Guarantee every requested attribute exists on some node.
            bags[a % spec.nodes][name] = draw_value(a)

    def convert(seq: list) -> tuple[blocks.Block, ...]:
        out: list[blocks.Block] = []
        for item in seq:
            if isinstance(item, int):
                k = position_of[item]
                out.append(blocks.TaskBlock(label=f"Task {k + 1}", arguments=bags[k]))
            elif item.kind == _LOOP:
                out.append(blocks.LoopBlock(body=convert(item.parts[0])))
            else:
                cls = blocks.ParallelBlock if item.kind == _PARALLEL else blocks.XorBlock
                out.append(cls(branches=(convert(item.parts[0]), convert(item.parts[1]))))
        return tuple(out)

    blocks.ensure_recursion_headroom()
    name = (f"generated-n{spec.nodes}-c{spec.control_flow_elements}"
            f"-a{spec.arguments}-s{spec.seed}")
    return blocks.build_model(convert(root), name=name)
