"""Reading and writing the pm3d-1 XML process format.

The accepted subset (documented construct by construct in docs/format.md):

    description > (call | parallel | choose | loop)*
    call > argument*
    parallel > parallel_branch+     parallel_branch > flow elements
    choose > alternative+           alternative > flow elements
    loop > flow elements

``parse`` builds a small element tree via expat so every error and warning
carries a source line number, then lowers it through the block tree to a
ProcessModel.  ``serialize`` is its inverse and writes canonical bytes:
identical models produce identical documents.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from xml.parsers import expat
from xml.sax.saxutils import quoteattr

from . import blocks
from .model import ArgumentValue, NumericValue, ProcessModel, TextValue


class ParseError(ValueError):
    """Base for all rejections of an input document; carries a line number."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line

    def __str__(self) -> str:
        base = super().__str__()
        return base if self.line is None else f"line {self.line}: {base}"


class MalformedXml(ParseError):
    """Input is not well-formed XML."""


class UnknownElement(ParseError):
    """An element outside the documented vocabulary appeared."""


class UnbalancedBlock(ParseError):
    """A known element appeared where the block grammar forbids it."""


class InvalidDocument(ParseError):
    """Well-formed XML that still breaks a document-level rule."""


@dataclass(frozen=True)
class ParseDiagnostics:
    warnings: tuple[tuple[int, str], ...] = ()
    source_name: str = "<string>"


# A value is numeric iff: optional sign, digits, optional decimal part,
# then optionally whitespace and a single unit token.  Anything else,
# including leading/trailing whitespace, stays text.
_NUMERIC = re.compile(r"([+-]?\d+(?:\.\d+)?)(?:\s+(\S+))?\Z")


def detect_value(raw: str) -> ArgumentValue:
    """Classify one argument value string as numeric-with-unit or text."""
    m = _NUMERIC.match(raw)
    if m is None:
        return TextValue(raw)
    return NumericValue(value=float(m.group(1)), unit=m.group(2))


def format_number(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    s = repr(x)
    if "e" in s or "E" in s:
        s = format(x, ".17f").rstrip("0").rstrip(".")
    return s


def format_value(value: ArgumentValue) -> str:
    """Render a value the way the XML format spells it."""
    if isinstance(value, NumericValue):
        text = format_number(value.value)
        return f"{text} {value.unit}" if value.unit else text
    return value.value


@dataclass
class _Elem:
    tag: str
    attrs: dict[str, str]
    line: int
    children: list["_Elem"]


_FLOW_TAGS = ("call", "parallel", "choose", "loop")
_VOCAB = {"description", "call", "argument", "parallel", "parallel_branch",
          "choose", "alternative", "loop"}
_ALLOWED_ATTRS = {
    "description": {"name", "start", "end"},
    "call": {"id", "label"},
    "argument": {"name", "value"},
    "parallel": {"id", "join", "label"},
    "parallel_branch": set(),
    "choose": {"id", "join", "label"},
    "alternative": {"condition"},
    "loop": {"id", "tail", "label"},
}


def _read_tree(xml_text: str) -> _Elem:
    parser = expat.ParserCreate()
    parser.buffer_text = True
    stack: list[_Elem] = []
    root: list[_Elem] = []

    def start(tag: str, attrs: dict[str, str]) -> None:
        elem = _Elem(tag=tag, attrs=attrs, line=parser.CurrentLineNumber, children=[])
        if stack:
            stack[-1].children.append(elem)
        else:
            root.append(elem)
        stack.append(elem)

    def end(tag: str) -> None:
        stack.pop()

    def text(data: str) -> None:
        if data.strip():
            raise InvalidDocument(
                f"stray text {data.strip()[:30]!r} between elements",
                parser.CurrentLineNumber,
            )

    def entity_decl(*args) -> None:
        raise InvalidDocument("entity declarations are not supported",
                              parser.CurrentLineNumber)

    parser.StartElementHandler = start
    parser.EndElementHandler = end
    parser.CharacterDataHandler = text
    parser.EntityDeclHandler = entity_decl
    try:
        parser.Parse(xml_text, True)
    except expat.ExpatError as exc:
        raise MalformedXml(expat.errors.messages[exc.code], exc.lineno) from exc
    if not root:
        raise MalformedXml("document has no root element", 1)
    return root[0]


def _check_attrs(elem: _Elem, warnings: list[tuple[int, str]]) -> None:
    allowed = _ALLOWED_ATTRS[elem.tag]
    for key in elem.attrs:
        if key not in allowed:
            warnings.append((elem.line, f"ignoring attribute {key!r} on <{elem.tag}>"))


def _reject_child(parent: _Elem, child: _Elem) -> ParseError:
    if child.tag not in _VOCAB:
        return UnknownElement(f"unknown element <{child.tag}>", child.line)
    return UnbalancedBlock(
        f"<{child.tag}> is not allowed inside <{parent.tag}>", child.line
    )


def _translate_flow(parent: _Elem, warnings: list[tuple[int, str]]) -> list[blocks.Block]:
    out: list[blocks.Block] = []
    for child in parent.children:
        if child.tag not in _FLOW_TAGS:
            raise _reject_child(parent, child)
        _check_attrs(child, warnings)
        if child.tag == "call":
            arguments: dict[str, ArgumentValue] = {}
            for arg in child.children:
                if arg.tag != "argument":
                    raise _reject_child(child, arg)
                _check_attrs(arg, warnings)
                if "name" not in arg.attrs or "value" not in arg.attrs:
                    raise InvalidDocument(
                        "<argument> requires both name and value", arg.line
                    )
                name = arg.attrs["name"]
                if name in arguments:
                    warnings.append((arg.line, f"argument {name!r} repeated; keeping the last value"))
                arguments[name] = detect_value(arg.attrs["value"])
            out.append(blocks.TaskBlock(
                label=child.attrs.get("label", ""),
                arguments=arguments,
                id=child.attrs.get("id"),
            ))
        elif child.tag == "parallel" or child.tag == "choose":
            branch_tag = "parallel_branch" if child.tag == "parallel" else "alternative"
            branches: list[tuple[blocks.Block, ...]] = []
            for branch in child.children:
                if branch.tag != branch_tag:
                    raise _reject_child(child, branch)
                _check_attrs(branch, warnings)
                body = _translate_flow(branch, warnings)
                if branch_tag == "alternative" and "condition" in branch.attrs:
                    body = _attach_condition(body, branch.attrs["condition"],
                                             branch.line, warnings)
                branches.append(tuple(body))
            if not branches:
                raise UnbalancedBlock(
                    f"<{child.tag}> needs at least one <{branch_tag}>", child.line
                )
            cls = blocks.ParallelBlock if child.tag == "parallel" else blocks.XorBlock
            out.append(cls(
                branches=tuple(branches),
                id=child.attrs.get("id"),
                join_id=child.attrs.get("join"),
                label=child.attrs.get("label", ""),
            ))
        else:  # loop
            body = _translate_flow(child, warnings)
            out.append(blocks.LoopBlock(
                body=tuple(body),
                id=child.attrs.get("id"),
                tail_id=child.attrs.get("tail"),
                label=child.attrs.get("label", ""),
            ))
    return out


def _attach_condition(body: list[blocks.Block], condition: str, line: int,
                      warnings: list[tuple[int, str]]) -> list[blocks.Block]:
    """Fold an alternative's condition into the label of its first node.

    The condition is presentation sugar: it survives as a plain label, so
    a serialized model spells it as that label rather than a condition.
    """
    if not body:
        warnings.append((line, "condition on an empty alternative is dropped"))
        return body
    first = body[0]
    if first.label:
        warnings.append((
            line,
            f"condition conflicts with the label {first.label!r} of the first node; label kept",
        ))
        return body
    return [replace(first, label=condition)] + body[1:]


def _collect_explicit_ids(root: _Elem) -> None:
    claims: dict[str, int] = {}

    def claim(node_id: str, line: int) -> None:
        if node_id in claims:
            raise InvalidDocument(
                f"node id {node_id!r} already used on line {claims[node_id]}", line
            )
        claims[node_id] = line

    claim(root.attrs.get("start", "start"), root.line)
    claim(root.attrs.get("end", "end"), root.line)

    def visit(elem: _Elem) -> None:
        pairs = ()
        if elem.tag == "call":
            pairs = ("id",)
        elif elem.tag in ("parallel", "choose"):
            pairs = ("id", "join")
        elif elem.tag == "loop":
            pairs = ("id", "tail")
        for key in pairs:
            if key in elem.attrs:
                claim(elem.attrs[key], elem.line)
        for child in elem.children:
            visit(child)

    for child in root.children:
        visit(child)


def parse(xml_text: str, source_name: str = "<string>") -> tuple[ProcessModel, ParseDiagnostics]:
    """Read a pm3d-1 document into a ProcessModel plus diagnostics.

    Raises MalformedXml, UnknownElement, UnbalancedBlock or InvalidDocument,
    each pointing at the offending source line.  Warnings never change the
    parsed model.
    """
    blocks.ensure_recursion_headroom()
    root = _read_tree(xml_text)
    if root.tag != "description":
        if root.tag not in _VOCAB:
            raise UnknownElement(f"unknown element <{root.tag}>", root.line)
        raise UnbalancedBlock(f"root element must be <description>, not <{root.tag}>", root.line)
    warnings: list[tuple[int, str]] = []
    _check_attrs(root, warnings)
    _collect_explicit_ids(root)
    tree = _translate_flow(root, warnings)
    model = blocks.build_model(
        tree,
        name=root.attrs.get("name", "process"),
        start_id=root.attrs.get("start", "start"),
        end_id=root.attrs.get("end", "end"),
    )
    return model, ParseDiagnostics(warnings=tuple(warnings), source_name=source_name)


def _attr(name: str, value: str) -> str:
    return f" {name}={quoteattr(value)}"


def _write_blocks(tree: tuple[blocks.Block, ...], indent: int, out: list[str]) -> None:
    pad = "  " * indent
    for block in tree:
        if isinstance(block, blocks.TaskBlock):
            head = f"{pad}<call{_attr('id', block.id)}"
            if block.label:
                head += _attr("label", block.label)
            if block.arguments:
                out.append(head + ">")
                for name, value in block.arguments.items():
                    out.append(
                        f"{pad}  <argument{_attr('name', name)}{_attr('value', format_value(value))}/>"
                    )
                out.append(f"{pad}</call>")
            else:
                out.append(head + "/>")
        elif isinstance(block, blocks.LoopBlock):
            head = f"{pad}<loop{_attr('id', block.id)}{_attr('tail', block.tail_id)}"
            if block.label:
                head += _attr("label", block.label)
            if block.body:
                out.append(head + ">")
                _write_blocks(block.body, indent + 1, out)
                out.append(f"{pad}</loop>")
            else:
                out.append(head + "/>")
        else:
            parallel = isinstance(block, blocks.ParallelBlock)
            tag = "parallel" if parallel else "choose"
            branch_tag = "parallel_branch" if parallel else "alternative"
            head = f"{pad}<{tag}{_attr('id', block.id)}{_attr('join', block.join_id)}"
            if block.label:
                head += _attr("label", block.label)
            out.append(head + ">")
            for branch in block.branches:
                if branch:
                    out.append(f"{pad}  <{branch_tag}>")
                    _write_blocks(branch, indent + 2, out)
                    out.append(f"{pad}  </{branch_tag}>")
                else:
                    out.append(f"{pad}  <{branch_tag}/>")
            out.append(f"{pad}</{tag}>")


def serialize(model: ProcessModel) -> str:
    """Write a model as canonical pm3d-1 XML.

    All node ids are written explicitly, so parse(serialize(m)) reproduces
    m structurally.  Labels on join/tail nodes have no spelling in the
    format and would be dropped; neither the parser nor the generator ever
    produces them.
    """
    blocks.ensure_recursion_headroom()
    tree = blocks.reconstruct(model)
    head = "<description"
    if model.name != "process":
        head += _attr("name", model.name)
    start_id = model.start_node().id
    end_id = model.end_node().id
    if start_id != "start":
        head += _attr("start", start_id)
    if end_id != "end":
        head += _attr("end", end_id)
    lines = ['<?xml version="1.0" encoding="UTF-8"?>']
    if tree:
        lines.append(head + ">")
        _write_blocks(tree, 1, lines)
        lines.append("</description>")
    else:
        lines.append(head + "/>")
    return "\n".join(lines) + "\n"
