"""Single command-line entry point: pm3d <subcommand>.

Subcommands: parse (read + summarize + optionally validate), generate
(random model to XML), scene (XML + mapping config to a scene file),
bench (pipeline timing ladder), serve (HTTP service).  `-` means stdin
or stdout for XML and scene payloads.

Exit codes: 0 success, 1 validation or configuration problems, 2 I/O
problems (argparse usage errors also exit 2).  Set PM3D_LOG to a level
name (debug, info, warning, error) for diagnostic logging.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .bench import DEFAULT_ARGS, DEFAULT_LADDER, DEFAULT_RUNS, DEFAULT_SEED
from .bench import report_text, run_benchmark
from .blocks import NotBlockStructured
from .generator import GenSpec, InvalidSpec, generate
from .layout import layout
from .mapping import ConfigSyntaxError, parse_config, swim_lanes, validate_config, resolve
from .model import NodeKind, validate
from .parser import ParseError, parse, serialize
from .scene import build_scene, scene_to_json

log = logging.getLogger("pm3d")


class CliFailure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _configure_logging() -> None:
    level_name = os.environ.get("PM3D_LOG", "").strip()
    if level_name:
        level = getattr(logging, level_name.upper(), None)
        if isinstance(level, int):
            logging.basicConfig(level=level)


def _read_text(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliFailure(2, f"cannot read {path}: {exc}") from exc


def _write_text(path: str, text: str) -> None:
    try:
        if path == "-":
            sys.stdout.write(text)
        else:
            Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliFailure(2, f"cannot write {path}: {exc}") from exc


def _parse_model(path: str):
    text = _read_text(path)
    try:
        return parse(text, source_name=path)
    except ParseError as exc:
        raise CliFailure(1, f"{path}: {exc}") from exc


def _print_warnings(path: str, diagnostics) -> None:
    for line, message in diagnostics.warnings:
        print(f"{path}:{line}: warning: {message}", file=sys.stderr)


def _cmd_parse(args: argparse.Namespace) -> int:
    model, diagnostics = _parse_model(args.file)
    _print_warnings(args.file, diagnostics)
    counts: dict[str, int] = {}
    for node in model.nodes:
        counts[node.kind.value] = counts.get(node.kind.value, 0) + 1
    print(f"name: {model.name}")
    print(f"nodes: {len(model.nodes)} ("
          + ", ".join(f"{kind.value} {counts[kind.value]}"
                      for kind in NodeKind if kind.value in counts) + ")")
    if model.attribute_index:
        print("attributes:")
        for name, info in model.attribute_index.items():
            print(f"  {name}: {info.kind.value}, {len(info.carriers)} carrier(s)")
    else:
        print("attributes: none")
    if args.check:
        violations = validate(model)
        for v in violations:
            where = f" [{v.node_id}]" if v.node_id else ""
            print(f"violation: {v.rule}{where}: {v.message}", file=sys.stderr)
        if violations:
            raise CliFailure(1, f"{len(violations)} violation(s)")
        print("validation: ok")
    return 0


def _cmd_generate(args: argparse.Namespace) -> int:
    try:
        model = generate(GenSpec(
            nodes=args.nodes,
            control_flow_elements=args.cf,
            arguments=args.args,
            seed=args.seed,
        ))
    except InvalidSpec as exc:
        raise CliFailure(1, str(exc)) from exc
    _write_text(args.output, serialize(model))
    return 0


def _cmd_scene(args: argparse.Namespace) -> int:
    model, diagnostics = _parse_model(args.input)
    _print_warnings(args.input, diagnostics)
    config_text = _read_text(args.config)
    try:
        config = parse_config(config_text)
    except ConfigSyntaxError as exc:
        raise CliFailure(1, f"{args.config}: {exc}") from exc
    violations = validate_config(model, config)
    if violations:
        for v in violations:
            print(f"config error [{v.rule}]: {v.message}", file=sys.stderr)
        raise CliFailure(1, f"{len(violations)} config violation(s)")
    resolved = resolve(model, config)
    lanes = swim_lanes(model, config)
    placements, connectors, lanes_out = layout(model, resolved, lanes)
    scene = build_scene(model, placements, connectors, lanes_out, config,
                        backdrop=args.backdrop)
    _write_text(args.output, scene_to_json(scene))
    summary_stream = sys.stderr if args.output == "-" else sys.stdout
    print(
        f"scene: {len(model.nodes)} node(s), {len(connectors)} connector(s), "
        f"{len(lanes_out)} lane(s), legend {'on' if scene.legend else 'off'}",
        file=summary_stream,
    )
    return 0


def _parse_ladder(text: str) -> list[tuple[int, int]]:
    if text == "default":
        return list(DEFAULT_LADDER)
    ladder = []
    for part in text.split(","):
        part = part.strip()
        try:
            nodes_text, cf_text = part.split(":")
            ladder.append((int(nodes_text), int(cf_text)))
        except ValueError:
            raise CliFailure(1, f"bad ladder entry {part!r}; expected NODES:CF")
    if not ladder:
        raise CliFailure(1, "empty ladder")
    return ladder


def _cmd_bench(args: argparse.Namespace) -> int:
    ladder = _parse_ladder(args.ladder)
    try:
        report = run_benchmark(
            sizes=ladder, runs=args.runs, args=args.args, seed=args.seed,
            progress=lambda line: print(line, file=sys.stderr),
        )
    except (ValueError, InvalidSpec) as exc:
        raise CliFailure(1, str(exc)) from exc
    _write_text(args.output, report_text(report))
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    try:
        host, port_text = args.addr.rsplit(":", 1)
        port = int(port_text)
    except ValueError:
        raise CliFailure(1, f"bad address {args.addr!r}; expected HOST:PORT")
    app = create_app(capacity=args.capacity, max_bytes=args.max_bytes,
                     ui_dir=args.ui)
    uvicorn.run(app, host=host, port=port,
                log_level=os.environ.get("PM3D_LOG", "info").lower())
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="pm3d",
        description="Process model visualization toolkit: parse, generate, "
                    "lay out and serve 3D scenes.",
    )
    sub = top.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("parse", help="read a process XML file and summarize it")
    p.add_argument("file", help="input XML path, or - for stdin")
    p.add_argument("--check", action="store_true",
                   help="run the full model validation and report violations")
    p.set_defaults(func=_cmd_parse)

    p = sub.add_parser("generate", help="emit a seeded random process model as XML")
    p.add_argument("--nodes", type=int, required=True, help="number of task nodes")
    p.add_argument("--cf", type=int, default=0,
                   help="number of control-flow blocks (parallel/xor/loop)")
    p.add_argument("--args", type=int, default=0, help="number of attribute names")
    p.add_argument("--seed", type=int, default=0, help="64-bit generator seed")
    p.add_argument("-o", "--output", default="-", help="output path, or - for stdout")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("scene", help="compute a 3D scene from a model and a mapping config")
    p.add_argument("input", help="process XML path, or - for stdin")
    p.add_argument("config", help="mapping config path")
    p.add_argument("-o", "--output", default="-", help="scene output path, or - for stdout")
    p.add_argument("--backdrop", choices=("none", "grid", "room"), default="none")
    p.set_defaults(func=_cmd_scene)

    p = sub.add_parser("bench", help="run the pipeline timing ladder")
    p.add_argument("--ladder", default="default",
                   help='"default" or comma-separated NODES:CF pairs')
    p.add_argument("--runs", type=int, default=DEFAULT_RUNS)
    p.add_argument("--args", type=int, default=DEFAULT_ARGS)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("-o", "--output", default="-", help="report path, or - for stdout")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--addr", default="127.0.0.1:8080", help="bind address HOST:PORT")
    p.add_argument("--capacity", type=int, default=64,
                   help="model store capacity (least recently used eviction)")
    p.add_argument("--max-bytes", type=int, default=1_000_000,
                   help="upload size limit in bytes")
    p.add_argument("--ui", default=None, help="directory of viewer assets to mount at /ui")
    p.set_defaults(func=_cmd_serve)

    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging()
    try:
        return args.func(args)
    except CliFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ParseError, ConfigSyntaxError, InvalidSpec, NotBlockStructured) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
