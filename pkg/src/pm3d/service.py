"""HTTP service backing the interactive viewer.

Holds uploaded models in a bounded in-memory store and recomputes scenes
per request from (stored model, posted config), so identical requests get
byte-identical payloads and the store never mutates a model.  Mapping
configs travel in request bodies in the same flat text format the CLI
reads; scenes go out as canonical scene3dviz-1 JSON.
"""

from __future__ import annotations

import threading
import uuid
from collections import OrderedDict
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse, RedirectResponse
from pydantic import BaseModel

from .generator import GenSpec, InvalidSpec, generate
from .layout import layout
from .mapping import ConfigSyntaxError, parse_config, resolve, swim_lanes, validate_config
from .model import ProcessModel
from .parser import (
    InvalidDocument,
    MalformedXml,
    ParseError,
    UnbalancedBlock,
    UnknownElement,
    parse,
)
from .scene import build_scene, card_payload, node_details, scene_to_json

DEFAULT_CAPACITY = 64
DEFAULT_MAX_BYTES = 1_000_000

_ERROR_NAMES = {
    MalformedXml: "malformed-xml",
    UnknownElement: "unknown-element",
    UnbalancedBlock: "unbalanced-block",
    InvalidDocument: "invalid-document",
}


class ModelStore:
    """Thread-safe model map with least-recently-used eviction."""

    def __init__(self, capacity: int = DEFAULT_CAPACITY):
        if capacity < 1:
            raise ValueError("store capacity must be positive")
        self.capacity = capacity
        self._lock = threading.Lock()
        self._models: OrderedDict[str, ProcessModel] = OrderedDict()

    def put(self, model: ProcessModel) -> str:
        model_id = uuid.uuid4().hex[:12]
        with self._lock:
            self._models[model_id] = model
            while len(self._models) > self.capacity:
                self._models.popitem(last=False)
        return model_id

    def get(self, model_id: str) -> ProcessModel | None:
        with self._lock:
            model = self._models.get(model_id)
            if model is not None:
                self._models.move_to_end(model_id)
            return model

    def __len__(self) -> int:
        with self._lock:
            return len(self._models)


def model_summary(model: ProcessModel) -> dict[str, Any]:
    return {
        "name": model.name,
        "nodes": len(model.nodes),
        "tasks": len(model.tasks()),
        "attributes": [
            {"name": name, "kind": info.kind.value, "carriers": len(info.carriers)}
            for name, info in model.attribute_index.items()
        ],
    }


class GenerateRequest(BaseModel):
    nodes: int
    control_flow_elements: int = 0
    arguments: int = 0
    seed: int = 0


def create_app(
    capacity: int = DEFAULT_CAPACITY,
    max_bytes: int = DEFAULT_MAX_BYTES,
    ui_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="pm3d service")
    store = ModelStore(capacity=capacity)

    def unknown_model() -> JSONResponse:
        return JSONResponse({"error": "unknown model"}, status_code=404)

    @app.post("/models", status_code=201)
    async def upload_model(request: Request):
        body = await request.body()
        if len(body) > max_bytes:
            return JSONResponse(
                {"error": "payload too large", "limit_bytes": max_bytes},
                status_code=413,
            )
        try:
            text = body.decode("utf-8")
        except UnicodeDecodeError:
            return JSONResponse(
                {"error": "malformed-xml", "message": "body is not valid UTF-8",
                 "line": None},
                status_code=400,
            )
        try:
            model, diagnostics = parse(text, source_name="upload")
        except ParseError as exc:
            return JSONResponse(
                {"error": _ERROR_NAMES.get(type(exc), "parse-error"),
                 "message": exc.args[0], "line": exc.line},
                status_code=400,
            )
        model_id = store.put(model)
        return {
            "model_id": model_id,
            "summary": model_summary(model),
            "warnings": [{"line": line, "message": message}
                         for line, message in diagnostics.warnings],
        }

    @app.get("/models/{model_id}")
    def get_model(model_id: str):
        model = store.get(model_id)
        if model is None:
            return unknown_model()
        return {"model_id": model_id, "summary": model_summary(model)}

    @app.post("/models/{model_id}/scene")
    async def compute_scene(model_id: str, request: Request, backdrop: str = "none"):
        model = store.get(model_id)
        if model is None:
            return unknown_model()
        if backdrop not in ("none", "grid", "room"):
            return JSONResponse(
                {"error": "bad-backdrop", "message": f"unknown backdrop {backdrop!r}"},
                status_code=422,
            )
        body = await request.body()
        try:
            config = parse_config(body.decode("utf-8"))
        except UnicodeDecodeError:
            return JSONResponse(
                {"error": "config-syntax", "message": "body is not valid UTF-8"},
                status_code=422,
            )
        except ConfigSyntaxError as exc:
            return JSONResponse(
                {"error": "config-syntax", "message": str(exc), "line": exc.line},
                status_code=422,
            )
        violations = validate_config(model, config)
        if violations:
            return JSONResponse(
                {"violations": [
                    {"rule": v.rule, "message": v.message,
                     "style": v.style.value if v.style else None,
                     "attribute": v.attribute}
                    for v in violations
                ]},
                status_code=422,
            )
        resolved = resolve(model, config)
        lanes = swim_lanes(model, config)
        placements, connectors, lanes_out = layout(model, resolved, lanes)
        scene = build_scene(model, placements, connectors, lanes_out, config,
                            backdrop=backdrop)
        return Response(content=scene_to_json(scene), media_type="application/json")

    @app.get("/models/{model_id}/nodes/{node_id}")
    def get_node(model_id: str, node_id: str):
        model = store.get(model_id)
        if model is None:
            return unknown_model()
        node = model.get_node(node_id)
        if node is None:
            return JSONResponse({"error": "unknown node"}, status_code=404)
        return card_payload(node_details(model, node_id))

    @app.post("/generate", status_code=201)
    def generate_model(request: GenerateRequest):
        try:
            model = generate(GenSpec(
                nodes=request.nodes,
                control_flow_elements=request.control_flow_elements,
                arguments=request.arguments,
                seed=request.seed,
            ))
        except InvalidSpec as exc:
            return JSONResponse(
                {"error": "invalid-spec", "message": str(exc)}, status_code=422
            )
        model_id = store.put(model)
        return {"model_id": model_id, "summary": model_summary(model)}

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

        @app.get("/", include_in_schema=False)
        def index() -> RedirectResponse:
            return RedirectResponse("/ui/")

    return app
