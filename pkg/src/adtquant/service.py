"""Embedded HTTP JSON service.

Stdlib-only server (ThreadingHTTPServer).  The model store is in-memory,
keyed by opaque ids, with optional directory-backed persistence writing
each model as canonical DOT.  Per-model locks serialize replace/analyze
races; analyses run on the immutable graph snapshot taken under the lock.
"""

from __future__ import annotations

import json
import mimetypes
import os
import re
import secrets
import threading
import time
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlsplit

from . import __version__
from .adtool_xml import parse_adtool_xml
from .analysis import DOMAINS
from .benchgen import gen_benchmark
from .cli import analysis_payload
from .core import TARGETS, AdtError, AdtGraph, feedback, has_errors, validate
from .dot import DotParseError, emit_dot, parse_dot
from .estimation import EstimateRequest, estimate_gaussian
from .export_prism import export_prism
from .export_uppaal import export_uppaal

_ID_SAFE = re.compile(r"[A-Za-z0-9_-]+\Z")


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, diagnostics=None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.diagnostics = diagnostics

    def to_json(self) -> dict:
        body = {"status": self.status, "code": self.code, "message": self.message}
        if self.diagnostics is not None:
            body["diagnostics"] = [d.to_json() for d in self.diagnostics]
        return body


@dataclass
class ModelRecord:
    id: str
    graph: AdtGraph
    created_at: float
    revision: int
    lock: threading.Lock


class ModelStore:
    def __init__(self, data_dir: str | None = None, seed_ids: bool = False):
        self._models: dict[str, ModelRecord] = {}
        self._lock = threading.Lock()
        self._counter = 0
        self._seed_ids = seed_ids
        self._data_dir = data_dir
        if data_dir:
            os.makedirs(data_dir, exist_ok=True)
            self._load_persisted(data_dir)

    def _load_persisted(self, data_dir: str) -> None:
        for name in sorted(os.listdir(data_dir)):
            if not name.endswith(".dot"):
                continue
            mid = name[:-4]
            if not _ID_SAFE.match(mid):
                continue
            with open(os.path.join(data_dir, name), encoding="utf-8") as fh:
                graph = parse_dot(fh.read())
            self._models[mid] = ModelRecord(mid, graph, time.time(), 1,
                                            threading.Lock())
            self._counter += 1

    def _fresh_id(self) -> str:
        if self._seed_ids:
            return f"model-{self._counter}"
        return secrets.token_hex(8)

    def _persist(self, record: ModelRecord) -> None:
        if not self._data_dir:
            return
        path = os.path.join(self._data_dir, f"{record.id}.dot")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(emit_dot(record.graph))

    def create(self, graph: AdtGraph) -> ModelRecord:
        with self._lock:
            self._counter += 1
            mid = self._fresh_id()
            record = ModelRecord(mid, graph, time.time(), 1, threading.Lock())
            self._models[mid] = record
        self._persist(record)
        return record

    def get(self, mid: str) -> ModelRecord:
        with self._lock:
            record = self._models.get(mid)
        if record is None:
            raise ApiError(404, "E_NOT_FOUND", f"unknown model id {mid!r}")
        return record

    def replace(self, mid: str, graph: AdtGraph,
                if_revision: int | None = None) -> int:
        record = self.get(mid)
        with record.lock:
            if if_revision is not None and if_revision != record.revision:
                raise ApiError(
                    409, "E_REVISION_CONFLICT",
                    f"model {mid!r} is at revision {record.revision}, "
                    f"not {if_revision}")
            record.graph = graph
            record.revision += 1
            revision = record.revision
        self._persist(record)
        return revision

    def snapshot(self, mid: str) -> AdtGraph:
        record = self.get(mid)
        with record.lock:
            return record.graph


def _parse_model(fmt: str, content: str) -> AdtGraph:
    try:
        if fmt == "dot":
            return parse_dot(content)
        if fmt == "xml":
            return parse_adtool_xml(content)
    except (DotParseError, AdtError) as exc:
        raise ApiError(400, "E_PARSE", str(exc))
    raise ApiError(400, "E_FORMAT", f"unknown model format {fmt!r}")


def _validated_graph(body: dict) -> tuple[AdtGraph, list]:
    fmt = body.get("format", "dot")
    content = body.get("content")
    if not isinstance(content, str):
        raise ApiError(400, "E_BODY", "missing string field 'content'")
    graph = _parse_model(fmt, content)
    diags = validate(graph)
    if has_errors(diags):
        raise ApiError(422, "E_INVALID_MODEL", "model fails validation",
                       diagnostics=diags)
    return graph, diags


class Api:
    """Transport-independent request handling (also used directly in tests)."""

    def __init__(self, store: ModelStore):
        self.store = store

    def create_model(self, body: dict) -> dict:
        graph, diags = _validated_graph(body)
        record = self.store.create(graph)
        return {"id": record.id, "diagnostics": [d.to_json() for d in diags]}

    def get_model(self, mid: str) -> dict:
        record = self.store.get(mid)
        with record.lock:
            return {"dot": emit_dot(record.graph), "revision": record.revision}

    def put_model(self, mid: str, body: dict) -> dict:
        graph, diags = _validated_graph(body)
        if_revision = body.get("ifRevision")
        if if_revision is not None and not isinstance(if_revision, int):
            raise ApiError(400, "E_BODY", "ifRevision must be an integer")
        revision = self.store.replace(mid, graph, if_revision)
        return {"revision": revision, "diagnostics": [d.to_json() for d in diags]}

    def analyze(self, mid: str, body: dict) -> dict:
        domain = body.get("domain", "prob")
        if domain not in DOMAINS:
            raise ApiError(400, "E_BODY", f"unknown domain {domain!r}")
        pac = bool(body.get("pac", False))
        delta_rule = body.get("deltaRule", "independent")
        if delta_rule not in ("independent", "union"):
            raise ApiError(400, "E_BODY", f"unknown deltaRule {delta_rule!r}")
        graph = self.store.snapshot(mid)
        target = "analysis-pac" if pac else "analysis-bottomup"
        diags = feedback(graph, target)
        if has_errors(diags):
            raise ApiError(422, "E_ANALYSIS_SHAPE",
                           "model does not support this analysis",
                           diagnostics=diags)
        try:
            return analysis_payload(graph, domain, pac, delta_rule)
        except AdtError as exc:
            raise ApiError(422, "E_MISSING_ANNOTATION", str(exc))

    def export(self, mid: str, body: dict) -> dict:
        target = body.get("target")
        graph = self.store.snapshot(mid)
        if target == "prism":
            artifact = export_prism(graph)
        elif target == "uppaal":
            horizon = body.get("horizon")
            if horizon is not None and not isinstance(horizon, (int, float)):
                raise ApiError(400, "E_BODY", "horizon must be a number")
            artifact = export_uppaal(graph, horizon=horizon)
        else:
            raise ApiError(400, "E_BODY", f"unknown export target {target!r}")
        if has_errors(artifact.diagnostics):
            raise ApiError(422, "E_EXPORT", "model cannot be exported",
                           diagnostics=artifact.diagnostics)
        return {"files": dict(artifact.files),
                "diagnostics": [d.to_json() for d in artifact.diagnostics]}

    def estimate(self, body: dict) -> dict:
        samples = body.get("samples")
        delta = body.get("delta")
        if not isinstance(samples, list) or not isinstance(delta, (int, float)):
            raise ApiError(400, "E_BODY", "need 'samples' list and numeric 'delta'")
        try:
            values = tuple(float(x) for x in samples)
            pv = estimate_gaussian(EstimateRequest(values, float(delta)))
        except (TypeError, ValueError, AdtError) as exc:
            raise ApiError(422, "E_ESTIMATE", str(exc))
        return {"value": pv.value, "eps": pv.eps, "delta": pv.delta}

    def generate(self, body: dict) -> dict:
        size = body.get("size")
        seed = body.get("seed")
        if not isinstance(size, int) or not isinstance(seed, int):
            raise ApiError(400, "E_BODY", "need integer 'size' and 'seed'")
        try:
            graph = gen_benchmark(size, seed)
        except AdtError as exc:
            raise ApiError(422, "E_GENERATE", str(exc))
        record = self.store.create(graph)
        return {"id": record.id}

    def feedback(self, mid: str, target: str) -> dict:
        if target not in TARGETS:
            raise ApiError(400, "E_BODY", f"unknown feedback target {target!r}")
        graph = self.store.snapshot(mid)
        diags = feedback(graph, target)
        return {"diagnostics": [d.to_json() for d in diags]}


class _Handler(BaseHTTPRequestHandler):
    server_version = "adtquant"
    protocol_version = "HTTP/1.1"

    # Filled in by make_server().
    api: Api = None
    static_dir: str | None = None

    def log_message(self, fmt, *args):  # quiet by default
        pass

    # -- plumbing --------------------------------------------------------

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload, sort_keys=True).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("X-AdtQuant-Version", __version__)
        self.end_headers()
        self.wfile.write(body)

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            return {}
        try:
            body = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ApiError(400, "E_JSON", f"malformed JSON body: {exc}")
        if not isinstance(body, dict):
            raise ApiError(400, "E_JSON", "JSON body must be an object")
        return body

    def _dispatch(self, method: str) -> None:
        url = urlsplit(self.path)
        parts = [p for p in url.path.split("/") if p]
        try:
            handled = self._route(method, parts, url)
        except ApiError as exc:
            self._send_json(exc.status, exc.to_json())
            return
        if not handled:
            self._send_json(404, ApiError(404, "E_NOT_FOUND",
                                          f"no route for {method} {url.path}").to_json())

    def _route(self, method: str, parts: list[str], url) -> bool:
        api = self.api
        if parts[:1] == ["api"]:
            rest = parts[1:]
            if method == "POST" and rest == ["models"]:
                self._send_json(200, api.create_model(self._read_body()))
            elif method == "GET" and len(rest) == 2 and rest[0] == "models":
                self._send_json(200, api.get_model(rest[1]))
            elif method == "PUT" and len(rest) == 2 and rest[0] == "models":
                self._send_json(200, api.put_model(rest[1], self._read_body()))
            elif (method == "POST" and len(rest) == 3 and rest[0] == "models"
                  and rest[2] == "analyze"):
                self._send_json(200, api.analyze(rest[1], self._read_body()))
            elif (method == "POST" and len(rest) == 3 and rest[0] == "models"
                  and rest[2] == "export"):
                self._send_json(200, api.export(rest[1], self._read_body()))
            elif (method == "GET" and len(rest) == 3 and rest[0] == "models"
                  and rest[2] == "feedback"):
                target = parse_qs(url.query).get("target", [""])[0]
                self._send_json(200, api.feedback(rest[1], target))
            elif method == "POST" and rest == ["estimate"]:
                self._send_json(200, api.estimate(self._read_body()))
            elif method == "POST" and rest == ["generate"]:
                self._send_json(200, api.generate(self._read_body()))
            else:
                return False
            return True
        if method == "GET" and self.static_dir:
            return self._serve_static(parts)
        return False

    def _serve_static(self, parts: list[str]) -> bool:
        rel = "/".join(parts) or "index.html"
        base = os.path.realpath(self.static_dir)
        path = os.path.realpath(os.path.join(base, rel))
        if not path.startswith(base + os.sep) and path != base:
            return False
        if os.path.isdir(path):
            path = os.path.join(path, "index.html")
        if not os.path.isfile(path):
            return False
        ctype = mimetypes.guess_type(path)[0] or "application/octet-stream"
        with open(path, "rb") as fh:
            data = fh.read()
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(data)))
        self.send_header("X-AdtQuant-Version", __version__)
        self.end_headers()
        self.wfile.write(data)
        return True

    def do_GET(self):
        self._dispatch("GET")

    def do_POST(self):
        self._dispatch("POST")

    def do_PUT(self):
        self._dispatch("PUT")


def make_server(port: int = 0, static_dir: str | None = None,
                data_dir: str | None = None,
                seed_ids: bool = False) -> ThreadingHTTPServer:
    """Build (but do not run) the server; port 0 picks a free port."""
    api = Api(ModelStore(data_dir=data_dir, seed_ids=seed_ids))
    handler = type("BoundHandler", (_Handler,),
                   {"api": api, "static_dir": static_dir})
    return ThreadingHTTPServer(("127.0.0.1", port), handler)


def run_server(port: int, static_dir: str | None = None,
               data_dir: str | None = None, seed_ids: bool = False) -> int:
    server = make_server(port=port, static_dir=static_dir, data_dir=data_dir,
                         seed_ids=seed_ids)
    host, bound_port = server.server_address[:2]
    print(f"adtquant service on http://{host}:{bound_port}/ "
          f"(version {__version__})", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0
