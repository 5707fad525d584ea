"""HTTP serving mode: session API for the explorer UI plus static assets.

Sessions live in process memory and expire after an idle timeout.  Each
session wraps a framed quiver; mutations are serialized per session (one
in-flight mutation per id), distinct sessions are independent.  All
mathematics happens here -- the UI is a pure projection of the state
payloads.  Report payloads reuse the exact classifier the CLI uses, so the
two are byte-identical after canonical serialization.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .errors import EngineFault, UsageError
from .greenseq import MutationSequence, classify_sequence, vertex_colors
from .quiver import DynkinType, Quiver, VertexId, dynkin_quiver, frame, line_quiver, triangular_product
from .seed import read_c_vector


def canonical_dumps(obj: object) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def build_presets() -> dict[str, Quiver]:
    presets: dict[str, Quiver] = {
        "A3-sink": line_quiver(3),
        "A4-sink": line_quiver(4),
        "A5-alternating": dynkin_quiver(DynkinType("A", 5)),
        "A7-alternating": dynkin_quiver(DynkinType("A", 7)),
        "D4-alternating": dynkin_quiver(DynkinType("D", 4)),
        "D8-alternating": dynkin_quiver(DynkinType("D", 8)),
        "E6-alternating": dynkin_quiver(DynkinType("E", 6)),
        "E7-alternating": dynkin_quiver(DynkinType("E", 7)),
        "E8-alternating": dynkin_quiver(DynkinType("E", 8)),
        "A2xA3": triangular_product(dynkin_quiver(DynkinType("A", 2)), line_quiver(3)),
        "A3altxA3": triangular_product(dynkin_quiver(DynkinType("A", 3)), line_quiver(3)),
    }
    return presets


class Session:
    def __init__(self, sid: str, quiver: Quiver) -> None:
        self.id = sid
        self.initial = quiver
        self.framed = frame(quiver)
        self.trail: list[VertexId] = []
        self.undo_stack: list[Quiver] = []
        self.lock = threading.Lock()
        self.last_access = time.monotonic()

    def touch(self) -> None:
        self.last_access = time.monotonic()

    def state_obj(self) -> dict:
        colors = {str(v): c for v, c in vertex_colors(self.framed).items()}
        for v in self.initial.vertices:
            if self.initial.is_frozen(v):
                colors[str(v)] = "frozen"
        basis = sorted((v for v in self.initial.mutable_vertices), key=VertexId.sort_key)
        index = {v: i for i, v in enumerate(basis)}
        c_vectors = {
            str(v): read_c_vector(self.framed, v, index) for v in basis
        }
        visible = Quiver(
            self.initial.vertices,
            {
                (a, b): m
                for (a, b), m in self.framed.arrows.items()
                if not a.bar and not b.bar
            },
            self.initial.frozen,
        )
        return {
            "id": self.id,
            "quiver": visible.to_obj(),
            "initial_quiver": self.initial.to_obj(),
            "colors": colors,
            "basis": [str(v) for v in basis],
            "c": c_vectors,
            "trail": ",".join(str(v) for v in self.trail),
            "can_undo": bool(self.undo_stack),
        }

    def mutate(self, vid: VertexId) -> None:
        if vid not in set(self.initial.vertices):
            raise UsageError(f"unknown vertex {vid}")
        if self.framed.is_frozen(vid):
            raise FrozenClick(str(vid))
        self.undo_stack.append(self.framed)
        self.framed = self.framed.mutate(vid)
        self.trail.append(vid)

    def undo(self) -> None:
        if not self.undo_stack:
            raise UsageError("nothing to undo")
        self.framed = self.undo_stack.pop()
        self.trail.pop()

    def report_obj(self) -> dict:
        return classify_sequence(self.initial, tuple(self.trail)).to_obj()


class FrozenClick(UsageError):
    """Click on a frozen vertex: a no-op answered with a hint."""


class SessionStore:
    def __init__(self, idle_timeout: float = 3600.0) -> None:
        self.sessions: dict[str, Session] = {}
        self.lock = threading.Lock()
        self.idle_timeout = idle_timeout
        self.presets = build_presets()

    def sweep(self) -> None:
        cutoff = time.monotonic() - self.idle_timeout
        with self.lock:
            for sid in [s for s, sess in self.sessions.items() if sess.last_access < cutoff]:
                del self.sessions[sid]

    def create(self, body: dict) -> Session:
        if "preset" in body:
            name = body["preset"]
            if name not in self.presets:
                raise UsageError(f"unknown preset {name!r}")
            quiver = self.presets[name]
        elif "quiver" in body:
            quiver = Quiver.from_obj(body["quiver"])
        else:
            raise UsageError("session body needs 'preset' or 'quiver'")
        if not quiver.mutable_vertices:
            raise UsageError("quiver has no mutable vertices")
        sid = uuid.uuid4().hex[:12]
        session = Session(sid, quiver)
        with self.lock:
            self.sessions[sid] = session
        return session

    def get(self, sid: str) -> Session:
        self.sweep()
        with self.lock:
            session = self.sessions.get(sid)
        if session is None:
            raise UsageError(f"unknown session {sid}")
        session.touch()
        return session


def make_handler(store: SessionStore, static_dir: Path | None):
    class Handler(BaseHTTPRequestHandler):
        def log_message(self, fmt: str, *args) -> None:  # quiet by default
            pass

        def _send(self, code: int, payload: object) -> None:
            body = canonical_dumps(payload).encode()
            self.send_response(code)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(body)

        def _read_body(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            if not length:
                return {}
            try:
                return json.loads(self.rfile.read(length) or b"{}")
            except json.JSONDecodeError as exc:
                raise UsageError(f"bad JSON body: {exc}") from exc

        def _api(self, method: str) -> None:
            parts = [p for p in self.path.split("?")[0].split("/") if p]
            try:
                if parts == ["api", "presets"] and method == "GET":
                    self._send(200, {"presets": sorted(store.presets)})
                    return
                if parts == ["api", "session"] and method == "POST":
                    session = store.create(self._read_body())
                    self._send(200, {"id": session.id, "state": session.state_obj()})
                    return
                if len(parts) >= 3 and parts[:2] == ["api", "session"]:
                    session = store.get(parts[2])
                    action = parts[3] if len(parts) > 3 else None
                    with session.lock:
                        if action is None and method == "GET":
                            self._send(200, {"state": session.state_obj()})
                            return
                        if action == "mutate" and method == "POST":
                            body = self._read_body()
                            try:
                                session.mutate(VertexId.parse(str(body.get("vertex", ""))))
                            except FrozenClick as exc:
                                self._send(409, {
                                    "error": "frozen",
                                    "hint": f"vertex {exc} is frozen; pick a mutable vertex",
                                    "state": session.state_obj(),
                                })
                                return
                            self._send(200, {"state": session.state_obj()})
                            return
                        if action == "undo" and method == "POST":
                            session.undo()
                            self._send(200, {"state": session.state_obj()})
                            return
                        if action == "report" and method == "GET":
                            self._send(200, session.report_obj())
                            return
                self._send(404, {"error": "not found", "path": self.path})
            except UsageError as exc:
                self._send(400, {"error": str(exc)})
            except EngineFault as exc:
                self._send(500, {"error": f"engine fault: {exc}"})

        def do_GET(self) -> None:
            if self.path.startswith("/api/"):
                self._api("GET")
                return
            self._static()

        def do_POST(self) -> None:
            if self.path.startswith("/api/"):
                self._api("POST")
                return
            self._send(404, {"error": "not found"})

        def _static(self) -> None:
            if static_dir is None:
                self._send(404, {"error": "no static assets configured"})
                return
            rel = self.path.lstrip("/") or "index.html"
            target = (static_dir / rel).resolve()
            if not str(target).startswith(str(static_dir.resolve())) or not target.is_file():
                self._send(404, {"error": "not found", "path": self.path})
                return
            content_types = {
                ".html": "text/html", ".js": "text/javascript",
                ".css": "text/css", ".json": "application/json",
                ".svg": "image/svg+xml",
            }
            body = target.read_bytes()
            self.send_response(200)
            self.send_header("Content-Type", content_types.get(target.suffix, "application/octet-stream"))
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

    return Handler


def serve(port: int, static_dir: Path | None = None, idle_timeout: float = 3600.0) -> ThreadingHTTPServer:
    """Build the HTTP server (caller runs serve_forever)."""
    store = SessionStore(idle_timeout=idle_timeout)
    handler = make_handler(store, static_dir)
    return ThreadingHTTPServer(("127.0.0.1", port), handler)
