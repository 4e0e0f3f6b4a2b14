"""Local HTTP façade for the debugging UI.

Checks are on-demand (POST /api/check), never triggered by file
watching. Overlapping check requests are serialized behind a lock so
every response reflects a consistent snapshot of file contents.
"""

from __future__ import annotations

import json
import threading
import traceback
import uuid
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .cli import load_manifest
from .diagnosis import SCHEMA_VERSION
from .pipeline import Options, check_modules
from .syntax.lexer import SyntaxErrorWithSpan
from .syntax.resolve import ResolutionError

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json; charset=utf-8",
    ".svg": "image/svg+xml",
}


class DebugServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, addr, root: Path, options: Options, ui_dir: Path | None):
        super().__init__(addr, ApiHandler)
        self.root = root.resolve()
        self.options = options
        self.ui_dir = ui_dir.resolve() if ui_dir else None
        self.check_lock = threading.Lock()
        self.write_lock = threading.Lock()


class ApiHandler(BaseHTTPRequestHandler):
    server: DebugServer

    def log_message(self, fmt, *args):  # quiet by default
        pass

    # -- helpers

    def _send_json(self, status: int, payload: dict | str) -> None:
        body = payload if isinstance(payload, str) else json.dumps(payload, sort_keys=True)
        data = body.encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length", "0") or "0")
        raw = self.rfile.read(length) if length else b""
        if not raw:
            return {}
        return json.loads(raw.decode("utf-8"))

    def _safe_path(self, rel: str) -> Path | None:
        candidate = (self.server.root / rel).resolve()
        if candidate == self.server.root or self.server.root in candidate.parents:
            return candidate
        return None

    def _fail_opaque(self, exc: Exception) -> None:
        incident = uuid.uuid4().hex[:12]
        traceback.print_exception(exc)
        self._send_json(500, {"error": {"kind": "internal", "id": incident}})

    # -- routes

    def do_GET(self) -> None:
        try:
            url = urlparse(self.path)
            if url.path == "/api/health":
                self._send_json(200, {"status": "ok", "schema_version": SCHEMA_VERSION})
            elif url.path == "/api/files":
                self._get_files()
            elif url.path == "/api/file":
                self._get_file(url)
            else:
                self._serve_static(url.path)
        except Exception as e:  # noqa: BLE001 - boundary
            self._fail_opaque(e)

    def do_PUT(self) -> None:
        try:
            url = urlparse(self.path)
            if url.path != "/api/file":
                self._send_json(404, {"error": {"kind": "not_found"}})
                return
            try:
                body = self._read_body()
                rel, content = body["path"], body["content"]
            except (json.JSONDecodeError, KeyError, UnicodeDecodeError):
                self._send_json(400, {"error": {"kind": "malformed", "message": "expected {path, content}"}})
                return
            target = self._safe_path(rel)
            if target is None:
                self._send_json(404, {"error": {"kind": "not_found", "path": rel}})
                return
            with self.server.write_lock:
                target.parent.mkdir(parents=True, exist_ok=True)
                target.write_text(content, encoding="utf-8")
            self._send_json(200, {"ok": True, "path": rel})
        except Exception as e:  # noqa: BLE001
            self._fail_opaque(e)

    def do_POST(self) -> None:
        try:
            url = urlparse(self.path)
            if url.path != "/api/check":
                self._send_json(404, {"error": {"kind": "not_found"}})
                return
            try:
                body = self._read_body()
            except (json.JSONDecodeError, UnicodeDecodeError):
                self._send_json(400, {"error": {"kind": "malformed", "message": "body must be JSON"}})
                return
            self._check(body)
        except Exception as e:  # noqa: BLE001
            self._fail_opaque(e)

    # -- endpoint bodies

    def _get_files(self) -> None:
        files = sorted(
            str(p.relative_to(self.server.root))
            for p in self.server.root.rglob("*")
            if p.is_file() and (p.suffix == ".mml" or p.name == "manifest.json")
        )
        self._send_json(200, {"files": files})

    def _get_file(self, url) -> None:
        params = parse_qs(url.query)
        rel = params.get("path", [""])[0]
        target = self._safe_path(rel) if rel else None
        if target is None or not target.is_file():
            self._send_json(404, {"error": {"kind": "not_found", "path": rel}})
            return
        self._send_json(200, {"path": rel, "content": target.read_text(encoding="utf-8")})

    def _collect_modules(self, body: dict) -> tuple[list[tuple[str, str]], list[tuple[str, str]]]:
        if "modules" in body:
            modules = []
            for entry in body["modules"]:
                if "source" in entry:
                    modules.append((entry["id"], entry["source"]))
                else:
                    target = self._safe_path(entry["path"])
                    if target is None or not target.is_file():
                        raise FileNotFoundError(entry["path"])
                    modules.append((entry["id"], target.read_text(encoding="utf-8")))
            imports = [tuple(e) for e in body.get("imports", [])]
            return modules, imports
        if "manifest" in body:
            target = self._safe_path(body["manifest"])
            if target is None or not target.is_file():
                raise FileNotFoundError(body["manifest"])
            return load_manifest(target)
        if "files" in body:
            modules = []
            for rel in body["files"]:
                target = self._safe_path(rel)
                if target is None or not target.is_file():
                    raise FileNotFoundError(rel)
                modules.append((Path(rel).stem, target.read_text(encoding="utf-8")))
            return modules, []
        # default: every .mml under the root, plus manifest edges if present
        manifest = self.server.root / "manifest.json"
        if manifest.is_file():
            return load_manifest(manifest)
        modules = [
            (p.stem, p.read_text(encoding="utf-8"))
            for p in sorted(self.server.root.rglob("*.mml"))
        ]
        return modules, []

    def _check(self, body: dict) -> None:
        try:
            modules, imports = self._collect_modules(body)
        except FileNotFoundError as e:
            self._send_json(404, {"error": {"kind": "not_found", "path": str(e)}})
            return
        except (KeyError, TypeError, ValueError) as e:
            self._send_json(400, {"error": {"kind": "malformed", "message": str(e)}})
            return
        try:
            with self.server.check_lock:
                result = check_modules(modules, imports, self.server.options)
        except SyntaxErrorWithSpan as e:
            self._send_json(
                422,
                {"error": {"kind": "syntax", "message": e.message, "span": e.span.to_json()}},
            )
            return
        except ResolutionError as e:
            payload = {"kind": "resolution", "message": e.message}
            if e.span is not None:
                payload["span"] = e.span.to_json()
            self._send_json(422, {"error": payload})
            return
        self._send_json(200, result.diagnosis.to_json(include_timing=True))

    def _serve_static(self, path: str) -> None:
        ui = self.server.ui_dir
        if ui is None:
            self._send_json(404, {"error": {"kind": "not_found", "path": path}})
            return
        rel = path.lstrip("/") or "index.html"
        candidate = (ui / rel).resolve()
        if not (candidate == ui or ui in candidate.parents) or not candidate.is_file():
            self._send_json(404, {"error": {"kind": "not_found", "path": path}})
            return
        data = candidate.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", _CONTENT_TYPES.get(candidate.suffix, "application/octet-stream"))
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)


def make_server(root: Path, port: int, options: Options = Options(), ui_dir: Path | str | None = None) -> DebugServer:
    ui = Path(ui_dir) if ui_dir else None
    return DebugServer(("127.0.0.1", port), root, options, ui)


def serve(root: Path, port: int, options: Options = Options(), ui_dir: Path | str | None = None) -> None:
    server = make_server(root, port, options, ui_dir)
    host, actual_port = server.server_address[:2]
    print(f"mmlcheck service on http://{host}:{actual_port}/ (root: {server.root})")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
