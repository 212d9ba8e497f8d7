"""Plain-stdlib HTTP front end for the ranking service."""

from __future__ import annotations

import json
import mimetypes
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional
from urllib.parse import parse_qs, urlparse

from .. import __version__
from .service import RankingService, ValidationError

SERVICE_NAME = "pitchlab-ranking"


class RankingHandler(BaseHTTPRequestHandler):
    service: RankingService
    static_dir: Optional[Path] = None

    # quiet down the default stderr chatter
    def log_message(self, fmt, *args):
        pass

    def _send_json(self, status: int, payload) -> None:
        body = json.dumps(payload, sort_keys=True).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_bytes(self, status: int, body: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self) -> None:  # noqa: N802  (http.server API)
        url = urlparse(self.path)
        parts = [p for p in url.path.split("/") if p]
        try:
            if url.path == "/health":
                self._send_json(
                    200, {"service": SERVICE_NAME, "version": __version__}
                )
            elif url.path == "/ranking":
                query = parse_qs(url.query)
                scenario = query.get("scenario", [""])[0]
                if not scenario:
                    self._send_json(400, {"error": "scenario query parameter required"})
                    return
                self._send_json(200, self.service.get_ranking(scenario))
            elif len(parts) == 3 and parts[0] == "matches" and parts[2] == "replay":
                body = self.service.get_replay_bytes(parts[1])
                self._send_bytes(200, body, "text/plain; charset=utf-8")
            elif len(parts) == 3 and parts[0] == "matches" and parts[2] == "stats":
                self._send_json(200, self.service.get_match_stats(parts[1]))
            elif parts and parts[0] == "debugger":
                self._serve_static(parts[1:])
            else:
                self._send_json(404, {"error": f"unknown path {url.path}"})
        except KeyError as exc:
            self._send_json(404, {"error": str(exc)})
        except Exception as exc:  # pragma: no cover - defensive
            self._send_json(500, {"error": str(exc)})

    def _serve_static(self, parts: list[str]) -> None:
        if self.static_dir is None:
            self._send_json(404, {"error": "no debugger bundle configured"})
            return
        rel = "/".join(parts) or "index.html"
        target = (self.static_dir / rel).resolve()
        if not str(target).startswith(str(self.static_dir.resolve())) or not target.is_file():
            self._send_json(404, {"error": f"no such file {rel}"})
            return
        ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        self._send_bytes(200, target.read_bytes(), ctype)

    def do_POST(self) -> None:  # noqa: N802
        url = urlparse(self.path)
        length = int(self.headers.get("Content-Length", "0"))
        raw = self.rfile.read(length) if length else b"{}"
        try:
            payload = json.loads(raw.decode("utf-8"))
        except json.JSONDecodeError:
            self._send_json(400, {"error": "request body must be JSON"})
            return
        try:
            if url.path == "/submissions":
                sub_id = self.service.submit(
                    artifact_text=str(payload.get("artifact", "")),
                    user=str(payload.get("user", "anonymous")),
                    scenario=str(payload.get("scenario", "")),
                )
                threading.Thread(
                    target=self.service.process_pending, daemon=True
                ).start()
                self._send_json(200, {"id": sub_id, "status": "pending"})
            elif url.path == "/rounds":
                result = self.service.run_swiss_round(
                    scenario=str(payload.get("scenario", "")),
                    episodes_per_pairing=payload.get("episodes"),
                    weight=float(payload.get("weight", 1.0)),
                )
                self._send_json(
                    200,
                    {
                        "scenario": result.scenario,
                        "index": result.index,
                        "weight": result.weight,
                        "pairings": [list(p) for p in result.pairings],
                        "bye": result.bye,
                        "scores": result.scores,
                    },
                )
            else:
                self._send_json(404, {"error": f"unknown path {url.path}"})
        except ValidationError as exc:
            self._send_json(400, {"error": str(exc)})
        except KeyError as exc:
            self._send_json(404, {"error": str(exc)})


def make_server(
    service: RankingService, port: int, static_dir: Optional[str] = None
) -> ThreadingHTTPServer:
    handler = type(
        "BoundRankingHandler",
        (RankingHandler,),
        {
            "service": service,
            "static_dir": Path(static_dir) if static_dir else None,
        },
    )
    return ThreadingHTTPServer(("127.0.0.1", port), handler)


def serve_forever(
    service: RankingService, port: int, static_dir: Optional[str] = None
) -> ThreadingHTTPServer:
    """Start serving on a background thread; caller owns shutdown."""
    server = make_server(service, port, static_dir)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server
