"""HTTP prediction service consumed by the keyboard demo.

Models are loaded once at startup from a manifest (a JSON list of
``{"model_id": ..., "lm_path": ..., "segmenter": {...}?}`` entries; the
segmenter defaults to the one stored in the model file).  The service
layer adds no modelling behaviour: a request's candidates are exactly
what the predictor returns for the identically-preprocessed context.

Endpoints:
    POST /v1/predict   {"context": str, "n": int, "model_id": str?}
    GET  /v1/models

Unknown model ids get 404, malformed bodies 400.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .ngram import SymbolLM
from .pipeline import build_segmenter, load_model, preprocess_context
from .predictor import PredictorConfig, predict
from .tokenization import SegmenterFn

__all__ = ["ModelEntry", "PredictionService", "load_manifest", "serve", "DEFAULT_ADDR"]

DEFAULT_ADDR = "127.0.0.1:8765"


@dataclass(frozen=True)
class ModelEntry:
    model_id: str
    lm: SymbolLM
    segmenter: SegmenterFn
    context_window: int = 30
    max_unroll: int = 40


def load_manifest(path) -> list[ModelEntry]:
    """Load every model named by a manifest file; paths are manifest-relative."""
    base = Path(path).parent
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, list) or not doc:
        raise ValueError(f"{path}: manifest must be a non-empty JSON list")
    entries = []
    for item in doc:
        lm, segmenter, cfg = load_model(base / item["lm_path"])
        if cfg.get("symbols", "chars") != "chars":
            raise ValueError(
                f"{item['model_id']}: prediction requires a model over boundary-marked characters"
            )
        if "segmenter" in item:
            segmenter = build_segmenter(item["segmenter"])
        entries.append(
            ModelEntry(
                model_id=item["model_id"],
                lm=lm,
                segmenter=segmenter,
                context_window=item.get("context_window", 30),
                max_unroll=item.get("max_unroll", 40),
            )
        )
    return entries


class PredictionService:
    """Request handling, independent of any transport."""

    def __init__(self, entries: list[ModelEntry]):
        if not entries:
            raise ValueError("no models loaded")
        self.entries = {e.model_id: e for e in entries}
        self.default_id = entries[0].model_id

    def models_response(self) -> dict:
        return {
            "models": [
                {"model_id": e.model_id, "context_window": e.context_window}
                for e in self.entries.values()
            ]
        }

    def predict_response(self, body: dict) -> tuple[int, dict]:
        if not isinstance(body, dict):
            return 400, {"error": "request body must be a JSON object"}
        context = body.get("context")
        if not isinstance(context, str):
            return 400, {"error": "field 'context' must be a string"}
        n = body.get("n", 3)
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            return 400, {"error": "field 'n' must be an integer >= 1"}
        model_id = body.get("model_id", self.default_id)
        entry = self.entries.get(model_id)
        if entry is None:
            return 404, {"error": f"unknown model_id {model_id!r}"}
        started = time.perf_counter()
        cfg = PredictorConfig(
            context_window=entry.context_window,
            n_candidates=n,
            max_unroll=entry.max_unroll,
        )
        stream = preprocess_context(context, entry.segmenter)
        candidates = predict(entry.lm, stream, cfg)
        return 200, {
            "model_id": entry.model_id,
            "candidates": [
                {
                    "display_text": c.display_text(),
                    "logprob": c.cumulative_logprob,
                    "truncated": c.truncated,
                }
                for c in candidates
            ],
            "latency_ms": (time.perf_counter() - started) * 1000.0,
        }


def make_server(addr: str, service: PredictionService) -> ThreadingHTTPServer:
    host, _, port = addr.partition(":")

    class Handler(BaseHTTPRequestHandler):
        def log_message(self, fmt, *args):  # quiet by default
            pass

        def _send(self, status: int, payload: dict) -> None:
            data = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(data)

        def do_GET(self):
            if self.path == "/v1/models":
                self._send(200, service.models_response())
            else:
                self._send(404, {"error": f"no such endpoint {self.path}"})

        def do_POST(self):
            if self.path != "/v1/predict":
                self._send(404, {"error": f"no such endpoint {self.path}"})
                return
            try:
                length = int(self.headers.get("Content-Length", "0"))
                body = json.loads(self.rfile.read(length).decode("utf-8"))
            except (ValueError, UnicodeDecodeError):
                self._send(400, {"error": "request body is not valid JSON"})
                return
            status, payload = service.predict_response(body)
            self._send(status, payload)

        def do_OPTIONS(self):
            self.send_response(204)
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.end_headers()

    return ThreadingHTTPServer((host, int(port)), Handler)


def serve(manifest_path, addr: str | None = None) -> None:
    """Run the prediction service until interrupted.

    The POLYLM_ADDR environment variable overrides the bind address.
    """
    resolved = os.environ.get("POLYLM_ADDR") or addr or DEFAULT_ADDR
    service = PredictionService(load_manifest(manifest_path))
    server = make_server(resolved, service)
    host, port = server.server_address[:2]
    print(f"polylm service listening on http://{host}:{port}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
