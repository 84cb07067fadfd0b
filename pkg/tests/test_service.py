import json
import threading
import urllib.error
import urllib.request

import pytest

from polylm.ngram import save_lm, train
from polylm.pipeline import build_segmenter, preprocess_context, segmenter_config_for
from polylm.predictor import PredictorConfig, predict
from polylm.service import PredictionService, load_manifest, make_server
from polylm.tokenization import Segmentation, mark_boundaries
from polylm.analyses import Analysis, AnalysisLexicon, Morpheme


def toy_model_files(tmp_path):
    """Model trained on 'ab ab' where 'ab' is one known unit."""
    lexicon = AnalysisLexicon()
    lexicon.add("ab", Analysis((Morpheme("ab", "ab"),)))
    cfg = segmenter_config_for("lexicon", lexicon=lexicon, backoff="char")
    segmenter = build_segmenter(cfg)
    stream = mark_boundaries([segmenter("ab"), segmenter("ab")])
    lm = train([stream], order=3)
    model_path = tmp_path / "toy.json"
    save_lm(lm, model_path, segmenter_config=cfg)
    manifest = tmp_path / "manifest.json"
    manifest.write_text(json.dumps([{"model_id": "toy", "lm_path": "toy.json"}]))
    return manifest


@pytest.fixture
def server(tmp_path):
    manifest = toy_model_files(tmp_path)
    service = PredictionService(load_manifest(manifest))
    srv = make_server("127.0.0.1:0", service)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    host, port = srv.server_address[:2]
    yield f"http://{host}:{port}", service
    srv.shutdown()
    srv.server_close()


def post(base, path, body):
    req = urllib.request.Request(
        base + path,
        data=json.dumps(body).encode(),
        headers={"Content-Type": "application/json"},
        method="POST",
    )
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, json.loads(resp.read())
    except urllib.error.HTTPError as e:
        return e.code, json.loads(e.read())


class TestEndpoints:
    def test_toy_prediction(self, server):
        base, _ = server
        status, body = post(base, "/v1/predict", {"context": "a", "n": 1})
        assert status == 200
        assert body["model_id"] == "toy"
        assert len(body["candidates"]) == 1
        assert body["candidates"][0]["display_text"] == "b"
        assert body["candidates"][0]["truncated"] is False
        assert body["latency_ms"] >= 0

    def test_models_listing(self, server):
        base, _ = server
        with urllib.request.urlopen(base + "/v1/models") as resp:
            body = json.loads(resp.read())
        assert body["models"][0]["model_id"] == "toy"

    def test_n_zero_rejected(self, server):
        base, _ = server
        status, body = post(base, "/v1/predict", {"context": "a", "n": 0})
        assert status == 400
        assert "n" in body["error"]

    def test_unknown_model_404(self, server):
        base, _ = server
        status, body = post(base, "/v1/predict", {"context": "a", "n": 1, "model_id": "nope"})
        assert status == 404

    def test_malformed_body_400(self, server):
        base, _ = server
        req = urllib.request.Request(
            base + "/v1/predict", data=b"{not json", method="POST"
        )
        with pytest.raises(urllib.error.HTTPError) as err:
            urllib.request.urlopen(req)
        assert err.value.code == 400

    def test_missing_context_400(self, server):
        base, _ = server
        status, _ = post(base, "/v1/predict", {"n": 2})
        assert status == 400

    def test_unknown_endpoint_404(self, server):
        base, _ = server
        status, _ = post(base, "/v1/other", {})
        assert status == 404

    def test_identical_requests_identical_responses(self, server):
        base, _ = server
        _, a = post(base, "/v1/predict", {"context": "ab a", "n": 3})
        _, b = post(base, "/v1/predict", {"context": "ab a", "n": 3})
        assert a["candidates"] == b["candidates"]

    def test_concurrent_identical_requests(self, server):
        base, _ = server
        results = []
        lock = threading.Lock()

        def hit():
            _, body = post(base, "/v1/predict", {"context": "ab a", "n": 3})
            with lock:
                results.append(body["candidates"])

        threads = [threading.Thread(target=hit) for _ in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert all(r == results[0] for r in results)


class TestServiceEquivalence:
    def test_service_adds_no_modelling_behavior(self, server, tmp_path):
        import random

        base, service = server
        entry = service.entries["toy"]
        rng = random.Random(99)
        for _ in range(40):
            context = "".join(rng.choice("ab ") for _ in range(rng.randrange(0, 8)))
            n = rng.randrange(1, 5)
            status, body = post(base, "/v1/predict", {"context": context, "n": n})
            assert status == 200
            cfg = PredictorConfig(
                context_window=entry.context_window,
                n_candidates=n,
                max_unroll=entry.max_unroll,
            )
            stream = preprocess_context(context, entry.segmenter)
            direct = [
                {
                    "display_text": c.display_text(),
                    "logprob": c.cumulative_logprob,
                    "truncated": c.truncated,
                }
                for c in predict(entry.lm, stream, cfg)
            ]
            assert json.dumps(body["candidates"], sort_keys=True) == json.dumps(
                direct, sort_keys=True
            )


class TestPreprocessContext:
    @pytest.fixture
    def char_segmenter(self):
        return build_segmenter({"mode": "char"})

    def test_partial_word_keeps_no_final_boundary(self, char_segmenter):
        stream = preprocess_context("ab", char_segmenter)
        assert [s.boundary for s in stream] == [True, False]

    def test_trailing_space_closes_word(self, char_segmenter):
        stream = preprocess_context("ab ", char_segmenter)
        assert stream[-1].char == " "
        assert all(s.boundary for s in stream[:-1])

    def test_empty_context(self, char_segmenter):
        assert preprocess_context("", char_segmenter) == []
        assert preprocess_context("   ", char_segmenter) == []

    def test_literal_boundary_marks_stripped(self, char_segmenter):
        assert preprocess_context("a@b", char_segmenter) == preprocess_context(
            "ab", char_segmenter
        )


class TestManifest:
    def test_manifest_must_be_nonempty_list(self, tmp_path):
        bad = tmp_path / "m.json"
        bad.write_text("{}")
        with pytest.raises(ValueError, match="manifest"):
            load_manifest(bad)

    def test_segmenter_override(self, tmp_path):
        toy_model_files(tmp_path)
        manifest = tmp_path / "override.json"
        manifest.write_text(
            json.dumps(
                [{"model_id": "toy", "lm_path": "toy.json", "segmenter": {"mode": "char"}}]
            )
        )
        entries = load_manifest(manifest)
        assert entries[0].segmenter("xy").units == ("x", "y")
