import json

import pytest

from polylm.cli import main


@pytest.fixture
def corpus_file(tmp_path):
    p = tmp_path / "corpus.txt"
    p.write_text("ab ab cd\nab cd\n", encoding="utf-8")
    return p


@pytest.fixture
def lexicon_file(tmp_path):
    p = tmp_path / "lexicon.tsv"
    p.write_text(
        "ab\tab<n>\tab\nab\ta<det>+b<n>\ta>b\ncd\tcd<v>\tcd\n",
        encoding="utf-8",
    )
    return p


class TestStats:
    def test_tsv_row(self, corpus_file, capsys):
        assert main(["stats", str(corpus_file)]) == 0
        cols = capsys.readouterr().out.strip().split("\t")
        assert cols[:3] == ["2", "5", "2"]
        assert float(cols[3]) == pytest.approx(2 / 5)

    def test_missing_file_fails_cleanly(self, tmp_path, capsys):
        assert main(["stats", str(tmp_path / "nope.txt")]) == 1
        assert "polylm stats" in capsys.readouterr().err


class TestUsage:
    def test_unknown_subcommand_exits_2(self, capsys):
        assert main(["bogus"]) == 2
        assert "usage" in capsys.readouterr().err.lower()

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0


class TestBpeAndSegment:
    def test_learn_then_segment(self, corpus_file, tmp_path, capsys):
        merges = tmp_path / "merges.txt"
        assert main(["bpe-learn", str(corpus_file), "--merges", "3", "-o", str(merges)]) == 0
        assert merges.exists()
        out = tmp_path / "seg.txt"
        assert main([
            "segment", str(corpus_file), "--mode", "bpe",
            "--merge-file", str(merges), "-o", str(out),
        ]) == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 2
        assert lines[0].replace("@@ ", "").split() == ["ab", "ab", "cd"]

    def test_char_mode(self, corpus_file, capsys):
        assert main(["segment", str(corpus_file), "--mode", "char"]) == 0
        first = capsys.readouterr().out.splitlines()[0]
        assert first == "a@@ b a@@ b c@@ d"

    def test_lexicon_mode(self, corpus_file, lexicon_file, capsys):
        assert main([
            "segment", str(corpus_file), "--mode", "lexicon",
            "--lexicon", str(lexicon_file),
        ]) == 0
        first = capsys.readouterr().out.splitlines()[0]
        assert first.split()[0] == "ab"


class TestWeightLexicon:
    def test_weights_written(self, lexicon_file, tmp_path, capsys):
        annotated = tmp_path / "annotated.tsv"
        annotated.write_text("ab\tab<n>\nab\tab<n>\nab\ta<det>+b<n>\n", encoding="utf-8")
        assert main([
            "weight-lexicon", str(lexicon_file), "--annotated", str(annotated),
        ]) == 0
        rows = [l.split("\t") for l in capsys.readouterr().out.splitlines()]
        weights = {(r[0], r[1]): float(r[3]) for r in rows}
        assert weights[("ab", "ab<n>")] == pytest.approx(1 - 2 / 3, abs=1e-6)
        assert weights[("ab", "a<det>+b<n>")] == pytest.approx(1 - 1 / 3, abs=1e-6)
        assert weights[("cd", "cd<v>")] == 1.0


class TestLmTrainEval:
    def test_train_eval_roundtrip(self, corpus_file, tmp_path, capsys):
        model = tmp_path / "model.json"
        assert main([
            "lm-train", str(corpus_file), "--order", "3", "--mode", "char",
            "-o", str(model),
        ]) == 0
        capsys.readouterr()
        assert main(["lm-eval", str(corpus_file), "--model", str(model)]) == 0
        cols = capsys.readouterr().out.strip().split("\t")
        assert len(cols) == 7
        total_nll, tokens, chars = float(cols[0]), int(cols[1]), int(cols[2])
        assert tokens == chars  # character segmentation
        assert float(cols[4]) == pytest.approx(float(cols[5]))

    def test_eval_flags_oov(self, corpus_file, tmp_path, capsys):
        model = tmp_path / "model.json"
        main(["lm-train", str(corpus_file), "--order", "2", "--mode", "char", "-o", str(model)])
        other = tmp_path / "other.txt"
        other.write_text("zz qq\n", encoding="utf-8")
        capsys.readouterr()
        assert main(["lm-eval", str(other), "--model", str(model)]) == 1
        assert "vocabulary" in capsys.readouterr().err

    def test_unit_symbols_mode(self, corpus_file, lexicon_file, tmp_path, capsys):
        model = tmp_path / "units.json"
        assert main([
            "lm-train", str(corpus_file), "--order", "2", "--mode", "lexicon",
            "--lexicon", str(lexicon_file), "--symbols", "units", "-o", str(model),
        ]) == 0
        capsys.readouterr()
        assert main(["lm-eval", str(corpus_file), "--model", str(model)]) == 0
        cols = capsys.readouterr().out.strip().split("\t")
        assert int(cols[1]) < int(cols[2])  # fewer unit events than characters
        # The keyboard predictor only accepts the character scheme.
        assert main(["predict", "--model", str(model), "--context", "a"]) == 1


class TestTprCommands:
    def test_build_then_autoencode(self, tmp_path, capsys):
        lexicon = tmp_path / "lex.tsv"
        lexicon.write_text(
            "qikmigh\tqikmigh<n><case:ABS>\tqikmigh\n"
            "qikmighhaak\tqikmigh<n><case:ABS>+haak<num:DU>\tqikmigh>haak\n",
            encoding="utf-8",
        )
        manifest = tmp_path / "tensors.json"
        assert main(["tpr-build", "--lexicon", str(lexicon), "-o", str(manifest)]) == 0
        doc = json.loads(manifest.read_text(encoding="utf-8"))
        assert doc["morphemes"]
        params = tmp_path / "ae.json"
        assert main([
            "tpr-autoencode", str(manifest), "--latent", "4", "--epochs", "10",
            "-o", str(params),
        ]) == 0
        assert params.exists()


class TestPredictAndKbEval:
    @pytest.fixture
    def model(self, tmp_path):
        corpus = tmp_path / "train.txt"
        corpus.write_text("ab ab ab ab\n", encoding="utf-8")
        lexicon = tmp_path / "lex.tsv"
        lexicon.write_text("ab\tab<n>\tab\n", encoding="utf-8")
        model = tmp_path / "model.json"
        assert main([
            "lm-train", str(corpus), "--order", "3", "--mode", "lexicon",
            "--lexicon", str(lexicon), "-o", str(model),
        ]) == 0
        return model

    def test_predict_candidates(self, model, capsys):
        capsys.readouterr()
        assert main(["predict", "--model", str(model), "--context", "a", "--n", "1"]) == 0
        line = capsys.readouterr().out.strip()
        assert line.split("\t")[0] == "b"

    def test_kb_eval_emits_tsv(self, model, tmp_path, capsys):
        script = tmp_path / "script.txt"
        script.write_text("ab ab\n", encoding="utf-8")
        capsys.readouterr()
        assert main(["kb-eval", "--script", str(script), "--model", str(model), "--n", "2"]) == 0
        recall, savings = capsys.readouterr().out.strip().split("\t")
        assert 0.0 <= float(recall) <= 1.0
        assert 0.0 <= float(savings) <= 1.0
