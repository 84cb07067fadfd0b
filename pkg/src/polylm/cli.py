"""Command-line entry point.

Every subcommand exits 0 on success and non-zero with a single-line
diagnostic on stderr otherwise; unknown subcommands exit 2 with usage.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys

from . import analyses, autoencoder, corpus, ngram, pipeline, predictor, service, tokenization, tpr

__all__ = ["main", "entry"]


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polylm", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("stats", help="corpus statistics as one TSV row")
    s.add_argument("corpus")

    s = sub.add_parser("bpe-learn", help="learn a BPE merge table")
    s.add_argument("corpus")
    s.add_argument("--merges", type=int, required=True, help="number of merges to learn")
    s.add_argument("--output", "-o", help="merge file (default: stdout)")

    s = sub.add_parser("segment", help="segment a corpus")
    s.add_argument("corpus")
    s.add_argument("--mode", choices=["char", "bpe", "lexicon"], required=True)
    s.add_argument("--backoff", choices=["char", "bpe"], default="char")
    s.add_argument("--merge-file", help="merge table for bpe mode or bpe backoff")
    s.add_argument("--lexicon", help="analysis lexicon TSV for lexicon mode")
    s.add_argument("--policy", choices=["min_weight", "shortest"], default="min_weight")
    s.add_argument("--output", "-o", help="segmented text (default: stdout)")

    s = sub.add_parser("weight-lexicon", help="estimate analysis weights from annotations")
    s.add_argument("lexicon", help="analysis lexicon TSV")
    s.add_argument("--annotated", required=True, help="TSV of wordform<TAB>chosen analysis")
    s.add_argument("--output", "-o", help="weighted lexicon (default: stdout)")

    s = sub.add_parser("lm-train", help="train a symbol n-gram model")
    s.add_argument("corpus")
    s.add_argument("--order", type=int, default=5)
    s.add_argument("--mode", choices=["char", "bpe", "lexicon"], default="char")
    s.add_argument("--backoff", choices=["char", "bpe"], default="char")
    s.add_argument("--merge-file")
    s.add_argument("--lexicon")
    s.add_argument("--policy", choices=["min_weight", "shortest"], default="min_weight")
    s.add_argument(
        "--symbols", choices=["chars", "units"], default="chars",
        help="boundary-marked characters (keyboard scheme) or one symbol per unit",
    )
    s.add_argument("--output", "-o", required=True, help="model JSON path")

    s = sub.add_parser("lm-eval", help="evaluate a model on a test corpus")
    s.add_argument("corpus")
    s.add_argument("--model", required=True)

    s = sub.add_parser("tpr-build", help="build the morpheme-tensor dictionary manifest")
    s.add_argument("--lexicon", required=True, help="analysis lexicon TSV")
    s.add_argument("--positions", action="store_true", help="also bind surface characters")
    s.add_argument("--output", "-o", help="manifest JSON (default: stdout)")

    s = sub.add_parser("tpr-autoencode", help="train the morpheme-tensor autoencoder")
    s.add_argument("manifest", help="morpheme-tensor dictionary manifest")
    s.add_argument("--latent", type=int, required=True)
    s.add_argument("--epochs", type=int, default=200)
    s.add_argument("--lr", type=float, default=0.1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--output", "-o", required=True, help="parameter JSON path")

    s = sub.add_parser("predict", help="prediction candidates for a typed context")
    s.add_argument("--model", required=True)
    s.add_argument("--context", required=True)
    s.add_argument("--n", type=int, default=3)

    s = sub.add_parser("kb-eval", help="typing-simulation metrics over a script")
    s.add_argument("--script", required=True, help="corpus the simulated user types")
    s.add_argument("--model", required=True)
    s.add_argument("--n", type=int, default=3)

    s = sub.add_parser("serve", help="run the prediction service")
    s.add_argument("--manifest", required=True)
    s.add_argument("--addr", default=None, help=f"bind address (default {service.DEFAULT_ADDR})")

    return p


def _out(path):
    if path:
        return open(path, "w", encoding="utf-8")
    return contextlib.nullcontext(sys.stdout)


def _load_segmenter(args):
    table = tokenization.read_merge_file(args.merge_file) if args.merge_file else None
    lexicon = analyses.read_lexicon(args.lexicon) if args.lexicon else None
    cfg = pipeline.segmenter_config_for(
        args.mode, table=table, lexicon=lexicon,
        backoff=args.backoff, policy=getattr(args, "policy", "min_weight"),
    )
    return pipeline.build_segmenter(cfg), cfg


def _cmd_stats(args) -> int:
    report = corpus.corpus_summary(corpus.load_corpus(args.corpus))
    print(
        f"{report.sentences}\t{report.tokens}\t{report.types}"
        f"\t{report.ttr:.6f}\t{report.mdn:.6f}"
    )
    return 0


def _cmd_bpe_learn(args) -> int:
    table = tokenization.bpe_learn(corpus.load_corpus(args.corpus), args.merges)
    if args.output:
        tokenization.write_merge_file(table, args.output)
    else:
        for pair in table.merges:
            print(tokenization.format_merge(pair))
    return 0


def _cmd_segment(args) -> int:
    segmenter, _ = _load_segmenter(args)
    data = corpus.load_corpus(args.corpus)
    with _out(args.output) as fh:
        for sent in data.sentences:
            fh.write(tokenization.format_segmented([segmenter(w) for w in sent]) + "\n")
    return 0


def _cmd_weight_lexicon(args) -> int:
    lexicon = analyses.read_lexicon(args.lexicon)
    annotated = []
    with open(args.annotated, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            wordform, _, spelled = line.partition("\t")
            annotated.append((wordform, spelled))
    weighted = analyses.supervised_weights(annotated, lexicon)
    if args.output:
        analyses.write_lexicon(weighted, args.output)
    else:
        for w, cands in weighted.entries.items():
            for a in cands:
                print(f"{w}\t{a.spelled()}\t{a.surface_segmentation()}\t{a.weight:g}")
    return 0


def _cmd_lm_train(args) -> int:
    segmenter, cfg = _load_segmenter(args)
    if args.symbols != "chars":
        cfg["symbols"] = args.symbols
    symbolize = (
        tokenization.mark_boundaries if args.symbols == "chars" else tokenization.unit_symbols
    )
    data = corpus.load_corpus(args.corpus)
    streams = [symbolize([segmenter(w) for w in sent]) for sent in data.sentences]
    lm = ngram.train(streams, args.order)
    ngram.save_lm(lm, args.output, segmenter_config=cfg)
    print(f"trained order-{args.order} model over {len(lm.vocab)} symbols -> {args.output}")
    return 0


def _cmd_lm_eval(args) -> int:
    lm, segmenter, cfg = pipeline.load_model(args.model)
    report = ngram.evaluate(
        lm, corpus.load_corpus(args.corpus), segmenter, counting=cfg.get("symbols", "chars")
    )
    print(report.as_tsv())
    if report.oov_count:
        print(
            f"note: {report.oov_count} symbols were outside the model vocabulary",
            file=sys.stderr,
        )
        return 1
    return 0


def _cmd_tpr_build(args) -> int:
    lexicon = analyses.read_lexicon(args.lexicon)
    morphemes = {}
    for cands in lexicon.entries.values():
        for a in cands:
            for m in a.morphemes:
                morphemes[m.spelled()] = m
    config = tpr.build_registry(morphemes.values(), include_positions=args.positions)
    doc = tpr.registry_to_json(config)
    doc["morphemes"] = [
        {
            "id": key,
            "bindings": [
                [role, value]
                for role, value in tpr.morpheme_structure(m, config).bindings
            ],
        }
        for key, m in sorted(morphemes.items())
    ]
    with _out(args.output) as fh:
        json.dump(doc, fh, ensure_ascii=False, indent=1)
        fh.write("\n")
    return 0


def _cmd_tpr_autoencode(args) -> int:
    with open(args.manifest, encoding="utf-8") as fh:
        doc = json.load(fh)
    config = tpr.registry_from_json(doc)
    samples = []
    for item in doc["morphemes"]:
        structure = tpr.MorphemeStructure(tuple((r, v) for r, v in item["bindings"]))
        samples.append((structure, tpr.bind_hierarchical(structure, config.fillers, [config.roles])))
    params, trace = autoencoder.train_autoencoder(
        samples, config.fillers, [config.roles],
        latent_dim=args.latent, epochs=args.epochs, lr=args.lr, seed=args.seed,
    )
    autoencoder.save_params(params, args.output)
    print(f"loss {trace[0]:.4f} -> {trace[-1]:.4f} over {args.epochs} epochs; params -> {args.output}")
    return 0


def _cmd_predict(args) -> int:
    lm, segmenter, cfg = pipeline.load_model(args.model)
    _require_char_scheme(cfg)
    stream = pipeline.preprocess_context(args.context, segmenter)
    cfg = predictor.PredictorConfig(n_candidates=args.n)
    for cand in predictor.predict(lm, stream, cfg):
        flags = "truncated" if cand.truncated else "-"
        print(f"{cand.display_text()}\t{cand.cumulative_logprob:.4f}\t{flags}")
    return 0


def _require_char_scheme(cfg) -> None:
    if cfg.get("symbols", "chars") != "chars":
        raise ValueError("prediction requires a model over boundary-marked characters")


def _cmd_kb_eval(args) -> int:
    lm, segmenter, cfg = pipeline.load_model(args.model)
    _require_char_scheme(cfg)
    script = corpus.load_corpus(args.script)
    cfg = predictor.PredictorConfig(n_candidates=args.n)
    recall = predictor.top_n_recall(lm, script, segmenter, cfg)
    savings = predictor.keystroke_savings(lm, script, segmenter, cfg)
    print(f"{recall:.6f}\t{savings.savings_ratio:.6f}")
    return 0


def _cmd_serve(args) -> int:
    service.serve(args.manifest, addr=args.addr)
    return 0


_COMMANDS = {
    "stats": _cmd_stats,
    "bpe-learn": _cmd_bpe_learn,
    "segment": _cmd_segment,
    "weight-lexicon": _cmd_weight_lexicon,
    "lm-train": _cmd_lm_train,
    "lm-eval": _cmd_lm_eval,
    "tpr-build": _cmd_tpr_build,
    "tpr-autoencode": _cmd_tpr_autoencode,
    "predict": _cmd_predict,
    "kb-eval": _cmd_kb_eval,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except BrokenPipeError:
        return 0
    except (OSError, ValueError, KeyError, ArithmeticError) as e:
        print(f"polylm {args.command}: {e}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
