"""Command-line interface: every pipeline behind one entry point.

Results go to standard output as JSON (sorted keys); progress and the
resolved configuration go to standard error.  Exit codes: 0 success,
1 data error, 2 usage error.  Defaults follow the experiment settings
(n=1024 patches of size k=10, vocabulary 10000, 500 trees, 75/25 splits
repeated 10 times, 300-dimensional embeddings).

Precedence for every option: command-line flag, then --config file
(key=value lines), then the PROXYCAUSE_SEED environment variable (seed
only), then the built-in default.
"""

from __future__ import annotations

import argparse
import glob
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import experiments as xp
from .anm import AnmConfig, anm_direction
from .core import (
    SeedSpec,
    load_dataset,
    load_scatter,
    save_scatter,
)
from .proxy_image import (
    frames_order,
    image_pair_direction,
    load_image,
    save_image,
)
from .proxy_text import (
    BASELINE_KINDS,
    ProjectionKind,
    baseline_scores,
    build_index,
    load_embeddings,
    load_index,
    save_embeddings,
    save_index,
    sgns_train,
    vocab_sample,
    word_pair_scatter,
)
from .rcc import load_model, rcc_predict, rcc_train, save_model

PROJECTION_NAMES = tuple(k.value for k in ProjectionKind)


def _log(msg: str) -> None:
    print(f"[proxycause] {msg}", file=sys.stderr)


def _load_config(path) -> dict:
    config = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"config line {lineno}: expected key=value")
            key, _, value = line.partition("=")
            config[key.strip()] = value.strip()
    return config


def _opt(args, config, name, cast, default):
    """Flag > config > default."""
    value = getattr(args, name.replace("-", "_"))
    if value is not None:
        return value
    if name in config:
        return cast(config[name])
    return default


def _seed(args, config) -> int:
    if args.seed is not None:
        return args.seed
    if "seed" in config:
        return int(config["seed"])
    env = os.environ.get("PROXYCAUSE_SEED")
    if env is not None:
        return int(env)
    return 0


def _emit(result) -> None:
    print(json.dumps(result, sort_keys=True, indent=2))


def _direction_doc(direction) -> dict:
    return {
        "verdict": direction.verdict.value,
        "score": direction.score,
        "tie": direction.tie,
    }


def _report_doc(report: xp.EvalReport) -> dict:
    return {
        "accuracies": list(report.accuracies),
        "mean": report.mean,
        "std": report.std,
        "num_pairs": report.num_pairs,
        "significance": report.significance,
        "excluded": [list(e) for e in report.excluded],
    }


def _pick_engine(args, config):
    """AnmConfig or a loaded model, per --engine / --model."""
    engine = _opt(args, config, "engine", str, "anm")
    if engine == "anm":
        perms = _opt(args, config, "permutations", int, 499)
        return AnmConfig(num_permutations=perms)
    if engine == "model":
        model_path = _opt(args, config, "model", str, None)
        if model_path is None:
            raise ValueError("--engine model needs --model PATH")
        return load_model(model_path)
    raise ValueError(f"unknown engine {engine!r} (want anm or model)")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_index_corpus(args, config):
    corpus = _opt(args, config, "corpus", str, None)
    out = _opt(args, config, "out", str, None)
    if corpus is None:
        raise ValueError("--corpus is required")
    _log(f"index-corpus config: corpus={corpus} out={out}")
    index = build_index(corpus)
    result = {
        "sentences": index.sentence_count,
        "vocabulary": len(index.vocabulary),
        "cooc_pairs": len(index.cooc_counts),
    }
    if out is not None:
        save_index(index, out)
        result["out"] = out
    return result


def cmd_embed_train(args, config):
    corpus = _opt(args, config, "corpus", str, None)
    if corpus is None:
        raise ValueError("--corpus is required")
    d = _opt(args, config, "d", int, 300)
    epochs = _opt(args, config, "epochs", int, 5)
    window = _opt(args, config, "window", int, 5)
    negatives = _opt(args, config, "negatives", int, 5)
    lr = _opt(args, config, "lr", float, 0.025)
    seed = _seed(args, config)
    out_input = _opt(args, config, "out-input", str, None)
    out_output = _opt(args, config, "out-output", str, None)
    if out_input is None or out_output is None:
        raise ValueError("--out-input and --out-output are required")
    _log(
        f"embed-train config: corpus={corpus} d={d} epochs={epochs} window={window} "
        f"negatives={negatives} lr={lr} seed={seed}"
    )
    emb = sgns_train(corpus, d=d, epochs=epochs, window=window, negatives=negatives, learning_rate=lr, seed=seed)
    save_embeddings(emb, out_input, out_output)
    return {
        "words": len(emb.words),
        "d": emb.dimension,
        "out_input": out_input,
        "out_output": out_output,
        "seed": seed,
    }


def _corpus_artifacts(args, config, kinds, seed):
    """(index, vocab, emb) resolved from flags; emb only when needed."""
    index_path = _opt(args, config, "index", str, None)
    corpus = _opt(args, config, "corpus", str, None)
    if index_path is not None:
        index = load_index(index_path)
    elif corpus is not None:
        index = build_index(corpus)
    else:
        raise ValueError("need --corpus or --index")
    n_vocab = _opt(args, config, "n-vocab", int, 10000)
    if n_vocab > len(index.vocabulary):
        _log(f"vocabulary has {len(index.vocabulary)} words; clamping sample from {n_vocab}")
        n_vocab = len(index.vocabulary)
    method = _opt(args, config, "vocab-method", str, "top")
    vocab = vocab_sample(index, n_vocab, method=method, seed=SeedSpec(seed).child("cli.vocab"))

    needs_emb = any(k in ("w2vii", "w2vio", "w2voi") for k in kinds)
    emb = None
    if needs_emb:
        emb_input = _opt(args, config, "emb-input", str, None)
        emb_output = _opt(args, config, "emb-output", str, None)
        if emb_input is not None and emb_output is not None:
            emb = load_embeddings(emb_input, emb_output)
        elif corpus is not None:
            d = _opt(args, config, "d", int, 300)
            epochs = _opt(args, config, "epochs", int, 5)
            _log(f"training embeddings on the fly: d={d} epochs={epochs}")
            emb = sgns_train(corpus, d=d, epochs=epochs, seed=SeedSpec(seed).child("cli.embed"))
        else:
            raise ValueError("embedding projections need --emb-input/--emb-output or --corpus")
    return index, vocab, emb


def cmd_word_pair(args, config):
    x = _opt(args, config, "x", str, None)
    y = _opt(args, config, "y", str, None)
    if x is None or y is None:
        raise ValueError("--x and --y are required")
    kind = _opt(args, config, "kind", str, "w2voi").replace("-", "_")
    seed = _seed(args, config)
    _log(f"word-pair config: x={x} y={y} kind={kind} seed={seed}")
    index, vocab, emb = _corpus_artifacts(args, config, [kind], seed)
    sample = word_pair_scatter(x, y, kind, vocab, index, emb)
    engine = _pick_engine(args, config)
    if isinstance(engine, AnmConfig):
        direction = anm_direction(sample, engine, seed=SeedSpec(seed).child("cli.anm"))
    else:
        direction = rcc_predict(engine, sample)
    result = _direction_doc(direction)
    result.update({"x": x, "y": y, "kind": kind, "n": len(vocab), "seed": seed})
    return result


def _filtered_pairs(args, config):
    pairs_path = _opt(args, config, "pairs", str, None)
    if pairs_path is None:
        raise ValueError("--pairs is required")
    min_votes = _opt(args, config, "min-votes", int, 18)
    total = _opt(args, config, "total", int, 20)
    records = xp.load_word_pairs(pairs_path)
    return xp.filter_consensus(records, min_votes, total), min_votes, total


def cmd_nlp_eval(args, config):
    seed = _seed(args, config)
    kinds_arg = _opt(args, config, "kinds", str, "all")
    kinds = list(PROJECTION_NAMES) if kinds_arg == "all" else [k.replace("-", "_") for k in kinds_arg.split(",")]
    methods_arg = _opt(args, config, "methods", str, "distribution,feature,baselines,curve")
    methods = methods_arg.split(",")
    trees = _opt(args, config, "trees", int, 500)
    m = _opt(args, config, "m", int, 100)
    split = _opt(args, config, "split", float, 0.75)
    repeats = _opt(args, config, "repeats", int, 10)
    jobs = _opt(args, config, "jobs", int, 1)
    curve_kind = _opt(args, config, "curve-kind", str, "w2voi").replace("-", "_")

    pairs, min_votes, total = _filtered_pairs(args, config)
    _log(
        f"nlp-eval config: kinds={kinds} methods={methods} trees={trees} m={m} "
        f"split={split} repeats={repeats} min_votes={min_votes}/{total} seed={seed} jobs={jobs}"
    )
    if not pairs:
        raise ValueError("no pairs pass the consensus filter")
    need_emb_kinds = kinds + ([curve_kind] if "curve" in methods else [])
    index, vocab, emb = _corpus_artifacts(args, config, need_emb_kinds, seed)

    result = {
        "filtered_pairs": len(pairs),
        "min_votes": min_votes,
        "total_votes": total,
        "seed": seed,
    }

    def dist_eval(kind):
        return xp.evaluate_distribution_method(
            pairs, kind, vocab, index, emb,
            split=split, repeats=repeats, num_features=m, num_trees=trees,
            seed=SeedSpec(seed).child(f"nlp.dist.{kind}"),
        )

    def feat_eval(kind):
        return xp.evaluate_feature_method(
            pairs, kind, vocab, index, emb,
            num_trees=trees, split=split, repeats=repeats,
            seed=SeedSpec(seed).child(f"nlp.feat.{kind}"),
        )

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        if "distribution" in methods:
            reports = list(pool.map(dist_eval, kinds))
            result["distribution"] = {k: _report_doc(r) for k, r in zip(kinds, reports)}
        if "feature" in methods:
            reports = list(pool.map(feat_eval, kinds))
            result["feature"] = {k: _report_doc(r) for k, r in zip(kinds, reports)}

    if "baselines" in methods:
        baselines = {}
        for bkind in BASELINE_KINDS:
            correct = 0
            ties = 0
            for record, label in pairs:
                scores = baseline_scores(bkind, record.x, record.y, index, vocab)
                ties += scores.tie
                predicted = 1 if scores.direction().verdict.value == "x->y" else -1
                correct += predicted == label
            baselines[bkind] = {
                "accuracy": correct / len(pairs),
                "ties": ties,
                "count": len(pairs),
            }
        result["baselines"] = baselines

    if "curve" in methods:
        report = xp.evaluate_distribution_method(
            pairs, curve_kind, vocab, index, emb,
            split=split, repeats=repeats, num_features=m, num_trees=trees,
            seed=SeedSpec(seed).child(f"nlp.curve.{curve_kind}"),
        )
        by_name = {f"{r.x},{r.y}": r for r, _ in pairs}
        pooled_records = []
        pooled_correct = []
        for repeat in report.predictions:
            for name, _, _, ok in repeat:
                pooled_records.append(by_name[name])
                pooled_correct.append(ok)
        curve = xp.confidence_curve(pooled_records, pooled_correct)
        result["confidence_curve"] = [
            {"threshold": t, "accuracy": acc, "count": count} for t, acc, count in curve
        ]
        result["curve_kind"] = curve_kind
    return result


def cmd_baselines(args, config):
    seed = _seed(args, config)
    pairs, min_votes, total = _filtered_pairs(args, config)
    if not pairs:
        raise ValueError("no pairs pass the consensus filter")
    kinds_arg = _opt(args, config, "kinds", str, "all")
    kinds = list(BASELINE_KINDS) if kinds_arg == "all" else [k.replace("-", "_") for k in kinds_arg.split(",")]
    _log(f"baselines config: kinds={kinds} min_votes={min_votes}/{total} seed={seed}")
    index, vocab, _ = _corpus_artifacts(args, config, [], seed)
    result = {"filtered_pairs": len(pairs), "baselines": {}}
    for bkind in kinds:
        per_pair = []
        correct = 0
        ties = 0
        for record, label in pairs:
            scores = baseline_scores(bkind, record.x, record.y, index, vocab)
            predicted = 1 if scores.direction().verdict.value == "x->y" else -1
            ok = predicted == label
            correct += ok
            ties += scores.tie
            per_pair.append({
                "pair": f"{record.x},{record.y}",
                "s_xy": scores.s_xy,
                "s_yx": scores.s_yx,
                "correct": bool(ok),
            })
        result["baselines"][bkind] = {
            "accuracy": correct / len(pairs),
            "ties": ties,
            "pairs": per_pair,
        }
    return result


def cmd_image_pair(args, config):
    x_path = _opt(args, config, "x", str, None)
    y_path = _opt(args, config, "y", str, None)
    if x_path is None or y_path is None:
        raise ValueError("--x and --y are required")
    n = _opt(args, config, "n", int, 1024)
    k = _opt(args, config, "k", int, 10)
    seed = _seed(args, config)
    _log(f"image-pair config: x={x_path} y={y_path} n={n} k={k} seed={seed}")
    engine = _pick_engine(args, config)
    direction = image_pair_direction(load_image(x_path), load_image(y_path), n=n, k=k, engine=engine, seed=seed)
    result = _direction_doc(direction)
    result.update({"x": x_path, "y": y_path, "n": n, "k": k, "seed": seed})
    return result


def cmd_frames_order(args, config):
    directory = _opt(args, config, "dir", str, None)
    if directory is None:
        raise ValueError("--dir is required")
    pattern = _opt(args, config, "pattern", str, "frame_*.pgm")
    n = _opt(args, config, "n", int, 1024)
    k = _opt(args, config, "k", int, 10)
    jobs = _opt(args, config, "jobs", int, 1)
    seed = _seed(args, config)
    paths = sorted(glob.glob(os.path.join(directory, pattern)))
    if len(paths) < 2:
        raise ValueError(f"found {len(paths)} frames matching {pattern!r} in {directory}")
    _log(f"frames-order config: dir={directory} pattern={pattern} frames={len(paths)} n={n} k={k} seed={seed} jobs={jobs}")
    frames = [load_image(p) for p in paths]
    engine = _pick_engine(args, config)
    order = frames_order(frames, n=n, k=k, engine=engine, seed=seed, jobs=jobs)
    return {
        "frames": [os.path.basename(p) for p in paths],
        "order": [os.path.basename(paths[i]) for i in order.order],
        "indices": list(order.order),
        "cyclic": order.cyclic,
        "matrix": order.matrix.tolist(),
        "seed": seed,
    }


def cmd_synth(args, config):
    what = _opt(args, config, "what", str, None)
    if what is None:
        raise ValueError("--what is required (scatter, stylized, or frames)")
    seed = _seed(args, config)
    if what == "scatter":
        n = _opt(args, config, "n", int, 500)
        mechanism = _opt(args, config, "mechanism", str, "cubic")
        noise = _opt(args, config, "noise", str, "gaussian")
        out = _opt(args, config, "out", str, None)
        _log(f"synth scatter config: n={n} mechanism={mechanism} noise={noise} seed={seed}")
        sample, label = xp.synth_anm_pair(n, mechanism=mechanism, noise=noise, seed=seed)
        result = {"what": what, "n": n, "mechanism": mechanism, "noise": noise, "label": label, "seed": seed}
        if out is not None:
            save_scatter(sample, out)
            result["out"] = out
        return result
    if what == "stylized":
        size = _opt(args, config, "size", int, 80)
        k = _opt(args, config, "k", int, 10)
        g = _opt(args, config, "g", str, "tanh")
        sigma = _opt(args, config, "sigma", float, 0.05)
        out_x = _opt(args, config, "out-x", str, None)
        out_y = _opt(args, config, "out-y", str, None)
        if out_x is None or out_y is None:
            raise ValueError("--out-x and --out-y are required")
        row_constant = not args.general_beta
        _log(f"synth stylized config: size={size} k={k} g={g} sigma={sigma} row_constant={row_constant} seed={seed}")
        spec = SeedSpec(seed)
        base = xp.synth_base_image(size, seed=spec.child("synth.base"))
        mech = xp.random_mechanism(k=k, row_constant=row_constant, g=g, noise_scale=sigma, seed=spec.child("synth.mech"))
        styled, clipped = xp.synth_stylized_pair(base, mech, seed=spec.child("synth.style"))
        save_image(base, out_x)
        save_image(styled, out_y)
        return {
            "what": what, "size": size, "k": k, "g": g, "sigma": sigma,
            "row_constant": row_constant, "clipped_fraction": clipped,
            "out_x": out_x, "out_y": out_y, "seed": seed,
        }
    if what == "frames":
        size = _opt(args, config, "size", int, 64)
        count = _opt(args, config, "frames", int, 8)
        out_dir = _opt(args, config, "out-dir", str, None)
        if out_dir is None:
            raise ValueError("--out-dir is required")
        _log(f"synth frames config: size={size} frames={count} seed={seed}")
        frames = xp.synth_diffusion_frames(size, num_frames=count, seed=seed)
        os.makedirs(out_dir, exist_ok=True)
        paths = []
        for i, frame in enumerate(frames):
            path = os.path.join(out_dir, f"frame_{i}.pgm")
            save_image(frame, path)
            paths.append(path)
        return {"what": what, "size": size, "frames": count, "paths": paths, "seed": seed}
    raise ValueError(f"unknown synth target {what!r}")


def cmd_significance(args, config):
    accuracy = _opt(args, config, "accuracy", float, None)
    n = _opt(args, config, "n", int, None)
    if accuracy is None or n is None:
        raise ValueError("--accuracy and --n are required")
    p0 = _opt(args, config, "p0", float, 0.5)
    _log(f"significance config: accuracy={accuracy} n={n} p0={p0}")
    p = xp.binomial_significance(accuracy, n, p0)
    return {"accuracy": accuracy, "n": n, "p0": p0, "p_value": p, "significant": p < 0.05}


def cmd_model(args, config):
    action = _opt(args, config, "action", str, None)
    seed = _seed(args, config)
    if action == "train":
        data_path = _opt(args, config, "data", str, None)
        out = _opt(args, config, "out", str, None)
        if data_path is None or out is None:
            raise ValueError("model train needs --data and --out")
        m = _opt(args, config, "m", int, 100)
        trees = _opt(args, config, "trees", int, 500)
        _log(f"model train config: data={data_path} m={m} trees={trees} seed={seed}")
        data = load_dataset(data_path)
        model = rcc_train(data, num_features=m, num_trees=trees, seed=seed)
        save_model(model, out)
        return {
            "action": action, "out": out, "m": m, "trees": trees,
            "bandwidth": model.rff.bandwidth, "examples": len(data.items), "seed": seed,
        }
    if action == "predict":
        model_path = _opt(args, config, "model", str, None)
        sample_path = _opt(args, config, "sample", str, None)
        if model_path is None or sample_path is None:
            raise ValueError("model predict needs --model and --sample")
        _log(f"model predict config: model={model_path} sample={sample_path}")
        model = load_model(model_path)
        direction = rcc_predict(model, load_scatter(sample_path))
        result = _direction_doc(direction)
        result.update({"action": action, "model": model_path, "sample": sample_path})
        return result
    if action == "inspect":
        model_path = _opt(args, config, "model", str, None)
        if model_path is None:
            raise ValueError("model inspect needs --model")
        model = load_model(model_path)
        return {
            "action": action,
            "m": model.rff.num_features,
            "bandwidth": model.rff.bandwidth,
            "trees": model.forest.num_trees,
            "feature_width": model.forest.num_features,
        }
    raise ValueError(f"unknown model action {action!r} (want train, predict, or inspect)")


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_common(sub):
    sub.add_argument("--seed", type=int, default=None, help="master seed (env PROXYCAUSE_SEED)")
    sub.add_argument("--config", type=str, default=None, help="key=value config file")
    sub.add_argument("--jobs", type=int, default=None, help="worker bound; output is identical for any value")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="proxycause",
        description="Causal direction between static entities via proxy projections.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("index-corpus", help="count sentence-level statistics of a corpus")
    sub.add_argument("--corpus", type=str, default=None)
    sub.add_argument("--out", type=str, default=None)
    _add_common(sub)
    sub.set_defaults(func=cmd_index_corpus)

    sub = subs.add_parser("embed-train", help="train skip-gram embeddings")
    sub.add_argument("--corpus", type=str, default=None)
    sub.add_argument("--d", type=int, default=None)
    sub.add_argument("--epochs", type=int, default=None)
    sub.add_argument("--window", type=int, default=None)
    sub.add_argument("--negatives", type=int, default=None)
    sub.add_argument("--lr", type=float, default=None)
    sub.add_argument("--out-input", type=str, default=None)
    sub.add_argument("--out-output", type=str, default=None)
    _add_common(sub)
    sub.set_defaults(func=cmd_embed_train)

    sub = subs.add_parser("word-pair", help="causal direction between two words")
    sub.add_argument("--x", type=str, default=None)
    sub.add_argument("--y", type=str, default=None)
    sub.add_argument("--kind", type=str, default=None)
    sub.add_argument("--corpus", type=str, default=None)
    sub.add_argument("--index", type=str, default=None)
    sub.add_argument("--n-vocab", type=int, default=None)
    sub.add_argument("--vocab-method", type=str, default=None)
    sub.add_argument("--emb-input", type=str, default=None)
    sub.add_argument("--emb-output", type=str, default=None)
    sub.add_argument("--d", type=int, default=None)
    sub.add_argument("--epochs", type=int, default=None)
    sub.add_argument("--engine", type=str, default=None)
    sub.add_argument("--model", type=str, default=None)
    sub.add_argument("--permutations", type=int, default=None)
    _add_common(sub)
    sub.set_defaults(func=cmd_word_pair)

    sub = subs.add_parser("nlp-eval", help="full evaluation on annotated word pairs")
    sub.add_argument("--pairs", type=str, default=None)
    sub.add_argument("--corpus", type=str, default=None)
    sub.add_argument("--index", type=str, default=None)
    sub.add_argument("--min-votes", type=int, default=None)
    sub.add_argument("--total", type=int, default=None)
    sub.add_argument("--kinds", type=str, default=None)
    sub.add_argument("--methods", type=str, default=None)
    sub.add_argument("--curve-kind", type=str, default=None)
    sub.add_argument("--n-vocab", type=int, default=None)
    sub.add_argument("--vocab-method", type=str, default=None)
    sub.add_argument("--emb-input", type=str, default=None)
    sub.add_argument("--emb-output", type=str, default=None)
    sub.add_argument("--d", type=int, default=None)
    sub.add_argument("--epochs", type=int, default=None)
    sub.add_argument("--trees", type=int, default=None)
    sub.add_argument("--m", type=int, default=None)
    sub.add_argument("--split", type=float, default=None)
    sub.add_argument("--repeats", type=int, default=None)
    _add_common(sub)
    sub.set_defaults(func=cmd_nlp_eval)

    sub = subs.add_parser("baselines", help="score the count-based baselines on word pairs")
    sub.add_argument("--pairs", type=str, default=None)
    sub.add_argument("--corpus", type=str, default=None)
    sub.add_argument("--index", type=str, default=None)
    sub.add_argument("--min-votes", type=int, default=None)
    sub.add_argument("--total", type=int, default=None)
    sub.add_argument("--kinds", type=str, default=None)
    sub.add_argument("--n-vocab", type=int, default=None)
    sub.add_argument("--vocab-method", type=str, default=None)
    _add_common(sub)
    sub.set_defaults(func=cmd_baselines)

    sub = subs.add_parser("image-pair", help="causal direction between two images")
    sub.add_argument("--x", type=str, default=None)
    sub.add_argument("--y", type=str, default=None)
    sub.add_argument("--n", type=int, default=None)
    sub.add_argument("--k", type=int, default=None)
    sub.add_argument("--engine", type=str, default=None)
    sub.add_argument("--model", type=str, default=None)
    sub.add_argument("--permutations", type=int, default=None)
    _add_common(sub)
    sub.set_defaults(func=cmd_image_pair)

    sub = subs.add_parser("frames-order", help="temporal order of frames by pairwise direction")
    sub.add_argument("--dir", type=str, default=None)
    sub.add_argument("--pattern", type=str, default=None)
    sub.add_argument("--n", type=int, default=None)
    sub.add_argument("--k", type=int, default=None)
    sub.add_argument("--engine", type=str, default=None)
    sub.add_argument("--model", type=str, default=None)
    sub.add_argument("--permutations", type=int, default=None)
    _add_common(sub)
    sub.set_defaults(func=cmd_frames_order)

    sub = subs.add_parser("synth", help="generate synthetic scatter, stylized pair, or frames")
    sub.add_argument("--what", type=str, default=None)
    sub.add_argument("--n", type=int, default=None)
    sub.add_argument("--mechanism", type=str, default=None)
    sub.add_argument("--noise", type=str, default=None)
    sub.add_argument("--out", type=str, default=None)
    sub.add_argument("--size", type=int, default=None)
    sub.add_argument("--k", type=int, default=None)
    sub.add_argument("--g", type=str, default=None)
    sub.add_argument("--sigma", type=float, default=None)
    sub.add_argument("--general-beta", action="store_true")
    sub.add_argument("--out-x", type=str, default=None)
    sub.add_argument("--out-y", type=str, default=None)
    sub.add_argument("--frames", type=int, default=None)
    sub.add_argument("--out-dir", type=str, default=None)
    _add_common(sub)
    sub.set_defaults(func=cmd_synth)

    sub = subs.add_parser("significance", help="exact one-sided binomial test against chance")
    sub.add_argument("--accuracy", type=float, default=None)
    sub.add_argument("--n", type=int, default=None)
    sub.add_argument("--p0", type=float, default=None)
    _add_common(sub)
    sub.set_defaults(func=cmd_significance)

    sub = subs.add_parser("model", help="train, inspect, or apply a saved direction model")
    sub.add_argument("action", type=str, nargs="?", default=None)
    sub.add_argument("--data", type=str, default=None)
    sub.add_argument("--out", type=str, default=None)
    sub.add_argument("--m", type=int, default=None)
    sub.add_argument("--trees", type=int, default=None)
    sub.add_argument("--model", type=str, default=None)
    sub.add_argument("--sample", type=str, default=None)
    _add_common(sub)
    sub.set_defaults(func=cmd_model)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    config = {}
    try:
        if args.config is not None:
            config = _load_config(args.config)
        result = args.func(args, config)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(result)
    return 0


if __name__ == "__main__":
    sys.exit(main())
