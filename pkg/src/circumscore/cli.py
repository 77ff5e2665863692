"""Command-line pipeline.

Exit codes: 0 success, 1 usage/config error, 2 data validation error,
3 provider failure, 4 partial batch failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import fields
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__
from .complexity import PromptStrategy, score_all, score_circumstance
from .config import ConfigError, RunConfig, load_config_file
from .evaluation.analysis import (
    BracketInput,
    StrategyInput,
    bracket_analysis,
    disagreement_report,
    hybrid_macro_f1,
    oracle_macro_f1,
    strategy_analysis,
)
from .evaluation.fixture import FixtureError, load_fixture
from .evaluation.metrics import (
    MissingVerdictError,
    UnparseablePolicy,
    confusion,
    macro_f1,
    metrics,
)
from .evaluation.report import (
    bracket_table,
    disagreement_table,
    fixture_report,
    hybrid_f1_for,
    markdown_table,
    metrics_table,
    strategy_table,
)
from .llm.batch import AllItemsFailedError, Checkpoint, CheckpointCorruptError, run_batch
from .llm.providers import DEFAULT_MOCK_RESPONSE, ProviderError, get_provider, sha256_text
from .llm.verdict import Decision, Verdict
from .manual import Manual, ManualError, load_manual, validate_manual
from .prompts import RenderedPrompt, build_prompt
from .sampling import (
    CorpusError,
    EvaluationSample,
    SampleFileError,
    load_corpus,
    read_sample,
    sample_many,
    write_sample,
)

log = logging.getLogger("circumscore")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_PROVIDER = 3
EXIT_PARTIAL = 4


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit 2, which means "data" here
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- helpers


def _config(args: argparse.Namespace) -> RunConfig:
    kw = {f.name: getattr(args, f.name) for f in fields(RunConfig) if hasattr(args, f.name)}
    for name in ("manual", "corpus", "out_dir"):
        if kw.get(name) is not None:
            kw[name] = Path(kw[name])
    cfg = RunConfig(**kw)
    cfg.validate()
    return cfg


def _require(cfg: RunConfig, *names: str) -> None:
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise UsageError("missing required setting(s): " + ", ".join("--" + n.replace("_", "-") for n in missing))


def _manual(cfg: RunConfig) -> Manual:
    _require(cfg, "manual")
    return load_manual(cfg.manual, strict=not cfg.lenient)


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _jsonl(records: Iterable[dict]) -> str:
    return "".join(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n" for r in records)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _samples_dir(cfg: RunConfig) -> Path:
    _require(cfg, "out_dir")
    return cfg.out_dir / "samples"


def _load_samples(directory: Path, only: Sequence[str] | None = None) -> dict[str, EvaluationSample]:
    if not directory.is_dir():
        raise DataError(f"no sample directory at {directory}; run `sample` first")
    out: dict[str, EvaluationSample] = {}
    for path in sorted(directory.glob("*.jsonl")):
        sample, _ = read_sample(path)
        if only and sample.circumstance_id not in only:
            continue
        out[sample.circumstance_id] = sample
    if not out:
        raise DataError(f"no sample files in {directory}")
    return out


def _narratives(cfg: RunConfig, wanted: set[str]) -> dict[str, str]:
    _require(cfg, "corpus")
    texts: dict[str, str] = {}
    for rec in load_corpus(cfg.corpus, strict=not cfg.lenient):
        if rec.narrative_id in wanted:
            texts[rec.narrative_id] = rec.text
    missing = sorted(wanted - texts.keys())
    if missing:
        raise DataError(f"sampled narratives missing from corpus: {', '.join(missing[:10])}")
    return texts


def _strategies(manual: Manual, ids: Iterable[str], mode: str, threshold: int) -> dict[str, tuple[PromptStrategy, int]]:
    out = {}
    for cid in ids:
        if cid not in manual:
            raise DataError(f"sample circumstance {cid!r} is not in the manual")
        report = score_circumstance(manual[cid], threshold)
        strategy = report.strategy if mode == "auto" else PromptStrategy(mode)
        out[cid] = (strategy, report.total_score)
    return out


def _render(cfg: RunConfig, manual: Manual, samples: dict[str, EvaluationSample],
            plan: dict[str, tuple[PromptStrategy, int]]) -> list[RenderedPrompt]:
    wanted = {nid for s in samples.values() for nid, _ in s.entries}
    texts = _narratives(cfg, wanted)
    prompts = []
    for cid in sorted(samples):
        strategy = plan[cid][0]
        for nid, _ in samples[cid].entries:
            prompts.append(build_prompt(manual[cid], texts[nid], strategy,
                                        narrative_id=nid, limit=cfg.truncation_limit))
    return prompts


# ---------------------------------------------------------------- commands


def cmd_manual_validate(args: argparse.Namespace) -> int:
    cfg = _config(args)
    manual = _manual(cfg)
    warnings = validate_manual(manual)
    for w in warnings:
        print(f"warning: {w}")
    print(f"{len(manual)} circumstances, {len(warnings)} warnings")
    return EXIT_OK


def cmd_manual_score(args: argparse.Namespace) -> int:
    cfg = _config(args)
    reports = score_all(_manual(cfg), cfg.threshold)
    if args.format == "json":
        print(json.dumps([r.to_dict() for r in reports], indent=2))
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "score", "strategy", "hits"])
        for r in reports:
            w.writerow([r.circumstance_id, r.total_score, r.strategy.value,
                        ";".join(f"{h.rule_id}@{h.example_index}" for h in r.hits)])
        sys.stdout.write(buf.getvalue())
    else:
        rows = [(r.circumstance_id, r.total_score, r.strategy.value,
                 ", ".join(f"{h.rule_id}({h.delta:+d})#{h.example_index}" for h in r.hits) or "–")
                for r in reports]
        print(markdown_table(["id", "score", "strategy", "hits"], rows, ["l", "r", "l", "l"]))
    return EXIT_OK


def cmd_sample(args: argparse.Namespace) -> int:
    cfg = _config(args)
    _require(cfg, "corpus", "out_dir")
    if args.circumstances:
        ids = [c.strip() for c in args.circumstances.split(",") if c.strip()]
    else:
        ids = _manual(cfg).ids
    corpus = load_corpus(cfg.corpus, strict=not cfg.lenient)
    samples = sample_many(corpus, ids, cfg.n_pos, cfg.n_neg, cfg.seed)
    if corpus.skipped:
        log.warning("skipped %d malformed corpus lines", corpus.skipped)
    out = _samples_dir(cfg)
    out.mkdir(parents=True, exist_ok=True)
    for cid, s in samples.items():
        write_sample(s, out / f"{cid}.jsonl", cfg.config_hash())
        flag = "  UNDER-SAMPLED" if s.under_sampled else ""
        print(f"{cid}: {len(s.positives)} positive, {len(s.negatives)} negative{flag}")
    return EXIT_OK


def cmd_build_prompts(args: argparse.Namespace) -> int:
    cfg = _config(args)
    manual = _manual(cfg)
    samples = _load_samples(_samples_dir(cfg))
    plan = _strategies(manual, samples, args.strategy, cfg.threshold)
    prompts = _render(cfg, manual, samples, plan)
    target = Path(args.output) if args.output else cfg.out_dir / f"prompts-{args.strategy}.jsonl"
    _write(target, _jsonl(
        {"circumstance_id": p.circumstance_id, "narrative_id": p.narrative_id,
         "strategy": p.strategy.value, "prompt": p.text, "truncated": p.truncated}
        for p in prompts
    ))
    print(f"wrote {len(prompts)} prompts to {target}")
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    cfg = _config(args)
    manual = _manual(cfg)
    pconf = cfg.provider_config()
    # resolves credentials up front: a missing key fails before any request
    provider = get_provider(pconf, mock_script=args.mock_script,
                            mock_default=args.mock_default or DEFAULT_MOCK_RESPONSE)
    only = [c.strip() for c in args.circumstances.split(",")] if args.circumstances else None
    samples = _load_samples(_samples_dir(cfg), only)
    plan = _strategies(manual, samples, args.strategy, cfg.threshold)
    prompts = _render(cfg, manual, samples, plan)

    started = _now()
    checkpoint = Checkpoint(cfg.out_dir / "checkpoint.jsonl")
    result = run_batch(prompts, pconf, provider, checkpoint=checkpoint)

    vdir = Path(args.verdict_dir) if args.verdict_dir else cfg.out_dir / f"verdicts-{args.strategy}"
    chash = cfg.config_hash()
    by_cid: dict[str, list] = {}
    for rec in result.records:
        by_cid.setdefault(rec.circumstance_id, []).append(rec)
    for cid, recs in by_cid.items():
        _write(vdir / f"{cid}.jsonl", _jsonl({**r.to_dict(), "config_hash": chash} for r in recs))
    if args.archive_raw:
        raw_dir = Path(args.archive_raw)
        raw_dir.mkdir(parents=True, exist_ok=True)
        for v in result.verdicts.values():
            (raw_dir / f"{sha256_text(v.raw_response)}.txt").write_text(v.raw_response, encoding="utf-8")

    prompt_hashes: dict[str, dict[str, str]] = {}
    for p in prompts:
        prompt_hashes.setdefault(p.circumstance_id, {})[p.narrative_id] = sha256_text(p.text)
    manifest = {
        "config_hash": chash,
        "config": {k: (str(v) if isinstance(v, Path) else v) for k, v in cfg.hashed().items()},
        "strategy_mode": args.strategy,
        "seed": cfg.seed,
        "circumstances": {
            cid: {
                "strategy": plan[cid][0].value,
                "score": plan[cid][1],
                "n_prompts": len(prompt_hashes[cid]),
                "failures": sum(1 for r in by_cid[cid] if not r.ok),
                "prompt_sha256": prompt_hashes[cid],
            }
            for cid in sorted(samples)
        },
        "started_at": started,
        "finished_at": _now(),
        "version": __version__,
    }
    _write(vdir / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    failures = result.failures
    print(f"{len(result.records) - len(failures)} verdicts, {len(failures)} failures -> {vdir}")
    if failures:
        for r in failures[:10]:
            print(f"failed: {r.circumstance_id}/{r.narrative_id}: {r.error}", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def _read_verdict_dir(directory: Path) -> tuple[dict, dict[str, dict[str, Verdict]], set[str]]:
    """Return (manifest, {cid: {nid: Verdict}}, config hashes seen)."""
    manifest_path = directory / "manifest.json"
    manifest = json.loads(manifest_path.read_text("utf-8")) if manifest_path.exists() else {}
    runs: dict[str, dict[str, Verdict]] = {}
    hashes: set[str] = set()
    for path in sorted(directory.glob("*.jsonl")):
        for lineno, line in enumerate(path.read_text("utf-8").splitlines(), 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                cid, nid = rec["circumstance_id"], rec["narrative_id"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise DataError(f"{path}:{lineno}: bad verdict record ({exc})") from None
            if rec.get("config_hash"):
                hashes.add(rec["config_hash"])
            if rec.get("decision") is None:
                continue  # failure record; surfaces as a missing verdict
            bucket = runs.setdefault(cid, {})
            if nid in bucket:
                raise DataError(f"{path}: duplicate verdict for {nid!r}")
            bucket[nid] = Verdict(Decision(rec["decision"]), "", rec.get("evidence"),
                                  int(rec.get("attempts", 1)))
    if manifest.get("config_hash"):
        hashes.add(manifest["config_hash"])
    return manifest, runs, hashes


def _load_baseline(path: str) -> dict[str, float | None]:
    out: dict[str, float | None] = {}
    with open(path, encoding="utf-8") as fh:
        rows = csv.DictReader(ln for ln in fh if not ln.lstrip().startswith("#"))
        for rec in rows:
            try:
                value = (rec.get("f1") or "").strip()
                out[rec["circumstance_id"].strip()] = float(value) if value else None
            except (KeyError, ValueError, AttributeError) as exc:
                raise DataError(f"{path}: bad baseline row ({exc})") from None
    return out


def cmd_evaluate(args: argparse.Namespace) -> int:
    cfg = _config(args)
    _require(cfg, "out_dir")
    policy = UnparseablePolicy(args.unparseable)
    dirs = [Path(d) for d in (args.verdicts or [])]
    if not dirs:
        dirs = sorted(p for p in cfg.out_dir.glob("verdicts-*") if p.is_dir())
    if not dirs and not args.fixture:
        raise DataError("no verdicts: pass --verdicts DIR or run `classify` first")
    samples = _load_samples(_samples_dir(cfg)) if dirs else {}

    runs: dict[str, tuple[dict, dict[str, dict[str, Verdict]]]] = {}
    all_hashes: set[str] = set()
    for d in dirs:
        if not d.is_dir():
            raise DataError(f"verdict directory not found: {d}")
        manifest, verdicts, hashes = _read_verdict_dir(d)
        if not verdicts:
            raise DataError(f"no verdicts in {d}")
        runs[d.name] = (manifest, verdicts)
        all_hashes |= hashes
    if len(all_hashes) > 1 and not args.force:
        raise DataError(f"verdicts come from different configs ({', '.join(sorted(all_hashes))}); "
                        "pass --force to combine them")

    reports_dir = cfg.out_dir / "reports"
    sections = ["# Evaluation"]
    f1_by_mode: dict[str, dict[str, float | None]] = {}
    for label, (manifest, verdicts) in runs.items():
        results = []
        for cid, by_nid in sorted(verdicts.items()):
            if cid not in samples:
                raise DataError(f"{label}: verdicts for {cid!r} but no sample file")
            sample = samples[cid]
            extra = sorted(set(by_nid) - set(sample.labels))
            if extra:
                raise DataError(f"{label}/{cid}: verdict for narrative not in sample: {', '.join(extra)}")
            try:
                m = metrics(confusion(sample, by_nid, policy), cid)
            except MissingVerdictError as exc:
                raise DataError(f"{label}/{cid}: {exc}") from None
            results.append(m)
            doc = m.to_dict()
            doc["under_sampled"] = sample.under_sampled
            doc["unparseable_policy"] = policy.value
            doc["config_hash"] = manifest.get("config_hash")
            _write(cfg.out_dir / "metrics" / label / f"{cid}.json",
                   json.dumps(doc, indent=2, sort_keys=True) + "\n")
        mode = manifest.get("strategy_mode")
        if mode in ("simple", "complex"):
            f1_by_mode[mode] = {m.circumstance_id: (m.f1.point if m.f1 else None) for m in results}
        defined = [m for m in results if m.f1 is not None]
        summary = {"run": label, "strategy_mode": mode, "config_hash": manifest.get("config_hash"),
                   "macro_f1": macro_f1(defined) if defined else None,
                   "circumstances": len(results), "defined": len(defined)}
        _write(cfg.out_dir / "metrics" / label / "summary.json",
               json.dumps(summary, indent=2, sort_keys=True) + "\n")
        sections += [f"## Run `{label}` ({mode or 'unknown'} prompts)",
                     metrics_table(results, samples)]
        if args.disagreements:
            sections.append(f"### Disagreements ({label})")
            for cid, by_nid in sorted(verdicts.items()):
                sections += [f"#### {cid}",
                             disagreement_table(cid, disagreement_report(samples[cid], by_nid, policy))]

    if "simple" in f1_by_mode and "complex" in f1_by_mode:
        if cfg.manual is None:
            log.warning("simple and complex runs found but no --manual; skipping strategy analysis")
        else:
            sections += _strategy_sections(cfg, f1_by_mode, args.baseline)

    if args.fixture:
        rows = load_fixture(None if args.fixture == "published" else args.fixture)
        text = fixture_report(rows, cfg.threshold, cfg.tie_epsilon)
        _write(reports_dir / "fixture.md", text)
        sections.append(text.replace("# ", "## ", 1))

    if all_hashes:
        sections.insert(1, "Config hash: " + ", ".join(sorted(all_hashes)))
    report = "\n\n".join(sections) + "\n"
    _write(reports_dir / "evaluation.md", report)
    print(f"wrote {reports_dir / 'evaluation.md'}")
    return EXIT_OK


def _strategy_sections(cfg: RunConfig, f1_by_mode: dict[str, dict[str, float | None]],
                       baseline_path: str | None) -> list[str]:
    manual = _manual(cfg)
    simple, complex_ = f1_by_mode["simple"], f1_by_mode["complex"]
    inputs = []
    for cid in sorted(set(simple) & set(complex_)):
        if cid in manual and simple[cid] is not None and complex_[cid] is not None:
            score = score_circumstance(manual[cid], cfg.threshold).total_score
            inputs.append(StrategyInput(cid, score, simple[cid], complex_[cid]))
    if not inputs:
        return []
    analysis = strategy_analysis(inputs, cfg.tie_epsilon, cfg.threshold)
    out = ["## Strategy analysis",
           markdown_table(["Approach", "Macro F1"], [
               ("Oracle", f"{oracle_macro_f1(inputs):.3f}"),
               ("Simple", f"{macro_f1([i.f1_simple for i in inputs]):.3f}"),
               ("Complex", f"{macro_f1([i.f1_complex for i in inputs]):.3f}"),
               ("Hybrid", f"{hybrid_macro_f1(inputs, cfg.threshold):.3f}"),
           ], ["l", "r"]),
           strategy_table(analysis)]
    _write(cfg.out_dir / "reports" / "strategy.md", "\n\n".join(out[1:]) + "\n")
    if baseline_path:
        baseline = _load_baseline(baseline_path)
        rows = []
        for i in inputs:
            hybrid = i.f1_complex if i.score > cfg.threshold else i.f1_simple
            rows.append(BracketInput(i.circumstance_id, manual[i.circumstance_id].training_positive_count,
                                     hybrid, baseline.get(i.circumstance_id)))
        table = bracket_table(bracket_analysis(rows), "Baseline")
        _write(cfg.out_dir / "reports" / "brackets.md", table + "\n")
        out += ["## Hybrid vs baseline by training-set size", table]
    return out


def cmd_analyze_strategy(args: argparse.Namespace) -> int:
    cfg = _config(args)
    rows = load_fixture(args.fixture)
    inputs = [r.strategy_input() for r in rows]
    analysis = strategy_analysis(inputs, cfg.tie_epsilon, cfg.threshold)
    if args.format == "json":
        print(json.dumps({
            "accuracy_all": analysis.accuracy_all,
            "accuracy_non_tie": analysis.accuracy_non_tie,
            "correct": analysis.correct,
            "total": analysis.total,
            "non_tie_correct": analysis.non_tie_correct,
            "non_tie_total": analysis.non_tie_total,
            "hybrid_macro_f1": hybrid_macro_f1(inputs, cfg.threshold),
            "oracle_macro_f1": oracle_macro_f1(inputs),
            "rows": [{"id": r.circumstance_id, "score": r.score, "f1_simple": r.f1_simple,
                      "f1_complex": r.f1_complex, "oracle": r.oracle.code, "predicted": r.predicted.code,
                      "correct": r.correct, "tie": r.tie} for r in analysis.rows],
        }, indent=2))
    else:
        print(strategy_table(analysis))
    return EXIT_OK


def cmd_analyze_brackets(args: argparse.Namespace) -> int:
    cfg = _config(args)
    rows = load_fixture(args.fixture)
    brackets = bracket_analysis([r.bracket_input(hybrid_f1_for(r, cfg.threshold)) for r in rows])
    if args.format == "json":
        print(json.dumps([{"bracket": b.label, "n": b.n, "hybrid_wins": b.hybrid_wins,
                           "baseline_wins": b.baseline_wins} for b in brackets], indent=2, ensure_ascii=False))
    else:
        print(bracket_table(brackets))
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    cfg = _config(args)
    text = fixture_report(load_fixture(args.fixture), cfg.threshold, cfg.tie_epsilon)
    if args.output:
        _write(Path(args.output), text)
        print(f"wrote {args.output}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("run configuration")
    g.add_argument("--config", help="TOML file of key = value settings (flags override it)")
    g.add_argument("--manual", help="coding manual JSON")
    g.add_argument("--corpus", help="labeled narrative corpus JSONL")
    g.add_argument("--out-dir", dest="out_dir", help="working/output directory")
    g.add_argument("--lenient", action="store_true", default=None,
                   help="accept unknown manual keys and skip malformed corpus lines")
    g.add_argument("--threshold", type=int, help="complexity threshold (default 2)")
    g.add_argument("--tie-epsilon", dest="tie_epsilon", type=float, help="tie margin on F1 (default 0.02)")
    g.add_argument("--truncation-limit", dest="truncation_limit", type=int,
                   help="narrative truncation in characters (default 3500)")
    g.add_argument("--n-pos", dest="n_pos", type=int, help="positives per sample (default 100)")
    g.add_argument("--n-neg", dest="n_neg", type=int, help="negatives per sample (default 100)")
    g.add_argument("--seed", type=int, help="sampling seed (default 42)")
    g.add_argument("--provider", help="mock, openai, gemini, together, groq or any OpenAI-compatible name")
    g.add_argument("--model", help="model name sent to the provider")
    g.add_argument("--temperature", type=float, help="sampling temperature (default 0.3)")
    g.add_argument("--max-concurrency", dest="max_concurrency", type=int)
    g.add_argument("--max-retries", dest="max_retries", type=int)
    g.add_argument("--request-timeout", dest="request_timeout", type=float, help="seconds")
    g.add_argument("--base-url", dest="base_url", help="override provider endpoint")
    g.add_argument("--api-key-env", dest="api_key_env",
                   help="environment variable holding the API key (default <PROVIDER>_API_KEY)")
    g.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="circumscore", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    manual = sub.add_parser("manual", help="inspect a coding manual")
    msub = manual.add_subparsers(dest="manual_command", required=True, parser_class=_Parser)
    p = msub.add_parser("validate", parents=[common], help="load and report warnings")
    p.set_defaults(func=cmd_manual_validate)
    p = msub.add_parser("score", parents=[common], help="Complexity Score per circumstance")
    p.add_argument("--format", choices=["table", "csv", "json"], default="table")
    p.set_defaults(func=cmd_manual_score)

    p = sub.add_parser("sample", parents=[common], help="draw balanced evaluation samples")
    p.add_argument("--circumstances", help="comma-separated ids (default: every manual entry)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("build-prompts", parents=[common], help="render prompts to JSONL for audit")
    p.add_argument("--strategy", choices=["auto", "simple", "complex"], default="auto")
    p.add_argument("--output", help="output JSONL (default OUT_DIR/prompts-<strategy>.jsonl)")
    p.set_defaults(func=cmd_build_prompts)

    p = sub.add_parser("classify", parents=[common], help="classify sampled narratives")
    p.add_argument("--strategy", choices=["auto", "simple", "complex"], default="auto")
    p.add_argument("--circumstances", help="comma-separated ids (default: every sample)")
    p.add_argument("--mock-script", dest="mock_script", help="JSONL script for the mock provider")
    p.add_argument("--mock-default", dest="mock_default", help="mock reply for unmatched prompts")
    p.add_argument("--verdict-dir", dest="verdict_dir", help="default OUT_DIR/verdicts-<strategy>")
    p.add_argument("--archive-raw", dest="archive_raw", help="directory for raw model responses")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("evaluate", parents=[common], help="metrics and reports from verdicts")
    p.add_argument("--verdicts", action="append", help="verdict directory (repeatable)")
    p.add_argument("--fixture", nargs="?", const="published",
                   help="also report on an analysis fixture CSV (bare flag: shipped results)")
    p.add_argument("--baseline", help="CSV circumstance_id,f1 of a baseline model for bracket analysis")
    p.add_argument("--unparseable", choices=[x.value for x in UnparseablePolicy],
                   default=UnparseablePolicy.AS_NO.value)
    p.add_argument("--disagreements", action="store_true", help="list false positives/negatives")
    p.add_argument("--force", action="store_true", help="combine verdicts from different configs")
    p.set_defaults(func=cmd_evaluate)

    analyze = sub.add_parser("analyze", help="fixture analyses")
    asub = analyze.add_subparsers(dest="analyze_command", required=True, parser_class=_Parser)
    for name, func in (("strategy", cmd_analyze_strategy), ("brackets", cmd_analyze_brackets)):
        p = asub.add_parser(name, parents=[common])
        p.add_argument("--fixture", help="analysis CSV (default: shipped published results)")
        p.add_argument("--format", choices=["markdown", "json"], default="markdown")
        p.set_defaults(func=func)

    p = sub.add_parser("report", parents=[common], help="markdown report over an analysis fixture")
    p.add_argument("--fixture", help="analysis CSV (default: shipped published results)")
    p.add_argument("--output", help="write to file instead of stdout")
    p.set_defaults(func=cmd_report)
    return parser


def _apply_config_file(args: argparse.Namespace) -> None:
    defaults = {f.name: f.default for f in fields(RunConfig)}
    file_values = load_config_file(args.config) if getattr(args, "config", None) else {}
    unknown = sorted(set(file_values) - set(defaults))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    for name, default in defaults.items():
        if getattr(args, name, None) is None:
            setattr(args, name, file_values.get(name, default))


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        _apply_config_file(args)
        return args.func(args)
    except (ConfigError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ManualError, CorpusError, SampleFileError, FixtureError, DataError,
            CheckpointCorruptError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ProviderError, AllItemsFailedError) as exc:
        print(f"provider error: {exc}", file=sys.stderr)
        return EXIT_PROVIDER


if __name__ == "__main__":
    sys.exit(main())
