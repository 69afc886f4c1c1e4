"""Command line interface: replay, bench, gen-corpus, serve."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import EngineConfig, WeightParams
from .errors import CorpusFormatError
from .harness import CorpusSpec, generate_corpus, read_corpus, replay_corpus, report_bytes, run_bench, write_corpus


def _load_config(args: argparse.Namespace) -> EngineConfig:
    config = EngineConfig.from_env(getattr(args, "config", None))
    params_path = getattr(args, "params", None)
    if params_path:
        with open(params_path, "r", encoding="utf-8") as fh:
            config.params = WeightParams.from_dict(json.load(fh))
    seed = getattr(args, "seed", None)
    if seed is not None:
        config.embedder_seed = seed
    return config


def _cmd_replay(args: argparse.Namespace) -> int:
    config = _load_config(args)
    records = read_corpus(args.corpus)
    engine, report = replay_corpus(records, config)
    engine.close()
    if args.report:
        Path(args.report).write_bytes(report_bytes(report))
    print(f"replayed {report['ingested_turns']} turns over {report['days_simulated']} days")
    print(
        f"fragments: {report['fragments']['active']} active, "
        f"{report['fragments']['decaying']} decaying, {report['fragments']['archived']} archived"
    )
    print(f"conflicts: {len(report['conflicts'])}  summaries: {len(report['summaries'])}")
    print(f"graph hash: {report['graph_hash']}")
    if args.report:
        print(f"report written to {args.report}")
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    config = _load_config(args)
    records = read_corpus(args.corpus)
    result = run_bench(records, config, k=args.k, policies=tuple(args.policies))
    if args.report:
        Path(args.report).write_bytes(report_bytes(result))
    print(f"probes: {result['probes']}  k: {result['k']}")
    for policy, stats in result["policies"].items():
        print(f"  {policy:>13}: recall@{result['k']} = {stats['recall_at_k']:.3f} ({stats['hits']}/{stats['probes']})")
    return 0


def _cmd_gen_corpus(args: argparse.Namespace) -> int:
    if args.preset == "bench":
        spec = CorpusSpec.bench_preset()
    elif args.preset == "scale":
        spec = CorpusSpec.scale_preset()
    else:
        spec = CorpusSpec()
    for name in ("seed", "days", "sessions", "facts", "filler"):
        value = getattr(args, name, None)
        if value is not None:
            setattr(spec, name, value)
    records = generate_corpus(spec)
    write_corpus(records, args.out)
    print(f"wrote {len(records)} records to {args.out} (seed {spec.seed}, {spec.days} days)")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    from .service import serve

    config = _load_config(args)
    serve(config, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="collective-memory", description="Collective memory engine tools")
    sub = parser.add_subparsers(dest="command", required=True)

    replay = sub.add_parser("replay", help="replay a dialogue corpus over simulated days")
    replay.add_argument("--corpus", required=True, help="corpus JSONL path")
    replay.add_argument("--params", help="weight params JSON file")
    replay.add_argument("--config", help="engine config JSON file")
    replay.add_argument("--seed", type=int, help="embedder seed override")
    replay.add_argument("--report", help="write the replay report JSON here")
    replay.set_defaults(func=_cmd_replay)

    bench = sub.add_parser("bench", help="compare retrieval policies on a probe corpus")
    bench.add_argument("--corpus", required=True)
    bench.add_argument("--params", help="weight params JSON file")
    bench.add_argument("--config", help="engine config JSON file")
    bench.add_argument("--seed", type=int, help="embedder seed override")
    bench.add_argument("--k", type=int, default=5)
    bench.add_argument("--policies", nargs="+", default=["dcm", "naive-cosine", "recency"])
    bench.add_argument("--report", help="write the bench report JSON here")
    bench.set_defaults(func=_cmd_bench)

    gen = sub.add_parser("gen-corpus", help="generate a deterministic synthetic corpus")
    gen.add_argument("--out", required=True)
    gen.add_argument("--preset", choices=["small", "bench", "scale"], default="small")
    gen.add_argument("--seed", type=int)
    gen.add_argument("--days", type=int)
    gen.add_argument("--sessions", type=int)
    gen.add_argument("--facts", type=int)
    gen.add_argument("--filler", type=int)
    gen.set_defaults(func=_cmd_gen_corpus)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--config", help="engine config JSON file (or COLLECTIVE_MEMORY_CONFIG)")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int)
    serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CorpusFormatError as exc:
        print(f"corpus error: {exc}", file=sys.stderr)
        return 2
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
