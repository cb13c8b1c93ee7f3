"""``discdiv`` command line: one subcommand per pipeline stage, plus ``synth``.

Settings come from built-in defaults, then ``--config FILE`` (flat
``key = value``), then flags; every config key has a flag of the same name.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys

from . import __version__
from .embedding import BACKEND
from .errors import DiscDivError
from .pipeline import STAGES, PipelineConfig, Run, load_config_file, make_config

log = logging.getLogger("discdiv")

_HELP = {
    "papers": "papers file (paper_id, journal_id, year, macro_topic, meso_topic, micro_topic)",
    "citations": "citations file (citing_paper_id, cited_paper_id)",
    "journals": "journals file (journal_id, name, categories)",
    "out": "output directory for all artifacts",
    "dims": "embedding dimensions (default 64)",
    "return_p": "node2vec return bias p",
    "inout_q": "node2vec in-out bias q",
    "order_q": "diversity order q (default 2)",
    "top_n": "number of detection candidates to keep (default 10)",
    "top_k": "top-k size for ranking overlap (0 = min(1000, journals/10))",
    "deterministic": "single-threaded, seed-reproducible training (default on)",
    "quadrant_thresholds": "MACRO,MESO thresholds for quadrant labels (default: multidisciplinary medians)",
    "level": "restrict graph/embed to one level",
    "journal": "journal id for export-overlay",
}


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key = value config file")
    for f in dataclasses.fields(PipelineConfig):
        if f.name == "per_level":
            continue
        flag = "--" + f.name.replace("_", "-")
        kw = {"dest": f.name, "default": None, "help": _HELP.get(f.name)}
        if f.type == "bool":
            parser.add_argument(flag, action=argparse.BooleanOptionalAction, **kw)
        else:
            kind = {"int": int, "float": float}.get(f.type, str)
            parser.add_argument(flag, type=kind, **kw)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="discdiv", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"discdiv {__version__} ({BACKEND} kernels)")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    _add_config_flags(common)
    for stage in STAGES:
        sub.add_parser(stage, parents=[common], help=f"run the {stage} stage")
    synth = sub.add_parser("synth", help="write a synthetic corpus (papers/citations/journals CSV)")
    synth.add_argument("directory")
    synth.add_argument("--scale", choices=("fixture", "acceptance"), default="fixture")
    synth.add_argument("--seed", type=int, default=0)
    return parser


def resolve_config(args: argparse.Namespace) -> PipelineConfig:
    values = load_config_file(args.config) if args.config else {}
    for f in dataclasses.fields(PipelineConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = v
    return make_config(values)


def _summarise(command: str, result) -> None:
    if command == "ingest":
        print(result)
    elif command == "analyze":
        report, labels = result
        for c in report.levels:
            print(f"{c.level}: median multi {c.median_multi:.4g} vs other {c.median_other:.4g}, "
                  f"U={c.test.U:.6g}, p={c.test.p_two_sided:.4g} ({c.test.method})")
    elif command in ("detect", "all"):
        ranking, curve = result
        for cand in ranking:
            print(f"{cand.rank:>3}  {cand.journal_id}  {cand.distance:.4f}  {cand.name}")
        print(f"fraction of distances above {curve.threshold:g}: {curve.fraction_above:.4f}")
    elif command == "export-overlay":
        print(result)


def _synth(args) -> int:
    from .synthetic import SyntheticSpec, generate
    from .fixture import FIXTURE_SPEC

    spec = FIXTURE_SPEC if args.scale == "fixture" else SyntheticSpec()
    spec = dataclasses.replace(spec, seed=args.seed)
    paths = generate(spec).write(args.directory)
    for p in paths.values():
        print(p)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "synth":
            return _synth(args)
        run = Run(resolve_config(args))
        method = getattr(run, args.command.replace("-", "_"))
        _summarise(args.command, method())
    except DiscDivError as exc:
        print(f"error [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
