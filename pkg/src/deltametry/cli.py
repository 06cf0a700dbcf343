"""Command-line interface wiring corpus -> frequencies -> delta -> outputs.

Configuration is a flat key=value text file; command-line flags override
config-file values, which override built-in defaults. Every `run` writes a
manifest (effective config plus input hash and tool version) that can be
fed back via --config for an exact re-run.

Exit codes: 0 success, 2 usage, 3 input/parse, 4 numeric/degenerate data,
5 I/O.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .cluster import (
    LINKAGES,
    dendrogram_to_newick,
    hierarchical_cluster,
    render_dendrogram_svg,
)
from .corpus import load_corpus, parse_document_id
from .delta import distance_matrix
from .errors import DataError, InputError, UsageError
from .frequencies import (
    build_frequency_table,
    read_stylo_table,
    select_mfw,
    write_stylo_table,
)
from .imposters import ImpostersConfig, imposters_all, imposters_score
from .report import (
    distance_distribution,
    export_distance_csv,
    render_distribution_svg,
    render_heatmap_svg,
)

OUTPUT_KINDS = (
    "dist-csv",
    "dendrogram",
    "newick",
    "distribution",
    "heatmap",
    "imposters-report",
)

DEFAULT_MFW = 100


@dataclass
class RunConfig:
    input: str
    output_dir: str = "."
    mfw: int = DEFAULT_MFW
    linkage: str = "ward"
    seed: int | None = None
    iterations: int = 100
    feature_fraction: float = 0.5
    imposters_per_iteration: int | None = None
    test: str | None = None
    candidate: str | None = None
    highlight: tuple[str, str] | None = None
    outputs: tuple[str, ...] = field(default_factory=tuple)

    def imposters_config(self) -> ImpostersConfig:
        if self.seed is None:
            raise UsageError("imposters requires a seed (--seed or seed= in config)")
        return ImpostersConfig(
            seed=self.seed,
            iterations=self.iterations,
            feature_fraction=self.feature_fraction,
            imposters_per_iteration=self.imposters_per_iteration,
        )


_IGNORED_CONFIG_KEYS = {"input_sha256", "tool_version"}

_PARSERS = {
    "mfw": int,
    "seed": int,
    "iterations": int,
    "imposters_per_iteration": lambda v: None if v == "all" else int(v),
    "feature_fraction": float,
    "outputs": lambda v: tuple(s.strip() for s in v.split(",") if s.strip()),
    "highlight": lambda v: tuple(s.strip() for s in v.split(",")),
}


def parse_config_file(path: str | Path) -> dict:
    values: dict = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if key in _IGNORED_CONFIG_KEYS:
            continue
        if key in _PARSERS:
            try:
                values[key] = _PARSERS[key](value)
            except ValueError:
                raise UsageError(f"{path}:{lineno}: bad value for {key}: {value!r}")
        else:
            values[key] = value
    return values


def merge_config(cli_args: dict, file_values: dict) -> RunConfig:
    """Precedence: command line > config file > defaults."""
    merged = dict(file_values)
    merged.update({k: v for k, v in cli_args.items() if v is not None})
    if "input" not in merged:
        raise UsageError("no input specified (--input or input= in config)")
    unknown = set(merged) - {f for f in RunConfig.__dataclass_fields__}
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    cfg = RunConfig(**merged)
    if cfg.linkage not in LINKAGES:
        raise UsageError(f"unknown linkage {cfg.linkage!r}")
    if cfg.highlight is not None and len(cfg.highlight) != 2:
        raise UsageError("highlight must name exactly two authors, comma-separated")
    bad = [o for o in cfg.outputs if o not in OUTPUT_KINDS]
    if bad:
        raise UsageError(f"unknown outputs: {', '.join(bad)}")
    return cfg


def _load_table(cfg: RunConfig):
    path = Path(cfg.input)
    if path.is_dir():
        corpus = load_corpus(path)
        return build_frequency_table(corpus, cfg.mfw)
    return select_mfw(read_stylo_table(path), cfg.mfw)


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    if path.is_dir():
        for p in sorted(path.glob("*.txt")):
            h.update(p.name.encode())
            h.update(p.read_bytes())
    else:
        h.update(path.read_bytes())
    return h.hexdigest()


def write_manifest(cfg: RunConfig, path: Path) -> None:
    lines = [
        f"tool_version={__version__}",
        f"input={cfg.input}",
        f"input_sha256={_sha256(Path(cfg.input))}",
        f"output_dir={cfg.output_dir}",
        f"mfw={cfg.mfw}",
        f"linkage={cfg.linkage}",
        f"outputs={','.join(cfg.outputs)}",
    ]
    if cfg.seed is not None:
        lines += [
            f"seed={cfg.seed}",
            f"iterations={cfg.iterations}",
            f"feature_fraction={cfg.feature_fraction}",
            f"imposters_per_iteration={cfg.imposters_per_iteration or 'all'}",
        ]
    if cfg.test:
        lines.append(f"test={cfg.test}")
    if cfg.candidate:
        lines.append(f"candidate={cfg.candidate}")
    if cfg.highlight:
        lines.append(f"highlight={','.join(cfg.highlight)}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def run(cfg: RunConfig) -> Path:
    """Execute the pipeline; returns the manifest path.

    On failure, partially written artifacts are removed and the error is
    re-raised tagged with the failing stage.
    """
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def emit(name: str, render) -> None:
        path = out_dir / name
        written.append(path)
        render(path)

    stage = "corpus"
    try:
        table = _load_table(cfg)
        stage = "delta"
        m = distance_matrix(table)
        if "dist-csv" in cfg.outputs:
            stage = "dist-csv"
            emit("distances.csv", lambda p: export_distance_csv(m, p))
        if "dendrogram" in cfg.outputs or "newick" in cfg.outputs:
            stage = "cluster"
            dend = hierarchical_cluster(m, cfg.linkage)
            if "newick" in cfg.outputs:
                emit(
                    "dendrogram.nwk",
                    lambda p: p.write_text(dendrogram_to_newick(dend) + "\n", encoding="utf-8"),
                )
            if "dendrogram" in cfg.outputs:
                emit("dendrogram.svg", lambda p: render_dendrogram_svg(dend, p))
        if "distribution" in cfg.outputs or "heatmap" in cfg.outputs:
            stage = "report"
            if "distribution" in cfg.outputs:
                dist = distance_distribution(m, cfg.highlight)
                emit("distribution.svg", lambda p: render_distribution_svg(dist, p))
            if "heatmap" in cfg.outputs:
                emit("heatmap.svg", lambda p: render_heatmap_svg(m, p))
        if "imposters-report" in cfg.outputs:
            stage = "imposters"
            if not cfg.test:
                raise UsageError("imposters-report requires --test")
            report = imposters_all(
                parse_document_id(cfg.test), table, cfg.imposters_config()
            )
            emit("imposters.txt", lambda p: p.write_text(report.format_text(), encoding="utf-8"))
            emit("imposters.json", lambda p: p.write_text(report.to_json(), encoding="utf-8"))
        stage = "manifest"
        manifest = out_dir / "manifest.txt"
        write_manifest(cfg, manifest)
        return manifest
    except Exception as exc:
        for path in written:
            path.unlink(missing_ok=True)
        raise StageError(stage, exc) from exc


class StageError(Exception):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"error in stage {stage}: {cause}")
        self.stage = stage
        self.cause = cause


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", help="corpus directory or stylo-format frequency table")
    p.add_argument("--mfw", type=int, help=f"most-frequent-word depth (default {DEFAULT_MFW})")
    p.add_argument("--config", help="key=value config file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deltametry",
        description="Stylometric attribution: Burrows' Delta, clustering, imposters.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("freq", help="build a most-frequent-word table from a corpus")
    _add_common(p)
    p.add_argument("--output", required=True)
    p.add_argument("--orientation", choices=("docs-rows", "words-rows"), default="docs-rows")

    p = sub.add_parser("dist", help="compute a Delta distance matrix")
    _add_common(p)
    p.add_argument("--output", help="CSV output path (default: stdout)")

    p = sub.add_parser("cluster", help="hierarchical clustering and dendrogram export")
    _add_common(p)
    p.add_argument("--linkage", choices=LINKAGES)
    p.add_argument("--newick", help="Newick output path")
    p.add_argument("--svg", help="dendrogram SVG output path")

    p = sub.add_parser("imposters", help="General Imposters verification")
    _add_common(p)
    p.add_argument("--test", help="disputed document id (Author_Title)")
    p.add_argument("--candidate", help="score only this author class")
    p.add_argument("--seed", type=int)
    p.add_argument("--iterations", type=int)
    p.add_argument("--feature-fraction", type=float, dest="feature_fraction")
    p.add_argument(
        "--imposters-per-iteration", type=int, dest="imposters_per_iteration"
    )
    p.add_argument("--output", help="machine-readable JSON output path")

    p = sub.add_parser("report", help="distance distribution and heatmap")
    _add_common(p)
    p.add_argument("--highlight", help="two author labels, comma-separated")
    p.add_argument("--distribution", help="distribution SVG output path")
    p.add_argument("--heatmap", help="heatmap SVG output path")
    p.add_argument("--dist-csv", dest="dist_csv", help="distance CSV output path")

    p = sub.add_parser("run", help="full pipeline from a config file")
    _add_common(p)
    p.add_argument("--output-dir", dest="output_dir")
    p.add_argument("--linkage", choices=LINKAGES)
    p.add_argument("--seed", type=int)
    p.add_argument("--test")
    p.add_argument("--candidate")
    p.add_argument("--highlight")
    p.add_argument("--outputs", help="comma-separated subset of: " + ", ".join(OUTPUT_KINDS))

    return parser


def _config_from_args(args: argparse.Namespace, extra: dict | None = None) -> RunConfig:
    file_values = parse_config_file(args.config) if args.config else {}
    cli_values = {"input": args.input, "mfw": args.mfw}
    for key in (
        "linkage",
        "seed",
        "iterations",
        "feature_fraction",
        "imposters_per_iteration",
        "test",
        "candidate",
        "output_dir",
    ):
        if hasattr(args, key):
            cli_values[key] = getattr(args, key)
    for key in ("outputs", "highlight"):
        raw = getattr(args, key, None)
        if raw is not None:
            cli_values[key] = _PARSERS[key](raw)
    if extra:
        cli_values.update(extra)
    return merge_config(cli_values, file_values)


def main(argv: list[str] | None = None) -> int:
    threads = os.environ.get("DELTAMETRY_THREADS")
    if threads is not None and (not threads.isdigit() or int(threads) < 1):
        print(f"deltametry: bad DELTAMETRY_THREADS value {threads!r}", file=sys.stderr)
        return 2

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _dispatch(args)
    except StageError as exc:
        print(f"deltametry: {exc}", file=sys.stderr)
        return _exit_code(exc.cause)
    except UsageError as exc:
        print(f"deltametry: {exc}", file=sys.stderr)
        return 2
    except (InputError, FileNotFoundError, UnicodeDecodeError) as exc:
        print(f"deltametry: {exc}", file=sys.stderr)
        return 3
    except (DataError, ValueError) as exc:
        print(f"deltametry: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"deltametry: {exc}", file=sys.stderr)
        return 5


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, UsageError):
        return 2
    if isinstance(exc, (InputError, FileNotFoundError, UnicodeDecodeError)):
        return 3
    if isinstance(exc, (DataError, ValueError)):
        return 4
    return 5


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "freq":
        cfg = _config_from_args(args)
        path = Path(cfg.input)
        if not path.is_dir():
            raise UsageError("freq expects --input to be a corpus directory")
        table = build_frequency_table(load_corpus(path), cfg.mfw)
        write_stylo_table(table, args.output, orientation=args.orientation)
        return 0

    if args.command == "dist":
        cfg = _config_from_args(args)
        m = distance_matrix(_load_table(cfg))
        export_distance_csv(m, args.output if args.output else sys.stdout)
        return 0

    if args.command == "cluster":
        cfg = _config_from_args(args)
        dend = hierarchical_cluster(distance_matrix(_load_table(cfg)), cfg.linkage)
        if args.newick:
            Path(args.newick).write_text(
                dendrogram_to_newick(dend) + "\n", encoding="utf-8"
            )
        if args.svg:
            render_dendrogram_svg(dend, args.svg)
        if not args.newick and not args.svg:
            print(dendrogram_to_newick(dend))
        return 0

    if args.command == "imposters":
        cfg = _config_from_args(args)
        if not cfg.test:
            raise UsageError("imposters requires --test Author_Title")
        table = _load_table(cfg)
        test = parse_document_id(cfg.test)
        if cfg.candidate:
            score = imposters_score(test, cfg.candidate, table, cfg.imposters_config())
            print(f"{cfg.candidate} \t {score:.2f}")
        else:
            report = imposters_all(test, table, cfg.imposters_config())
            print(report.format_text(), end="")
            if args.output:
                Path(args.output).write_text(report.to_json(), encoding="utf-8")
        return 0

    if args.command == "report":
        cfg = _config_from_args(args)
        m = distance_matrix(_load_table(cfg))
        if args.dist_csv:
            export_distance_csv(m, args.dist_csv)
        if args.distribution:
            dist = distance_distribution(m, cfg.highlight)
            render_distribution_svg(dist, args.distribution)
        if args.heatmap:
            render_heatmap_svg(m, args.heatmap)
        return 0

    if args.command == "run":
        cfg = _config_from_args(args)
        if not cfg.outputs:
            raise UsageError("run requires at least one output kind (--outputs)")
        manifest = run(cfg)
        print(f"wrote {manifest}")
        return 0

    raise UsageError(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
