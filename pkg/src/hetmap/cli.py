"""Command-line entry point: ``hetmap inspect|map|slice|factors``.

Settings are resolved in order: built-in defaults, the named preset, the
JSON config file, then explicit flags.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

from . import __version__
from .attributes import ALL_CLASSES, AttributeClass, build_catalog, load_stopwords
from .errors import HetmapError
from .export import StyleSpec, build_frames, render_svg, write_clu, write_graphml, write_pajek
from .factors import connected_components, factor_analysis, factor_report_csv, variance_explained
from .layout import LayoutParams, kk_layout
from .occurrence import build_matrix, matrix_to_csv, slice_by_period, submatrix
from .simgraph import build_graph
from .wos_parser import read_records, recordset_stats

log = logging.getLogger("hetmap")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2
FORMATS = ("pajek", "graphml", "svg", "frames", "factors", "csv")

PRESETS: dict[str, dict] = {
    "integrated": {"author_min": 1, "word_min": 3, "journal_min": 1,
                   "cosine_threshold": 0.2, "classes": ["author", "word", "journal"]},
    "coauthor": {"author_min": 1, "word_min": 3, "journal_min": 1,
                 "cosine_threshold": 0.0, "classes": ["author"]},
    "coword": {"author_min": 1, "word_min": 3, "journal_min": 1,
               "cosine_threshold": 0.0, "classes": ["word"]},
    "animation": {"author_min": 2, "word_min": 2, "journal_min": 2,
                  "cosine_threshold": 0.2, "classes": ["author", "word", "journal"],
                  "period_width": 5},
}
DEFAULT_PRESET = {"map": "integrated", "slice": "animation", "factors": "coword", "inspect": "integrated"}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    input: Optional[str] = None
    stopwords: Optional[str] = None
    author_min: int = 1
    word_min: int = 3
    journal_min: int = 1
    exclude_author: Optional[str] = None
    cosine_threshold: float = 0.2
    classes: list = field(default_factory=lambda: ["author", "word", "journal"])
    period_start: Optional[int] = None
    period_width: int = 5
    period_end: Optional[int] = None
    global_catalog: bool = False
    side: float = 1.0
    seed: int = 0
    tol: float = 1e-4
    s_min: float = 4.0
    s_scale: float = 3.0
    new_node_color: str = "green"
    out_dir: str = "out"
    formats: list = field(default_factory=lambda: ["pajek", "graphml", "svg"])

    def validate(self) -> None:
        if not self.input:
            raise UsageError("--input is required")
        if not 0.0 <= self.cosine_threshold <= 1.0:
            raise UsageError("cosine threshold must lie in [0, 1]")
        for name in ("author_min", "word_min", "journal_min"):
            if getattr(self, name) < 1:
                raise UsageError("%s must be >= 1" % name)
        bad = set(self.formats) - set(FORMATS)
        if bad:
            raise UsageError("unknown format(s): %s" % ", ".join(sorted(bad)))
        if not self.classes:
            raise UsageError("at least one class is required")
        try:
            [AttributeClass.parse(c) for c in self.classes]
        except ValueError as exc:
            raise UsageError(str(exc)) from None

    @property
    def thresholds(self) -> dict[AttributeClass, int]:
        return {AttributeClass.AUTHOR: self.author_min, AttributeClass.WORD: self.word_min,
                AttributeClass.JOURNAL: self.journal_min}

    @property
    def class_set(self) -> list[AttributeClass]:
        wanted = {AttributeClass.parse(c) for c in self.classes}
        return [c for c in ALL_CLASSES if c in wanted]

    def layout_params(self) -> LayoutParams:
        return LayoutParams(side=self.side, tol=self.tol, seed=self.seed)

    def style(self) -> StyleSpec:
        return StyleSpec(s_min=self.s_min, s_scale=self.s_scale, new_node_color=self.new_node_color)


def _csv_list(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def resolve_config(args: argparse.Namespace) -> RunConfig:
    file_cfg: dict = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                file_cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError("cannot read config %s: %s" % (args.config, exc)) from None
        if not isinstance(file_cfg, dict):
            raise UsageError("config file must hold a JSON object")
    preset = args.preset or file_cfg.pop("preset", None) or DEFAULT_PRESET[args.command]
    file_cfg.pop("preset", None)
    if preset not in PRESETS:
        raise UsageError("unknown preset %r (choose from %s)" % (preset, ", ".join(PRESETS)))

    known = {f.name for f in fields(RunConfig)}
    unknown = set(file_cfg) - known
    if unknown:
        raise UsageError("unknown config key(s): %s" % ", ".join(sorted(unknown)))

    values = asdict(RunConfig())
    values.update(PRESETS[preset])
    values.update(file_cfg)
    for name in known:
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    try:
        cfg = RunConfig(**values)
    except TypeError as exc:
        raise UsageError(str(exc)) from None
    cfg.validate()
    return cfg


@contextmanager
def stage(name: str):
    try:
        yield
    except HetmapError as exc:
        raise StageError(name, exc) from exc
    except OSError as exc:
        raise StageError(name, exc) from exc


class StageError(Exception):
    def __init__(self, stage_name: str, cause: Exception):
        super().__init__("[%s] %s: %s" % (stage_name, type(cause).__name__, cause))


def _load(cfg: RunConfig):
    with stage("parse"):
        rs = read_records(cfg.input)
    for line_no, msg in rs.warnings:
        log.warning("line %d: %s", line_no, msg)
    with stage("stopwords"):
        stop = load_stopwords(cfg.stopwords)
    return rs, stop


def _write(out_dir: Path, name: str, text: str) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def cmd_inspect(cfg: RunConfig) -> int:
    with stage("parse"):
        rs = read_records(cfg.input)
    for line_no, msg in rs.warnings:
        log.warning("line %d: %s", line_no, msg)
    print(recordset_stats(rs).summary())
    return EXIT_OK


def cmd_map(cfg: RunConfig) -> int:
    rs, stop = _load(cfg)
    with stage("catalog"):
        cat = build_catalog(rs, cfg.thresholds, cfg.exclude_author, stop)
    with stage("matrix"):
        m = build_matrix(rs, cat)
        if set(cfg.class_set) != set(ALL_CLASSES):
            m = submatrix(m, cfg.class_set)
    with stage("graph"):
        g = build_graph(m, cfg.cosine_threshold)
    with stage("layout"):
        lay = kk_layout(g, cfg.layout_params())
    out = Path(cfg.out_dir)
    style = cfg.style()
    with stage("export"):
        written = []
        if "pajek" in cfg.formats:
            written.append(_write(out, "map.net", write_pajek(g, lay.positions, style)))
            written.append(_write(out, "map.clu", write_clu(g)))
        if "graphml" in cfg.formats:
            written.append(_write(out, "map.graphml", write_graphml(g, lay.positions, style)))
        if "svg" in cfg.formats:
            written.append(_write(out, "map.svg", render_svg(g, lay.positions, style)))
        if "csv" in cfg.formats:
            written.append(_write(out, "matrix.csv", matrix_to_csv(m)))
    if "factors" in cfg.formats:
        with stage("factors"):
            fr = factor_analysis(m)
            written.append(_write(out, "factors.csv", factor_report_csv(fr, min(10, len(fr.eigenvalues)))))
    print("nodes: %d, edges: %d, components: %d" % (g.n, len(g.edges), len(connected_components(g))))
    if not lay.converged:
        print("warning: layout stopped at the iteration cap before converging", file=sys.stderr)
    for path in written:
        print("wrote %s" % path)
    return EXIT_OK


def cmd_slice(cfg: RunConfig) -> int:
    rs, stop = _load(cfg)
    years = [r.year for r in rs.records if r.year is not None]
    if not years:
        raise StageError("slice", HetmapError("no dated records in %s" % cfg.input))
    start = cfg.period_start if cfg.period_start is not None else min(years)
    end = cfg.period_end if cfg.period_end is not None else max(years) + 1
    with stage("slice"):
        periods = slice_by_period(rs, start, cfg.period_width, end)
    print(periods.report())
    with stage("frames"):
        manifest = build_frames(
            periods, rs, cfg.thresholds, cfg.cosine_threshold, cfg.layout_params(), cfg.style(),
            stopwords=stop, excluded_author=cfg.exclude_author, classes=cfg.class_set,
            rebuild_catalog=not cfg.global_catalog)
    out = Path(cfg.out_dir)
    with stage("export"):
        _write(out, "frames.json", manifest.to_json())
        for i, (frame, svg) in enumerate(zip(manifest.frames, manifest.svgs()), start=1):
            _write(out, "frame_%02d_%s.svg" % (i, frame.label), svg)
    for frame in manifest.frames:
        n = 0 if frame.graph is None else frame.graph.n
        e = 0 if frame.graph is None else len(frame.graph.edges)
        print("%s: %d records, %d nodes, %d edges, %d new"
              % (frame.label, len(frame.record_ids), n, e, sum(frame.is_new)))
    print("wrote %s" % (out / "frames.json"))
    return EXIT_OK


def cmd_factors(cfg: RunConfig) -> int:
    rs, stop = _load(cfg)
    with stage("catalog"):
        cat = build_catalog(rs, cfg.thresholds, cfg.exclude_author, stop)
    with stage("matrix"):
        m = submatrix(build_matrix(rs, cat), cfg.class_set)
    with stage("factors"):
        fr = factor_analysis(m)
    print("columns analyzed: %d (dropped %d constant)" % (fr.p, len(fr.dropped_columns)))
    kmax = min(10, len(fr.eigenvalues))
    for k in range(1, kmax + 1):
        print("k=%d cumulative=%.4f" % (k, variance_explained(fr, k)))
    path = _write(Path(cfg.out_dir), "factors.csv", factor_report_csv(fr, kmax))
    print("wrote %s" % path)
    return EXIT_OK


COMMANDS = {"inspect": cmd_inspect, "map": cmd_map, "slice": cmd_slice, "factors": cmd_factors}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, "%s: error: %s\n" % (self.prog, message))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hetmap", description="Heterogeneous co-occurrence maps from ISI tagged exports.")
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--input", "-i", help="ISI tagged plain-text export")
    common.add_argument("--config", help="JSON config file; flags override its values")
    common.add_argument("--preset", choices=sorted(PRESETS))
    common.add_argument("--stopwords", help="stopword file, one word per line")
    common.add_argument("--author-min", dest="author_min", type=int)
    common.add_argument("--word-min", dest="word_min", type=int)
    common.add_argument("--journal-min", dest="journal_min", type=int)
    common.add_argument("--exclude-author", dest="exclude_author",
                        help="focal author to drop from the author class, e.g. 'Callon, M'")
    common.add_argument("--cosine-threshold", dest="cosine_threshold", type=float)
    common.add_argument("--classes", type=_csv_list, help="comma list of author,word,journal")
    common.add_argument("--period-start", dest="period_start", type=int)
    common.add_argument("--period-width", dest="period_width", type=int)
    common.add_argument("--period-end", dest="period_end", type=int, help="exclusive end year")
    common.add_argument("--global-catalog", dest="global_catalog", action="store_const", const=True,
                        help="reuse the corpus-wide catalog in every period instead of rebuilding it")
    common.add_argument("--formats", type=_csv_list, help="comma list of %s" % ",".join(FORMATS))
    common.add_argument("--out-dir", dest="out_dir")
    common.add_argument("--seed", type=int)
    common.add_argument("--side", type=float)
    common.add_argument("-v", "--verbose", action="store_true")

    sub.add_parser("inspect", parents=[common], help="print corpus summary")
    sub.add_parser("map", parents=[common], help="build, lay out and export one map")
    sub.add_parser("slice", parents=[common], help="per-period animation frames")
    sub.add_parser("factors", parents=[common], help="factor analysis of the occurrence matrix")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except UsageError as exc:
        print("hetmap: usage error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except StageError as exc:
        print("hetmap: error %s" % exc, file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
