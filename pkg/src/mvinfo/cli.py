"""Command-line interface: ``mvinfo {compute,tables,netgen,analyze,shuffle}``."""
from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field

from . import golden, ingest, io, measures, netgen
from . import pid as _pid
from .dist import DistributionError, InvalidSplit, SourceTargetSplit

UNITS = {"bits": 1.0, "millibits": 1000.0}

COMPUTE_MEASURES = (
    "mi_single", "mi_joint", "ii", "ci", "tc", "dtc", "delta_i", "mi_delta_gap", "rsi", "vs", "pid",
)


class UnknownMeasure(KeyError):
    def __str__(self):
        return str(self.args[0])


class CliError(Exception):
    """Raised for user errors; reported as one line with exit status ``code``."""

    def __init__(self, message: str, code: int = 1):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    subcommand: str
    input: str | None = None
    output: str | None = None
    measures: list[str] | None = None
    sources: list[str] | None = None
    target: str | None = None
    bin_width: float = 0.016
    seed: int | None = None
    unit: str = "bits"
    extra: dict = field(default_factory=dict)


def _split_list(text: str | None) -> list[str] | None:
    if text is None:
        return None
    items = [t.strip() for t in text.split(",") if t.strip()]
    return items or None


def _check_measures(names, registry) -> list[str] | None:
    if names is None:
        return None
    for n in names:
        if n not in registry:
            raise UnknownMeasure(f"unknown measure {n!r}; choose from {', '.join(registry)}")
    return list(names)


# -- compute ------------------------------------------------------------------


def compute_report(d, split: SourceTargetSplit, selection=None) -> list[measures.MeasureResult]:
    """Evaluate the selected measures (all applicable ones by default) on ``d``."""
    explicit = selection is not None
    selection = list(COMPUTE_MEASURES) if selection is None else selection
    names = d.variables
    src_names = [names[i] for i in split.sources]
    tgt = names[split.target]
    every = [names[i] for i in split.all_indices]
    n = split.n_sources
    h = measures.EntropyTable(d)
    y = (split.target,)
    out: list[measures.MeasureResult] = []

    def add(name, label, value):
        out.append(measures.MeasureResult(value, name, split, label))

    for m in selection:
        needs_two = m in ("rsi", "vs", "pid")
        if needs_two and n < 2 or m == "pid" and n > 3:
            if explicit:
                raise InvalidSplit(f"measure {m!r} is not defined for {n} source(s)")
            continue
        if m in ("ii", "ci", "tc", "dtc") and len(every) < 2:
            continue
        if m == "mi_single":
            for k, i in enumerate(split.sources):
                add(f"mi_x{k + 1}", f"I({names[i]};{tgt})", measures.mutual_information(d, (i,), y, cache=h))
        elif m == "mi_joint":
            add(m, f"I({','.join(src_names)};{tgt})", measures.mutual_information(d, split.sources, y, cache=h))
        elif m == "ii":
            add(m, f"II({';'.join(every)})", measures.interaction_information(d, split.all_indices, cache=h))
        elif m == "ci":
            add(m, f"CI({';'.join(every)})", measures.co_information(d, split.all_indices, cache=h))
        elif m == "tc":
            add(m, f"TC({';'.join(every)})", measures.total_correlation(d, split.all_indices, cache=h))
        elif m == "dtc":
            add(m, f"DTC({';'.join(every)})", measures.dual_total_correlation(d, split.all_indices, cache=h))
        elif m == "delta_i":
            add(m, f"DeltaI({','.join(src_names)};{tgt})", measures.delta_i(d, split))
        elif m == "mi_delta_gap":
            add(m, f"I-DeltaI({','.join(src_names)};{tgt})", measures.mi_delta_gap(d, split))
        elif m == "rsi":
            add(m, f"RSI({','.join(src_names)};{tgt})", measures.redundancy_synergy_index(d, split, cache=h))
        elif m == "vs":
            add(m, f"VS({','.join(src_names)};{tgt})", measures.varadan_synergy(d, split, cache=h))
        elif m == "pid":
            result = _pid.decompose(d, split)
            for node, v in result.terms.items():
                add(f"pid{node.label}", f"PI({tgt};{node.label})", v)
    return out


def cmd_compute(cfg: RunConfig) -> int:
    d = _load_distribution(cfg.input)
    try:
        if cfg.sources is None and cfg.target is None:
            split = SourceTargetSplit.default(d)
        else:
            target = cfg.target if cfg.target is not None else d.variables[-1]
            sources = cfg.sources or [v for v in d.variables if v != target]
            split = SourceTargetSplit.of(d, sources, target)
    except InvalidSplit as exc:
        raise CliError(f"invalid split: {exc}") from None
    try:
        report = compute_report(d, split, cfg.measures)
    except InvalidSplit as exc:
        raise CliError(f"invalid split: {exc}") from None
    scale = UNITS[cfg.unit]
    with _open_out(cfg.output) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["measure", "label", f"value_{cfg.unit}"])
        for r in report:
            w.writerow([r.measure_name, r.label, io.fmt(r.value * scale)])
    return 0


def _load_distribution(path):
    try:
        return io.read_distribution(path)
    except FileNotFoundError:
        raise CliError(f"file not found: {path}") from None
    except (io.ParseError, DistributionError, ValueError) as exc:
        raise CliError(f"cannot parse {path}: {exc}") from None


class _open_out:
    def __init__(self, path):
        self.path = path

    def __enter__(self):
        if self.path in (None, "-"):
            return sys.stdout
        self.fh = open(self.path, "w", newline="", encoding="utf-8")
        return self.fh

    def __exit__(self, *exc):
        if self.path not in (None, "-"):
            self.fh.close()


# -- tables -------------------------------------------------------------------


def cmd_tables(cfg: RunConfig) -> int:
    tables = cfg.extra.get("filter")
    if tables:
        unknown = [t for t in tables if t.upper() not in golden.TABLES]
        if unknown:
            raise CliError(f"unknown table(s) {unknown}; choose from {', '.join(golden.TABLES)}")
    results = golden.run_tables(tables)
    failures = 0
    with _open_out(cfg.output) as fh:
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            failures += not r.passed
            fh.write(
                f"{status} table={r.table} example={r.example} measure={r.measure} unit={r.unit} "
                f"expected={io.fmt(r.expected)} actual={io.fmt(r.actual)} "
                f"residual={io.fmt(r.residual, 3)} tol={io.fmt(r.tol)}\n"
            )
        fh.write(f"{len(results) - failures}/{len(results)} cells passed\n")
    return 0 if failures == 0 else 1


# -- netgen -------------------------------------------------------------------


def cmd_netgen(cfg: RunConfig) -> int:
    e = cfg.extra
    try:
        params = netgen.NetworkParams(e["pr"], e["p12"], e["p1y"], e["p2y"])
    except netgen.ParamOutOfRange as exc:
        raise CliError(str(exc)) from None
    d = netgen.expand(params)
    if cfg.output in (None, "-"):
        sys.stdout.write(io.distribution_to_csv(d))
    else:
        io.write_distribution(d, cfg.output)
    return 0


# -- analyze / shuffle --------------------------------------------------------


def _load_raster(cfg: RunConfig) -> ingest.SpikeRaster:
    path = cfg.extra.get("raster") or cfg.extra.get("events")
    try:
        if cfg.extra.get("raster"):
            return io.read_raster(path)
        events = io.read_events(path)
        return ingest.bin(events, cfg.bin_width)
    except FileNotFoundError:
        raise CliError(f"file not found: {path}") from None
    except (io.ParseError, ingest.IngestError, ValueError) as exc:
        raise CliError(f"cannot read {path}: {exc}") from None


def _write_summary(fh, summaries: dict[str, dict]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["measure", "p10", "p50", "p90", "mean", "n"])
    for name, s in summaries.items():
        w.writerow([name, io.fmt(s["p10"]), io.fmt(s["p50"]), io.fmt(s["p90"]), io.fmt(s["mean"]), s["n"]])


def cmd_analyze(cfg: RunConfig) -> int:
    if not (cfg.extra.get("raster") or cfg.extra.get("events")):
        raise CliError("analyze needs --events FILE or --raster FILE", code=2)
    if not cfg.bin_width > 0:
        raise CliError("--bin-width must be positive", code=2)
    raster = _load_raster(cfg)
    try:
        table = ingest.sweep_table(raster, cfg.measures, cfg.extra.get("backend"))
    except ingest.IngestError as exc:
        raise CliError(str(exc)) from None
    summaries = {c: s for c, s in ingest.summarize(table).items()}
    extra = {}
    if cfg.seed is not None:
        null = ingest.sweep_table(ingest.shuffle_null(raster, cfg.seed), cfg.measures, cfg.extra.get("backend"))
        scale = UNITS[cfg.unit]
        norm = null.normalized()
        for k, c in enumerate(null.columns):
            extra[c + "_shuf"] = null.values[:, k] * scale
        for k, c in enumerate(null.columns):
            extra[c + "_norm_shuf"] = norm[:, k]
        extra["h_y_shuf"] = null.h_y * scale
        summaries.update({c + "_shuf": s for c, s in ingest.summarize(null).items()})
    if cfg.output in (None, "-"):
        raise CliError("analyze needs --out FILE for the sweep table", code=2)
    io.write_sweep(table, cfg.output, UNITS[cfg.unit], extra)
    summary_path = cfg.extra.get("summary")
    if summary_path:
        with open(summary_path, "w", newline="", encoding="utf-8") as fh:
            _write_summary(fh, summaries)
    else:
        _write_summary(sys.stdout, summaries)
    return 0


def cmd_shuffle(cfg: RunConfig) -> int:
    raster = _load_raster(cfg)
    try:
        null = ingest.shuffle_null(raster, cfg.seed)
    except ingest.IngestError as exc:
        raise CliError(str(exc)) from None
    if cfg.output in (None, "-"):
        raise CliError("shuffle needs --out FILE", code=2)
    io.write_raster(null, cfg.output)
    return 0


# -- argument parsing ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mvinfo", description=__doc__)
    sub = p.add_subparsers(dest="subcommand", required=True)

    c = sub.add_parser("compute", help="information measures of a distribution file")
    c.add_argument("--dist", required=True, help="distribution CSV or JSON")
    c.add_argument("--sources", help="comma-separated source variable names (default: all but target)")
    c.add_argument("--target", help="target variable name (default: last variable)")
    c.add_argument("--measures", help="comma-separated subset of: " + ",".join(COMPUTE_MEASURES))
    c.add_argument("--unit", choices=sorted(UNITS), default="bits")
    c.add_argument("--out", help="output CSV (default: stdout)")

    t = sub.add_parser("tables", help="recompute the worked-example tables and compare")
    t.add_argument("--filter", action="append", help="table id (I, II, III, IV, V, VI, VII, AI); repeatable or comma-separated")
    t.add_argument("--out", help="report file (default: stdout)")

    n = sub.add_parser("netgen", help="joint distribution of the three-node network")
    n.add_argument("--pr", type=float, required=True)
    n.add_argument("--p12", type=float, required=True)
    n.add_argument("--p1y", type=float, required=True)
    n.add_argument("--p2y", type=float, required=True)
    n.add_argument("--out", help="CSV or .json output (default: CSV on stdout)")

    a = sub.add_parser("analyze", help="triplet sweep over spike data")
    src = a.add_mutually_exclusive_group(required=True)
    src.add_argument("--events", help="event CSV (channel,time_s)")
    src.add_argument("--raster", help="raster CSV")
    a.add_argument("--bin-width", type=float, default=0.016, help="seconds (default 0.016)")
    a.add_argument("--measures", help="comma-separated subset of: " + ",".join(ingest.MEASURE_GROUPS))
    a.add_argument("--shuffle", type=int, metavar="SEED", help="also sweep a rotation null with this seed")
    a.add_argument("--unit", choices=sorted(UNITS), default="bits")
    a.add_argument("--out", required=True, help="sweep CSV")
    a.add_argument("--summary", help="percentile summary CSV (default: stdout)")
    a.add_argument("--backend", choices=("cython", "python"), help="kernel backend (default: fastest available)")

    s = sub.add_parser("shuffle", help="rotation null of a raster")
    s.add_argument("--raster", required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out", required=True)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    sc = ns.subcommand
    if sc == "compute":
        return RunConfig(
            sc, ns.dist, ns.out, _check_measures(_split_list(ns.measures), COMPUTE_MEASURES),
            _split_list(ns.sources), ns.target, unit=ns.unit,
        )
    if sc == "tables":
        filt = None
        if ns.filter:
            filt = [t for chunk in ns.filter for t in _split_list(chunk) or []]
        return RunConfig(sc, output=ns.out, extra={"filter": filt})
    if sc == "netgen":
        return RunConfig(sc, output=ns.out, extra={"pr": ns.pr, "p12": ns.p12, "p1y": ns.p1y, "p2y": ns.p2y})
    if sc == "analyze":
        registry = tuple(ingest.MEASURE_GROUPS) + tuple(c for c in ingest.kernels.COLUMNS if c != "h_y")
        return RunConfig(
            sc, ns.events or ns.raster, ns.out, _check_measures(_split_list(ns.measures), registry),
            bin_width=ns.bin_width, seed=ns.shuffle, unit=ns.unit,
            extra={"events": ns.events, "raster": ns.raster, "summary": ns.summary, "backend": ns.backend},
        )
    return RunConfig(sc, ns.raster, ns.out, seed=ns.seed, extra={"raster": ns.raster})


COMMANDS = {
    "compute": cmd_compute,
    "tables": cmd_tables,
    "netgen": cmd_netgen,
    "analyze": cmd_analyze,
    "shuffle": cmd_shuffle,
}


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        return COMMANDS[cfg.subcommand](cfg)
    except UnknownMeasure as exc:
        print(f"mvinfo {ns.subcommand}: error: {exc}", file=sys.stderr)
        return 2
    except CliError as exc:
        print(f"mvinfo {ns.subcommand}: error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
