"""Command-line front end. Each subcommand parses flags, calls the library and
writes the result; the work itself lives in the library modules.

Exit status: 0 success, 1 domain error, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import CONTRACT_REVISION, __version__
from ._util import atomic_write_text, dumps_line, read_jsonl
from .errors import OutbreakNetError


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None, what: str = "lines") -> None:
    if out:
        atomic_write_text(out, text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
    n = text.count("\n")
    print(f"{n} {what} -> {out or '<stdout>'}", file=sys.stderr)


def _jsonl(records) -> str:
    return "".join(dumps_line(r) + "\n" for r in records)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _window(args):
    from .ingest import QueryWindow
    if not args.window:
        return None
    w = QueryWindow.parse(args.window)
    return QueryWindow(w.start_date, w.end_date, args.keyword or w.keyword)


# -- ingest --------------------------------------------------------------------

def cmd_ingest(args):
    from . import ingest
    if args.schema == "headlines":
        text = Path(args.inp).read_text(encoding="utf-8")
        parsed = ingest.parse_headline_lines(text.splitlines(),
                                             collect_errors=args.skip_invalid)
        if args.skip_invalid:
            parsed, errors = parsed
            for err in errors:
                print(f"skipped: {err}", file=sys.stderr)
        _emit(_jsonl(dict(line=n, **h.to_dict()) for n, h in parsed), args.out)
        return 0

    records = ingest.read_table(args.inp, args.schema)
    if args.schema == "reports":
        window = _window(args)
        if window is not None:
            records = ingest.filter_reports(records, window, fields=args.fields)
        if args.drop_summaries:
            records = ingest.drop_summaries(records)
        if args.dedupe:
            records = ingest.dedupe_reports(records)
        if args.format == "csv":
            _emit(ingest.write_reports_table(records), args.out)
            return 0
    _emit(_jsonl(r.to_dict() for r in records), args.out, "records")
    return 0


# -- registry ------------------------------------------------------------------

def cmd_registry(args):
    from .registry import CaseObservation, Registry
    reg = Registry.load(args.registry) if os.path.exists(args.registry) else Registry()
    if args.action == "upsert":
        if not args.inp:
            raise UsageError("registry upsert requires --in")
        # case-network files mix node, infection and travel records
        ids = [reg.upsert_case(CaseObservation.from_dict(r)) for r in read_jsonl(args.inp)
               if r.get("kind", "node") == "node"]
        atomic_write_text(args.registry, reg.to_jsonl())
        _emit("".join(f"{cid}\n" for cid in ids), args.out, "case ids")
    elif args.action == "counts":
        _emit(_json(reg.status_counts().to_dict()), args.out)
    elif args.action == "backtrack":
        if not args.case:
            raise UsageError("registry backtrack requires --case")
        _emit("".join(f"{cid}\n" for cid in reg.backtrack(args.case)), args.out, "case ids")
    else:  # show
        _emit(reg.to_jsonl(), args.out, "records")
    return 0


# -- net / export --------------------------------------------------------------

def cmd_net(args):
    from .network import export_graph, load_case_network
    net = load_case_network(args.inp)
    _emit(export_graph(net.graph, args.export or "json"), args.out)
    return 0


def cmd_export(args):
    from .network import export_graph, load_graph
    _emit(export_graph(load_graph(args.inp), args.format), args.out)
    return 0


# -- analyze -------------------------------------------------------------------

def cmd_analyze(args):
    from . import analytics
    if args.action == "cfr":
        if args.deaths is None or args.cases is None:
            raise UsageError("analyze cfr requires --deaths and --cases")
        rate = analytics.case_fatality_rate(args.deaths, args.cases)
        _emit(f"{rate.rounded(args.decimals)}\n", args.out)
        return 0

    if not args.inp:
        raise UsageError(f"analyze {args.action} requires --in")
    from .network import load_case_network
    net = load_case_network(args.inp)
    if args.action == "hcw":
        result = analytics.hcw_stats(net.registry, net.graph).to_dict()
    elif args.action == "spreaders":
        result = [list(p) for p in analytics.super_spreaders(net.graph, args.k)]
    else:
        result = analytics.summarize_network(net.registry, net.graph, spreader_k=args.k)
    _emit(_json(result), args.out)
    return 0


# -- timeline ------------------------------------------------------------------

def cmd_timeline(args):
    from . import analytics
    tl = analytics.build_timeline(analytics.read_events(args.inp), args.anchor)
    if args.lag:
        lag = analytics.response_lag(tl, *args.lag)
        _emit(_json({"trigger": args.lag[0], "response": args.lag[1],
                     "days": lag.days, "weeks": lag.weeks}), args.out)
    else:
        _emit(tl.to_csv(), args.out)
    return 0


# -- media ---------------------------------------------------------------------

def cmd_media(args):
    from . import ingest, media
    if args.action == "correlate":
        if not (args.a and args.b):
            raise UsageError("media correlate requires --a and --b")
        a = media.TimeSeries.from_csv(Path(args.a).read_text(encoding="utf-8"), "a",
                                      args.granularity)
        b = media.TimeSeries.from_csv(Path(args.b).read_text(encoding="utf-8"), "b",
                                      args.granularity)
        a, b = media.align(a, b)
        _emit(f"{media.pearson(a, b):.6f}\n", args.out)
        return 0

    if not args.inp:
        raise UsageError(f"media {args.action} requires --in")
    if args.action == "series":
        window = _window(args)
        if window is None:
            raise UsageError("media series requires --window")
        reports = ingest.read_table(args.inp, "reports")
        reports = ingest.filter_reports(reports, window, fields=args.fields)
        if args.drop_summaries:
            reports = ingest.drop_summaries(reports)
        series = media.bucket_counts(reports, args.granularity, window)
        _emit(series.to_csv(), args.out)
        return 0

    records = ingest.read_table(args.inp, "media_counts")
    if not args.outlet:
        raise UsageError(f"media {args.action} requires --outlet")
    if args.action == "lookup":
        if not args.window:
            raise UsageError("media lookup requires --window")
        w = ingest.QueryWindow.parse(args.window)
        _emit(f"{media.lookup_count(records, args.outlet, w)}\n", args.out)
    elif args.action == "totals":
        t = media.table_totals(records, args.outlet)
        _emit(_json({"outlet": t.outlet, "period_sum": t.period_sum,
                     "stated_total": t.stated_total, "discrepancy": t.discrepancy}), args.out)
    else:  # table-series
        _emit(media.series_from_records(records, args.outlet).to_csv(), args.out)
    return 0


# -- simulate ------------------------------------------------------------------

def cmd_simulate(args):
    from . import sim
    cfg = sim.SimConfig.load(args.inp)
    seed_person = args.seed_person or cfg.seed_person
    if not seed_person:
        raise UsageError("no seed person: set seed_person in the config or pass --seed-person")
    if args.runs == 1:
        res = sim.simulate(cfg.contacts, cfg.params, seed_person, cfg.interventions,
                           rng_seed=sim.derive_seed(args.seed, 0), backend=args.backend)
        _emit(res.to_json(), args.out)
    else:
        summary = sim.ensemble(cfg.contacts, cfg.params, seed_person, cfg.interventions,
                               n_runs=args.runs, master_seed=args.seed,
                               backend=args.backend, workers=args.workers)
        _emit(_json(summary.to_dict()), args.out)
    return 0


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="outbreaknet", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=version_info())
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_, inp=True, inp_required=True):
        sp = sub.add_parser(name, help=help_, description=help_)
        if inp:
            sp.add_argument("--in", dest="inp", required=inp_required, metavar="PATH")
        sp.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
        sp.set_defaults(func=func)
        return sp

    def window_flags(sp):
        sp.add_argument("--window", metavar="START:END", help="ISO dates, inclusive")
        sp.add_argument("--keyword", default="")
        sp.add_argument("--fields", nargs="+", default=["headline"],
                        choices=sorted({"post", "subject", "headline"}),
                        help="report fields searched for the keyword")
        sp.add_argument("--drop-summaries", action="store_true")

    sp = add("ingest", cmd_ingest, "parse headline files and report tables")
    sp.add_argument("--schema", required=True,
                    choices=["headlines", "media_counts", "case_sources", "reports"])
    sp.add_argument("--format", choices=["json", "csv"], default="json",
                    help="output layout for the reports schema")
    sp.add_argument("--skip-invalid", action="store_true",
                    help="report malformed headlines on stderr instead of failing")
    sp.add_argument("--dedupe", action="store_true")
    window_flags(sp)

    sp = add("registry", cmd_registry, "maintain a JSON-lines case registry", inp_required=False)
    sp.add_argument("action", choices=["upsert", "show", "counts", "backtrack"])
    sp.add_argument("--registry", required=True, metavar="PATH")
    sp.add_argument("--case", metavar="CASE_ID")

    sp = add("net", cmd_net, "build a transmission graph from a case-network file")
    sp.add_argument("--export", choices=["dot", "graphml", "json"])

    sp = add("export", cmd_export, "convert a graph to dot, graphml or json")
    sp.add_argument("--format", required=True, choices=["dot", "graphml", "json"])

    sp = add("analyze", cmd_analyze, "fatality rates and network summaries", inp_required=False)
    sp.add_argument("action", choices=["cfr", "hcw", "spreaders", "network"])
    sp.add_argument("--deaths", type=int)
    sp.add_argument("--cases", type=int)
    sp.add_argument("--decimals", type=int, default=4)
    sp.add_argument("-k", type=int, default=5, help="super-spreader out-degree threshold")

    sp = add("timeline", cmd_timeline, "epi-week timeline from an event file")
    sp.add_argument("--anchor", required=True, metavar="DATE")
    sp.add_argument("--lag", nargs=2, metavar=("TRIGGER", "RESPONSE"))

    sp = add("media", cmd_media, "media-attention series and correlation", inp_required=False)
    sp.add_argument("action", choices=["series", "lookup", "totals", "table-series", "correlate"])
    sp.add_argument("--granularity", choices=["weekly", "monthly"], default="monthly")
    sp.add_argument("--outlet")
    sp.add_argument("--a", metavar="CSV")
    sp.add_argument("--b", metavar="CSV")
    window_flags(sp)

    sp = add("simulate", cmd_simulate, "seeded outbreak simulation")
    sp.add_argument("--seed", type=int, default=0, help="master seed")
    sp.add_argument("--runs", type=int, default=1)
    sp.add_argument("--seed-person")
    sp.add_argument("--backend", choices=["numba", "numpy"])
    sp.add_argument("--workers", type=int, default=1)
    return p


def version_info() -> str:
    return f"outbreaknet {__version__} {CONTRACT_REVISION}"


def _check_paths(args, parser):
    for name in ("inp", "a", "b"):
        v = getattr(args, name, None)
        if v and not os.path.isfile(v):
            parser.error(f"input file not found: {v}")
    out = getattr(args, "out", None)
    if out:
        parent = os.path.dirname(os.path.abspath(out))
        if not os.path.isdir(parent):
            parser.error(f"output directory does not exist: {parent}")
    if getattr(args, "runs", 1) < 1:
        parser.error("--runs must be >= 1")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _check_paths(args, parser)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (OutbreakNetError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"{type(exc).__name__}: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
