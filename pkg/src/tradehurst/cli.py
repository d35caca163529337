"""Command-line front end: ``tradehurst {ingest,analyze,buckets,shuffle-check,synth}``.

Exit codes: 0 success (possibly with warnings), 1 every input failed,
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import logging
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import date, datetime, timedelta, timezone
from functools import partial
from pathlib import Path

from . import __version__, _kernels, pipeline, reports
from .config import ConfigError, build_config, read_config_file
from .ingest import DropReason, write_tape
from .series import UNASSIGNED, monthly_summary
from .synth import SynthSpec, generate, tape_from_values

logger = logging.getLogger("tradehurst")

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_run_options(p):
    p.add_argument("inputs", nargs="*", default=None, help="tape files, directories or globs")
    p.add_argument("--config", help="flat key = value configuration file")
    p.add_argument("--out", help="output directory")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--schema", help="column order, e.g. time,price,size,sale_condition,correction,exchange_tag")
    p.add_argument("--delimiter")
    p.add_argument("--delta-t", dest="delta_t", type=float)
    p.add_argument("--j1", type=int)
    p.add_argument("--j2", type=int)
    p.add_argument("--max-octave", dest="max_octave", type=int)
    p.add_argument("--session-start", dest="session_start", type=float)
    p.add_argument("--session-end", dest="session_end", type=float)
    p.add_argument("--nasdaq-trim", dest="nasdaq_trim_seconds", type=int)
    p.add_argument("--excluded-conditions", dest="excluded_conditions")
    p.add_argument("--allowed-corrections", dest="allowed_corrections")
    p.add_argument("--size-buckets", dest="size_buckets", help='e.g. "<250:1-249;1500+:1500-"')
    p.add_argument("--monthly-ci", dest="monthly_ci", choices=("percentile", "gaussian"))
    p.add_argument("--bias-correction", dest="bias_correction", action="store_true", default=None,
                   help="subtract the Gaussian log-moment bias from y_j (off by default)")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tradehurst", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("ingest", "filter tapes and write 1-second traded-value series"),
        ("analyze", "daily Hurst estimates and monthly roll-up"),
        ("buckets", "per trade-size Hurst estimates and proportions"),
        ("shuffle-check", "compare estimates before and after shuffling buckets"),
    ):
        _add_run_options(sub.add_parser(name, help=help_text))

    s = sub.add_parser("synth", help="generate synthetic series or tapes")
    s.add_argument("--config")
    s.add_argument("--kind", choices=("white", "fgn", "superposition"), default="fgn")
    s.add_argument("--H", dest="target_H", type=float, default=0.5)
    s.add_argument("--length", type=int, default=23400)
    s.add_argument("--seed", type=int)
    s.add_argument("--mix-weight", dest="mix_weight", type=float, default=1.0)
    s.add_argument("--out")
    s.add_argument("--name", default="synth")
    s.add_argument("--as-tape", action="store_true", help="write trade tapes instead of a value column")
    s.add_argument("--sessions", type=int, default=1, help="number of tapes (seeds seed, seed+1, ...)")
    s.add_argument("--symbol", default="SYN")
    s.add_argument("--date", default="2009-01-05", help="first session date, YYYY-MM-DD")
    s.add_argument("--exchange-tag", dest="exchange_tag", default="N")
    return parser


def _config_from_args(args):
    file_values = read_config_file(args.config) if getattr(args, "config", None) else {}
    overrides = {k: v for k, v in vars(args).items() if k not in ("command", "config", "verbose")}
    if not overrides.get("inputs"):
        overrides["inputs"] = None
    return build_config(file_values, overrides)


# ---------------------------------------------------------------------------
# session fan-out
# ---------------------------------------------------------------------------


def _safe(func, cfg, path):
    try:
        return path, func(path, cfg), None
    except Exception as err:  # per-file failures are reported, not fatal
        return path, None, f"{type(err).__name__}: {err}"


def run_sessions(func, files, cfg):
    work = partial(_safe, func, cfg)
    if cfg.workers > 1 and len(files) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(work, files))
    else:
        results = [work(f) for f in files]
    for path, _, err in results:
        if err:
            logger.warning("skipping %s: %s", path, err)
    return results


def _write_manifest(cmd, cfg, results, out_dir, extra=None):
    manifest = {
        "command": cmd,
        "version": __version__,
        "backend": _kernels.BACKEND,
        "config_sha256": cfg.digest(),
        "config": cfg.as_dict(),
        "inputs": [p for p, _, _ in results],
        "disposition": {p: ("ok" if err is None else err) for p, _, err in results},
        "created_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    manifest.update(extra or {})
    reports.write_json(manifest, Path(out_dir) / "manifest.json")


def _status(results):
    if results and all(err is not None for _, _, err in results):
        logger.error("every input failed")
        return EXIT_FAILED
    return EXIT_OK


def _files(cfg):
    files = cfg.input_files()
    if not files:
        raise UsageError("no input sessions given")
    return files


def _session_key(res):
    return (res["symbol"], res["date"] or date.min)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_ingest(cfg) -> int:
    files = _files(cfg)
    results = run_sessions(pipeline.ingest_file, files, cfg)
    out = Path(cfg.out)
    reasons = [r.value for r in DropReason]
    rows = []
    for path, res, err in results:
        if err:
            continue
        stem = Path(path).stem
        reports.write_series(res["series"], out / "series" / stem)
        row = {"file": Path(path).name, "symbol": res["symbol"], "date": res["date"],
               "parsed": res["parsed"], "kept": res["kept"], "mean_trade_size": res["mean_trade_size"]}
        row.update({r: res["drops"].get(r, 0) for r in reasons})
        rows.append(row)
    cols = ["file", "symbol", "date", "parsed", "kept", *reasons, "mean_trade_size"]
    reports.write_table(rows, cols, out / "ingest_summary", cfg.format)
    _write_manifest("ingest", cfg, results, out)
    return _status(results)


def cmd_analyze(cfg) -> int:
    files = _files(cfg)
    results = run_sessions(pipeline.analyze_file, files, cfg)
    ok = sorted((res for _, res, err in results if err is None), key=_session_key)
    out = Path(cfg.out)
    rows = [res["estimate"].as_row() for res in ok]
    reports.write_table(rows, reports.ESTIMATE_COLUMNS, out / "estimates", cfg.format)

    monthly_rows = []
    for symbol in sorted({res["symbol"] for res in ok}):
        daily = [(res["date"], res["estimate"].H) for res in ok if res["symbol"] == symbol and res["date"]]
        for m in monthly_summary(daily, cfg.monthly_ci):
            monthly_rows.append({"symbol": symbol, "month": m.month, "mean_H": m.mean_H,
                                 "ci_low": m.ci_low, "ci_high": m.ci_high, "day_count": m.day_count})
    undated = [res["symbol"] for res in ok if res["date"] is None]
    if undated:
        logger.warning("%d sessions without a date in the file name left out of the monthly roll-up", len(undated))
    reports.write_table(monthly_rows, reports.MONTHLY_COLUMNS, out / "monthly", cfg.format)
    _write_manifest("analyze", cfg, results, out)
    return _status(results)


def _slug(label):
    return re.sub(r"[^A-Za-z0-9]+", "_", label.replace("<", "lt").replace("+", "plus")).strip("_")


def cmd_buckets(cfg) -> int:
    files = _files(cfg)
    results = run_sessions(pipeline.buckets_file, files, cfg)
    ok = sorted((res for _, res, err in results if err is None), key=_session_key)
    out = Path(cfg.out)
    labels = cfg.bucket_config().labels
    cols = ["symbol", "date", "label", "status", "trade_count", "H", "ci_low", "ci_high", "alpha_hat",
            "var_alpha", "j1", "j2"]
    for label in labels:
        rows = []
        for res in ok:
            for b in res["buckets"]:
                if b["label"] != label:
                    continue
                row = {"symbol": res["symbol"], "date": res["date"], "label": label,
                       "status": b["status"], "trade_count": b["trade_count"]}
                if b["estimate"] is not None:
                    row.update({k: v for k, v in b["estimate"].as_row().items() if k not in ("symbol", "date")})
                rows.append(row)
        reports.write_table(rows, cols, out / f"bucket_{_slug(label)}", cfg.format)
    prop_rows = [{"symbol": res["symbol"], "date": res["date"], "label": label, "fraction": frac}
                 for res in ok for label, frac in res["proportions"].items()]
    reports.write_table(prop_rows, ["symbol", "date", "label", "fraction"], out / "proportions", cfg.format)
    _write_manifest("buckets", cfg, results, out, {"labels": labels + [UNASSIGNED]})
    return _status(results)


def cmd_shuffle_check(cfg) -> int:
    files = _files(cfg)
    results = run_sessions(pipeline.shuffle_file, files, cfg)
    ok = sorted((res for _, res, err in results if err is None), key=_session_key)
    rows = [{"symbol": r["symbol"], "date": r["date"], "H_original": r["original"].H,
             "H_shuffled": r["shuffled"].H, "difference": r["original"].H - r["shuffled"].H} for r in ok]
    out = Path(cfg.out)
    cols = ["symbol", "date", "H_original", "H_shuffled", "difference"]
    reports.write_table(rows, cols, out / "shuffle_check", cfg.format)
    _write_manifest("shuffle-check", cfg, results, out)
    return _status(results)


def _weekdays(start, count):
    d = start
    while count:
        if d.weekday() < 5:
            yield d
            count -= 1
        d += timedelta(days=1)


def cmd_synth(args) -> int:
    file_values = read_config_file(args.config) if args.config else {}
    seed = args.seed if args.seed is not None else int(file_values.get("seed", 0))
    out = Path(args.out or file_values.get("out", "out"))
    if args.sessions < 1:
        raise ConfigError("sessions", "must be >= 1")
    try:
        first = date.fromisoformat(args.date)
    except ValueError:
        raise ConfigError("date", f"expected YYYY-MM-DD, got {args.date!r}") from None
    specs = [SynthSpec(args.kind, args.target_H, args.length, seed + i, args.mix_weight)
             for i in range(args.sessions)]
    sidecar = {"generator": "numpy Philox4x32-10 keyed by SeedSequence(seed)", "version": __version__}
    if not args.as_tape:
        for i, spec in enumerate(specs):
            name = args.name if len(specs) == 1 else f"{args.name}_{i:03d}"
            reports.write_column(generate(spec), out / f"{name}.csv")
            reports.write_json({"spec": spec.as_dict(), **sidecar}, out / f"{name}.json")
        return EXIT_OK
    for spec, day in zip(specs, _weekdays(first, len(specs))):
        tape = tape_from_values(generate(spec), args.symbol, day, exchange_tag=args.exchange_tag)
        stem = f"{args.symbol}_{day:%Y%m%d}"
        write_tape(tape, out / f"{stem}.csv")
        reports.write_json({"spec": spec.as_dict(), "symbol": args.symbol, "date": day, **sidecar},
                           out / f"{stem}.json")
    return EXIT_OK


COMMANDS = {
    "ingest": cmd_ingest,
    "analyze": cmd_analyze,
    "buckets": cmd_buckets,
    "shuffle-check": cmd_shuffle_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "synth":
            return cmd_synth(args)
        cfg = _config_from_args(args)
        return COMMANDS[args.command](cfg)
    except (ConfigError, UsageError, ValueError) as err:
        print(f"tradehurst {args.command}: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as err:
        print(f"tradehurst {args.command}: error: {err}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
