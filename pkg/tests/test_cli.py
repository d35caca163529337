import csv
import json
import shutil
from datetime import date
from pathlib import Path

import numpy as np
import pytest

from tradehurst import synth
from tradehurst.cli import main
from tradehurst.ingest import write_tape
from tradehurst.pipeline import session_identity


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture
def tapes(tmp_path):
    d = tmp_path / "tapes"
    assert main(["synth", "--kind", "fgn", "--H", "0.7", "--as-tape", "--sessions", "3", "--symbol", "ABC",
                 "--date", "2007-03-01", "--seed", "10", "--out", str(d)]) == 0
    return d


def test_session_identity():
    assert session_identity("x/BAC_20070301.csv") == ("BAC", date(2007, 3, 1))
    assert session_identity("x/msft-2007-03-02.csv") == ("MSFT", date(2007, 3, 2))
    assert session_identity("x/notes.csv") == ("notes", None)


def test_analyze_monthly_rollup(tapes, tmp_path):
    out = tmp_path / "res"
    assert main(["analyze", str(tapes), "--out", str(out)]) == 0
    est = read_csv(out / "estimates.csv")
    assert [r["date"] for r in est] == ["2007-03-01", "2007-03-02", "2007-03-05"]
    (month,) = read_csv(out / "monthly.csv")
    assert month["day_count"] == "3" and month["month"] == "2007-03"
    manifest = json.loads((out / "manifest.json").read_text())
    assert all(v == "ok" for v in manifest["disposition"].values())


def test_analyze_skips_corrupt(tmp_path):
    d = tmp_path / "tapes"
    for i in range(4):
        tape = synth.tape_from_values(synth.generate(synth.SynthSpec("white", 0.5, 23400, i)), "XYZ")
        write_tape(tape, d / f"XYZ_2008040{i + 1}.csv")
    (d / "XYZ_20080407.csv").write_text("time,price,size,sale_condition,correction,exchange_tag\n10:00:00,abc,1,@,0,N\n")
    out = tmp_path / "res"
    assert main(["analyze", str(d), "--out", str(out)]) == 0
    assert len(read_csv(out / "estimates.csv")) == 4
    manifest = json.loads((out / "manifest.json").read_text())
    assert "TradeParseError" in manifest["disposition"][str(d / "XYZ_20080407.csv")]


def test_all_fail_exit_1(tmp_path):
    bad = tmp_path / "BAD_20080101.csv"
    bad.write_text("10:00:00,abc,1,@,0,N\n")
    assert main(["analyze", str(bad), "--out", str(tmp_path / "o")]) == 1


def test_usage_errors(tmp_path):
    assert main(["shuffle-check", "--out", str(tmp_path)]) == 2
    assert main(["analyze", "x.csv", "--j2", "2"]) == 2
    assert main(["synth", "--H", "1.2", "--out", str(tmp_path)]) == 2
    with pytest.raises(SystemExit) as info:
        main(["bogus"])
    assert info.value.code == 2


def test_analyze_idempotent_and_parallel(tapes, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["analyze", str(tapes), "--out", str(a)]) == 0
    assert main(["analyze", str(tapes), "--out", str(b), "--workers", "2"]) == 0
    for name in ("estimates.csv", "monthly.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_json_mirror(tapes, tmp_path):
    out = tmp_path / "j"
    assert main(["analyze", str(tapes), "--out", str(out), "--format", "json"]) == 0
    rows = json.loads((out / "estimates.json").read_text())
    assert set(rows[0]) == {"symbol", "date", "H", "ci_low", "ci_high", "alpha_hat", "var_alpha", "j1", "j2"}


def test_config_file_and_override(tapes, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"inputs = {tapes}\nj2 = 8\nout = {tmp_path / 'cfgout'}\n")
    assert main(["analyze", "--config", str(cfg), "--j2", "9"]) == 0
    assert {r["j2"] for r in read_csv(tmp_path / "cfgout" / "estimates.csv")} == {"9"}


def test_synth_byte_identical(tmp_path):
    for run in ("r1", "r2"):
        assert main(["synth", "--kind", "white", "--length", "23400", "--seed", "7",
                     "--out", str(tmp_path / run)]) == 0
    assert (tmp_path / "r1" / "synth.csv").read_bytes() == (tmp_path / "r2" / "synth.csv").read_bytes()
    side = json.loads((tmp_path / "r1" / "synth.json").read_text())
    assert side["spec"] == {"kind": "white", "target_H": 0.5, "length": 23400, "seed": 7, "mix_weight": 1.0}


def test_synth_superposition_variance(tmp_path):
    assert main(["synth", "--kind", "superposition", "--H", "0.8", "--mix-weight", "0.5", "--length", "65536",
                 "--seed", "1", "--out", str(tmp_path)]) == 0
    x = np.loadtxt(tmp_path / "synth.csv", skiprows=1)
    assert len(x) == 65536 and x.var() == pytest.approx(1.0, rel=0.03)


def test_buckets_small_only(tapes, tmp_path):
    out = tmp_path / "b"
    assert main(["buckets", str(tapes), "--out", str(out)]) == 0
    small = read_csv(out / "bucket_lt250.csv")
    assert all(r["status"] == "ok" and r["H"] for r in small)
    for name in ("bucket_250_500.csv", "bucket_750_1000.csv", "bucket_1500plus.csv"):
        assert all(r["status"].startswith("skipped") for r in read_csv(out / name))
    props = read_csv(out / "proportions.csv")
    by_day = {}
    for r in props:
        by_day.setdefault(r["date"], []).append(float(r["fraction"]))
    assert all(abs(sum(v) - 1) <= 1e-12 for v in by_day.values())


def _mixed_tape(seed, symbol="MIX", day=date(2008, 6, 2)):
    small = synth.tape_from_values(synth.generate(synth.SynthSpec("fgn", 0.8, 23400, seed)), symbol, day, size=100)
    large = synth.tape_from_values(synth.generate(synth.SynthSpec("white", 0.5, 23400, seed + 1000)), symbol, day,
                                   size=2000)
    return synth.merge_tapes(small, large)


def test_buckets_separate_regimes(tmp_path):
    d = tmp_path / "mixed"
    write_tape(_mixed_tape(1), d / "MIX_20080602.csv")
    out = tmp_path / "o"
    assert main(["buckets", str(d), "--out", str(out)]) == 0
    (small,) = read_csv(out / "bucket_lt250.csv")
    (large,) = read_csv(out / "bucket_1500plus.csv")
    assert float(small["H"]) - float(large["H"]) > 0.1


def test_shuffle_check(tapes, tmp_path):
    out = tmp_path / "s"
    assert main(["shuffle-check", str(tapes), "--out", str(out), "--seed", "3"]) == 0
    rows = read_csv(out / "shuffle_check.csv")
    for r in rows:
        assert abs(float(r["H_shuffled"]) - 0.5) <= 0.03
        assert float(r["difference"]) == pytest.approx(float(r["H_original"]) - float(r["H_shuffled"]))


def test_shuffle_check_white(tmp_path):
    d = tmp_path / "w"
    assert main(["synth", "--kind", "white", "--as-tape", "--sessions", "5", "--symbol", "WHT",
                 "--out", str(d), "--seed", "40"]) == 0
    out = tmp_path / "o"
    assert main(["shuffle-check", str(d), "--out", str(out)]) == 0
    for r in read_csv(out / "shuffle_check.csv"):
        assert abs(float(r["H_original"]) - 0.5) < 0.03 and abs(float(r["H_shuffled"]) - 0.5) < 0.03
        assert abs(float(r["difference"])) <= 0.04


def test_ingest_outputs(golden_tape_path, tmp_path):
    src = tmp_path / "in" / "GLD_20060103.csv"
    src.parent.mkdir()
    shutil.copy(golden_tape_path, src)
    out = tmp_path / "o"
    assert main(["ingest", str(src), "--out", str(out)]) == 0
    (row,) = read_csv(out / "ingest_summary.csv")
    assert (row["parsed"], row["kept"], row["ExcludedCondition"], row["TailTrim"]) == ("31", "6", "18", "1")
    series = read_csv(out / "series" / "GLD_20060103.csv")
    # mixed NYSE/NASDAQ tags: the NASDAQ tail trim shortens the session
    assert len(series) == 23370
    assert list(series[0]) == ["bucket_index", "t_start_seconds", "traded_value"]


@pytest.mark.slow
def test_analyze_synthetic_month(tmp_path):
    d = tmp_path / "month"
    assert main(["synth", "--kind", "fgn", "--H", "0.7", "--as-tape", "--sessions", "20", "--symbol", "SYN",
                 "--date", "2009-02-02", "--seed", "100", "--out", str(d)]) == 0
    out = tmp_path / "o"
    assert main(["analyze", str(d), "--out", str(out), "--workers", "4"]) == 0
    (month,) = read_csv(out / "monthly.csv")
    assert abs(float(month["mean_H"]) - 0.7) <= 0.02 and month["day_count"] == "20"
