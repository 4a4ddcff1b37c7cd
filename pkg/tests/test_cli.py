import csv
import io
import json
import math
import os
import subprocess
import sys

import pytest

from icrates import cli
from icrates.channel import Channel2Sym, ChannelKSym
from icrates.rates2 import rate_sym_etw, rate_sym_ian, rate_sym_p2p, rate_sym_tdma2
from icrates.rates_k import approx_etwK, approx_tdma, rate_sym_etwK_closed, rate_sym_p2p_combinedK


def run(capsys, *argv):
    try:
        code = cli.main(list(argv))
    except SystemExit as e:
        code = e.code
    out = capsys.readouterr()
    return code, out.out, out.err


def write_config(tmp_path, **cfg):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    return p


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "--users", "2", "--snr-db", "0", "--isr", "0.5")
    assert code == 0 and out.strip() == "Noisy (a ≤ 0.61803)"
    code, out, _ = run(capsys, "classify", "--k", "3", "--snr", "10", "--isr", "0.2")
    assert code == 0 and out.startswith("Noisy")


def test_classify_bad_isr(capsys):
    code, _, err = run(capsys, "classify", "--users", "2", "--snr", "1", "--isr", "-1")
    assert code == 2 and "error" in err


def test_rate_etw(capsys):
    code, out, _ = run(capsys, "rate", "--users", "2", "--snr", "100", "--isr", "0.5", "--scheme", "etw")
    assert code == 0
    assert out.startswith("3.61920236966 bits/channel-use")
    assert "scheme=ETW" in out and "active_bound=ETW-common-sum" in out


def test_rate_etw_k3(capsys):
    code, out, _ = run(capsys, "rate", "--k", "3", "--snr", "10", "--isr", "0.5", "--scheme", "etw")
    assert code == 0
    assert float(out.split()[0]) == pytest.approx(1.4262214057931, abs=1e-11)


def test_rate_out_of_domain(capsys):
    code, _, err = run(capsys, "rate", "--users", "2", "--snr", "100", "--isr", "2", "--scheme", "etw")
    assert code == 2 and err.startswith("error:")


def test_rate_asym(capsys):
    code, out, _ = run(capsys, "rate", "--snr", "10", "--isr", "0.5", "--snr2", "5", "--isr2", "2",
                       "--scheme", "p2p")
    assert code == 0
    assert float(out.split()[0]) == pytest.approx(4.5324950808270, abs=1e-11)
    assert "mixed-direct-limited" in out


def test_snr_db_is_exact_conversion(capsys):
    _, lin, _ = run(capsys, "rate", "--snr", repr(10 ** (13 / 10)), "--isr", "0.3", "--scheme", "ian")
    _, db, _ = run(capsys, "rate", "--snr-db", "13", "--isr", "0.3", "--scheme", "ian")
    assert lin == db
    assert cli.db_to_linear(20.0) == 100.0


def test_roots(capsys):
    code, out, _ = run(capsys, "roots", "--snr", "4")
    assert code == 0
    lines = dict(l.split(" = ", 1) for l in out.splitlines())
    assert lines["a1"].split()[0] == "0.25"
    _, out, _ = run(capsys, "roots", "--snr", "100")
    a0 = float(dict(l.split(" = ", 1) for l in out.splitlines())["a0"].split()[0])
    assert a0 == pytest.approx(0.22738573917172, abs=1e-11)


def test_region_c1(capsys):
    code, out, _ = run(capsys, "region", "--snr", "1", "--isr", "1", "--which", "C1")
    assert code == 0
    assert "(1, 0.58496250072115" in out and "(0.58496250072115" in out
    assert out.count("(") == 5


def test_region_plot_script(capsys, tmp_path):
    script = tmp_path / "r.gp"
    code, _, _ = run(capsys, "region", "--snr", "10", "--isr", "0.1", "--plot-script", str(script))
    assert code == 0
    text = script.read_text()
    for name in ("C0", "C1", "C1prime"):
        assert name in text
    assert "plot" in text


def test_verify_roots(capsys):
    code, out, _ = run(capsys, "verify", "roots")
    assert code == 0
    assert "P' = " in out and "(> 100)" in out
    assert "P'' = " in out and "(> 1000)" in out


def test_verify_bad_selector(capsys):
    code, _, _ = run(capsys, "verify", "nosuch")
    assert code == 2


def test_verify_out_jsonl_and_csv(capsys, tmp_path):
    out = tmp_path / "r.jsonl"
    assert run(capsys, "verify", "--suite", "kbound", "--out", str(out))[0] == 0
    rec = json.loads(out.read_text())
    assert rec["suite_name"] == "kbound" and rec["passed"]
    out = tmp_path / "r.csv"
    assert run(capsys, "verify", "roots", "--out", str(out))[0] == 0
    rows = list(csv.reader(out.open()))
    assert rows[0][0] == "suite" and rows[1][:2] == ["roots", "1"]


def test_sweep_two_sym_round_trip(capsys, tmp_path):
    cfg = write_config(tmp_path, model="two-sym", P=100, sweep="a", range=[0.01, 1, 100],
                       spacing="log", schemes=["p2p", "etw", "ian", "tdma"])
    out = tmp_path / "o.csv"
    code, msg, _ = run(capsys, "sweep", "--config", str(cfg), "--out", str(out))
    assert code == 0 and "wrote 100 rows" in msg
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 100
    assert list(rows[0])[:9] == ["model", "K", "P", "a", "P1", "P2", "a1", "a2", "regime"]
    for row in rows:
        ch = Channel2Sym(float(row["P"]), float(row["a"]))
        assert float(row["rate_p2p"]) == pytest.approx(rate_sym_p2p(ch).value, abs=1e-12)
        assert float(row["rate_etw"]) == pytest.approx(rate_sym_etw(ch).value, abs=1e-12)
        assert float(row["rate_ian"]) == pytest.approx(rate_sym_ian(ch).value, abs=1e-12)
        assert float(row["rate_tdma"]) == pytest.approx(rate_sym_tdma2(100).value, abs=1e-12)
        assert row["bound_etw"] == rate_sym_etw(ch).active_bound


def test_sweep_row_at_half(capsys, tmp_path):
    cfg = write_config(tmp_path, model="two-sym", P=100, sweep="a", range=[0.25, 1, 4],
                       schemes=["p2p", "etw"])
    out = tmp_path / "o.csv"
    assert run(capsys, "sweep", "--config", str(cfg), "--out", str(out))[0] == 0
    row = next(r for r in csv.DictReader(out.open()) if float(r["a"]) == 0.5)
    assert float(row["rate_p2p"]) == pytest.approx(3.8255258455895, abs=1e-12)
    assert float(row["rate_etw"]) == pytest.approx(3.6192023696625, abs=1e-12)


def test_sweep_etw_identity_at_unit_isr(capsys, tmp_path):
    cfg = write_config(tmp_path, model="two-sym", a=1, sweep="P", range=[1, 1000, 50],
                       spacing="log", schemes=["etw"])
    out = tmp_path / "o.csv"
    assert run(capsys, "sweep", "--config", str(cfg), "--out", str(out))[0] == 0
    for row in csv.DictReader(out.open()):
        P = float(row["P"])
        expected = 0.5 * math.log2(1 + 2 * P) + 0.5 * math.log2(0.75)
        assert float(row["rate_etw"]) == pytest.approx(expected, abs=1e-12)


def test_sweep_k_sym_round_trip(capsys, tmp_path):
    cfg = write_config(tmp_path, model="k-sym", K=3, snr_db=10, sweep="a", range=[0.01, 3, 30],
                       spacing="log", schemes=["p2p", "etw", "approx-etw", "approx-tdma"])
    out = tmp_path / "o.csv"
    assert run(capsys, "sweep", "--config", str(cfg), "--out", str(out))[0] == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 30
    empty = 0
    for row in rows:
        ch = ChannelKSym(3, float(row["P"]), float(row["a"]))
        assert float(row["rate_p2p"]) == pytest.approx(rate_sym_p2p_combinedK(ch).value, abs=1e-12)
        assert float(row["rate_etw"]) == pytest.approx(rate_sym_etwK_closed(ch).value, abs=1e-12)
        assert float(row["rate_approx-tdma"]) == pytest.approx(approx_tdma(3, ch.P), abs=1e-12)
        if ch.a * ch.P <= 1:
            assert row["rate_approx-etw"] == "" and row["bound_approx-etw"] == ""
            empty += 1
        else:
            assert float(row["rate_approx-etw"]) == pytest.approx(approx_etwK(3, ch.P, ch.a), abs=1e-12)
    assert empty > 0


@pytest.mark.parametrize("cfg", [
    dict(model="two-sym", P=100, sweep="a", range=[0.01, 1, 10], schemes=[]),
    dict(model="two-sym", P=100, sweep="a", range=[0.01, 1, 10], schemes=["bogus"]),
    dict(model="nope", P=100, sweep="a", range=[0.01, 1, 10], schemes=["p2p"]),
    dict(model="two-sym", P=100, sweep="a", range=[0.01, 1], schemes=["p2p"]),
])
def test_sweep_config_errors(capsys, tmp_path, cfg):
    p = write_config(tmp_path, **cfg)
    code, _, err = run(capsys, "sweep", "--config", str(p), "--out", str(tmp_path / "o.csv"))
    assert code == 2 and str(p) in err


def test_sweep_json_syntax_error_reports_line(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "model": "two-sym",\n  "P": 100,,\n}')
    code, _, err = run(capsys, "sweep", "--config", str(p), "--out", str(tmp_path / "o.csv"))
    assert code == 2 and "line 3" in err


def test_sweep_unwritable(capsys, tmp_path):
    cfg = write_config(tmp_path, model="two-sym", P=100, sweep="a", range=[0.01, 1, 3], schemes=["p2p"])
    code, _, _ = run(capsys, "sweep", "--config", str(cfg), "--out", str(tmp_path / "no" / "o.csv"))
    assert code == 2


def _sweep_subprocess(cfg, out, threads):
    env = dict(os.environ, ICRATES_THREADS=str(threads))
    subprocess.run([sys.executable, "-m", "icrates", "sweep", "--config", str(cfg), "--out", str(out)],
                   check=True, env=env, capture_output=True)
    return out.read_bytes()


def test_sweep_byte_identical_across_threads(tmp_path):
    cfg = write_config(tmp_path, model="k-sym", K=4, P=50, sweep="a", range=[0.001, 10, 200],
                       spacing="log", schemes=["p2p", "etw", "tdma", "approx-etw"])
    a = _sweep_subprocess(cfg, tmp_path / "a.csv", 1)
    b = _sweep_subprocess(cfg, tmp_path / "b.csv", 1)
    c = _sweep_subprocess(cfg, tmp_path / "c.csv", 8)
    assert a == b == c


def test_bad_thread_env(capsys, monkeypatch):
    monkeypatch.setenv("ICRATES_THREADS", "zero")
    code, _, err = run(capsys, "roots", "--snr", "10")
    assert code == 2 and "ICRATES_THREADS" in err


def test_committed_configs_parse():
    from pathlib import Path
    root = Path(__file__).resolve().parent.parent / "configs"
    for p in root.glob("*.json"):
        spec = cli.parse_sweep_config(p.read_text(), str(p))
        assert spec.points > 1
