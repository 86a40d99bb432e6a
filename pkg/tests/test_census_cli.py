import io
import json
import math
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from trlab import cli
from trlab.census import (
    CensusRecord, RunConfig, census_run, census_summarize, dumps, parse_shape, read_csv, read_jsonl,
    read_records, write_csv, write_jsonl,
)
from trlab.errors import InputError
from trlab.tensor import Tensor

SHAPE = (2, 2, 2)


@pytest.fixture(scope="module")
def census222():
    return list(census_run(RunConfig(SHAPE, 2)))


def test_census_2x2():
    recs = list(census_run(RunConfig((2, 2), 2)))
    assert len(recs) == 16
    assert Counter(r.prank for r in recs) == {0: 1, 1: 9, 2: 6}
    assert recs[0].arank == 0 and recs[0].prank == 0


def test_census_222(census222):
    assert len(census222) == 256
    assert [r.id for r in census222] == list(range(256))
    assert all(r.bias_num * 2 ** r.prank >= 2 ** 4 for r in census222)
    assert all(r.satisfies_inequality() for r in census222)
    assert Counter(r.min_degeneracy_k for r in census222) == {0: 1, 1: 255}


def test_shards_merge_to_full(census222):
    parts = []
    for i in range(4):
        parts.extend(census_run(RunConfig(SHAPE, 2, i, 4)))
    assert dumps(sorted(parts, key=lambda r: r.id)) == dumps(census222)


def test_workers_keep_order(census222):
    got = list(census_run(RunConfig(SHAPE, 2, 1, 2, workers=2)))
    assert got == census222[128:]


def test_deterministic_bytes():
    a = dumps(census_run(RunConfig((2, 2), 3)))
    b = dumps(census_run(RunConfig((2, 2), 3)))
    assert a == b


def test_codecs_roundtrip(census222):
    buf = io.StringIO()
    write_jsonl(census222, buf)
    buf.seek(0)
    assert read_jsonl(buf) == census222
    buf = io.StringIO()
    write_csv(census222, buf)
    buf.seek(0)
    assert read_csv(buf) == census222


@given(st.integers(0, 255), st.integers(1, 5), st.integers(0, 3), st.floats(0, 1), st.booleans())
def test_record_roundtrip(i, num, e, dens, with_k):
    rec = CensusRecord(i, SHAPE, 2, num, e, e - math.log2(num), 3, 1 if with_k else None, dens)
    assert CensusRecord.from_json(json.loads(json.dumps(rec.to_json()))) == rec
    buf = io.StringIO()
    write_csv([rec], buf)
    buf.seek(0)
    assert read_csv(buf) == [rec]


def test_summary(census222):
    s = census_summarize(census222)
    assert s.total == 256
    assert len(s.rows) == len({r.bias for r in census222})
    top = s.rows[0]
    assert top.bias == 1 and top.count == 1 and top.prank_max == 0
    for row in s.rows:
        assert row.prank_min >= math.ceil(row.arank - 1e-12)
    assert s.max_ratio == 2.0
    assert "records 256" in s.table()


def test_config_validation():
    with pytest.raises(InputError):
        RunConfig(SHAPE, 2, 4, 4)
    with pytest.raises(InputError):
        RunConfig(SHAPE, 4)
    with pytest.raises(InputError):
        RunConfig(SHAPE, 2, budget_bits=0)
    with pytest.raises(InputError):
        RunConfig((2,), 2)
    assert parse_shape("2x3x2") == (2, 3, 2)
    with pytest.raises(InputError):
        parse_shape("2xx")


def test_degeneracy_auto_off_for_big_shapes():
    assert not RunConfig((2, 2, 3), 2).with_degeneracy()
    assert RunConfig((2, 2, 3), 2, degeneracy="on").with_degeneracy()


# -- CLI ----------------------------------------------------------------------------------------

def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_arank(capsys, tmp_path):
    diag = Tensor.basis(SHAPE, (1, 1, 1), 2) + Tensor.basis(SHAPE, (2, 2, 2), 2)
    path = tmp_path / "t.json"
    path.write_text(json.dumps(diag.to_json()))
    code, out, _ = run(capsys, "arank", "--in", str(path))
    obj = json.loads(out)
    assert code == 0
    assert (obj["bias_num"], obj["bias_log_p_den"]) == (9, 4)
    assert obj["arank"] == pytest.approx(math.log2(16 / 9))


def test_cli_prank_with_certificate(capsys, tmp_path):
    cert = tmp_path / "c.json"
    code, out, _ = run(capsys, "prank", "--shape", "2x2x2", "--q", "2", "--id", "105", "--max-r", "6",
                       "--certificate", str(cert))
    assert code == 0 and json.loads(out)["prank"] == 2
    assert "terms" in json.loads(cert.read_text())
    code, out, _ = run(capsys, "prank", "--shape", "2x2x2", "--id", "105", "--prank-upper")
    assert json.loads(out)["exact"] is False


def test_cli_exit_codes(capsys, tmp_path):
    assert run(capsys, "arank", "--in", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    assert run(capsys, "bias", "--in", str(bad))[0] == 2
    code, _, err = run(capsys, "--budget", "6", "arank", "--shape", "4x3x2", "--id", "0")
    assert code == 3 and "budget" in err
    code, _, _ = run(capsys, "prank", "--shape", "3x3x3", "--q", "5", "--id", "1", "--budget", "10")
    assert code == 3
    assert run(capsys, "census", "--shape", "2x2", "--shard", "3/2")[0] == 2


def test_cli_census_and_summarize(capsys, tmp_path):
    out = tmp_path / "c.jsonl"
    code, _, _ = run(capsys, "census", "--shape", "2x2", "--q", "2", "--out", str(out))
    assert code == 0 and len(read_records(out)) == 16
    csv_out = tmp_path / "c.csv"
    run(capsys, "census", "--shape", "2x2", "--format", "csv", "--out", str(csv_out), "--threads", "2")
    assert read_records(csv_out) == read_records(out)
    code, text, _ = run(capsys, "summarize", "--in", str(out))
    assert code == 0 and "records 16" in text
    code, text, _ = run(capsys, "summarize", "--in", str(out), "--json")
    assert json.loads(text)["total"] == 16


def test_cli_gowers_and_witness(capsys, tmp_path):
    P = tmp_path / "p.json"
    P.write_text(json.dumps({"q": 2, "n": 2, "terms": [{"exps": [1, 1], "coef": 1}]}))
    code, out, _ = run(capsys, "gowers", "--in", str(P), "--k", "2", "--via-bias")
    obj = json.loads(out)
    assert code == 0 and obj["exact"] == [1, 4]
    assert obj["value"] == pytest.approx(2 ** -0.5)
    Qs = tmp_path / "qs.json"
    Qs.write_text(json.dumps([{"q": 2, "n": 2, "terms": [{"exps": [1, 0], "coef": 1}]}]))
    code, out, _ = run(capsys, "inverse-witness", "--p", str(P), "--qs", str(Qs))
    assert code == 0 and json.loads(out)["correlation"] >= 0.5


def test_cli_forcing_and_system(capsys, tmp_path):
    elems = [[[a, b], [c, d]] for a in (0, 1) for b in (0, 1) for c in (0, 1) for d in (0, 1) if a == 0]
    bp = tmp_path / "b.json"
    bp.write_text(json.dumps({"q": 2, "shape": [2, 2], "elements": elems}))
    build = tmp_path / "build.json"
    code, _, _ = run(capsys, "forcing", "build", "--bprime", str(bp), "--delta", "0.5", "--d", "2",
                     "--out", str(build))
    assert code == 0
    obj = json.loads(build.read_text())
    (tmp_path / "q.json").write_text(json.dumps(obj["Q"]))
    (tmp_path / "f.json").write_text(json.dumps(obj["family"]))
    code, out, _ = run(capsys, "forcing", "check", "--q", str(tmp_path / "q.json"), "--alpha", "0.875",
                       "--family", str(tmp_path / "f.json"))
    assert code == 0 and json.loads(out)["passed"]
    (tmp_path / "z.json").write_text(json.dumps({"q": 2, "shape": [2, 2], "spaces": []}))
    code, _, _ = run(capsys, "forcing", "check", "--q", str(tmp_path / "q.json"), "--alpha", "1",
                     "--family", str(tmp_path / "z.json"))
    assert code == 1
    assert run(capsys, "forcing", "build", "--bprime", str(bp), "--delta", "0.5", "--d", "3")[0] == 2

    sysf = tmp_path / "s.json"
    assert run(capsys, "system", "find", "--bprime", str(bp), "--delta", "0.5", "--out", str(sysf))[0] == 0
    assert "witnesses" in json.loads(sysf.read_text())
    code, out, _ = run(capsys, "system", "intersect", "--a", str(sysf), "--b", str(sysf))
    assert code == 0
    cons = tmp_path / "cons.json"
    cons.write_text(json.dumps({"constraints": [{"modes": [1], "basis": [[0, 1]]}]}))
    code, out, _ = run(capsys, "system", "constrain", "--system", str(sysf), "--constraints", str(cons))
    assert code == 0 and "levels" in json.loads(out)


def test_cli_constants(capsys):
    code, out, _ = run(capsys, "constants", "--d", "2", "--delta", "0.01", "--q", "2", "--C", "1",
                       "--variant", "log2", "--c", "1", "--r", "1")
    obj = json.loads(out)
    assert code == 0 and obj["c2"] == "256" and obj["variant"] == "log2"
    assert "theorem_bound" in obj and "degeneracy_route_bound" in obj


def test_cli_verify_quick_subset(capsys, monkeypatch):
    from trlab import verify

    monkeypatch.setattr(verify, "verify_suite", lambda level: [verify.run_check(1), verify.run_check(3)])
    code, out, _ = run(capsys, "verify", "--level", "quick")
    assert code == 0 and out.count("[PASS]") == 2


def test_fraction_parsing():
    assert cli._parse_fraction("0.875") == Fraction(7, 8)
    with pytest.raises(InputError):
        cli._parse_fraction("seven")
