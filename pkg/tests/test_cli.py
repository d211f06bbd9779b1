import io
import json
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import pytest

from baseseq.cli import ResultRecord, main
from baseseq.errors import MalformedInputError
from baseseq.refdata import known_quad
from baseseq.seqcore import quad_to_text

DATA = Path(__file__).resolve().parent.parent / "data"


def run_cli(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


def test_data_files_match_refdata():
    for n in (41, 42, 43):
        path = DATA / f"bs{n + 1}_{n}.txt"
        assert path.read_text().strip() == quad_to_text(known_quad(n))


def test_verify_published_file():
    code, out, _ = run_cli(["verify", "--kind", "bs",
                            "--file", str(DATA / "bs42_41.txt")])
    assert code == 0
    assert out.startswith("valid n=41 kind=bs shift0=166")


def test_verify_invalid_quad(tmp_path):
    q = known_quad(41)
    text = quad_to_text(q)
    flipped = text.replace("Z=+", "Z=-", 1)
    path = tmp_path / "bad.txt"
    path.write_text(flipped + "\n")
    code, out, _ = run_cli(["verify", "--kind", "bs", "--file", str(path)])
    assert code == 1
    assert "invalid" in out and "failing_shift" in out


def test_verify_malformed_characters(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("X=+*+\nY=++\nZ=+\nW=+\n")
    code, _, err = run_cli(["verify", "--kind", "bs", "--file", str(path)])
    assert code == 2 and "error" in err


def test_unknown_kind_and_flags(tmp_path):
    path = tmp_path / "f.txt"
    path.write_text(quad_to_text(known_quad(41)) + "\n")
    code, _, err = run_cli(["verify", "--kind", "golay", "--file", str(path)])
    assert code == 2
    code, _, _ = run_cli(["verify", "--bogus-flag", "x"])
    assert code == 2
    code, _, _ = run_cli(["nonsense"])
    assert code == 2


def test_sums_counts():
    code, out, _ = run_cli(["sums", "--n", "42", "--kind", "nns"])
    assert code == 0
    assert len(out.strip().splitlines()) == 7
    code, out, _ = run_cli(["sums", "--n", "6", "--kind", "ns"])
    assert code == 1 and out == ""


def test_profiles_lines_are_integer_csv():
    code, out, _ = run_cli(["profiles", "--n", "3", "--kind", "bs", "--m", "3"])
    assert code == 0
    for line in out.strip().splitlines():
        values = [int(v) for v in line.split(",")]
        assert len(values) == 8 + 4 * 3


def test_psd_command(tmp_path):
    q = known_quad(41)
    path = tmp_path / "zw.txt"
    path.write_text(q.c.text() + "\n" + q.d.text() + "\n")
    code, out, _ = run_cli(["psd", "--file", str(path), "--pair",
                            "--bound", "166"])
    assert code == 0
    assert out.count("keep") == 1
    code, out, _ = run_cli(["psd", "--file", str(path), "--bound", "166"])
    assert out.count("keep") == 2


def test_canon_dedups_input(tmp_path):
    from baseseq.equiv import SWAP_CD, apply
    q = known_quad(41)
    path = tmp_path / "quads.txt"
    path.write_text(quad_to_text(q) + "\n\n" + quad_to_text(apply(q, SWAP_CD)) + "\n")
    code, out, _ = run_cli(["canon", "--kind", "bs", "--file", str(path)])
    assert code == 0
    assert out.count("X=") == 1


def test_oracle_records_roundtrip():
    code, out, _ = run_cli(["oracle", "--n", "2", "--kind", "ns"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines
    for line in lines:
        rec = ResultRecord.parse(line)
        assert rec.line() == line
        assert rec.quad().n == 2


def test_oracle_empty_exit():
    code, out, _ = run_cli(["oracle", "--n", "6", "--kind", "ns"])
    assert code == 1 and out == ""


def test_search_cli_roundtrip(tmp_path):
    out_path = tmp_path / "res.txt"
    cert_path = tmp_path / "cert.json"
    code, _, _ = run_cli(["search", "--n", "4", "--kind", "nns", "--workers", "2",
                          "--out", str(out_path), "--cert", str(cert_path)])
    assert code == 0
    lines = out_path.read_text().strip().splitlines()
    records = [ResultRecord.parse(line) for line in lines]
    assert all(rec.canonical for rec in records)
    from baseseq.seqcore import verify
    assert all(verify(rec.quad()).valid for rec in records)
    cert = json.loads(cert_path.read_text())
    assert cert["exhaustive"] is True and cert["classes"] == len(records)


def test_search_cli_exhaustive_empty():
    code, out, err = run_cli(["search", "--n", "6", "--kind", "ns"])
    assert code == 1 and out == ""
    assert json.loads(err)["exhaustive"] is True


def test_record_parse_errors():
    with pytest.raises(MalformedInputError):
        ResultRecord.parse("n=3 kind=ns")
    with pytest.raises(MalformedInputError):
        ResultRecord.parse("gibberish")
